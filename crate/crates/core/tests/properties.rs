use proptest::prelude::*;

use addchow::cycles::{phi, phi_in_coordinates};
use addchow::parse::{parse_cycle, parse_elem, parse_form, parse_point, parse_symbol, parse_tower};
use addchow::presentation::{derivation, relation_check};
use addchow::random::Gen;
use addchow::{DifferentialForm, FieldTower, MilnorSymbol, PresentationElement, ZeroCycle};

fn towers() -> Vec<FieldTower> {
    ["Q(t1,t2)", "F5(t1,t2)", "F2(t)", "Q(t)[th]/(th^2 - t)"]
        .iter()
        .map(|s| parse_tower(s).unwrap())
        .collect()
}

fn any_tower() -> impl Strategy<Value = FieldTower> {
    (0..towers().len()).prop_map(|i| towers()[i].clone())
}

fn cfg() -> ProptestConfig {
    ProptestConfig {
        cases: 40,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn field_axioms(k in any_tower(), seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (a, b, c) = (g.elem(&k), g.elem(&k), g.elem(&k));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn elements_round_trip(k in any_tower(), seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let a = g.elem(&k);
        prop_assert_eq!(parse_elem(&k, &a.render()).unwrap(), a);
    }

    #[test]
    fn towers_round_trip(k in any_tower()) {
        prop_assert_eq!(parse_tower(&k.to_string()).unwrap(), k);
    }

    #[test]
    fn d_squared_is_zero(k in any_tower(), seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let x = g.elem(&k);
        prop_assert!(DifferentialForm::d(&x).d_form().is_zero());
        let y = g.nonzero(&k);
        let w = DifferentialForm::d(&x).wedge(&DifferentialForm::dlog(&y).unwrap()).unwrap();
        prop_assert!(w.d_form().is_zero());
    }

    #[test]
    fn wedge_of_one_forms_anticommutes(k in any_tower(), seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let a = DifferentialForm::d(&g.elem(&k));
        let b = DifferentialForm::d(&g.elem(&k));
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().neg());
        prop_assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn dlog_is_a_homomorphism(k in any_tower(), seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (x, y) = (g.nonzero(&k), g.nonzero(&k));
        let lhs = DifferentialForm::dlog(&(&x * &y)).unwrap();
        let rhs = DifferentialForm::dlog(&x).unwrap().add(&DifferentialForm::dlog(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn forms_round_trip(k in any_tower(), seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let f = DifferentialForm::d(&g.elem(&k)).scale(&g.elem(&k));
        prop_assert_eq!(parse_form(&k, &f.render()).unwrap(), f);
    }

    #[test]
    fn steinberg_symbols_have_zero_dlog(k in any_tower(), seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let a = g.generic(&k);
        let s = MilnorSymbol::symbol(&[a.clone(), &k.one() - &a]).unwrap();
        prop_assert!(s.dlog().unwrap().is_zero());
        prop_assert_eq!(parse_symbol(&k, &s.render()).unwrap(), s);
    }

    #[test]
    fn derivation_is_a_section(k in any_tower(), seed in any::<u64>(), n in 2usize..=3) {
        let mut g = Gen::new(seed);
        let b = g.symbol_entries(&k, n - 1);
        let want = b.iter().map(DifferentialForm::d).reduce(|a, x| a.wedge(&x).unwrap()).unwrap();
        prop_assert_eq!(derivation(&k, &b).unwrap().to_omega().unwrap(), want);
        let a = g.generic(&k);
        let rest = g.symbol_entries(&k, n - 2);
        prop_assert!(relation_check(&a, &rest).unwrap().is_zero());
    }

    #[test]
    fn star_is_an_action(k in any_tower(), seed in any::<u64>(), n in 1usize..=3) {
        let mut g = Gen::new(seed);
        let p = g.good_point(&k, n);
        let (x, y) = (g.nonzero(&k), g.nonzero(&k));
        prop_assert_eq!(p.star(&x).unwrap().star(&y).unwrap(), p.star(&(&x * &y)).unwrap());
        prop_assert_eq!(parse_point(&k, &p.render()).unwrap(), p);
    }

    #[test]
    fn phi_scale_covariance(k in any_tower(), seed in any::<u64>(), n in 2usize..=3) {
        let mut g = Gen::new(seed);
        let a = g.nonzero(&k);
        let b = g.symbol_entries(&k, n - 1);
        let x = PresentationElement::term(&a, &b).unwrap();
        let lambda = g.nonzero(&k);
        prop_assert_eq!(phi_in_coordinates(&x, &lambda).unwrap(), phi(&x).unwrap().star(&lambda).unwrap());
    }

    #[test]
    fn cycles_round_trip_and_form_a_group(k in any_tower(), seed in any::<u64>(), n in 1usize..=3) {
        let mut g = Gen::new(seed);
        let mut c = ZeroCycle::zero(&k, n);
        for _ in 0..3 {
            c.add_point(g.int(-2, 2), g.good_point(&k, n)).unwrap();
        }
        prop_assert_eq!(parse_cycle(&k, n, &c.render()).unwrap(), c.clone());
        prop_assert!(c.sub(&c).unwrap().is_zero());
        let e = c.add(&c).unwrap().eval_gamma().unwrap();
        prop_assert_eq!(e, c.eval_gamma().unwrap().scale(&k.int(2)));
    }

    #[test]
    fn to_omega_is_additive_in_a(k in any_tower(), seed in any::<u64>(), n in 2usize..=3) {
        let mut g = Gen::new(seed);
        let b = g.symbol_entries(&k, n - 1);
        let (a1, a2) = (g.nonzero(&k), g.nonzero(&k));
        let sum = &a1 + &a2;
        prop_assume!(!sum.is_zero());
        let lhs = PresentationElement::term(&sum, &b).unwrap().to_omega().unwrap();
        let rhs = PresentationElement::term(&a1, &b).unwrap().add(&PresentationElement::term(&a2, &b).unwrap()).unwrap().to_omega().unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
