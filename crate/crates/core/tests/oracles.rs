//! Independent oracles. Inputs are built as expression trees that are both
//! rendered for the parser and evaluated here on first-order jets, so every
//! differential form can be compared coefficientwise at rational points.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use addchow::cycles::{nabla, phi};
use addchow::factor::minimal_polynomial;
use addchow::milnor::{iota, symbol_to_point};
use addchow::parse::{parse_elem, parse_point, parse_tuple};
use addchow::{DifferentialForm, Elem, FieldTower, PresentationElement, ZeroCycle};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug)]
struct Jet {
    v: Q,
    g: Vec<Q>,
}

impl Jet {
    fn constant(c: Q, m: usize) -> Jet {
        Jet { v: c, g: vec![Q::zero(); m] }
    }
    fn var(i: usize, at: &[Q]) -> Jet {
        let mut g = vec![Q::zero(); at.len()];
        g[i] = Q::one();
        Jet { v: at[i].clone(), g }
    }
    fn add(&self, o: &Jet) -> Jet {
        Jet { v: &self.v + &o.v, g: self.g.iter().zip(&o.g).map(|(a, b)| a + b).collect() }
    }
    fn neg(&self) -> Jet {
        Jet { v: -&self.v, g: self.g.iter().map(|a| -a).collect() }
    }
    fn sub(&self, o: &Jet) -> Jet {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Jet) -> Jet {
        Jet {
            v: &self.v * &o.v,
            g: self.g.iter().zip(&o.g).map(|(a, b)| a * &o.v + &self.v * b).collect(),
        }
    }
    fn inv(&self) -> Option<Jet> {
        if self.v.is_zero() {
            return None;
        }
        let v2 = &self.v * &self.v;
        Some(Jet { v: self.v.recip(), g: self.g.iter().map(|a| -(a / &v2)).collect() })
    }
    fn div(&self, o: &Jet) -> Option<Jet> {
        Some(self.mul(&o.inv()?))
    }
}

#[derive(Clone, Debug)]
enum Ex {
    C(i64),
    V(usize),
    Add(Box<Ex>, Box<Ex>),
    Sub(Box<Ex>, Box<Ex>),
    Mul(Box<Ex>, Box<Ex>),
    Div(Box<Ex>, Box<Ex>),
}

impl Ex {
    fn render(&self, names: &[&str]) -> String {
        match self {
            Ex::C(c) => format!("({c})"),
            Ex::V(i) => names[*i].to_string(),
            Ex::Add(a, b) => format!("({} + {})", a.render(names), b.render(names)),
            Ex::Sub(a, b) => format!("({} - {})", a.render(names), b.render(names)),
            Ex::Mul(a, b) => format!("({} * {})", a.render(names), b.render(names)),
            Ex::Div(a, b) => format!("({} / {})", a.render(names), b.render(names)),
        }
    }

    fn jet(&self, at: &[Q]) -> Option<Jet> {
        Some(match self {
            Ex::C(c) => Jet::constant(q(*c), at.len()),
            Ex::V(i) => Jet::var(*i, at),
            Ex::Add(a, b) => a.jet(at)?.add(&b.jet(at)?),
            Ex::Sub(a, b) => a.jet(at)?.sub(&b.jet(at)?),
            Ex::Mul(a, b) => a.jet(at)?.mul(&b.jet(at)?),
            Ex::Div(a, b) => a.jet(at)?.div(&b.jet(at)?)?,
        })
    }

    fn neg_sum(xs: &[Ex]) -> Ex {
        let s = xs.iter().skip(1).fold(xs[0].clone(), |a, x| Ex::Add(Box::new(a), Box::new(x.clone())));
        Ex::Sub(Box::new(Ex::C(0)), Box::new(s))
    }
}

fn random_ex(rng: &mut ChaCha8Rng, nv: usize, depth: u32) -> Ex {
    if depth == 0 || rng.gen_bool(0.3) {
        return if nv > 0 && rng.gen_bool(0.6) {
            Ex::V(rng.gen_range(0..nv))
        } else {
            Ex::C(rng.gen_range(-4..=4))
        };
    }
    let a = Box::new(random_ex(rng, nv, depth - 1));
    let b = Box::new(random_ex(rng, nv, depth - 1));
    match rng.gen_range(0..7) {
        0 | 1 => Ex::Add(a, b),
        2 => Ex::Sub(a, b),
        3 | 4 => Ex::Mul(a, b),
        5 => Ex::Add(a, Box::new(Ex::C(rng.gen_range(1..=3)))),
        _ => Ex::Div(a, b),
    }
}

type OForm = BTreeMap<Vec<usize>, Q>;

fn oform_add(a: &OForm, b: &OForm, scale: &Q) -> OForm {
    let mut out = a.clone();
    for (k, v) in b {
        let e = out.entry(k.clone()).or_insert_with(Q::zero);
        *e += v * scale;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Wedge of 1-forms given by gradient vectors, as a map from increasing index
/// sets to determinants.
fn wedge_grads(ws: &[Vec<Q>], m: usize) -> OForm {
    let k = ws.len();
    let mut out = OForm::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        let mat: Vec<Vec<Q>> = ws.iter().map(|w| idx.iter().map(|&j| w[j].clone()).collect()).collect();
        let d = det(mat);
        if !d.is_zero() {
            out.insert(idx.clone(), d);
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < m - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn det(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for j in c..n {
                let s = &f * &a[c][j];
                a[r][j] -= s;
            }
        }
    }
    d
}

fn dlog_grad(j: &Jet) -> Vec<Q> {
    j.g.iter().map(|x| x / &j.v).collect()
}

/// `(1/c_0) Σ_{i≥1} (-1)^i ∧_{j≠i} dlog c_j`.
fn gamma_oracle(c: &[Jet], m: usize) -> OForm {
    let mut out = OForm::new();
    let n = c.len() - 1;
    let inv0 = c[0].v.recip();
    for i in 1..=n {
        let ws: Vec<Vec<Q>> = (1..=n).filter(|&j| j != i).map(|j| dlog_grad(&c[j])).collect();
        let s = if i % 2 == 0 { inv0.clone() } else { -inv0.clone() };
        out = oform_add(&out, &wedge_grads(&ws, m), &s);
    }
    out
}

fn specialize(form: &DifferentialForm, at: &[Q]) -> Option<OForm> {
    let k0 = FieldTower::rationals(&[] as &[&str]);
    let imgs: Vec<Elem> = at.iter().map(|x| k0.scalar(x.clone())).collect();
    let mut out = OForm::new();
    for (key, c) in form.terms() {
        let v = k0.eval_ratfn(c.as_ratfn()?, &imgs).ok()?.as_scalar()?;
        if !v.is_zero() {
            out.insert(key.clone(), v);
        }
    }
    Some(out)
}

fn random_point(rng: &mut ChaCha8Rng, m: usize) -> Vec<Q> {
    (0..m).map(|_| Q::new(BigInt::from(rng.gen_range(-30..=30)), BigInt::from(rng.gen_range(1..=7)))).collect()
}

const NAMES: [&str; 3] = ["t1", "t2", "t3"];

fn q3() -> FieldTower {
    FieldTower::rationals(&NAMES)
}

/// Compares `lib` and `oracle` at a few rational points; `true` if at least one
/// point was usable and all usable points agree.
fn agree_at_points(rng: &mut ChaCha8Rng, lib: &DifferentialForm, oracle: impl Fn(&[Q]) -> Option<OForm>) -> bool {
    let mut used = 0;
    for _ in 0..6 {
        let at = random_point(rng, 3);
        let (Some(a), Some(b)) = (specialize(lib, &at), oracle(&at)) else { continue };
        if a != b {
            return false;
        }
        used += 1;
        if used == 2 {
            break;
        }
    }
    used > 0
}

fn nonzero_ex(rng: &mut ChaCha8Rng, k: &FieldTower) -> (Ex, Elem) {
    loop {
        let e = random_ex(rng, 3, 3);
        if let Ok(x) = parse_elem(k, &e.render(&NAMES)) {
            if !x.is_zero() {
                return (e, x);
            }
        }
    }
}

#[test]
fn eval_gamma_matches_jet_oracle() {
    let k = q3();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=4 {
        let mut done = 0;
        while done < 40 {
            let rest: Vec<Ex> = (0..n).map(|_| nonzero_ex(&mut rng, &k).0).collect();
            let mut coords = vec![Ex::neg_sum(&rest)];
            coords.extend(rest);
            let text = format!("({})", coords.iter().map(|e| e.render(&NAMES)).collect::<Vec<_>>().join(", "));
            let Ok(p) = parse_point(&k, &text) else { continue };
            if !p.is_good_position() {
                continue;
            }
            let lib = p.eval_gamma().unwrap();
            let ok = agree_at_points(&mut rng, &lib, |at| {
                let js: Vec<Jet> = coords.iter().map(|e| e.jet(at)).collect::<Option<_>>()?;
                if js.iter().any(|j| j.v.is_zero()) {
                    return None;
                }
                Some(gamma_oracle(&js, 3))
            });
            assert!(ok, "eval_gamma mismatch at {text}");
            done += 1;
        }
    }
}

fn wedge_dlog_oracle(a: Option<&Ex>, bs: &[Ex], at: &[Q]) -> Option<OForm> {
    let js: Vec<Jet> = bs.iter().map(|e| e.jet(at)).collect::<Option<_>>()?;
    if js.iter().any(|j| j.v.is_zero()) {
        return None;
    }
    let scale = match a {
        Some(a) => a.jet(at)?.v,
        None => Q::one(),
    };
    let ws: Vec<Vec<Q>> = js.iter().map(dlog_grad).collect();
    Some(oform_add(&OForm::new(), &wedge_grads(&ws, 3), &scale))
}

#[test]
fn eval_of_phi_matches_signed_dlog_oracle() {
    let k = q3();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 2..=4 {
        for _ in 0..25 {
            let (ae, a) = nonzero_ex(&mut rng, &k);
            let bx: Vec<(Ex, Elem)> = (0..n - 1).map(|_| nonzero_ex(&mut rng, &k)).collect();
            let b: Vec<Elem> = bx.iter().map(|x| x.1.clone()).collect();
            let be: Vec<Ex> = bx.into_iter().map(|x| x.0).collect();
            let x = PresentationElement::term(&a, &b).unwrap();
            let lib = phi(&x).unwrap().eval_gamma().unwrap();
            let sign = if n % 2 == 1 { Q::one() } else { -Q::one() };
            let ok = agree_at_points(&mut rng, &lib, |at| {
                Some(oform_add(&OForm::new(), &wedge_dlog_oracle(Some(&ae), &be, at)?, &sign))
            });
            assert!(ok, "phi mismatch for a = {}, b = {:?}", a.render(), b.iter().map(Elem::render).collect::<Vec<_>>());
        }
    }
}

#[test]
fn symbol_square_matches_dlog_oracle() {
    let k = q3();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for w in 1..=3 {
        for _ in 0..25 {
            let bx: Vec<(Ex, Elem)> = (0..w).map(|_| nonzero_ex(&mut rng, &k)).collect();
            let s: Vec<Elem> = bx.iter().map(|x| x.1.clone()).collect();
            let se: Vec<Ex> = bx.into_iter().map(|x| x.0).collect();
            let n = w + 1;
            let cyc = match symbol_to_point(&s).unwrap() {
                None => ZeroCycle::zero(&k, n),
                Some(u) => ZeroCycle::point(iota(&u).unwrap()).unwrap(),
            };
            let lib = cyc.eval_gamma().unwrap();
            let sign = if n % 2 == 1 { Q::one() } else { -Q::one() };
            let ok = agree_at_points(&mut rng, &lib, |at| Some(oform_add(&OForm::new(), &wedge_dlog_oracle(None, &se, at)?, &sign)));
            assert!(ok);
        }
    }
}

#[test]
fn nabla_coordinates_match_formula() {
    let k = q3();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut done = 0;
    while done < 30 {
        let n = 1 + done % 3;
        let rest: Vec<Ex> = (0..n).map(|_| nonzero_ex(&mut rng, &k).0).collect();
        let mut coords = vec![Ex::neg_sum(&rest)];
        coords.extend(rest);
        let text = format!("({})", coords.iter().map(|e| e.render(&NAMES)).collect::<Vec<_>>().join(", "));
        let Ok(x) = parse_point(&k, &text) else { continue };
        if !x.is_good_position() || x.coords()[0].is_one() {
            continue;
        }
        let y = nabla(&x).unwrap();
        let at = random_point(&mut rng, 3);
        let k0 = FieldTower::rationals(&[] as &[&str]);
        let imgs: Vec<Elem> = at.iter().map(|v| k0.scalar(v.clone())).collect();
        let value = |e: &Elem| k0.eval_ratfn(e.as_ratfn().unwrap(), &imgs).ok().and_then(|v| v.as_scalar());
        let Some(xs) = coords.iter().map(|e| e.jet(&at).map(|j| j.v)).collect::<Option<Vec<Q>>>() else { continue };
        let one_minus = Q::one() - &xs[0];
        if one_minus.is_zero() {
            continue;
        }
        let f = -(&xs[0] / &one_minus);
        let mut want = vec![xs[0].clone()];
        want.extend(xs[1..].iter().map(|c| c * &f));
        want.push(f.clone());
        let got: Option<Vec<Q>> = y.coords().iter().map(value).collect();
        if let Some(got) = got {
            assert_eq!(got, want, "nabla at {text}");
            done += 1;
        }
    }
}

/// Multiplication matrix of `x = Σ x_i θ^i` on the basis `1, θ, …` modulo the
/// monic `m` (coefficients low to high, leading 1 omitted).
fn mult_matrix(x: &[Q], m: &[Q]) -> Vec<Vec<Q>> {
    let d = m.len();
    let mut cols = Vec::new();
    for j in 0..d {
        // θ^j * x, reduced
        let mut v = vec![Q::zero(); 2 * d];
        for (i, c) in x.iter().enumerate() {
            v[i + j] += c;
        }
        for top in (d..2 * d).rev() {
            let c = v[top].clone();
            if c.is_zero() {
                continue;
            }
            v[top] = Q::zero();
            for (i, mi) in m.iter().enumerate() {
                v[top - d + i] -= &c * mi;
            }
        }
        cols.push(v[..d].to_vec());
    }
    (0..d).map(|r| (0..d).map(|c| cols[c][r].clone()).collect()).collect()
}

fn mat_inv(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).expect("invertible");
        m.swap(p, c);
        let piv = m[c][c].clone();
        for v in m[c].iter_mut() {
            *v /= &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..2 * n {
                    let s = &f * &m[c][j];
                    m[r][j] -= s;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Characteristic polynomial by Faddeev–LeVerrier, coefficients low to high.
fn charpoly(a: &[Vec<Q>]) -> Vec<Q> {
    let n = a.len();
    let mul = |x: &[Vec<Q>], y: &[Vec<Q>]| -> Vec<Vec<Q>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(Q::zero(), |s, k| s + &x[i][k] * &y[k][j])).collect())
            .collect()
    };
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut mk: Vec<Vec<Q>> = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(a, &mk);
        for i in 0..n {
            next[i][i] += &c[n - k + 1];
        }
        mk = next;
        let am = mul(a, &mk);
        let tr = (0..n).fold(Q::zero(), |s, i| s + &am[i][i]);
        c[n - k] = -tr / q(k as i64);
    }
    c
}

fn has_integer_root(m: &[i64]) -> bool {
    let c0 = m[0].abs();
    if c0 == 0 {
        return true;
    }
    (1..=c0).filter(|d| c0 % d == 0).any(|d| {
        [d, -d].iter().any(|&r| {
            let mut acc: i64 = 1;
            for c in m.iter().rev() {
                acc = acc * r + c;
            }
            acc == 0
        })
    })
}

#[test]
fn trace_and_minimal_polynomial_match_matrix_oracle() {
    let k = FieldTower::rationals(&[] as &[&str]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (deg, count) in [(2usize, 30), (3, 15)] {
        let mut done = 0;
        while done < count {
            let m: Vec<i64> = (0..deg).map(|_| rng.gen_range(-7..=7)).collect();
            // monic of degree ≤ 3 without rational root is irreducible
            if has_integer_root(&m) {
                continue;
            }
            let lower: Vec<Elem> = m.iter().map(|&c| k.int(c)).collect();
            let kp = k.with_extension("th", &lower).unwrap();
            let xs: Vec<i64> = (0..deg).map(|_| rng.gen_range(-5..=5)).collect();
            if xs[1..].iter().all(|&c| c == 0) {
                continue;
            }
            let t = kp.from_base_coeffs(&xs.iter().map(|&c| k.int(c)).collect::<Vec<_>>()).unwrap();
            let mq: Vec<Q> = m.iter().map(|&c| q(c)).collect();
            let mt = mult_matrix(&xs.iter().map(|&c| q(c)).collect::<Vec<_>>(), &mq);
            let tr = (0..deg).fold(Q::zero(), |s, i| s + &mt[i][i]);
            assert_eq!(t.trace().unwrap().as_scalar().unwrap(), tr);
            let minus_inv: Vec<Vec<Q>> = mat_inv(&mt).into_iter().map(|r| r.into_iter().map(|v| -v).collect()).collect();
            let cp = charpoly(&minus_inv);
            let p = minimal_polynomial(&(-t.inv().unwrap()));
            let got: Vec<Q> = p.monic().coeffs().iter().map(|c| c.as_scalar().unwrap()).collect();
            assert_eq!(got, cp);
            assert_eq!(&cp[1] / &cp[0], tr);
            done += 1;
        }
    }
}

#[test]
fn documented_examples() {
    let k = FieldTower::rationals(&["t"]);
    let x = PresentationElement::term(&parse_elem(&k, "t").unwrap(), &[parse_elem(&k, "t").unwrap()]).unwrap();
    let c = phi(&x).unwrap();
    let want = parse_tuple(&k, "(-1/t, 1/(t - 1), -1/(t*(t - 1)))").unwrap();
    let (p, m) = c.points().next().unwrap();
    assert_eq!((p.coords().to_vec(), m, c.len()), (want, 1, 1));

    let p = parse_point(&k, "(-1 - t, t, 1)").unwrap();
    assert_eq!(p.eval_gamma().unwrap().render(), "(-1/(t^2 + t)) dt");
}
