//! Seeded generators of small random field elements, points, symbols and
//! extensions for the verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycles::QPoint;
use crate::factor::{certify_irreducible, UPoly};
use crate::field::{Elem, FieldTower};
use crate::milnor::SimplexPoint;
use crate::poly::BaseField;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A child generator, so that suites do not perturb each other.
    pub fn fork(&mut self, label: u64) -> Gen {
        Gen::new(self.rng.gen::<u64>() ^ label.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn nonzero_int(&mut self, bound: i64) -> i64 {
        loop {
            let v = self.int(-bound, bound);
            if v != 0 {
                return v;
            }
        }
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.rng.gen_range(0..xs.len())]
    }

    /// A polynomial in the transcendentals with at most `terms` monomials of
    /// total degree ≤ 2.
    fn small_poly(&mut self, tower: &FieldTower, terms: usize) -> Elem {
        let mut acc = tower.int(self.int(-3, 3));
        let nv = tower.nvars();
        for _ in 0..terms {
            let mut m = tower.int(self.nonzero_int(3));
            if nv > 0 {
                let deg = self.int(1, 2);
                for _ in 0..deg {
                    m = &m * &tower.var(self.rng.gen_range(0..nv));
                }
            }
            acc = &acc + &m;
        }
        acc
    }

    fn base_part(&mut self, tower: &FieldTower) -> Elem {
        let terms = self.int(1, 2) as usize;
        let num = self.small_poly(tower, terms);
        if tower.nvars() > 0 && self.coin(0.3) {
            let den = self.small_poly(tower, 1);
            if !den.is_zero() {
                return &num / &den;
            }
        }
        num
    }

    /// A random element; over an extension, a combination of powers of the generator.
    pub fn elem(&mut self, tower: &FieldTower) -> Elem {
        match tower.extension() {
            None => self.base_part(tower),
            Some(_) => {
                let base = tower.base_tower();
                let coeffs: Vec<Elem> = (0..tower.degree())
                    .map(|i| if i == 0 || self.coin(0.6) { self.base_part(&base) } else { base.zero() })
                    .collect();
                tower.from_base_coeffs(&coeffs).expect("coefficient count matches the degree")
            }
        }
    }

    pub fn nonzero(&mut self, tower: &FieldTower) -> Elem {
        loop {
            let x = self.elem(tower);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// An element outside `{0, 1}`.
    pub fn generic(&mut self, tower: &FieldTower) -> Elem {
        loop {
            let x = self.elem(tower);
            if !x.is_zero() && !x.is_one() {
                return x;
            }
        }
    }

    /// A good-position point of `Q^n` (`n + 1` nonzero coordinates summing to 0).
    pub fn good_point(&mut self, tower: &FieldTower, n: usize) -> QPoint {
        loop {
            let rest: Vec<Elem> = (0..n).map(|_| self.nonzero(tower)).collect();
            let c0 = rest.iter().fold(tower.zero(), |a, x| &a - x);
            if c0.is_zero() {
                continue;
            }
            let mut coords = vec![c0];
            coords.extend(rest);
            return QPoint::new(coords).expect("coordinates sum to zero");
        }
    }

    /// A good-position point with `x_0 ≠ 1`, as needed by `∇`.
    pub fn nabla_point(&mut self, tower: &FieldTower, n: usize) -> QPoint {
        loop {
            let p = self.good_point(tower, n);
            if !p.coords()[0].is_one() {
                return p;
            }
        }
    }

    /// `n + 1` nonzero coordinates summing to 1.
    pub fn simplex_point(&mut self, tower: &FieldTower, n: usize) -> SimplexPoint {
        loop {
            let rest: Vec<Elem> = (0..n).map(|_| self.nonzero(tower)).collect();
            let last = rest.iter().fold(tower.one(), |a, x| &a - x);
            if last.is_zero() {
                continue;
            }
            let mut coords = rest;
            coords.push(last);
            return SimplexPoint::new(coords).expect("coordinates sum to one");
        }
    }

    /// Entries of a symbol of weight `w`, all nonzero.
    pub fn symbol_entries(&mut self, tower: &FieldTower, w: usize) -> Vec<Elem> {
        (0..w).map(|_| self.nonzero(tower)).collect()
    }

    /// A random monic irreducible polynomial of degree 2 or 3 over `base`
    /// (a tower without extension), certified irreducible.
    pub fn irreducible(&mut self, base: &FieldTower, degree: usize) -> UPoly {
        loop {
            let mut coeffs: Vec<Elem> = (0..degree).map(|_| base.int(self.int(-6, 6))).collect();
            if base.nvars() > 0 && self.coin(0.5) {
                let i = self.rng.gen_range(0..degree);
                coeffs[i] = &coeffs[i] + &base.var(self.rng.gen_range(0..base.nvars()));
            }
            coeffs.push(base.one());
            let p = UPoly::new(base, coeffs);
            if p.coeff(0).is_zero() || !p.is_separable() {
                continue;
            }
            if let Ok(Some(true)) = certify_irreducible(&p) {
                return p;
            }
        }
    }

    /// A nonzero scalar of the prime field.
    pub fn scalar(&mut self, tower: &FieldTower) -> Elem {
        loop {
            let x = match tower.base_field() {
                BaseField::Rationals => tower.rational(self.nonzero_int(9), self.int(1, 9)).unwrap(),
                BaseField::Prime(_) => tower.int(self.nonzero_int(50)),
            };
            if !x.is_zero() {
                return x;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let k = FieldTower::rationals(&["t1", "t2"]);
        let a: Vec<String> = {
            let mut g = Gen::new(7);
            (0..20).map(|_| g.elem(&k).render()).collect()
        };
        let b: Vec<String> = {
            let mut g = Gen::new(7);
            (0..20).map(|_| g.elem(&k).render()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn points_are_valid() {
        let k = FieldTower::new(BaseField::Prime(5), &["t1", "t2"]).unwrap();
        let mut g = Gen::new(1);
        for _ in 0..20 {
            assert!(g.good_point(&k, 3).is_good_position());
        }
        let q = FieldTower::rationals(&[] as &[&str]);
        let p = g.irreducible(&q, 3);
        assert_eq!(p.degree(), 3);
    }
}
