//! Sparse multivariate polynomials over ℚ or 𝔽_p and their fraction field.
//!
//! Polynomials are stored as a `BTreeMap` from exponent vectors to nonzero
//! coefficients, ordered graded-lexicographically, so two equal polynomials
//! always have identical storage. [`RatFn`] keeps numerator and denominator
//! coprime with a denominator whose leading coefficient is 1.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact coefficient. Over 𝔽_p the value is an integer in `[0, p)`.
pub type Scalar = BigRational;

/// The prime field underneath every tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

impl BaseField {
    pub fn characteristic(self) -> u64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Prime(p) => p,
        }
    }

    fn modp(x: &Scalar, p: u64) -> u64 {
        let m = BigInt::from(p);
        let n = x.numer().mod_floor(&m).to_u64().unwrap();
        let d = x.denom().mod_floor(&m).to_u64().unwrap();
        if d == 1 {
            n
        } else {
            mulmod(n, invmod(d, p), p)
        }
    }

    fn lift(v: u64) -> Scalar {
        Scalar::from_integer(BigInt::from(v))
    }

    /// Brings an arbitrary rational into canonical form for this base.
    pub fn reduce(self, x: Scalar) -> Scalar {
        match self {
            BaseField::Rationals => x,
            BaseField::Prime(p) => Self::lift(Self::modp(&x, p)),
        }
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        self.reduce(Scalar::from_integer(BigInt::from(v)))
    }

    pub fn zero(self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(self) -> Scalar {
        Scalar::one()
    }

    pub fn add(self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            BaseField::Rationals => a + b,
            BaseField::Prime(p) => {
                let (x, y) = (Self::modp(a, p), Self::modp(b, p));
                Self::lift(((x as u128 + y as u128) % p as u128) as u64)
            }
        }
    }

    pub fn sub(self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            BaseField::Rationals => a - b,
            BaseField::Prime(p) => {
                let (x, y) = (Self::modp(a, p), Self::modp(b, p));
                Self::lift(((x as u128 + p as u128 - y as u128) % p as u128) as u64)
            }
        }
    }

    pub fn neg(self, a: &Scalar) -> Scalar {
        match self {
            BaseField::Rationals => -a,
            BaseField::Prime(p) => {
                let x = Self::modp(a, p);
                Self::lift(if x == 0 { 0 } else { p - x })
            }
        }
    }

    pub fn mul(self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            BaseField::Rationals => a * b,
            BaseField::Prime(p) => Self::lift(mulmod(Self::modp(a, p), Self::modp(b, p), p)),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero scalar");
        match self {
            BaseField::Rationals => a.recip(),
            BaseField::Prime(p) => Self::lift(invmod(Self::modp(a, p), p)),
        }
    }

    pub fn div(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// A square root in the base field, if one exists.
    pub fn sqrt(self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return Some(Scalar::zero());
        }
        match self {
            BaseField::Rationals => {
                if a.is_negative() {
                    return None;
                }
                let n = a.numer().to_biguint()?;
                let d = a.denom().to_biguint()?;
                let (rn, rd) = (n.sqrt(), d.sqrt());
                if &rn * &rn == n && &rd * &rd == d {
                    Some(Scalar::new(BigInt::from(rn), BigInt::from(rd)))
                } else {
                    None
                }
            }
            BaseField::Prime(p) => sqrt_mod(Self::modp(a, p), p).map(Self::lift),
        }
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    powmod(a, p - 2, p)
}

/// Tonelli–Shanks.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Exponent vector; ordered graded-lexicographically (variable 0 most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = Mono::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Mono) -> Option<Mono> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Mono)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate polynomial with coefficients in a [`BaseField`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    base: BaseField,
    nvars: usize,
    terms: BTreeMap<Mono, Scalar>,
}

impl MPoly {
    pub fn zero(base: BaseField, nvars: usize) -> Self {
        MPoly {
            base,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(base: BaseField, nvars: usize, c: Scalar) -> Self {
        let c = base.reduce(c);
        let mut p = MPoly::zero(base, nvars);
        if !c.is_zero() {
            p.terms.insert(Mono::one(nvars), c);
        }
        p
    }

    pub fn one(base: BaseField, nvars: usize) -> Self {
        MPoly::constant(base, nvars, Scalar::one())
    }

    pub fn from_i64(base: BaseField, nvars: usize, v: i64) -> Self {
        MPoly::constant(base, nvars, Scalar::from_integer(BigInt::from(v)))
    }

    pub fn var(base: BaseField, nvars: usize, i: usize) -> Self {
        MPoly::monomial(base, Mono::var(nvars, i, 1), Scalar::one())
    }

    pub fn monomial(base: BaseField, m: Mono, c: Scalar) -> Self {
        let nvars = m.0.len();
        let c = base.reduce(c);
        let mut p = MPoly::zero(base, nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(base: BaseField, nvars: usize, terms: impl IntoIterator<Item = (Mono, Scalar)>) -> Self {
        let mut p = MPoly::zero(base, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_value().is_one()
    }

    pub fn constant_value(&self) -> Scalar {
        self.terms
            .get(&Mono::one(self.nvars))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Largest power of `var` dividing the polynomial (0 for the zero polynomial).
    pub fn valuation_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).min().unwrap_or(0)
    }

    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    fn add_term(&mut self, m: Mono, c: Scalar) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let base = self.base;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                let c = base.reduce(c);
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = base.add(e.get(), &c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &MPoly) {
        assert_eq!(self.base, other.base, "base field mismatch");
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.check(other);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.check(other);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), self.base.neg(c));
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            base: self.base,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.base.neg(c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        let c = self.base.reduce(c.clone());
        if c.is_zero() {
            return MPoly::zero(self.base, self.nvars);
        }
        if c.is_one() {
            return self.clone();
        }
        MPoly {
            base: self.base,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.base.mul(a, &c)))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Mono, c: &Scalar) -> MPoly {
        MPoly {
            base: self.base,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), self.base.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(self.base, self.nvars);
        }
        if self.is_constant() {
            return other.scale(&self.constant_value());
        }
        if other.is_constant() {
            return self.scale(&other.constant_value());
        }
        let mut r = MPoly::zero(self.base, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), self.base.mul(c1, c2));
            }
        }
        r
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut result = MPoly::one(self.base, self.nvars);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        result
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&self.base.inv(c)),
        }
    }

    /// Exact quotient `self / other`, or `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &MPoly) -> Option<MPoly> {
        self.check(other);
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        if other.is_constant() {
            return Some(self.scale(&self.base.inv(&other.constant_value())));
        }
        for v in 0..self.nvars {
            if self.degree_in(v) < other.degree_in(v) {
                return None;
            }
        }
        let (lm, lc) = other.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lc_inv = self.base.inv(&lc);
        let mut r = self.clone();
        let mut q = MPoly::zero(self.base, self.nvars);
        while let Some((m, c)) = r.leading() {
            let qm = m.div(&lm)?;
            let qc = self.base.mul(c, &lc_inv);
            let neg_qc = self.base.neg(&qc);
            for (om, oc) in &other.terms {
                r.add_term(om.mul(&qm), self.base.mul(oc, &neg_qc));
            }
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Coefficients with respect to `var`, lowest power first; each is free of `var`.
    pub fn to_univariate(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(self.base, self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut mm = m.clone();
            mm.0[var] = 0;
            out[e].terms.insert(mm, c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    pub fn from_univariate(base: BaseField, nvars: usize, var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut r = MPoly::zero(base, nvars);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut mm = m.clone();
                mm.0[var] += e as u32;
                r.add_term(mm, a.clone());
            }
        }
        r
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> MPoly {
        let mut r = MPoly::zero(self.base, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut mm = m.clone();
            mm.0[var] -= 1;
            r.add_term(mm, self.base.mul(c, &self.base.from_i64(e as i64)));
        }
        r
    }

    /// Substitutes `var := 0`.
    pub fn at_zero(&self, var: usize) -> MPoly {
        MPoly {
            base: self.base,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[var] == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Divides by `var^e`; every term must be divisible.
    pub fn shift_down(&self, var: usize, e: u32) -> MPoly {
        MPoly {
            base: self.base,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut mm = m.clone();
                    mm.0[var] = mm.0[var].checked_sub(e).expect("not divisible by variable power");
                    (mm, c.clone())
                })
                .collect(),
        }
    }

    /// Re-embeds into a ring with `nvars` variables; variable `i` goes to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> MPoly {
        let mut r = MPoly::zero(self.base, nvars);
        for (m, c) in &self.terms {
            let mut mm = Mono::one(nvars);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    mm.0[map[i]] += e;
                }
            }
            r.add_term(mm, c.clone());
        }
        r
    }

    /// Evaluates with every variable replaced by a base-field scalar.
    pub fn eval_scalars(&self, vals: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = self.base.mul(&t, &vals[i]);
                }
            }
            acc = self.base.add(&acc, &t);
        }
        acc
    }

    /// Greatest common divisor, normalized to leading coefficient 1.
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        self.check(other);
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let one = MPoly::one(self.base, self.nvars);
        if self.is_constant() || other.is_constant() {
            return one;
        }
        if self == other {
            return self.monic();
        }
        let sa = self.support_vars();
        let sb = other.support_vars();
        if let Some(&x) = sa.iter().find(|v| !sb.contains(v)) {
            return self.content_in(x).gcd(other);
        }
        if let Some(&x) = sb.iter().find(|v| !sa.contains(v)) {
            return self.gcd(&other.content_in(x));
        }
        if let Some(q) = self.div_exact(other) {
            let _ = q;
            return other.monic();
        }
        if other.div_exact(self).is_some() {
            return self.monic();
        }
        if self.base == BaseField::Rationals {
            if let Some(g) = heu::gcd(self, other) {
                return g;
            }
        }
        let x = *sa
            .iter()
            .min_by_key(|&&v| self.degree_in(v).max(other.degree_in(v)))
            .unwrap();
        let ca = self.content_in(x);
        let cb = other.content_in(x);
        let g = ca.gcd(&cb);
        let pa = self.div_exact(&ca).expect("content divides");
        let pb = other.div_exact(&cb).expect("content divides");
        let h = prs_gcd(pa, pb, x);
        g.mul(&h).monic()
    }

    /// GCD of the coefficients with respect to `var`.
    pub fn content_in(&self, var: usize) -> MPoly {
        let coeffs = self.to_univariate(var);
        let mut nonzero: Vec<&MPoly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
        nonzero.sort_by_key(|c| (c.num_terms(), c.total_degree()));
        let mut g = MPoly::zero(self.base, self.nvars);
        for c in nonzero {
            g = g.gcd(c);
            if g.is_constant() {
                return MPoly::one(self.base, self.nvars);
            }
        }
        g
    }

    /// Primitive part with respect to `var`, normalized to leading coefficient 1.
    pub fn primitive_part(&self, var: usize) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(var);
        self.div_exact(&c).expect("content divides").monic()
    }

    /// Square root when `self` is a perfect square.
    pub fn sqrt(&self) -> Option<MPoly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let ch = self.base.characteristic();
        if ch == 2 {
            let mut r = MPoly::zero(self.base, self.nvars);
            for (m, c) in &self.terms {
                if m.0.iter().any(|e| e % 2 == 1) {
                    return None;
                }
                r.add_term(Mono(m.0.iter().map(|e| e / 2).collect()), c.clone());
            }
            return Some(r);
        }
        let (lm, lc) = self.leading().unwrap();
        if lm.0.iter().any(|e| e % 2 == 1) {
            return None;
        }
        let lowest = self.terms.keys().map(Mono::degree).min().unwrap();
        let s0 = MPoly::monomial(
            self.base,
            Mono(lm.0.iter().map(|e| e / 2).collect()),
            self.base.sqrt(lc)?,
        );
        let (s0m, s0c) = s0.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let two_s0c = self.base.mul(&s0c, &self.base.from_i64(2));
        let mut root = s0.clone();
        let mut rem = self.sub(&s0.mul(&s0));
        while let Some((m, c)) = rem.leading() {
            if 2 * m.degree() < lowest {
                return None;
            }
            let tm = m.div(&s0m)?;
            if 2 * tm.degree() < lowest {
                return None;
            }
            let t = MPoly::monomial(self.base, tm, self.base.div(c, &two_s0c));
            let two_root = root.scale(&self.base.from_i64(2));
            rem = rem.sub(&two_root.mul(&t)).sub(&t.mul(&t));
            root = root.add(&t);
        }
        Some(root)
    }

    /// Renders with the given variable names, terms in decreasing graded-lex order.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = self.base == BaseField::Rationals && c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        names[j].clone()
                    } else {
                        format!("{}^{}", names[j], e)
                    }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&vars.join("*"));
            } else {
                out.push_str(&format!("{}*{}", abs, vars.join("*")));
            }
        }
        out
    }
}

/// Primitive polynomial remainder sequence in `var` for inputs primitive in `var`.
/// Heuristic GCD over ℤ: evaluate at a large integer, take the GCD of the
/// images recursively, interpolate back in the `ξ`-adic expansion and keep the
/// candidate only if it divides both inputs.
mod heu {
    use super::*;

    type ZPoly = BTreeMap<Vec<u32>, BigInt>;

    fn to_z(p: &MPoly) -> ZPoly {
        let lcm = p.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let mut out: ZPoly = p
            .terms
            .iter()
            .map(|(m, c)| (m.0.clone(), c.numer() * (&lcm / c.denom())))
            .collect();
        let g = content(&out);
        for c in out.values_mut() {
            *c /= &g;
        }
        out
    }

    fn content(p: &ZPoly) -> BigInt {
        p.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn max_norm(p: &ZPoly) -> BigInt {
        p.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    fn degree(p: &ZPoly, v: usize) -> u32 {
        p.keys().map(|m| m[v]).max().unwrap_or(0)
    }

    fn eval(p: &ZPoly, v: usize, xi: &BigInt) -> ZPoly {
        let mut out = ZPoly::new();
        for (m, c) in p {
            let mut k = m.clone();
            let e = k[v];
            k[v] = 0;
            let t = c * num_traits::pow(xi.clone(), e as usize);
            let entry = out.entry(k).or_insert_with(BigInt::zero);
            *entry += t;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Symmetric `ξ`-adic expansion of the coefficients of `h` into powers of `x_v`.
    fn interpolate(mut h: ZPoly, v: usize, xi: &BigInt) -> ZPoly {
        let mut out = ZPoly::new();
        let half = xi / 2;
        let mut e = 0u32;
        while !h.is_empty() {
            let mut next = ZPoly::new();
            for (m, c) in &h {
                let mut r = c.mod_floor(xi);
                if r > half {
                    r -= xi;
                }
                if !r.is_zero() {
                    let mut k = m.clone();
                    k[v] = e;
                    out.insert(k, r.clone());
                }
                let q = (c - r) / xi;
                if !q.is_zero() {
                    next.insert(m.clone(), q);
                }
            }
            h = next;
            e += 1;
        }
        out
    }

    fn to_mpoly(p: &ZPoly, nvars: usize) -> MPoly {
        MPoly::from_terms(
            BaseField::Rationals,
            nvars,
            p.iter().map(|(m, c)| (Mono(m.clone()), Scalar::from_integer(c.clone()))),
        )
    }

    fn divides(h: &ZPoly, f: &ZPoly, nvars: usize) -> bool {
        to_mpoly(f, nvars).div_exact(&to_mpoly(h, nvars)).is_some()
    }

    fn rec(f: &ZPoly, g: &ZPoly, vars: &[usize], nvars: usize, depth: u32) -> Option<ZPoly> {
        let cf = content(f);
        let cg = content(g);
        let gc = cf.gcd(&cg);
        let Some((&v, rest)) = vars.split_last() else {
            let mut out = ZPoly::new();
            out.insert(vec![0; nvars], gc);
            return Some(out);
        };
        let f: ZPoly = f.iter().map(|(m, c)| (m.clone(), c / &cf)).collect();
        let g: ZPoly = g.iter().map(|(m, c)| (m.clone(), c / &cg)).collect();
        if degree(&f, v) == 0 && degree(&g, v) == 0 {
            let h = rec(&f, &g, rest, nvars, depth)?;
            return Some(h.into_iter().map(|(m, c)| (m, c * &gc)).collect());
        }
        if depth > 40 {
            return None;
        }
        let bound = max_norm(&f).min(max_norm(&g));
        let mut xi = BigInt::from(2) * bound + 29;
        for _ in 0..6 {
            let ff = eval(&f, v, &xi);
            let gg = eval(&g, v, &xi);
            if !ff.is_empty() && !gg.is_empty() {
                if let Some(h) = rec(&ff, &gg, rest, nvars, depth + 1) {
                    let mut cand = interpolate(h, v, &xi);
                    let c = content(&cand);
                    if !c.is_zero() {
                        for x in cand.values_mut() {
                            *x /= &c;
                        }
                        if divides(&cand, &f, nvars) && divides(&cand, &g, nvars) {
                            return Some(cand.into_iter().map(|(m, c)| (m, c * &gc)).collect());
                        }
                    }
                }
            }
            xi = xi * 73794 / 27011 + 1;
        }
        None
    }

    pub(super) fn gcd(a: &MPoly, b: &MPoly) -> Option<MPoly> {
        let vars: Vec<usize> = (0..a.nvars).filter(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0).collect();
        let h = rec(&to_z(a), &to_z(b), &vars, a.nvars, 0)?;
        Some(to_mpoly(&h, a.nvars).monic())
    }
}

fn prs_gcd(a: MPoly, b: MPoly, var: usize) -> MPoly {
    let (mut f, mut g) = if a.degree_in(var) >= b.degree_in(var) { (a, b) } else { (b, a) };
    loop {
        if g.degree_in(var) == 0 {
            // g primitive and free of var => unit
            return MPoly::one(f.base, f.nvars);
        }
        let r = pseudo_rem(&f, &g, var);
        if r.is_zero() {
            return g.primitive_part(var);
        }
        if r.degree_in(var) == 0 {
            return MPoly::one(f.base, f.nvars);
        }
        f = g;
        g = r.primitive_part(var);
    }
}

/// A nonzero multiple of the pseudo-remainder of `f` by `g` in `var`.
fn pseudo_rem(f: &MPoly, g: &MPoly, var: usize) -> MPoly {
    let mut fc = f.to_univariate(var);
    let gc = g.to_univariate(var);
    let m = gc.len() - 1;
    let lc = gc[m].clone();
    while fc.len() > m && !fc.is_empty() {
        let lead = fc.last().unwrap().clone();
        let shift = fc.len() - 1 - m;
        for c in fc.iter_mut() {
            *c = c.mul(&lc);
        }
        for (j, gj) in gc.iter().enumerate() {
            fc[j + shift] = fc[j + shift].sub(&lead.mul(gj));
        }
        while fc.last().is_some_and(|c| c.is_zero()) {
            fc.pop();
        }
    }
    MPoly::from_univariate(f.base, f.nvars, var, &fc)
}

/// Element of the rational function field `Frac(base[x_1..x_m])` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: MPoly,
    den: MPoly,
}

impl RatFn {
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let (b, n) = (num.base, num.nvars);
            return RatFn {
                num,
                den: MPoly::one(b, n),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::normalized(num, den)
    }

    fn normalized(num: MPoly, den: MPoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFn { num, den }
        } else {
            let inv = den.base.inv(&lc);
            RatFn {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: MPoly) -> Self {
        let (b, n) = (p.base, p.nvars);
        RatFn {
            num: p,
            den: MPoly::one(b, n),
        }
    }

    pub fn zero(base: BaseField, nvars: usize) -> Self {
        RatFn::from_poly(MPoly::zero(base, nvars))
    }

    pub fn one(base: BaseField, nvars: usize) -> Self {
        RatFn::from_poly(MPoly::one(base, nvars))
    }

    pub fn constant(base: BaseField, nvars: usize, c: Scalar) -> Self {
        RatFn::from_poly(MPoly::constant(base, nvars, c))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn base(&self) -> BaseField {
        self.num.base
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFn::new(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_one() {
            return RatFn::normalized(self.num.mul(&other.den).add(&other.num), other.den.clone());
        }
        if other.den.is_one() {
            return RatFn::normalized(other.num.mul(&self.den).add(&self.num), self.den.clone());
        }
        let g = self.den.gcd(&other.den);
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d2).add(&other.num.mul(&d1));
        if num.is_zero() {
            return RatFn::zero(self.base(), self.nvars());
        }
        if g.is_constant() {
            return RatFn::normalized(num, self.den.mul(&d2));
        }
        let g2 = num.gcd(&g);
        let num = num.div_exact(&g2).unwrap();
        let den = d1.mul(&d2).mul(&g.div_exact(&g2).unwrap());
        RatFn::normalized(num, den)
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        if self.is_zero() || other.is_zero() {
            return RatFn::zero(self.base(), self.nvars());
        }
        if self.is_constant() {
            return other.scale(&self.num.constant_value());
        }
        if other.is_constant() {
            return self.scale(&other.num.constant_value());
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let (n1, d2) = if g1.is_constant() {
            (self.num.clone(), other.den.clone())
        } else {
            (self.num.div_exact(&g1).unwrap(), other.den.div_exact(&g1).unwrap())
        };
        let (n2, d1) = if g2.is_constant() {
            (other.num.clone(), self.den.clone())
        } else {
            (other.num.div_exact(&g2).unwrap(), self.den.div_exact(&g2).unwrap())
        };
        RatFn::normalized(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, c: &Scalar) -> RatFn {
        RatFn {
            num: self.num.scale(c),
            den: if self.base().reduce(c.clone()).is_zero() {
                MPoly::one(self.base(), self.nvars())
            } else {
                self.den.clone()
            },
        }
    }

    pub fn inv(&self) -> Option<RatFn> {
        if self.is_zero() {
            return None;
        }
        Some(RatFn::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFn) -> Option<RatFn> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: i32) -> RatFn {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        RatFn::normalized(self.num.pow(e as u32), self.den.pow(e as u32))
    }

    pub fn partial(&self, var: usize) -> RatFn {
        let dn = self.num.derivative(var);
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return RatFn::new(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        RatFn::new(num, self.den.mul(&self.den))
    }

    /// Order of vanishing along `var = 0` (negative for poles). Zero maps to `i64::MAX`.
    pub fn valuation_in(&self, var: usize) -> i64 {
        if self.is_zero() {
            return i64::MAX;
        }
        self.num.valuation_in(var) as i64 - self.den.valuation_in(var) as i64
    }

    /// Multiplies by `var^e` (e may be negative).
    pub fn mul_var_pow(&self, var: usize, e: i64) -> RatFn {
        if self.is_zero() || e == 0 {
            return self.clone();
        }
        let nv = self.nvars();
        let b = self.base();
        let x = |k: u32| MPoly::monomial(b, Mono::var(nv, var, k), Scalar::one());
        if e > 0 {
            let dv = self.den.valuation_in(var).min(e as u32);
            let num = self.num.mul(&x(e as u32 - dv));
            let den = self.den.shift_down(var, dv);
            RatFn::normalized(num, den)
        } else {
            let e = (-e) as u32;
            let nvl = self.num.valuation_in(var).min(e);
            let num = self.num.shift_down(var, nvl);
            let den = self.den.mul(&x(e - nvl));
            RatFn::normalized(num, den)
        }
    }

    /// Substitutes `var := 0`; requires no pole along `var = 0`.
    pub fn at_zero(&self, var: usize) -> Option<RatFn> {
        let d = self.den.at_zero(var);
        if d.is_zero() {
            return None;
        }
        Some(RatFn::new(self.num.at_zero(var), d))
    }

    pub fn remap(&self, nvars: usize, map: &[usize]) -> RatFn {
        RatFn::normalized(self.num.remap(nvars, map), self.den.remap(nvars, map))
    }

    pub fn render(&self, names: &[String]) -> String {
        let n = self.num.render(names);
        if self.den.is_one() {
            return n;
        }
        let wrap = |p: &MPoly, s: String| {
            if p.num_terms() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        let d = self.den.render(names);
        let den_needs_parens = self.den.num_terms() > 1
            || self
                .den
                .leading()
                .map(|(m, c)| !c.is_one() || m.0.iter().filter(|&&e| e > 0).count() > 1)
                .unwrap_or(false);
        let d = if den_needs_parens { format!("({d})") } else { d };
        format!("{}/{}", wrap(&self.num, n), d)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

/// `BigUint` exponentiation helper used by the finite-field factorizer.
#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> BaseField {
        BaseField::Rationals
    }

    fn x(i: usize) -> MPoly {
        MPoly::var(q(), 3, i)
    }

    fn c(v: i64) -> MPoly {
        MPoly::from_i64(q(), 3, v)
    }

    #[test]
    fn grlex_leading_term() {
        let p = x(0).add(&x(1).mul(&x(1))).add(&c(3));
        let (m, _) = p.leading().unwrap();
        assert_eq!(m.0, vec![0, 2, 0]);
    }

    #[test]
    fn exact_division_and_failure() {
        let a = x(0).add(&c(1));
        let b = x(1).sub(&c(2));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.add(&c(1)).div_exact(&a).is_none());
    }

    #[test]
    fn gcd_of_products() {
        let a = x(0).add(&x(1));
        let b = x(0).sub(&x(2)).add(&c(1));
        let common = x(0).mul(&x(1)).add(&x(2));
        let g = a.mul(&common).gcd(&b.mul(&common).mul(&common));
        assert_eq!(g, common.monic());
    }

    #[test]
    fn gcd_mod_five() {
        let f5 = BaseField::Prime(5);
        let t = MPoly::var(f5, 1, 0);
        let one = MPoly::one(f5, 1);
        // t^2 + 1 = (t - 2)(t - 3) over F_5
        let p = t.mul(&t).add(&one);
        let q = t.sub(&MPoly::from_i64(f5, 1, 2));
        assert_eq!(p.gcd(&q), q);
    }

    #[test]
    fn sqrt_of_square() {
        let p = x(0).mul(&x(1)).sub(&c(3)).add(&x(2).scale(&Scalar::new(1.into(), 2.into())));
        assert_eq!(p.mul(&p).sqrt().unwrap(), p.monic().scale(&p.leading_coeff()));
        assert!(p.mul(&p).add(&c(1)).sqrt().is_none());
    }

    #[test]
    fn ratfn_sum_cross_multiplication() {
        // 1/(t-1) + 1/(t+1) = 2t/(t^2-1)
        let t = MPoly::var(q(), 1, 0);
        let one = MPoly::one(q(), 1);
        let a = RatFn::new(one.clone(), t.sub(&one));
        let b = RatFn::new(one.clone(), t.add(&one));
        let expected = RatFn::new(t.scale(&Scalar::from_integer(2.into())), t.mul(&t).sub(&one));
        assert_eq!(a.add(&b), expected);
    }

    #[test]
    fn tonelli_shanks() {
        for p in [3u64, 5, 13, 17, 97, 101] {
            for a in 1..p {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mulmod(r, r, p), a);
                }
            }
        }
    }

    #[test]
    fn valuation_and_shift() {
        let t = MPoly::var(q(), 2, 0);
        let v = MPoly::var(q(), 2, 1);
        let r = RatFn::new(t.mul(&t).mul(&v), t.add(&v));
        assert_eq!(r.valuation_in(0), 2);
        let s = r.mul_var_pow(0, -3);
        assert_eq!(s.valuation_in(0), -1);
        assert_eq!(s.mul_var_pow(0, 3), r);
    }
}
