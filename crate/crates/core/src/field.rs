//! Computable fields: ℚ or 𝔽_p, a rational function field over it, and an
//! optional simple separable extension `k[θ]/(P)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::factor::{coeff_times, join_terms};
use crate::poly::{is_prime, BaseField, MPoly, RatFn, Scalar};

/// A simple algebraic extension given by a monic minimal polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Extension {
    pub name: String,
    /// Coefficients `a_0..a_{N-1}` of `P = θ^N + a_{N-1}θ^{N-1} + … + a_0`.
    pub modulus: Vec<RatFn>,
}

impl Extension {
    pub fn degree(&self) -> usize {
        self.modulus.len()
    }
}

#[derive(Debug)]
struct TowerData {
    base: BaseField,
    vars: Vec<String>,
    ext: Option<Extension>,
    trace_basis: Vec<RatFn>,
    theta_partials: OnceLock<Vec<Vec<RatFn>>>,
}

/// A field `k` = base(t_1..t_m)[θ]/(P). Cheap to clone.
#[derive(Clone, Debug)]
pub struct FieldTower(Arc<TowerData>);

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.base == other.0.base && self.0.vars == other.0.vars && self.0.ext == other.0.ext)
    }
}

impl Eq for FieldTower {}

impl FieldTower {
    /// A purely transcendental tower `base(vars)`.
    pub fn new<S: AsRef<str>>(base: BaseField, vars: &[S]) -> Result<Self> {
        if let BaseField::Prime(p) = base {
            if !is_prime(p) {
                return Err(Error::InvalidTower(format!("{p} is not prime")));
            }
        }
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::InvalidTower(format!("duplicate variable `{v}`")));
            }
            if !is_identifier(v) {
                return Err(Error::InvalidTower(format!("bad variable name `{v}`")));
            }
        }
        Ok(FieldTower(Arc::new(TowerData {
            base,
            vars,
            ext: None,
            trace_basis: Vec::new(),
            theta_partials: OnceLock::new(),
        })))
    }

    pub fn rationals<S: AsRef<str>>(vars: &[S]) -> Self {
        Self::new(BaseField::Rationals, vars).expect("valid variable names")
    }

    /// Adjoins a root `name` of the monic polynomial with lower coefficients `modulus`
    /// (`a_0..a_{N-1}`, elements of `self`). Checks separability and, for degree ≤ 4,
    /// refuses polynomials that are provably reducible.
    pub fn with_extension(&self, name: &str, modulus: &[Elem]) -> Result<Self> {
        if self.0.ext.is_some() {
            return Err(Error::InvalidTower("only single-step extensions are supported".into()));
        }
        if !is_identifier(name) || self.0.vars.iter().any(|v| v == name) {
            return Err(Error::InvalidTower(format!("bad generator name `{name}`")));
        }
        if modulus.is_empty() {
            return Err(Error::InvalidTower("minimal polynomial must have degree >= 1".into()));
        }
        for a in modulus {
            if a.tower() != self {
                return Err(Error::TowerMismatch);
            }
        }
        let mut full: Vec<Elem> = modulus.to_vec();
        full.push(self.one());
        let p = crate::factor::UPoly::new(self, full);
        if !p.is_separable() {
            return Err(Error::NotSeparable);
        }
        if p.degree() <= 4 {
            if let Some(false) = crate::factor::certify_irreducible(&p)? {
                return Err(Error::NotIrreducible(p.render("V")));
            }
        }
        let ext = Extension {
            name: name.to_string(),
            modulus: modulus.iter().map(|e| e.coeffs[0].clone()).collect(),
        };
        let trace_basis = compute_trace_basis(&ext, self.0.base, self.0.vars.len());
        Ok(FieldTower(Arc::new(TowerData {
            base: self.0.base,
            vars: self.0.vars.clone(),
            ext: Some(ext),
            trace_basis,
            theta_partials: OnceLock::new(),
        })))
    }

    pub fn base_field(&self) -> BaseField {
        self.0.base
    }

    pub fn characteristic(&self) -> u64 {
        self.0.base.characteristic()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.0
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn extension(&self) -> Option<&Extension> {
        self.0.ext.as_ref()
    }

    /// `[k : base(t)]`, 1 without an extension.
    pub fn degree(&self) -> usize {
        self.0.ext.as_ref().map_or(1, Extension::degree)
    }

    /// The tower with the extension dropped.
    pub fn base_tower(&self) -> FieldTower {
        if self.0.ext.is_none() {
            return self.clone();
        }
        FieldTower::new(self.0.base, &self.0.vars).unwrap()
    }

    /// Same base with extra transcendentals appended.
    pub fn with_vars<S: AsRef<str>>(&self, extra: &[S]) -> Result<FieldTower> {
        if self.0.ext.is_some() {
            return Err(Error::InvalidTower("cannot add transcendentals below an extension".into()));
        }
        let mut vars = self.0.vars.clone();
        vars.extend(extra.iter().map(|s| s.as_ref().to_string()));
        FieldTower::new(self.0.base, &vars)
    }

    fn rf(&self, r: RatFn) -> Elem {
        let mut coeffs = vec![r];
        let z = RatFn::zero(self.0.base, self.nvars());
        coeffs.resize(self.degree(), z);
        Elem {
            tower: self.clone(),
            coeffs,
        }
    }

    pub fn zero(&self) -> Elem {
        self.rf(RatFn::zero(self.0.base, self.nvars()))
    }

    pub fn one(&self) -> Elem {
        self.rf(RatFn::one(self.0.base, self.nvars()))
    }

    pub fn int(&self, v: i64) -> Elem {
        self.rf(RatFn::from_poly(MPoly::from_i64(self.0.base, self.nvars(), v)))
    }

    pub fn scalar(&self, c: Scalar) -> Elem {
        self.rf(RatFn::constant(self.0.base, self.nvars(), c))
    }

    pub fn rational(&self, n: i64, d: i64) -> Result<Elem> {
        let dd = self.int(d);
        if dd.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.int(n) / &dd)
    }

    pub fn var(&self, i: usize) -> Elem {
        self.rf(RatFn::from_poly(MPoly::var(self.0.base, self.nvars(), i)))
    }

    pub fn var_named(&self, name: &str) -> Result<Elem> {
        Ok(self.var(self.var_index(name)?))
    }

    pub fn from_ratfn(&self, r: RatFn) -> Elem {
        assert_eq!(r.nvars(), self.nvars());
        self.rf(r)
    }

    pub fn from_poly(&self, p: MPoly) -> Elem {
        self.rf(RatFn::from_poly(p))
    }

    /// The generator θ of the extension.
    pub fn theta(&self) -> Result<Elem> {
        let n = self.0.ext.as_ref().ok_or(Error::NoExtension)?.degree();
        let mut e = self.zero();
        if n == 1 {
            e.coeffs[0] = self.0.ext.as_ref().unwrap().modulus[0].neg();
        } else {
            e.coeffs[1] = RatFn::one(self.0.base, self.nvars());
        }
        Ok(e)
    }

    /// Builds `Σ coeffs[j] θ^j` from base-tower elements.
    pub fn from_base_coeffs(&self, coeffs: &[Elem]) -> Result<Elem> {
        let base = self.base_tower();
        let mut acc = self.zero();
        let mut pw = self.one();
        let theta = if self.0.ext.is_some() { Some(self.theta()?) } else { None };
        for c in coeffs {
            if c.tower() != &base {
                return Err(Error::TowerMismatch);
            }
            acc = &acc + &(&self.embed(c)? * &pw);
            if let Some(t) = &theta {
                pw = &pw * t;
            }
        }
        Ok(acc)
    }

    /// Evaluates a polynomial over the base prime field with variable `i`
    /// replaced by `images[i]`.
    pub fn eval_poly(&self, p: &MPoly, images: &[Elem]) -> Elem {
        assert_eq!(p.nvars(), images.len());
        let mut powers: Vec<Vec<Elem>> = images.iter().map(|x| vec![self.one(), x.clone()]).collect();
        let mut acc = self.zero();
        for (m, c) in p.terms() {
            let mut term = self.scalar(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &pw[1];
                    pw.push(next);
                }
                term = &term * &pw[e as usize];
            }
            acc = &acc + &term;
        }
        acc
    }

    pub fn eval_ratfn(&self, r: &RatFn, images: &[Elem]) -> Result<Elem> {
        let den = self.eval_poly(r.den(), images);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.eval_poly(r.num(), images) / &den)
    }

    /// Embeds an element of the base tower.
    pub fn embed(&self, x: &Elem) -> Result<Elem> {
        if x.tower() == self {
            return Ok(x.clone());
        }
        if x.tower().extension().is_some() || x.tower() != &self.base_tower() {
            return Err(Error::TowerMismatch);
        }
        Ok(self.rf(x.coeffs[0].clone()))
    }

    fn theta_partials(&self) -> &Vec<Vec<RatFn>> {
        self.0.theta_partials.get_or_init(|| {
            let ext = self.0.ext.as_ref().expect("extension");
            let n = ext.degree();
            let theta = self.theta().unwrap();
            // P'(θ)
            let mut dp = self.int(n as i64) * pow_elem(&theta, n - 1);
            for (j, a) in ext.modulus.iter().enumerate().skip(1) {
                dp = &dp + &(&self.rf(a.scale(&Scalar::from_integer(BigInt::from(j as i64))))
                    * &pow_elem(&theta, j - 1));
            }
            let dp_inv = dp.inv().expect("separable minimal polynomial");
            (0..self.nvars())
                .map(|i| {
                    let coeffs: Vec<RatFn> = ext.modulus.iter().map(|a| a.partial(i)).collect();
                    let dpi = Elem {
                        tower: self.clone(),
                        coeffs,
                    };
                    (-(&dpi * &dp_inv)).coeffs
                })
                .collect()
        })
    }

    /// `dθ/dt_i` by implicit differentiation of `P(θ) = 0`.
    pub fn theta_partial(&self, i: usize) -> Result<Elem> {
        if self.0.ext.is_none() {
            return Err(Error::NoExtension);
        }
        Ok(Elem {
            tower: self.clone(),
            coeffs: self.theta_partials()[i].clone(),
        })
    }

    /// Matrix of multiplication by `x` in the basis `1, θ, …, θ^{N-1}`;
    /// column `i` holds the coordinates of `x·θ^i`.
    pub fn multiplication_matrix(&self, x: &Elem) -> Vec<Vec<RatFn>> {
        let n = self.degree();
        let theta = self.theta().ok();
        let mut cols = Vec::with_capacity(n);
        let mut cur = x.clone();
        for _ in 0..n {
            cols.push(cur.coeffs.clone());
            if let Some(t) = &theta {
                cur = &cur * t;
            }
        }
        (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect()
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn pow_elem(x: &Elem, e: usize) -> Elem {
    let mut r = x.tower.one();
    for _ in 0..e {
        r = &r * x;
    }
    r
}

/// `Tr(θ^j)` for `j < N`, as traces of multiplication matrices.
fn compute_trace_basis(ext: &Extension, base: BaseField, nvars: usize) -> Vec<RatFn> {
    let n = ext.degree();
    let zero = RatFn::zero(base, nvars);
    // powers θ^0 .. θ^{2N-2} reduced mod P
    let mut powers: Vec<Vec<RatFn>> = Vec::with_capacity(2 * n);
    let mut cur = vec![zero.clone(); n];
    cur[0] = RatFn::one(base, nvars);
    for _ in 0..(2 * n).saturating_sub(1) {
        powers.push(cur.clone());
        // multiply by θ
        let top = cur[n - 1].clone();
        let mut next = vec![zero.clone(); n];
        for i in (1..n).rev() {
            next[i] = cur[i - 1].clone();
        }
        for i in 0..n {
            next[i] = next[i].sub(&top.mul(&ext.modulus[i]));
        }
        cur = next;
    }
    (0..n)
        .map(|j| {
            (0..n).fold(zero.clone(), |acc, i| acc.add(&powers[i + j][i]))
        })
        .collect()
}

/// An element of a [`FieldTower`]: coordinates in the basis `1, θ, …, θ^{N-1}`
/// over the rational function field, each in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elem {
    tower: FieldTower,
    coeffs: Vec<RatFn>,
}

impl std::hash::Hash for Elem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked field arithmetic.
pub fn arith(x: &Elem, y: &Elem, op: ArithOp) -> Result<Elem> {
    if x.tower != y.tower {
        return Err(Error::TowerMismatch);
    }
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.try_div(y)?,
    })
}

impl Elem {
    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn coeffs(&self) -> &[RatFn] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFn::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(RatFn::is_zero)
    }

    /// True when the element lies in the base rational function field.
    pub fn in_base(&self) -> bool {
        self.coeffs[1..].iter().all(RatFn::is_zero)
    }

    /// The underlying rational function when the element lies in the base field.
    pub fn as_ratfn(&self) -> Option<&RatFn> {
        self.in_base().then(|| &self.coeffs[0])
    }

    /// A base-field scalar when the element is constant.
    pub fn as_scalar(&self) -> Option<Scalar> {
        let r = self.as_ratfn()?;
        r.is_constant().then(|| r.num().constant_value())
    }

    fn map(&self, f: impl Fn(&RatFn) -> RatFn) -> Elem {
        Elem {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Elem, f: impl Fn(&RatFn, &RatFn) -> RatFn) -> Elem {
        assert!(self.tower == other.tower, "tower mismatch");
        Elem {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn mul_impl(&self, other: &Elem) -> Elem {
        assert!(self.tower == other.tower, "tower mismatch");
        let n = self.coeffs.len();
        if n == 1 {
            return Elem {
                tower: self.tower.clone(),
                coeffs: vec![self.coeffs[0].mul(&other.coeffs[0])],
            };
        }
        let ext = self.tower.extension().unwrap();
        let base = self.tower.base_field();
        let nv = self.tower.nvars();
        let mut prod = vec![RatFn::zero(base, nv); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] = prod[i + j].add(&a.mul(b));
            }
        }
        reduce_mod(&mut prod, &ext.modulus);
        prod.truncate(n);
        Elem {
            tower: self.tower.clone(),
            coeffs: prod,
        }
    }

    pub fn inv(&self) -> Result<Elem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(Elem {
                tower: self.tower.clone(),
                coeffs: vec![self.coeffs[0].inv().unwrap()],
            });
        }
        let ext = self.tower.extension().unwrap();
        let base = self.tower.base_field();
        let nv = self.tower.nvars();
        let mut modulus = ext.modulus.clone();
        modulus.push(RatFn::one(base, nv));
        let s = kpoly_inverse(&self.coeffs, &modulus, base, nv);
        let mut coeffs = s;
        coeffs.resize(ext.degree(), RatFn::zero(base, nv));
        Ok(Elem {
            tower: self.tower.clone(),
            coeffs,
        })
    }

    pub fn try_div(&self, other: &Elem) -> Result<Elem> {
        if self.tower != other.tower {
            return Err(Error::TowerMismatch);
        }
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Elem> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut r = self.tower.one();
        let mut b = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(r)
    }

    /// Formal partial derivative with respect to the `i`-th transcendental.
    pub fn partial(&self, i: usize) -> Elem {
        let direct = self.map(|c| c.partial(i));
        if self.coeffs.len() == 1 {
            return direct;
        }
        // Σ j x_j θ^{j-1}
        let base = self.tower.base_field();
        let nv = self.tower.nvars();
        let mut dtheta = vec![RatFn::zero(base, nv); self.coeffs.len()];
        for j in 1..self.coeffs.len() {
            dtheta[j - 1] = self.coeffs[j].scale(&Scalar::from_integer(BigInt::from(j as i64)));
        }
        let dx_dtheta = Elem {
            tower: self.tower.clone(),
            coeffs: dtheta,
        };
        if dx_dtheta.is_zero() {
            return direct;
        }
        &direct + &(&dx_dtheta * &self.tower.theta_partial(i).unwrap())
    }

    pub fn partial_named(&self, name: &str) -> Result<Elem> {
        Ok(self.partial(self.tower.var_index(name)?))
    }

    /// Trace of multiplication by `self` on `k'` as a vector space over the base field.
    pub fn trace(&self) -> Result<Elem> {
        let data = &self.tower.0;
        if data.ext.is_none() {
            return Err(Error::NoExtension);
        }
        let mut acc = RatFn::zero(data.base, data.vars.len());
        for (c, t) in self.coeffs.iter().zip(&data.trace_basis) {
            if !c.is_zero() {
                acc = acc.add(&c.mul(t));
            }
        }
        Ok(self.tower.base_tower().from_ratfn(acc))
    }

    /// Canonical text form, re-parseable by [`crate::parse`].
    pub fn render(&self) -> String {
        let names = self.tower.vars();
        let Some(ext) = self.tower.extension() else {
            return self.coeffs[0].render(names);
        };
        if self.is_zero() {
            return "0".into();
        }
        let mut pieces = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let pw = match j {
                0 => String::new(),
                1 => ext.name.clone(),
                _ => format!("{}^{}", ext.name, j),
            };
            pieces.push(coeff_times(&c.render(names), c.is_one(), c.neg().is_one(), &pw));
        }
        join_terms(&pieces)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.base {
            BaseField::Rationals => write!(f, "Q")?,
            BaseField::Prime(p) => write!(f, "F{p}")?,
        }
        if !self.0.vars.is_empty() {
            write!(f, "({})", self.0.vars.join(","))?;
        }
        if let Some(ext) = &self.0.ext {
            let base = self.base_tower();
            let mut coeffs: Vec<Elem> = ext.modulus.iter().map(|c| base.from_ratfn(c.clone())).collect();
            coeffs.push(base.one());
            let p = crate::factor::UPoly::new(&base, coeffs);
            write!(f, "[{}]/({})", ext.name, p.render(&ext.name))?;
        }
        Ok(())
    }
}

/// Reduces a coefficient vector modulo the monic polynomial with lower coefficients `modulus`.
fn reduce_mod(p: &mut Vec<RatFn>, modulus: &[RatFn]) {
    let n = modulus.len();
    while p.len() > n {
        let top = p.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = p.len() - n;
        for (i, a) in modulus.iter().enumerate() {
            p[shift + i] = p[shift + i].sub(&top.mul(a));
        }
    }
}

fn trim(p: &mut Vec<RatFn>) {
    while p.last().is_some_and(RatFn::is_zero) {
        p.pop();
    }
}

fn kpoly_divrem(a: &[RatFn], b: &[RatFn]) -> (Vec<RatFn>, Vec<RatFn>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lc_inv = b[db].inv().expect("nonzero divisor");
    let zero = RatFn::zero(b[0].base(), b[0].nvars());
    let mut q = vec![zero; r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let c = r.last().unwrap().mul(&lc_inv);
        let shift = r.len() - 1 - db;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&c.mul(bi));
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn kpoly_mul(a: &[RatFn], b: &[RatFn], base: BaseField, nv: usize) -> Vec<RatFn> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![RatFn::zero(base, nv); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(&mut out);
    out
}

fn kpoly_sub(a: &[RatFn], b: &[RatFn], base: BaseField, nv: usize) -> Vec<RatFn> {
    let n = a.len().max(b.len());
    let z = RatFn::zero(base, nv);
    let mut out: Vec<RatFn> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z).sub(b.get(i).unwrap_or(&z)))
        .collect();
    trim(&mut out);
    out
}

/// Inverse of `x` modulo the irreducible `modulus` (full coefficient list) by the
/// extended Euclidean algorithm.
fn kpoly_inverse(x: &[RatFn], modulus: &[RatFn], base: BaseField, nv: usize) -> Vec<RatFn> {
    let mut r0 = modulus.to_vec();
    let mut r1 = x.to_vec();
    trim(&mut r1);
    let mut s0: Vec<RatFn> = Vec::new();
    let mut s1: Vec<RatFn> = vec![RatFn::one(base, nv)];
    while r1.len() > 1 {
        let (q, r) = kpoly_divrem(&r0, &r1);
        let s = kpoly_sub(&s0, &kpoly_mul(&q, &s1, base, nv), base, nv);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let c = r1[0].inv().expect("element invertible modulo irreducible polynomial");
    s1.iter().map(|a| a.mul(&c)).collect()
}

macro_rules! impl_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                let f: fn(&Elem, &Elem) -> Elem = $body;
                f(self, rhs)
            }
        }
        impl $tr<Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                (&self).$method(rhs)
            }
        }
        impl $tr<Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                self.$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, |a, b| a.zip(b, RatFn::add));
impl_binop!(Sub, sub, |a, b| a.zip(b, RatFn::sub));
impl_binop!(Mul, mul, |a, b| a.mul_impl(b));
impl_binop!(Div, div, |a, b| a.try_div(b).expect("division by zero"));

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.map(RatFn::neg)
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

impl Zero for Elem {
    fn zero() -> Self {
        unimplemented!("use FieldTower::zero")
    }
    fn is_zero(&self) -> bool {
        Elem::is_zero(self)
    }
}

impl One for Elem {
    fn one() -> Self {
        unimplemented!("use FieldTower::one")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qt() -> FieldTower {
        FieldTower::rationals(&["t"])
    }

    #[test]
    fn identity_division() {
        let k = qt();
        let t = k.var(0);
        assert!((&t / &t).is_one());
    }

    #[test]
    fn modular_reduction() {
        let f5 = FieldTower::new(BaseField::Prime(5), &[] as &[&str]).unwrap();
        assert_eq!(&f5.int(3) + &f5.int(4), f5.int(2));
    }

    #[test]
    fn checked_arith_errors() {
        let k = qt();
        let other = FieldTower::rationals(&["s"]);
        assert_eq!(arith(&k.one(), &k.zero(), ArithOp::Div), Err(Error::DivisionByZero));
        assert_eq!(arith(&k.one(), &other.one(), ArithOp::Add), Err(Error::TowerMismatch));
    }

    #[test]
    fn sqrt_two_traces() {
        let q = FieldTower::rationals(&[] as &[&str]);
        let k = q.with_extension("th", &[q.int(-2), q.zero()]).unwrap();
        let th = k.theta().unwrap();
        assert!(th.trace().unwrap().is_zero());
        assert_eq!(k.one().trace().unwrap(), q.int(2));
        assert_eq!((&k.int(3) + &th).trace().unwrap(), q.int(6));
        assert_eq!(q.one().trace(), Err(Error::NoExtension));
    }

    #[test]
    fn extension_inverse() {
        let q = FieldTower::rationals(&["t"]);
        let k = q.with_extension("th", &[-q.var(0), q.zero()]).unwrap();
        let th = k.theta().unwrap();
        let x = &(&th + &k.int(1)) * &k.var(0);
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn implicit_derivative_of_square_root() {
        let q = qt();
        let k = q.with_extension("th", &[-q.var(0), q.zero()]).unwrap();
        let th = k.theta().unwrap();
        let expected = (&k.int(2) * &th).inv().unwrap();
        assert_eq!(th.partial(0), expected);
    }

    #[test]
    fn refuses_bad_extensions() {
        let q = FieldTower::rationals(&[] as &[&str]);
        // V^2 - 1 reducible
        assert!(matches!(
            q.with_extension("th", &[q.int(-1), q.zero()]),
            Err(Error::NotIrreducible(_))
        ));
        let f2 = FieldTower::new(BaseField::Prime(2), &["t"]).unwrap();
        // V^2 - t is inseparable in characteristic 2
        assert_eq!(
            f2.with_extension("th", &[-f2.var(0), f2.zero()]).unwrap_err(),
            Error::NotSeparable
        );
        assert!(FieldTower::new(BaseField::Prime(6), &["t"]).is_err());
        assert!(FieldTower::rationals(&["t"]).with_vars(&["t"]).is_err());
    }
}
