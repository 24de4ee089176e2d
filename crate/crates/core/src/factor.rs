//! Univariate polynomials over a [`FieldTower`] and the factorizations needed to
//! locate boundary points of rational curves.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::poly::{invmod, mulmod, powmod, BaseField, Scalar};

/// Dense univariate polynomial, lowest coefficient first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    tower: FieldTower,
    coeffs: Vec<Elem>,
}

impl UPoly {
    pub fn new(tower: &FieldTower, coeffs: Vec<Elem>) -> Self {
        let mut p = UPoly {
            tower: tower.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn zero(tower: &FieldTower) -> Self {
        UPoly::new(tower, Vec::new())
    }

    pub fn constant(c: Elem) -> Self {
        let t = c.tower().clone();
        UPoly::new(&t, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(tower: &FieldTower) -> Self {
        UPoly::new(tower, vec![tower.zero(), tower.one()])
    }

    /// `x - a`.
    pub fn linear(a: &Elem) -> Self {
        let t = a.tower().clone();
        UPoly::new(&t, vec![-a, t.one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Elem::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.tower.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.tower.zero())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().unwrap();
        self.scale(&inv)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn scale(&self, c: &Elem) -> UPoly {
        UPoly::new(&self.tower, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new(&self.tower, (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new(&self.tower, (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(&self.tower);
        }
        let mut out = vec![self.tower.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UPoly::new(&self.tower, out)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut r = UPoly::constant(self.tower.one());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn divrem(&self, other: &UPoly) -> Result<(UPoly, UPoly)> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lc_inv = other.leading().inv()?;
        let db = other.degree();
        let mut r = self.coeffs.clone();
        let mut q = vec![self.tower.zero(); self.coeffs.len().saturating_sub(db).max(1)];
        while r.len() > db && !r.is_empty() {
            let top = r.last().unwrap().clone();
            if top.is_zero() {
                r.pop();
                continue;
            }
            let c = &top * &lc_inv;
            let shift = r.len() - 1 - db;
            for (i, b) in other.coeffs.iter().enumerate() {
                r[shift + i] = &r[shift + i] - &(&c * b);
            }
            q[shift] = c;
            r.pop();
        }
        Ok((UPoly::new(&self.tower, q), UPoly::new(&self.tower, r)))
    }

    pub fn div_exact(&self, other: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(other).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).unwrap().1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            &self.tower,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &self.tower.int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let mut acc = x.tower().zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &x.tower().embed(c).expect("embeddable coefficient");
        }
        acc
    }

    pub fn is_separable(&self) -> bool {
        self.degree() >= 1 && self.gcd(&self.derivative()).degree() == 0
    }

    /// Text form in the variable `name`, highest power first.
    pub fn render(&self, name: &str) -> String {
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
                1 => name.to_string(),
                _ => format!("{name}^{j}"),
            };
            pieces.push(coeff_times(&c.render(), c.is_one(), (-c).is_one(), &pw));
        }
        join_terms(&pieces)
    }
}

/// `c*pw` with the conventions shared by all renderers.
pub(crate) fn coeff_times(c: &str, is_one: bool, is_minus_one: bool, pw: &str) -> String {
    if pw.is_empty() {
        return c.to_string();
    }
    if is_one {
        return pw.to_string();
    }
    if is_minus_one {
        return format!("-{pw}");
    }
    if c.contains(' ') || c.contains('/') {
        format!("({c})*{pw}")
    } else {
        format!("{c}*{pw}")
    }
}

pub(crate) fn join_terms(pieces: &[String]) -> String {
    let mut out = String::new();
    for (i, p) in pieces.iter().enumerate() {
        if i == 0 {
            out.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

/// Monic irreducible factors with multiplicities, sorted by degree.
pub type Factorization = Vec<(UPoly, u32)>;

/// Factors `p` over its tower.
///
/// Complete over ℚ up to degree 4 (after removing rational roots) and over 𝔽_p.
/// Over rational function fields only square-free parts of degree ≤ 2 or
/// irreducibility certified by specialization are handled; anything else is
/// [`Error::UnsupportedDegree`]. Towers with an algebraic extension only split
/// linear parts.
pub fn factor(p: &UPoly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::DegenerateData("factor of zero polynomial".into()));
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let tower = p.tower();
    let mut out: Factorization = Vec::new();
    if tower.extension().is_none() && tower.nvars() == 0 {
        if let BaseField::Prime(q) = tower.base_field() {
            for (f, m) in factor_fp(&to_fp(p, q), q) {
                out.push((from_fp(tower, &f), m));
            }
            sort_factors(&mut out);
            return Ok(out);
        }
    }
    for (part, mult) in squarefree(p)? {
        for f in factor_squarefree(&part)? {
            out.push((f, mult));
        }
    }
    sort_factors(&mut out);
    Ok(out)
}

fn sort_factors(f: &mut Factorization) {
    f.sort_by(|a, b| {
        (a.0.degree(), a.1)
            .cmp(&(b.0.degree(), b.1))
            .then_with(|| a.0.render("x").cmp(&b.0.render("x")))
    });
}

/// Square-free decomposition (Yun), verified by recombination.
pub fn squarefree(p: &UPoly) -> Result<Vec<(UPoly, u32)>> {
    let f = p.monic();
    let df = f.derivative();
    if df.is_zero() {
        return Err(Error::UnsupportedDegree(f.degree()));
    }
    let mut out = Vec::new();
    let mut a = f.gcd(&df);
    let mut b = f.div_exact(&a).unwrap();
    let mut c = df.div_exact(&a).unwrap();
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree() > 0 {
        a = b.gcd(&d);
        if a.degree() > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).unwrap();
        c = d.div_exact(&a).unwrap();
        d = c.sub(&b.derivative());
        i += 1;
    }
    let mut check = UPoly::constant(f.tower().one());
    for (g, m) in &out {
        check = check.mul(&g.pow(*m));
    }
    if check != f {
        return Err(Error::UnsupportedDegree(f.degree()));
    }
    Ok(out)
}

fn factor_squarefree(p: &UPoly) -> Result<Vec<UPoly>> {
    let p = p.monic();
    if p.degree() == 1 {
        return Ok(vec![p]);
    }
    let tower = p.tower().clone();
    if tower.extension().is_some() {
        return Err(Error::UnsupportedDegree(p.degree()));
    }
    if p.degree() == 2 && tower.characteristic() != 2 {
        return Ok(split_quadratic(&p).unwrap_or_else(|| vec![p.clone()]));
    }
    if tower.nvars() == 0 {
        return factor_rational_squarefree(&p);
    }
    if specialization_certificate(&p)? {
        return Ok(vec![p]);
    }
    Err(Error::UnsupportedDegree(p.degree()))
}

/// Roots of a monic quadratic over a pure tower of odd characteristic, when rational.
fn split_quadratic(p: &UPoly) -> Option<Vec<UPoly>> {
    let tower = p.tower();
    let b = p.coeff(1);
    let c = p.coeff(0);
    let disc = &(&b * &b) - &(&tower.int(4) * &c);
    let r = disc.as_ratfn()?;
    let sn = r.num().sqrt()?;
    let sd = r.den().sqrt()?;
    let s = tower.from_poly(sn) / tower.from_poly(sd);
    let two_inv = tower.int(2).inv().ok()?;
    let r1 = &(&(-&b) + &s) * &two_inv;
    let r2 = &(&(-&b) - &s) * &two_inv;
    Some(vec![UPoly::linear(&r1), UPoly::linear(&r2)])
}

/// Tries to prove irreducibility over a rational function field by mapping the
/// transcendentals to base-field values that keep the degree and separability and
/// leave an irreducible polynomial.
fn specialization_certificate(p: &UPoly) -> Result<bool> {
    let tower = p.tower();
    let base = tower.base_field();
    let target = FieldTower::new(base, &[] as &[&str])?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    'attempt: for attempt in 0..24 {
        let bound = 3 + attempt as i64;
        let vals: Vec<Scalar> = (0..tower.nvars())
            .map(|_| base.from_i64(rng.gen_range(-bound..=bound)))
            .collect();
        let mut coeffs = Vec::new();
        for c in p.coeffs() {
            let r = c.as_ratfn().expect("pure tower");
            let d = r.den().eval_scalars(&vals);
            if d.is_zero() {
                continue 'attempt;
            }
            coeffs.push(target.scalar(base.div(&r.num().eval_scalars(&vals), &d)));
        }
        let q = UPoly::new(&target, coeffs);
        if q.degree() != p.degree() || !q.is_separable() {
            continue;
        }
        match certify_irreducible(&q) {
            Ok(Some(true)) => return Ok(true),
            Ok(_) | Err(Error::UnsupportedDegree(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(false)
}

/// `Some(true)` when `p` is provably irreducible, `Some(false)` when a proper factor
/// exists, `None` when undecided.
pub fn certify_irreducible(p: &UPoly) -> Result<Option<bool>> {
    if p.degree() == 0 {
        return Ok(Some(false));
    }
    if p.degree() == 1 {
        return Ok(Some(true));
    }
    let tower = p.tower();
    if tower.extension().is_some() {
        return Ok(None);
    }
    if tower.nvars() == 0 {
        return match factor(p) {
            Ok(f) => Ok(Some(f.len() == 1 && f[0].1 == 1)),
            Err(Error::UnsupportedDegree(_)) => Ok(None),
            Err(e) => Err(e),
        };
    }
    if !p.is_separable() {
        return Ok(Some(false));
    }
    if p.degree() == 2 && tower.characteristic() != 2 {
        return Ok(Some(split_quadratic(&p.monic()).is_none()));
    }
    if specialization_certificate(p)? {
        return Ok(Some(true));
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// ℚ

fn factor_rational_squarefree(p: &UPoly) -> Result<Vec<UPoly>> {
    let tower = p.tower().clone();
    let mut rest = p.monic();
    let mut out = Vec::new();
    for r in rational_roots(&rest)? {
        let lin = UPoly::linear(&tower.scalar(r));
        rest = rest.div_exact(&lin).expect("root divides");
        out.push(lin);
    }
    match rest.degree() {
        0 => {}
        1..=3 => out.push(rest),
        4 => match quartic_quadratic_split(&rest)? {
            Some((a, b)) => {
                out.push(a);
                out.push(b);
            }
            None => out.push(rest),
        },
        d => return Err(Error::UnsupportedDegree(d)),
    }
    Ok(out)
}

const DIVISOR_CAP: usize = 20_000;

/// Integer coefficients of a positive multiple of `p` (ℚ coefficients), lowest first.
fn integer_coeffs(p: &UPoly) -> Vec<BigInt> {
    let sc: Vec<Scalar> = p.coeffs().iter().map(|c| c.as_scalar().unwrap()).collect();
    let l = sc.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    sc.iter().map(|c| (c * Scalar::from_integer(l.clone())).to_integer()).collect()
}

fn small_factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000u32);
    while &d * &d <= n {
        if d > limit {
            return Err(Error::UnsupportedDegree(0));
        }
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    Ok(out)
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut ds = vec![BigInt::one()];
    for (p, e) in small_factor(n)? {
        let mut next = Vec::new();
        for d in &ds {
            let mut pw = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pw);
                pw *= &p;
            }
        }
        ds = next;
        if ds.len() > DIVISOR_CAP {
            return Err(Error::UnsupportedDegree(0));
        }
    }
    ds.sort();
    Ok(ds)
}

fn rational_roots(p: &UPoly) -> Result<Vec<Scalar>> {
    let tower = p.tower();
    let mut roots = Vec::new();
    let mut f = p.clone();
    if f.coeff(0).is_zero() {
        roots.push(Scalar::zero());
        f = f.div_exact(&UPoly::x(tower)).unwrap();
    }
    if f.degree() == 0 {
        return Ok(roots);
    }
    let ic = integer_coeffs(&f);
    let deg = p.degree();
    let nums = divisors(&ic[0]).map_err(|_| Error::UnsupportedDegree(deg))?;
    let dens = divisors(ic.last().unwrap()).map_err(|_| Error::UnsupportedDegree(deg))?;
    if nums.len() * dens.len() > 4 * DIVISOR_CAP {
        return Err(Error::UnsupportedDegree(deg));
    }
    let mut cands: Vec<Scalar> = Vec::new();
    for a in &nums {
        for b in &dens {
            for s in [1, -1] {
                let r = Scalar::new(a * s, b.clone());
                if !cands.contains(&r) {
                    cands.push(r);
                }
            }
        }
    }
    for r in cands {
        if f.degree() == 0 {
            break;
        }
        if int_eval(&ic, &r).is_zero() {
            roots.push(r);
        }
    }
    Ok(roots)
}

fn int_eval(ic: &[BigInt], r: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in ic.iter().rev() {
        acc = acc * r + Scalar::from_integer(c.clone());
    }
    acc
}

/// Splits a monic rational quartic without rational roots into two quadratics.
fn quartic_quadratic_split(p: &UPoly) -> Result<Option<(UPoly, UPoly)>> {
    let tower = p.tower();
    let sc: Vec<Scalar> = p.coeffs().iter().map(|c| c.as_scalar().unwrap()).collect();
    let dl = sc.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    // y = D x gives an integral monic quartic.
    let d = Scalar::from_integer(dl.clone());
    let a: Vec<BigInt> = (0..4)
        .map(|i| (&sc[i] * num_traits::pow(d.clone(), 4 - i)).to_integer())
        .collect();
    let (a0, a1, a2, a3) = (&a[0], &a[1], &a[2], &a[3]);
    let ds = divisors(a0).map_err(|_| Error::UnsupportedDegree(4))?;
    let mut cands: Vec<BigInt> = Vec::new();
    for x in ds {
        cands.push(-x.clone());
        cands.push(x);
    }
    for c1 in &cands {
        let c2 = a0 / c1;
        let mut bs: Vec<(BigInt, BigInt)> = Vec::new();
        if c1 != &c2 {
            // b1 (c2 - c1) = a1 - a3 c1
            let num = a1 - a3 * c1;
            let den = &c2 - c1;
            if (&num % &den).is_zero() {
                let b1 = num / den;
                bs.push((b1.clone(), a3 - b1));
            }
        } else {
            // b1 + b2 = a3, b1 b2 = a2 - 2 c1
            let prod = a2 - BigInt::from(2) * c1;
            let disc = a3 * a3 - BigInt::from(4) * &prod;
            if !disc.is_negative() {
                let s = disc.sqrt();
                if &s * &s == disc && ((a3 + &s) % BigInt::from(2)).is_zero() {
                    let b1 = (a3 + &s) / BigInt::from(2);
                    bs.push((b1.clone(), a3 - b1));
                }
            }
        }
        for (b1, b2) in bs {
            if c1 + &c2 + &b1 * &b2 == *a2 && &b1 * &c2 + &b2 * c1 == *a1 {
                // back to x: x^2 + (b/D) x + c/D^2
                let mk = |b: &BigInt, c: &BigInt| {
                    UPoly::new(
                        tower,
                        vec![
                            tower.scalar(Scalar::new(c.clone(), &dl * &dl)),
                            tower.scalar(Scalar::new(b.clone(), dl.clone())),
                            tower.one(),
                        ],
                    )
                };
                let f = mk(&b1, c1);
                let g = mk(&b2, &c2);
                debug_assert_eq!(f.mul(&g), *p);
                return Ok(Some((f, g)));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// 𝔽_p

type Fp = Vec<u64>;

fn to_fp(p: &UPoly, q: u64) -> Fp {
    p.coeffs()
        .iter()
        .map(|c| c.as_scalar().unwrap().to_integer().mod_floor(&BigInt::from(q)).to_u64().unwrap())
        .collect()
}

fn from_fp(tower: &FieldTower, f: &Fp) -> UPoly {
    UPoly::new(tower, f.iter().map(|&c| tower.int(c as i64)).collect())
}

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_sub(a: &Fp, b: &Fp, q: u64) -> Fp {
    let n = a.len().max(b.len());
    fp_trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + q - b.get(i).copied().unwrap_or(0)) % q)
            .collect(),
    )
}

fn fp_mul(a: &Fp, b: &Fp, q: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, q)) % q;
        }
    }
    fp_trim(out)
}

fn fp_divrem(a: &Fp, b: &Fp, q: u64) -> (Fp, Fp) {
    let mut r = fp_trim(a.clone());
    let db = b.len() - 1;
    let inv = invmod(b[db], q);
    let mut quo = vec![0u64; r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let c = mulmod(*r.last().unwrap(), inv, q);
        let shift = r.len() - 1 - db;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + q - mulmod(c, bi, q)) % q;
        }
        quo[shift] = c;
        r.pop();
        r = fp_trim(r);
    }
    (fp_trim(quo), r)
}

fn fp_monic(a: &Fp, q: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = invmod(l, q);
            a.iter().map(|&c| mulmod(c, inv, q)).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, q: u64) -> Fp {
    let mut a = fp_trim(a.clone());
    let mut b = fp_trim(b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, q).1;
        a = b;
        b = r;
    }
    fp_monic(&a, q)
}

fn fp_deriv(a: &Fp, q: u64) -> Fp {
    fp_trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % q, q))
            .collect(),
    )
}

fn fp_powmod(base: &Fp, e: &BigUint, m: &Fp, q: u64) -> Fp {
    let mut r: Fp = vec![1];
    let b = fp_divrem(base, m, q).1;
    for i in (0..e.bits()).rev() {
        r = fp_divrem(&fp_mul(&r, &r, q), m, q).1;
        if e.bit(i) {
            r = fp_divrem(&fp_mul(&r, &b, q), m, q).1;
        }
    }
    r
}

/// Full factorization over 𝔽_q of a nonconstant polynomial.
fn factor_fp(f: &Fp, q: u64) -> Vec<(Fp, u32)> {
    let f = fp_monic(f, q);
    let mut out = Vec::new();
    for (g, m) in fp_squarefree(&f, q) {
        for (d, h) in fp_ddf(&g, q) {
            for irr in fp_edf(&h, d, q) {
                out.push((irr, m));
            }
        }
    }
    out
}

fn fp_squarefree(f: &Fp, q: u64) -> Vec<(Fp, u32)> {
    let mut out = Vec::new();
    let df = fp_deriv(f, q);
    if df.is_empty() {
        // f = g(x^q)
        let g: Fp = f.iter().step_by(q as usize).map(|&c| powmod(c, 1, q)).collect();
        for (h, m) in fp_squarefree(&g, q) {
            out.push((h, m * q as u32));
        }
        return out;
    }
    let mut c = fp_gcd(f, &df, q);
    let mut w = fp_divrem(f, &c, q).0;
    let mut i = 1;
    while w.len() > 1 {
        let y = fp_gcd(&w, &c, q);
        let fac = fp_divrem(&w, &y, q).0;
        if fac.len() > 1 {
            out.push((fac, i));
        }
        w = y;
        c = fp_divrem(&c, &w, q).0;
        i += 1;
    }
    if c.len() > 1 {
        let g: Fp = c.iter().step_by(q as usize).copied().collect();
        for (h, m) in fp_squarefree(&g, q) {
            out.push((h, m * q as u32));
        }
    }
    out
}

fn fp_ddf(f: &Fp, q: u64) -> Vec<(usize, Fp)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    let qe = BigUint::from(q);
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            out.push((f.len() - 1, f.clone()));
            break;
        }
        h = fp_powmod(&h, &qe, &f, q);
        let g = fp_gcd(&fp_sub(&h, &x, q), &f, q);
        if g.len() > 1 {
            out.push((d, g.clone()));
            f = fp_divrem(&f, &g, q).0;
            h = fp_divrem(&h, &f, q).1;
        }
    }
    out
}

fn fp_edf(f: &Fp, d: usize, q: u64) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(q ^ (n as u64) << 20);
    loop {
        let a: Fp = fp_trim((0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.len() <= 1 {
            continue;
        }
        let b = if q == 2 {
            // trace map a + a^2 + … + a^{2^{d-1}}
            let mut acc = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = fp_divrem(&fp_mul(&cur, &cur, q), f, q).1;
                acc = fp_sub(&acc, &fp_sub(&vec![], &cur, q), q);
            }
            acc
        } else {
            let e = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
            fp_sub(&fp_powmod(&a, &e, f, q), &vec![1], q)
        };
        let g = fp_gcd(&b, f, q);
        if g.len() > 1 && g.len() < f.len() {
            let h = fp_divrem(f, &g, q).0;
            let mut out = fp_edf(&g, d, q);
            out.extend(fp_edf(&fp_monic(&h, q), d, q));
            return out;
        }
    }
}

/// The minimal polynomial of `x` over the base rational function field, found
/// from the first linear dependence among `1, x, x^2, …`.
pub fn minimal_polynomial(x: &Elem) -> UPoly {
    let tower = x.tower();
    let base = tower.base_tower();
    let n = tower.degree();
    let to_base = |e: &Elem| -> Vec<Elem> {
        e.coeffs().iter().map(|c| base.from_ratfn(c.clone())).collect()
    };
    // rows: reduced vectors with pivot columns and the combination producing them
    let mut rows: Vec<(Vec<Elem>, Vec<Elem>, usize)> = Vec::new();
    let mut pw = tower.one();
    for k in 0..=n {
        let mut v = to_base(&pw);
        let mut comb = vec![base.zero(); n + 1];
        comb[k] = base.one();
        for (rv, rc, piv) in &rows {
            let f = v[*piv].clone();
            if f.is_zero() {
                continue;
            }
            for i in 0..n {
                v[i] = &v[i] - &(&f * &rv[i]);
            }
            for i in 0..=n {
                comb[i] = &comb[i] - &(&f * &rc[i]);
            }
        }
        match v.iter().position(|e| !e.is_zero()) {
            None => {
                let poly = UPoly::new(&base, comb);
                return poly.monic();
            }
            Some(piv) => {
                let inv = v[piv].inv().unwrap();
                let v: Vec<Elem> = v.iter().map(|e| e * &inv).collect();
                let comb: Vec<Elem> = comb.iter().map(|e| e * &inv).collect();
                rows.push((v, comb, piv));
            }
        }
        pw = &pw * x;
    }
    unreachable!("powers beyond the degree are dependent")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldTower {
        FieldTower::rationals(&[] as &[&str])
    }

    fn poly(t: &FieldTower, c: &[i64]) -> UPoly {
        UPoly::new(t, c.iter().map(|&v| t.int(v)).collect())
    }

    #[test]
    fn rational_roots_split() {
        let k = q();
        // (x-1)(2x+3)(x^2+1)
        let p = poly(&k, &[1, -1, 0, 0, 0])
            .add(&poly(&k, &[-3, 1, -1, 1, 2]))
            .sub(&poly(&k, &[1, -1, 0, 0, 0]));
        let f = factor(&p).unwrap();
        let degs: Vec<usize> = f.iter().map(|(g, _)| g.degree()).collect();
        assert_eq!(degs, vec![1, 1, 2]);
    }

    #[test]
    fn quartic_pairs() {
        let k = q();
        // (x^2+1)(x^2-2)
        let p = poly(&k, &[-2, 0, -1, 0, 1]);
        let f = factor(&p).unwrap();
        assert_eq!(f.len(), 2);
        // x^4 + 1 is irreducible over Q
        assert_eq!(factor(&poly(&k, &[1, 0, 0, 0, 1])).unwrap().len(), 1);
    }

    #[test]
    fn repeated_factors() {
        let k = q();
        let p = poly(&k, &[-1, 1]).pow(3).mul(&poly(&k, &[1, 0, 1]));
        let f = factor(&p).unwrap();
        assert_eq!(f.iter().map(|x| x.1).collect::<Vec<_>>(), vec![3, 1]);
    }

    #[test]
    fn finite_field_factors() {
        let f5 = FieldTower::new(BaseField::Prime(5), &[] as &[&str]).unwrap();
        // x^4 + 1 over F5 splits into two quadratics
        let f = factor(&poly(&f5, &[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.iter().map(|x| x.0.degree()).collect::<Vec<_>>(), vec![2, 2]);
        let f2 = FieldTower::new(BaseField::Prime(2), &[] as &[&str]).unwrap();
        // x^2 + x + 1 irreducible over F2, x^4 + x = x (x+1)(x^2+x+1)
        assert_eq!(certify_irreducible(&poly(&f2, &[1, 1, 1])).unwrap(), Some(true));
        let f = factor(&poly(&f2, &[0, 1, 0, 0, 1])).unwrap();
        assert_eq!(f.len(), 3);
        // (x+1)^2 = x^2 + 1 over F2
        let f = factor(&poly(&f2, &[1, 0, 1])).unwrap();
        assert_eq!(f, vec![(poly(&f2, &[1, 1]), 2)]);
    }

    #[test]
    fn function_field_quadratic() {
        let k = FieldTower::rationals(&["t"]);
        let t = k.var(0);
        // x^2 - t^2 splits, x^2 - t does not
        let p = UPoly::new(&k, vec![-(&t * &t), k.zero(), k.one()]);
        assert_eq!(factor(&p).unwrap().len(), 2);
        let p = UPoly::new(&k, vec![-t.clone(), k.zero(), k.one()]);
        assert_eq!(certify_irreducible(&p).unwrap(), Some(true));
        // x^3 - t certified by specialization
        let p = UPoly::new(&k, vec![-t, k.zero(), k.zero(), k.one()]);
        assert_eq!(certify_irreducible(&p).unwrap(), Some(true));
    }

    #[test]
    fn minimal_polynomial_of_generator() {
        let base = FieldTower::rationals(&["t"]);
        let k = base.with_extension("th", &[-base.var(0), base.zero()]).unwrap();
        let th = k.theta().unwrap();
        let m = minimal_polynomial(&th);
        assert_eq!(m.render("x"), "x^2 - t");
        let m = minimal_polynomial(&(&th + &k.int(1)));
        assert_eq!(m.coeffs()[1], base.int(-2));
    }
}
