//! Absolute Kähler forms over a [`FieldTower`], stored on the basis of wedge
//! monomials in the differentials of the transcendentals.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::factor::join_terms;
use crate::field::{Elem, FieldTower};
use crate::poly::{BaseField, MPoly, RatFn};

#[derive(Clone, Debug)]
pub struct DifferentialForm {
    tower: FieldTower,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Elem>,
}

/// The zero form is equal to itself in every degree.
impl PartialEq for DifferentialForm {
    fn eq(&self, other: &Self) -> bool {
        self.tower == other.tower
            && self.terms == other.terms
            && (self.degree == other.degree || self.terms.is_empty())
    }
}

impl Eq for DifferentialForm {}

/// Sign of the permutation sorting the concatenation `a ++ b` (both strictly
/// increasing), or `None` when they share an index.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut odd = false;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            // b[j] jumps over the remaining a's
            if (a.len() - i) % 2 == 1 {
                odd = !odd;
            }
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((out, odd))
}

impl DifferentialForm {
    pub fn zero(tower: &FieldTower, degree: usize) -> Self {
        DifferentialForm {
            tower: tower.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A 0-form.
    pub fn function(x: &Elem) -> Self {
        let mut f = Self::zero(x.tower(), 0);
        f.insert(Vec::new(), x.clone());
        f
    }

    /// `c dt_{k_1} ∧ … ∧ dt_{k_p}` for strictly increasing `key`.
    pub fn monomial(c: &Elem, key: Vec<usize>) -> Result<Self> {
        let n = c.tower().nvars();
        if key.windows(2).any(|w| w[0] >= w[1]) || key.iter().any(|&k| k >= n) {
            return Err(Error::DimensionMismatch(format!("bad wedge key {key:?}")));
        }
        let mut f = Self::zero(c.tower(), key.len());
        f.insert(key, c.clone());
        Ok(f)
    }

    fn insert(&mut self, key: Vec<usize>, c: Elem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Elem> {
        &self.terms
    }

    pub fn coeff(&self, key: &[usize]) -> Elem {
        self.terms.get(key).cloned().unwrap_or_else(|| self.tower.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.tower != other.tower {
            return Err(Error::TowerMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!(
                "adding forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| Ok(-c)).unwrap()
    }

    pub fn scale(&self, x: &Elem) -> Self {
        self.map_coeffs(|c| Ok(c * x)).unwrap()
    }

    fn map_coeffs(&self, f: impl Fn(&Elem) -> Result<Elem>) -> Result<Self> {
        let mut out = Self::zero(&self.tower, self.degree);
        for (k, c) in &self.terms {
            out.insert(k.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.tower != other.tower {
            return Err(Error::TowerMismatch);
        }
        let mut out = Self::zero(&self.tower, self.degree + other.degree);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if let Some((key, odd)) = merge_sign(ka, kb) {
                    let c = ca * cb;
                    out.insert(key, if odd { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `d x = Σ ∂x/∂t_i dt_i`.
    pub fn d(x: &Elem) -> Self {
        let mut out = Self::zero(x.tower(), 1);
        for i in 0..x.tower().nvars() {
            out.insert(vec![i], x.partial(i));
        }
        out
    }

    /// `dx / x`.
    pub fn dlog(x: &Elem) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let inv = x.inv()?;
        Ok(Self::d(x).scale(&inv))
    }

    /// Exterior derivative.
    pub fn d_form(&self) -> Self {
        let all: Vec<usize> = (0..self.tower.nvars()).collect();
        self.d_form_in(&all)
    }

    /// Exterior derivative using only the listed variables (relative differential).
    pub fn d_form_in(&self, vars: &[usize]) -> Self {
        let mut out = Self::zero(&self.tower, self.degree + 1);
        for (k, c) in &self.terms {
            for &i in vars {
                if k.contains(&i) {
                    continue;
                }
                let dc = c.partial(i);
                if dc.is_zero() {
                    continue;
                }
                let (key, odd) = merge_sign(&[i], k).unwrap();
                out.insert(key, if odd { -dc } else { dc });
            }
        }
        out
    }

    /// Coefficient-wise trace from `k[θ]/(P)` down to `k`.
    pub fn trace_form(&self) -> Result<Self> {
        let base = self.tower.base_tower();
        if self.tower.extension().is_none() {
            return Err(Error::NoExtension);
        }
        let mut out = Self::zero(&base, self.degree);
        for (k, c) in &self.terms {
            out.insert(k.clone(), c.trace()?);
        }
        Ok(out)
    }

    /// Largest `v` such that every coefficient is divisible by `t_var^v`
    /// (`i64::MAX` for the zero form). Only for towers without extension.
    pub fn valuation_in(&self, var: usize) -> i64 {
        self.terms
            .values()
            .map(|c| c.as_ratfn().expect("pure tower").valuation_in(var))
            .min()
            .unwrap_or(i64::MAX)
    }

    /// Multiplies every coefficient by `t_var^e`.
    pub fn mul_var_pow(&self, var: usize, e: i64) -> Self {
        let t = &self.tower;
        self.map_coeffs(|c| Ok(t.from_ratfn(c.as_ratfn().expect("pure tower").mul_var_pow(var, e))))
            .unwrap()
    }

    /// Sets `t_var := 0` in every coefficient and drops `dt_var`. Fails on poles.
    pub fn restrict_zero(&self, var: usize) -> Result<Self> {
        let mut out = Self::zero(&self.tower, self.degree);
        for (k, c) in &self.terms {
            let r = c.as_ratfn().ok_or(Error::NoExtension)?;
            let v = r.at_zero(var).ok_or_else(|| Error::NegativeLimitValuation(format!(
                "coefficient {} has a pole along {} = 0",
                r.render(self.tower.vars()),
                self.tower.vars()[var]
            )))?;
            if k.contains(&var) {
                continue;
            }
            out.insert(k.clone(), self.tower.from_ratfn(v));
        }
        Ok(out)
    }

    /// Splits off `dt_var`: returns `(A, B)` with `self = A + dt_var ∧ B`,
    /// neither involving `dt_var`.
    pub fn split_differential(&self, var: usize) -> (Self, Self) {
        let mut a = Self::zero(&self.tower, self.degree);
        let mut b = Self::zero(&self.tower, self.degree.saturating_sub(1));
        for (k, c) in &self.terms {
            match k.iter().position(|&i| i == var) {
                None => a.insert(k.clone(), c.clone()),
                Some(pos) => {
                    let mut rest = k.clone();
                    rest.remove(pos);
                    b.insert(rest, if pos % 2 == 1 { -c } else { c.clone() });
                }
            }
        }
        (a, b)
    }

    /// Logarithmic residue along `t_var = 0`: writing the form as
    /// `dlog t_var ∧ η + η'` with `η, η'` regular there, returns `η|_{t_var=0}`.
    pub fn residue_along(&self, var: usize) -> Result<Self> {
        if self.tower.extension().is_some() {
            return Err(Error::InvalidTower("residues need a tower without extension".into()));
        }
        if var >= self.tower.nvars() {
            return Err(Error::IndexOutOfRange {
                index: var,
                max: self.tower.nvars().saturating_sub(1),
            });
        }
        if self.degree == 0 {
            if self.valuation_in(var) < 0 {
                return Err(Error::NonLogarithmicPole);
            }
            return Ok(Self::zero(&self.tower, 0));
        }
        let mut out = Self::zero(&self.tower, self.degree - 1);
        for (k, c) in &self.terms {
            let r = c.as_ratfn().unwrap();
            let v = r.valuation_in(var);
            match k.iter().position(|&i| i == var) {
                None => {
                    if v < 0 {
                        return Err(Error::NonLogarithmicPole);
                    }
                }
                Some(pos) => {
                    if v <= -2 {
                        return Err(Error::HigherOrderPole(-v));
                    }
                    let w = r.mul_var_pow(var, 1).at_zero(var).unwrap();
                    let mut rest = k.clone();
                    rest.remove(pos);
                    let e = self.tower.from_ratfn(w);
                    out.insert(rest, if pos % 2 == 1 { -e } else { e });
                }
            }
        }
        Ok(out)
    }

    /// Pull-back along the map sending the `i`-th transcendental of the (pure)
    /// source tower to `images[i]` in `target`.
    pub fn pullback(&self, target: &FieldTower, images: &[Elem]) -> Result<Self> {
        if self.tower.extension().is_some() {
            return Err(Error::InvalidTower("pull-back needs a source tower without extension".into()));
        }
        if images.len() != self.tower.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.tower.nvars()
            )));
        }
        if images.iter().any(|x| x.tower() != target) {
            return Err(Error::TowerMismatch);
        }
        let mut ds: Vec<Option<Self>> = vec![None; images.len()];
        let mut out = Self::zero(target, self.degree);
        for (k, c) in &self.terms {
            let coeff = target.eval_ratfn(c.as_ratfn().unwrap(), images)?;
            let mut acc = Self::function(&coeff);
            for &i in k {
                if ds[i].is_none() {
                    ds[i] = Some(Self::d(&images[i]));
                }
                acc = acc.wedge(ds[i].as_ref().unwrap())?;
                if acc.is_zero() {
                    break;
                }
            }
            if !acc.is_zero() {
                out = out.add(&acc)?;
            }
        }
        Ok(out)
    }

    /// Canonical rendering, e.g. `(1/(t1*t2)) dt1^dt2 + (2) dt1^dt3`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = self.tower.vars();
        if self.degree == 0 {
            return self.terms.values().next().unwrap().render();
        }
        let pieces: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let dk: Vec<String> = k.iter().map(|&i| format!("d{}", names[i])).collect();
                format!("({}) {}", c.render(), dk.join("^"))
            })
            .collect();
        join_terms(&pieces)
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Wedge of a list of 1-forms (the constant 1 for the empty list).
pub fn wedge_all(tower: &FieldTower, forms: &[DifferentialForm]) -> Result<DifferentialForm> {
    let mut acc = DifferentialForm::function(&tower.one());
    for f in forms {
        acc = acc.wedge(f)?;
    }
    Ok(acc)
}

/// `(1/c_0) Σ_{i=1}^{n} (-1)^i dlog c_1 ∧ … ∧ \widehat{dlog c_i} ∧ … ∧ dlog c_n`
/// evaluated at the coordinates `c_0..c_n` (all nonzero).
pub fn gamma_at(coords: &[Elem]) -> Result<DifferentialForm> {
    let tower = coords.first().ok_or_else(|| Error::DimensionMismatch("empty point".into()))?.tower();
    if coords.iter().any(Elem::is_zero) {
        return Err(Error::BadPosition("a coordinate vanishes".into()));
    }
    if tower.extension().is_none() {
        return Ok(gamma_at_pure(tower, coords));
    }
    gamma_at_wedges(tower, coords)
}

fn gamma_at_wedges(tower: &FieldTower, coords: &[Elem]) -> Result<DifferentialForm> {
    let n = coords.len() - 1;
    let logs: Vec<DifferentialForm> = coords[1..]
        .iter()
        .map(DifferentialForm::dlog)
        .collect::<Result<_>>()?;
    // prefix[i] = ω_1 ∧ … ∧ ω_i, suffix[i] = ω_{i+1} ∧ … ∧ ω_n (0-based shifted)
    let mut prefix = vec![DifferentialForm::function(&tower.one())];
    for w in &logs {
        let next = prefix.last().unwrap().wedge(w)?;
        prefix.push(next);
    }
    let mut suffix = vec![DifferentialForm::function(&tower.one()); n + 1];
    for i in (0..n).rev() {
        suffix[i] = logs[i].wedge(&suffix[i + 1])?;
    }
    let mut acc = DifferentialForm::zero(tower, n - 1);
    for i in 1..=n {
        let term = prefix[i - 1].wedge(&suffix[i])?;
        acc = if i % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc.scale(&coords[0].inv()?))
}

type PolyForm = BTreeMap<Vec<usize>, MPoly>;

fn poly_wedge(a: &PolyForm, b: &PolyForm) -> PolyForm {
    let mut out = PolyForm::new();
    for (ka, pa) in a {
        for (kb, pb) in b {
            if let Some((key, odd)) = merge_sign(ka, kb) {
                let c = pa.mul(pb);
                let e = out.entry(key).or_insert_with(|| MPoly::zero(c.base(), c.nvars()));
                *e = if odd { e.sub(&c) } else { e.add(&c) };
            }
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Pairwise coprime nonconstant polynomials whose products give every input
/// up to constants.
fn coprime_basis(polys: &[MPoly]) -> Vec<MPoly> {
    let mut basis: Vec<MPoly> = Vec::new();
    let mut work: Vec<MPoly> = polys.iter().filter(|p| !p.is_constant()).cloned().collect();
    while let Some(p) = work.pop() {
        if p.is_constant() {
            continue;
        }
        let hit = basis.iter().enumerate().find_map(|(i, b)| {
            let g = p.gcd(b);
            (!g.is_constant()).then_some((i, g))
        });
        match hit {
            None => basis.push(p.monic()),
            Some((i, g)) => {
                let b = basis.swap_remove(i);
                work.push(b.div_exact(&g).expect("gcd divides"));
                work.push(p.div_exact(&g).expect("gcd divides"));
                work.push(g);
            }
        }
    }
    basis
}

/// Exponents of `p` on `basis` (`p` must be a product of basis elements up to a constant).
fn exponents(p: &MPoly, basis: &[MPoly]) -> Vec<i64> {
    let mut rest = p.clone();
    basis
        .iter()
        .map(|b| {
            let mut e = 0;
            while let Some(q) = rest.div_exact(b) {
                rest = q;
                e += 1;
            }
            e
        })
        .collect()
}

/// Integer combinations of wedge monomials in formal symbols `ε_k`.
type Ext = BTreeMap<Vec<usize>, i64>;

fn ext_wedge(a: &Ext, b: &Ext) -> Ext {
    let mut out = Ext::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            if let Some((key, odd)) = merge_sign(ka, kb) {
                *out.entry(key).or_insert(0) += if odd { -ca * cb } else { ca * cb };
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Same value as the generic path, for towers without extension. The
/// coordinates are factored over a coprime basis `f_k`, so each `dlog c_j` is an
/// integer combination of the `ε_k = dlog f_k`; the alternating sum is formed
/// in those symbols and only then turned into polynomials over `∏ f_k`.
fn gamma_at_pure(tower: &FieldTower, coords: &[Elem]) -> DifferentialForm {
    let n = coords.len() - 1;
    let nv = tower.nvars();
    let base = tower.base_field();
    let rf: Vec<RatFn> = coords.iter().map(|e| e.as_ratfn().expect("pure tower").clone()).collect();
    let parts: Vec<MPoly> = rf[1..].iter().flat_map(|r| [r.num().clone(), r.den().clone()]).collect();
    let atoms = coprime_basis(&parts);
    let logs: Vec<Ext> = rf[1..]
        .iter()
        .map(|r| {
            let (en, ed) = (exponents(r.num(), &atoms), exponents(r.den(), &atoms));
            en.iter()
                .zip(&ed)
                .enumerate()
                .filter(|(_, (a, b))| a != b)
                .map(|(k, (a, b))| (vec![k], a - b))
                .collect()
        })
        .collect();
    let unit = || Ext::from([(Vec::new(), 1)]);
    let mut prefix = vec![unit()];
    for w in &logs {
        let next = ext_wedge(prefix.last().unwrap(), w);
        prefix.push(next);
    }
    let mut suffix = vec![unit(); n + 1];
    for i in (0..n).rev() {
        suffix[i] = ext_wedge(&logs[i], &suffix[i + 1]);
    }
    let mut sum = Ext::new();
    for i in 1..=n {
        for (k, c) in ext_wedge(&prefix[i - 1], &suffix[i]) {
            *sum.entry(k).or_insert(0) += if i % 2 == 0 { c } else { -c };
        }
    }
    sum.retain(|_, c| *c != 0);
    let used: Vec<usize> = {
        let mut u: Vec<usize> = sum.keys().flatten().copied().collect();
        u.sort_unstable();
        u.dedup();
        u
    };
    let grads: Vec<PolyForm> = atoms
        .iter()
        .map(|f| {
            (0..nv)
                .map(|v| (vec![v], f.derivative(v)))
                .filter(|(_, p)| !p.is_zero())
                .collect()
        })
        .collect();
    let mut acc = PolyForm::new();
    for (key, c) in &sum {
        let mut form = PolyForm::from([(Vec::new(), MPoly::from_i64(base, nv, *c))]);
        for &k in key {
            form = poly_wedge(&form, &grads[k]);
        }
        let others = used
            .iter()
            .filter(|k| !key.contains(k))
            .fold(MPoly::one(base, nv), |a, &k| a.mul(&atoms[k]));
        for (wk, p) in form {
            let e = acc.entry(wk).or_insert_with(|| MPoly::zero(base, nv));
            *e = e.add(&p.mul(&others));
        }
    }
    let mut out = DifferentialForm::zero(tower, n - 1);
    for (wk, mut num) in acc {
        if num.is_zero() {
            continue;
        }
        let mut den = rf[0].num().clone();
        for &k in &used {
            match num.div_exact(&atoms[k]) {
                Some(q) => num = q,
                None => den = den.mul(&atoms[k]),
            }
        }
        out.insert(wk, tower.from_ratfn(RatFn::new(num.mul(rf[0].den()), den)));
    }
    out
}

/// The field `base(v_1..v_n)` carrying [`gamma_form`] and [`nu_form`].
pub fn simplex_tower(base: BaseField, n: usize) -> FieldTower {
    let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    FieldTower::new(base, &names).expect("valid names")
}

/// The generic point `(v_0, v_1, …, v_n)` of `Q^n` with `v_0 = -(v_1 + … + v_n)`.
pub fn generic_point(tower: &FieldTower) -> Vec<Elem> {
    let vs: Vec<Elem> = (0..tower.nvars()).map(|i| tower.var(i)).collect();
    let v0 = vs.iter().fold(tower.zero(), |acc, v| &acc - v);
    std::iter::once(v0).chain(vs).collect()
}

/// `γ_{n-1}` on `Q^n`, written in `dv_1..dv_n`.
pub fn gamma_form(base: BaseField, n: usize) -> DifferentialForm {
    gamma_at(&generic_point(&simplex_tower(base, n))).expect("generic point is in good position")
}

/// `ν_n = dv_1 ∧ … ∧ dv_n / (v_0 v_1 ⋯ v_n)` on `Q^n`.
pub fn nu_form(base: BaseField, n: usize) -> DifferentialForm {
    let tower = simplex_tower(base, n);
    let pt = generic_point(&tower);
    let prod = pt.iter().fold(tower.one(), |acc, v| &acc * v);
    DifferentialForm::monomial(&prod.inv().unwrap(), (0..n).collect()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qt(names: &[&str]) -> FieldTower {
        FieldTower::rationals(names)
    }

    #[test]
    fn coprime_basis_path_matches_wedges() {
        for k in [qt(&["t1", "t2", "t3"]), FieldTower::new(BaseField::Prime(5), &["t1", "t2"]).unwrap()] {
            let mut g = crate::random::Gen::new(9);
            for n in 1..=4 {
                for _ in 0..15 {
                    let p = g.good_point(&k, n);
                    assert_eq!(gamma_at_pure(&k, p.coords()), gamma_at_wedges(&k, p.coords()).unwrap());
                }
            }
        }
    }

    #[test]
    fn leibniz_on_product() {
        let k = qt(&["t1", "t2"]);
        let x = &k.var(0) * &k.var(1);
        let d = DifferentialForm::d(&x);
        assert_eq!(d.coeff(&[0]), k.var(1));
        assert_eq!(d.coeff(&[1]), k.var(0));
        assert!(DifferentialForm::d(&k.int(7)).is_zero());
    }

    #[test]
    fn dlog_wedge() {
        let k = qt(&["t1", "t2"]);
        let w = DifferentialForm::dlog(&k.var(0))
            .unwrap()
            .wedge(&DifferentialForm::dlog(&k.var(1)).unwrap())
            .unwrap();
        assert_eq!(w.render(), "(1/(t1*t2)) dt1^dt2");
        let a = k.var(0);
        let steinberg = DifferentialForm::dlog(&a)
            .unwrap()
            .wedge(&DifferentialForm::dlog(&(&k.one() - &a)).unwrap())
            .unwrap();
        assert!(steinberg.is_zero());
        assert_eq!(DifferentialForm::dlog(&k.zero()), Err(Error::ZeroArgument));
    }

    #[test]
    fn d_of_square_root() {
        let q = qt(&["t"]);
        let k = q.with_extension("th", &[-q.var(0), q.zero()]).unwrap();
        let th = k.theta().unwrap();
        let d = DifferentialForm::d(&th);
        assert_eq!(d.coeff(&[0]), (&k.int(2) * &th).inv().unwrap());
        assert!(DifferentialForm::monomial(&th, vec![0]).unwrap().trace_form().unwrap().is_zero());
        assert!(d.trace_form().unwrap().is_zero());
    }

    #[test]
    fn gamma_small_cases() {
        let g0 = gamma_form(BaseField::Rationals, 1);
        let k = simplex_tower(BaseField::Rationals, 1);
        // -1/v0 with v0 = -v1
        assert_eq!(g0.coeff(&[]), k.var(0).inv().unwrap());
        let k2 = simplex_tower(BaseField::Rationals, 2);
        let pt = generic_point(&k2);
        let expected = DifferentialForm::dlog(&pt[1])
            .unwrap()
            .sub(&DifferentialForm::dlog(&pt[2]).unwrap())
            .unwrap()
            .scale(&pt[0].inv().unwrap());
        assert_eq!(gamma_form(BaseField::Rationals, 2), expected);
    }

    #[test]
    fn gamma_differential_is_nu() {
        for n in 1..=4 {
            assert_eq!(
                gamma_form(BaseField::Rationals, n).d_form(),
                nu_form(BaseField::Rationals, n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn residues() {
        let k = qt(&["t1", "t2"]);
        let dd = DifferentialForm::monomial(&k.one(), vec![0, 1]).unwrap();
        assert!(dd.residue_along(0).unwrap().is_zero());
        let w = dd.scale(&(&k.var(0) * &k.var(0)).inv().unwrap());
        assert_eq!(w.residue_along(0), Err(Error::HigherOrderPole(2)));
        // dlog t1 ∧ dlog t2 has residue dlog t2 along t1 and -dlog t1 along t2
        let w = dd.scale(&(&k.var(0) * &k.var(1)).inv().unwrap());
        assert_eq!(w.residue_along(0).unwrap(), DifferentialForm::dlog(&k.var(1)).unwrap());
        assert_eq!(w.residue_along(1).unwrap(), DifferentialForm::dlog(&k.var(0)).unwrap().neg());
    }

    #[test]
    fn eval_example() {
        let k = qt(&["t"]);
        let t = k.var(0);
        let g = gamma_at(&[&(-&k.one()) - &t, t.clone(), k.one()]).unwrap();
        assert_eq!(g.render(), "(-1/(t^2 + t)) dt");
    }

    #[test]
    fn pullback_relabels() {
        let src = qt(&["a", "b"]);
        let dst = qt(&["x"]);
        let w = DifferentialForm::d(&(&src.var(0) * &src.var(1)));
        let x = dst.var(0);
        let p = w.pullback(&dst, &[x.clone(), &x * &x]).unwrap();
        assert_eq!(p, DifferentialForm::d(&(&(&x * &x) * &x)));
    }
}
