//! Rational curves on `Q^{n+1}` and their boundaries, including the three
//! families behind the relations in `SH^n(k, n)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::cycles::{QPoint, ZeroCycle};
use crate::error::{Error, Result};
use crate::factor::{factor, Factorization, UPoly};
use crate::field::{Elem, FieldTower};
use crate::poly::MPoly;

/// A map from the affine line (parameter appended as the last transcendental of
/// `line`) into `Q^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametrizedCurve {
    ground: FieldTower,
    line: FieldTower,
    coords: Vec<Elem>,
    hints: BTreeMap<usize, Factorization>,
}

fn fresh_name(tower: &FieldTower, stem: &str) -> String {
    let mut name = stem.to_string();
    let mut i = 1;
    while tower.vars().iter().any(|v| v == &name) {
        name = format!("{stem}{i}");
        i += 1;
    }
    name
}

impl ParametrizedCurve {
    /// `ground(τ)` for a ground field without extension.
    pub fn line_tower(ground: &FieldTower) -> Result<FieldTower> {
        if ground.extension().is_some() {
            return Err(Error::InvalidTower("curves need a ground field without extension".into()));
        }
        ground.with_vars(&[fresh_name(ground, "tau")])
    }

    pub fn new(ground: &FieldTower, coords: Vec<Elem>) -> Result<Self> {
        let line = Self::line_tower(ground)?;
        if coords.len() < 2 {
            return Err(Error::DimensionMismatch("a curve needs at least two coordinates".into()));
        }
        if coords.iter().any(|c| c.tower() != &line) {
            return Err(Error::TowerMismatch);
        }
        let sum = coords.iter().fold(line.zero(), |acc, c| &acc + c);
        if !sum.is_zero() {
            return Err(Error::DegenerateData(format!("coordinates sum to {sum}, not 0")));
        }
        if let Some(j) = coords.iter().position(Elem::is_zero) {
            return Err(Error::BadPosition(format!("coordinate {j} vanishes identically")));
        }
        Ok(ParametrizedCurve {
            ground: ground.clone(),
            line,
            coords,
            hints: BTreeMap::new(),
        })
    }

    /// Supplies the factorization of the numerator of coordinate `face`, checked
    /// by multiplying back.
    pub fn with_factor_hint(mut self, face: usize, factors: Factorization) -> Result<Self> {
        let num = self.numerator(face)?;
        let mut prod = UPoly::constant(self.ground.one());
        for (f, m) in &factors {
            if f.tower() != &self.ground {
                return Err(Error::TowerMismatch);
            }
            prod = prod.mul(&f.monic().pow(*m));
        }
        if prod != num.monic() {
            return Err(Error::DegenerateData(format!("factor hint for face {face} does not multiply out")));
        }
        self.hints.insert(face, factors.into_iter().map(|(f, m)| (f.monic(), m)).collect());
        Ok(self)
    }

    pub fn ground(&self) -> &FieldTower {
        &self.ground
    }

    pub fn line(&self) -> &FieldTower {
        &self.line
    }

    pub fn param(&self) -> Elem {
        self.line.var(self.line.nvars() - 1)
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    /// `n` for a curve on `Q^{n+1}`.
    pub fn boundary_dim(&self) -> usize {
        self.coords.len() - 2
    }

    fn to_ground(&self, p: &MPoly) -> Elem {
        let m = self.ground.nvars();
        let map: Vec<usize> = (0..=m).map(|i| if i < m { i } else { 0 }).collect();
        self.ground.from_poly(p.remap(m, &map))
    }

    /// Numerator of coordinate `j` as a polynomial in the parameter over `k`.
    pub fn numerator(&self, j: usize) -> Result<UPoly> {
        let c = self.coords.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            max: self.coords.len() - 1,
        })?;
        let r = c.as_ratfn().expect("pure line tower");
        let tau = self.line.nvars() - 1;
        let coeffs = r.num().to_univariate(tau).iter().map(|p| self.to_ground(p)).collect();
        Ok(UPoly::new(&self.ground, coeffs))
    }

    /// `∂_j C`, without the sign `(-1)^j`.
    pub fn face(&self, j: usize) -> Result<ZeroCycle> {
        let n = self.boundary_dim();
        let mut out = ZeroCycle::zero(&self.ground, n);
        let num = self.numerator(j)?;
        if num.degree() == 0 {
            return Ok(out);
        }
        let factors = match self.hints.get(&j) {
            Some(f) => f.clone(),
            None => factor(&num)?,
        };
        for (f, m) in factors {
            let (field, root) = if f.degree() == 1 {
                (self.ground.clone(), -f.coeff(0))
            } else {
                let lower: Vec<Elem> = f.coeffs()[..f.degree()].to_vec();
                let k = self.ground.with_extension(&fresh_name(&self.ground, "th"), &lower)?;
                let th = k.theta()?;
                (k, th)
            };
            let mut images: Vec<Elem> = (0..self.ground.nvars()).map(|i| field.var(i)).collect();
            images.push(root);
            let mut coords = Vec::with_capacity(n + 1);
            let mut at_infinity = false;
            for (i, c) in self.coords.iter().enumerate() {
                if i == j {
                    continue;
                }
                match field.eval_ratfn(c.as_ratfn().unwrap(), &images) {
                    Ok(v) => coords.push(v),
                    Err(Error::DivisionByZero) => {
                        at_infinity = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if at_infinity {
                continue;
            }
            let p = QPoint::new(coords)?;
            if !p.is_good_position() {
                return Err(Error::BadPosition(format!("face {j} meets {p}")));
            }
            out.add_point(m as i64, p)?;
        }
        Ok(out)
    }

    /// `∂C = Σ_j (-1)^j ∂_j C`.
    pub fn boundary(&self) -> Result<ZeroCycle> {
        let mut acc = ZeroCycle::zero(&self.ground, self.boundary_dim());
        for j in 0..self.coords.len() {
            let f = self.face(j)?;
            acc = acc.add(&if j % 2 == 0 { f } else { f.neg() })?;
        }
        Ok(acc)
    }

    pub fn render(&self) -> String {
        format!(
            "({}) over {}",
            self.coords.iter().map(Elem::render).collect::<Vec<_>>().join(", "),
            self.line
        )
    }
}

impl fmt::Display for ParametrizedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn curve_boundary(c: &ParametrizedCurve) -> Result<ZeroCycle> {
    c.boundary()
}

fn lift(line: &FieldTower, x: &Elem) -> Elem {
    line.from_ratfn(x.as_ratfn().expect("pure ground").remap(line.nvars(), &(0..line.nvars() - 1).collect::<Vec<_>>()))
}

/// `W = (τ, -τ + u_0/ℓ, u_1/ℓ, …, u_n/ℓ)` with `ℓ = -(ab/u_0)τ + a + b`.
pub fn linearity_curve(a: &Elem, b: &Elem, u: &QPoint) -> Result<ParametrizedCurve> {
    let ground = u.tower().clone();
    if a.tower() != &ground || b.tower() != &ground {
        return Err(Error::TowerMismatch);
    }
    if (a * b).is_zero() {
        return Err(Error::ZeroProduct);
    }
    if !u.is_good_position() {
        return Err(Error::BadPosition(u.render()));
    }
    let line = ParametrizedCurve::line_tower(&ground)?;
    let tau = line.var(line.nvars() - 1);
    let us: Vec<Elem> = u.coords().iter().map(|c| lift(&line, c)).collect();
    let (la, lb) = (lift(&line, a), lift(&line, b));
    let ell = &(&(-&(&la * &lb)) / &us[0] * &tau) + &(&la + &lb);
    let inv = ell.inv()?;
    let mut coords = vec![tau.clone(), &(-&tau) + &(&us[0] * &inv)];
    coords.extend(us[1..].iter().map(|c| c * &inv));
    ParametrizedCurve::new(&ground, coords)
}

/// The expected boundary `(a+b)⋆u - a⋆u - b⋆u` of [`linearity_curve`].
pub fn linearity_expected(a: &Elem, b: &Elem, u: &QPoint) -> Result<ZeroCycle> {
    let c = ZeroCycle::point(u.clone())?;
    c.star(&(a + b))?.sub(&c.star(a)?)?.sub(&c.star(b)?)
}

/// `Γ(b, u) = (-1/b + τ, 1/(b-1), -τ, -u_1/(b(b-1)), …, -u_{n-1}/(b(b-1)))`.
pub fn gamma_curve(b: &Elem, u: &[Elem]) -> Result<ParametrizedCurve> {
    let ground = b.tower().clone();
    if b.is_zero() || b.is_one() {
        return Err(Error::DegenerateModulus);
    }
    if u.is_empty() {
        return Err(Error::DimensionMismatch("Γ(b, u) needs at least one u".into()));
    }
    if u.iter().any(|x| x.tower() != &ground) {
        return Err(Error::TowerMismatch);
    }
    if u.iter().any(Elem::is_zero) {
        return Err(Error::BadPosition("some u_i vanishes".into()));
    }
    if !u.iter().fold(ground.zero(), |acc, x| &acc + x).is_one() {
        return Err(Error::DegenerateData("the u_i must sum to 1".into()));
    }
    let line = ParametrizedCurve::line_tower(&ground)?;
    let tau = line.var(line.nvars() - 1);
    let lb = lift(&line, b);
    let bm1 = &lb - &line.one();
    let w = (&lb * &bm1).inv()?;
    let mut coords = vec![&(-&lb.inv()?) + &tau, bm1.inv()?, -&tau];
    coords.extend(u.iter().map(|x| -(&lift(&line, x) * &w)));
    ParametrizedCurve::new(&ground, coords)
}

/// The right-hand side of the boundary formula for [`gamma_curve`]:
/// `(1-b)⋆(-1, 1-1/b, u_1/b, …) + b⋆(-1, b/(b-1), -u_1/(b-1), …)`.
pub fn gamma_expected(b: &Elem, u: &[Elem]) -> Result<ZeroCycle> {
    let k = b.tower();
    let one = k.one();
    let binv = b.inv()?;
    let bm1inv = (b - &one).inv()?;
    let mut p1 = vec![-one.clone(), &one - &binv];
    p1.extend(u.iter().map(|x| x * &binv));
    let mut p2 = vec![-one.clone(), b * &bm1inv];
    p2.extend(u.iter().map(|x| -(x * &bm1inv)));
    let c1 = ZeroCycle::point(QPoint::new(p1)?)?.star(&(&one - b))?;
    let c2 = ZeroCycle::point(QPoint::new(p2)?)?.star(b)?;
    c1.add(&c2)
}

/// `a_1/a_0` for a monic minimal polynomial `V^N + … + a_1 V + a_0`.
pub fn trace_ratio(p: &UPoly) -> Result<Elem> {
    let a0 = p.coeff(0);
    if a0.is_zero() {
        return Err(Error::DegenerateData("a_0 = 0".into()));
    }
    Ok(&p.coeff(1) / &a0)
}

/// The curve cut out by `Q(V_0, u) = 0, V_i + α_i V_0 = 0`, parametrized by
/// `V_0 = τ`: `(τ, -α_1τ, …, -α_{n-1}τ, u(τ), -u(τ) - α_nτ)`, where `P` is the
/// monic minimal polynomial of `-1/t` and `α = (-1, α_1, …, α_n)`.
pub fn trace_curve(p: &UPoly, alpha: &QPoint) -> Result<ParametrizedCurve> {
    let ground = alpha.tower().clone();
    if p.tower() != &ground {
        return Err(Error::TowerMismatch);
    }
    let p = p.monic();
    let big_n = p.degree();
    if big_n < 2 {
        return Err(Error::DegenerateData("the trace curve needs deg P >= 2".into()));
    }
    if p.coeff(0).is_zero() {
        return Err(Error::DegenerateData("a_0 = 0".into()));
    }
    let al = alpha.coords();
    if !(-&al[0]).is_one() {
        return Err(Error::DegenerateData("the point must start with -1".into()));
    }
    if al.iter().any(Elem::is_zero) {
        return Err(Error::DegenerateData("some α_i vanishes".into()));
    }
    let n = al.len() - 1;
    let line = ParametrizedCurve::line_tower(&ground)?;
    let tau = line.var(line.nvars() - 1);
    let alpha_n = lift(&line, &al[n]);
    let a = |i: usize| lift(&line, &p.coeff(i));
    // D(τ) = Σ_{i=2}^{N} b_i τ^{i-1}, b_i = -a_i/α_n (a_N = 1)
    let mut den = line.zero();
    let mut pw = tau.clone();
    for i in 2..=big_n {
        den = &den + &(&(-&(&a(i) / &alpha_n)) * &pw);
        pw = &pw * &tau;
    }
    let u = -(&(&(&a(1) * &tau) + &a(0)) / &den);
    let mut coords = vec![tau.clone()];
    coords.extend(al[1..n].iter().map(|x| -(&lift(&line, x) * &tau)));
    coords.push(u.clone());
    coords.push(&(-&u) - &(&alpha_n * &tau));
    let curve = ParametrizedCurve::new(&ground, coords)?;
    let last = curve.coords.len() - 1;
    curve.with_factor_hint(last, vec![(p, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldTower {
        FieldTower::rationals(&[] as &[&str])
    }

    fn qpt(k: &FieldTower, c: &[i64]) -> QPoint {
        QPoint::new(c.iter().map(|&v| k.int(v)).collect()).unwrap()
    }

    #[test]
    fn linearity_display() {
        let k = q();
        let u = qpt(&k, &[-2, 1, 1]);
        let w = linearity_curve(&k.one(), &k.one(), &u).unwrap();
        let c = ZeroCycle::point(u.clone()).unwrap();
        assert_eq!(w.face(0).unwrap(), c.star(&k.int(2)).unwrap());
        assert_eq!(w.face(1).unwrap(), c.scaled(2));
        for j in 2..4 {
            assert!(w.face(j).unwrap().is_zero());
        }
        let roots = factor(&w.numerator(1).unwrap()).unwrap();
        assert_eq!(roots[0].0, UPoly::linear(&k.int(-2)));
        // a + b = 0
        let w = linearity_curve(&k.int(3), &k.int(-3), &u).unwrap();
        assert!(w.face(0).unwrap().is_zero());
        assert_eq!(linearity_curve(&k.zero(), &k.one(), &u), Err(Error::ZeroProduct));
    }

    #[test]
    fn gamma_curve_display() {
        let k = FieldTower::rationals(&["t"]);
        let t = k.var(0);
        let g = gamma_curve(&t, &[k.one()]).unwrap();
        assert_eq!(g.boundary().unwrap(), gamma_expected(&t, &[k.one()]).unwrap());
        assert!(g.boundary().unwrap().eval_gamma().unwrap().is_zero());
        assert!(g.face(1).unwrap().is_zero());
        assert_eq!(gamma_curve(&k.one(), &[k.one()]), Err(Error::DegenerateModulus));
    }

    #[test]
    fn trace_of_sqrt_two() {
        let k = q();
        let kk = k.with_extension("th", &[k.int(-2), k.zero()]).unwrap();
        let th = kk.theta().unwrap();
        let m = crate::factor::minimal_polynomial(&(-&th.inv().unwrap()));
        assert_eq!(trace_ratio(&m).unwrap(), th.trace().unwrap());
        let alpha = qpt(&k, &[-1, 3, -2]);
        let w = trace_curve(&m, &alpha).unwrap();
        let b = w.boundary().unwrap();
        assert!(b.eval_gamma().unwrap().is_zero());
    }
}
