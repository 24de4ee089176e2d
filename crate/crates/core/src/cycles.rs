//! Points and 0-cycles on `Q^n = Spec k[t_0..t_n]/(Σ t_i)`, the ⋆-action, the map
//! φ from the presentation, and evaluation against `γ_{n-1}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::forms::{gamma_at, DifferentialForm};
use crate::presentation::PresentationElement;

/// A point of `Q^n` with coordinates in `k` or in a finite extension `k[θ]/(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoint {
    coords: Vec<Elem>,
}

impl QPoint {
    pub fn new(coords: Vec<Elem>) -> Result<Self> {
        let first = coords
            .first()
            .ok_or_else(|| Error::DimensionMismatch("a point needs coordinates".into()))?;
        let tower = first.tower().clone();
        if coords.iter().any(|c| c.tower() != &tower) {
            return Err(Error::TowerMismatch);
        }
        let sum = coords.iter().fold(tower.zero(), |acc, c| &acc + c);
        if !sum.is_zero() {
            return Err(Error::DegenerateData(format!("coordinates sum to {sum}, not 0")));
        }
        Ok(QPoint { coords })
    }

    pub fn tower(&self) -> &FieldTower {
        self.coords[0].tower()
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    /// `n` for a point of `Q^n`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Off every face (and hence off the vertex).
    pub fn is_good_position(&self) -> bool {
        self.coords.iter().all(|c| !c.is_zero())
    }

    fn map(&self, f: impl Fn(&Elem) -> Elem) -> QPoint {
        QPoint {
            coords: self.coords.iter().map(f).collect(),
        }
    }

    /// `x ⋆ p = p / x` for `x ≠ 0` in the field of definition (or its base).
    pub fn star(&self, x: &Elem) -> Result<QPoint> {
        let x = self.tower().embed(x)?;
        let inv = x.inv()?;
        Ok(self.map(|c| c * &inv))
    }

    pub fn render(&self) -> String {
        let cs: Vec<String> = self.coords.iter().map(Elem::render).collect();
        format!("({})", cs.join(", "))
    }

    /// `γ_{n-1}` at the point, in `Ω` of the point's own field.
    pub fn eval_gamma(&self) -> Result<DifferentialForm> {
        if !self.is_good_position() {
            return Err(Error::BadPosition(self.render()));
        }
        gamma_at(&self.coords)
    }

    /// `Tr_{k(x)/k} γ_{n-1}(x)` for `k = base`.
    pub fn eval_gamma_over(&self, base: &FieldTower) -> Result<DifferentialForm> {
        let g = self.eval_gamma()?;
        if self.tower() == base {
            return Ok(g);
        }
        let g = g.trace_form()?;
        if g.tower() != base {
            return Err(Error::TowerMismatch);
        }
        Ok(g)
    }
}

impl fmt::Display for QPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `∂_j : Q^n → Q^{n+1}`, inserting a zero coordinate in slot `j`.
pub fn face(j: usize, p: &QPoint) -> Result<QPoint> {
    let max = p.dim() + 1;
    if j > max {
        return Err(Error::IndexOutOfRange { index: j, max });
    }
    let mut coords = p.coords.clone();
    coords.insert(j, p.tower().zero());
    QPoint::new(coords)
}

/// `π_j : Q^n → Q^{n-1}`, merging coordinates `j` and `j+1`.
pub fn degeneracy(j: usize, p: &QPoint) -> Result<QPoint> {
    let n = p.dim();
    if n == 0 || j > n - 1 {
        return Err(Error::IndexOutOfRange {
            index: j,
            max: n.saturating_sub(1),
        });
    }
    let mut coords = p.coords.clone();
    let next = coords.remove(j + 1);
    coords[j] = &coords[j] + &next;
    QPoint::new(coords)
}

/// The substitution `π_j^*(t_i)` for `i = 0..n-1`, as text.
pub fn degeneracy_table(j: usize, n: usize) -> Result<Vec<String>> {
    if n == 0 || j > n - 1 {
        return Err(Error::IndexOutOfRange {
            index: j,
            max: n.saturating_sub(1),
        });
    }
    Ok((0..n)
        .map(|i| match i.cmp(&j) {
            std::cmp::Ordering::Less => format!("t{i}"),
            std::cmp::Ordering::Equal => format!("t{} + t{}", i, i + 1),
            std::cmp::Ordering::Greater => format!("t{}", i + 1),
        })
        .collect())
}

/// An integral combination of closed points of `Q^n` in good position, collected
/// and sorted by canonical rendering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCycle {
    base: FieldTower,
    dim: usize,
    points: BTreeMap<String, (QPoint, i64)>,
}

impl ZeroCycle {
    pub fn zero(base: &FieldTower, dim: usize) -> Self {
        ZeroCycle {
            base: base.clone(),
            dim,
            points: BTreeMap::new(),
        }
    }

    pub fn point(p: QPoint) -> Result<Self> {
        let mut c = Self::zero(p.tower(), p.dim());
        c.add_point(1, p)?;
        Ok(c)
    }

    pub fn base(&self) -> &FieldTower {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (&QPoint, i64)> {
        self.points.values().map(|(p, m)| (p, *m))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn key(p: &QPoint) -> String {
        format!("{} over {}", p.render(), p.tower())
    }

    pub fn add_point(&mut self, m: i64, p: QPoint) -> Result<()> {
        let over_base = p.tower() == &self.base
            || (self.base.extension().is_none() && p.tower().base_tower() == self.base);
        if !over_base {
            return Err(Error::TowerMismatch);
        }
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "point of Q^{} in a cycle on Q^{}",
                p.dim(),
                self.dim
            )));
        }
        if !p.is_good_position() {
            return Err(Error::BadPosition(p.render()));
        }
        if m == 0 {
            return Ok(());
        }
        let key = Self::key(&p);
        match self.points.get_mut(&key) {
            Some(entry) => {
                entry.1 += m;
                if entry.1 == 0 {
                    self.points.remove(&key);
                }
            }
            None => {
                self.points.insert(key, (p, m));
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &ZeroCycle) -> Result<ZeroCycle> {
        let mut out = self.clone();
        for (p, m) in other.points() {
            out.add_point(m, p.clone())?;
        }
        Ok(out)
    }

    pub fn scaled(&self, k: i64) -> ZeroCycle {
        let mut out = Self::zero(&self.base, self.dim);
        for (p, m) in self.points() {
            out.add_point(k * m, p.clone()).unwrap();
        }
        out
    }

    pub fn neg(&self) -> ZeroCycle {
        self.scaled(-1)
    }

    pub fn sub(&self, other: &ZeroCycle) -> Result<ZeroCycle> {
        self.add(&other.neg())
    }

    /// `x ⋆ c`, with `0 ⋆ c = 0`.
    pub fn star(&self, x: &Elem) -> Result<ZeroCycle> {
        if x.tower() != &self.base {
            return Err(Error::TowerMismatch);
        }
        let mut out = Self::zero(&self.base, self.dim);
        if x.is_zero() {
            return Ok(out);
        }
        for (p, m) in self.points() {
            out.add_point(m, p.star(x)?)?;
        }
        Ok(out)
    }

    /// `Σ m_x Tr_{k(x)/k} γ_{n-1}(x)`.
    pub fn eval_gamma(&self) -> Result<DifferentialForm> {
        let mut acc = DifferentialForm::zero(&self.base, self.dim.saturating_sub(1));
        for (p, m) in self.points() {
            acc = acc.add(&p.eval_gamma_over(&self.base)?.scale(&self.base.int(m)))?;
        }
        Ok(acc)
    }

    /// One `m * (c0, ..., cn) over <field>` line per point.
    pub fn render(&self) -> String {
        if self.points.is_empty() {
            return "0".into();
        }
        self.points
            .iter()
            .map(|(k, (_, m))| format!("{m} * {k}"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for ZeroCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `φ(a ⊗ b_1 ∧ … ∧ b_{n-1}) = a ⋆ (-1, b_1/c, …, b_{n-1}/c, -1/c)` with
/// `c = -1 + Σ b_i`; empty when `a = 0` or `c = 0`.
pub fn phi_term(a: &Elem, b: &[Elem]) -> Result<ZeroCycle> {
    let tower = a.tower();
    if b.iter().any(|x| x.tower() != tower) {
        return Err(Error::TowerMismatch);
    }
    if b.iter().any(Elem::is_zero) {
        return Err(Error::ZeroArgument);
    }
    let n = b.len() + 1;
    let c = b.iter().fold(-tower.one(), |acc, x| &acc + x);
    if a.is_zero() || c.is_zero() {
        return Ok(ZeroCycle::zero(tower, n));
    }
    let cinv = c.inv()?;
    let mut coords = vec![-tower.one()];
    coords.extend(b.iter().map(|x| x * &cinv));
    coords.push(-cinv);
    ZeroCycle::point(QPoint::new(coords)?)?.star(a)
}

/// φ extended additively over a presentation element.
pub fn phi(x: &PresentationElement) -> Result<ZeroCycle> {
    let mut acc = ZeroCycle::zero(x.tower(), x.wedge_len() + 1);
    for t in x.terms() {
        acc = acc.add(&phi_term(&t.a, &t.b)?)?;
    }
    Ok(acc)
}

/// φ computed in the rescaled coordinates `w_i = λ u_i` and reported in the
/// original coordinates `u_i`.
pub fn phi_in_coordinates(x: &PresentationElement, lambda: &Elem) -> Result<ZeroCycle> {
    if lambda.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let in_w = phi(x)?;
    let to_u = lambda.inv()?;
    let mut out = ZeroCycle::zero(in_w.base(), in_w.dim());
    for (p, m) in in_w.points() {
        let u = to_u.clone();
        let k = p.tower().embed(&u)?;
        out.add_point(m, QPoint::new(p.coords().iter().map(|c| c * &k).collect())?)?;
    }
    Ok(out)
}

/// `∇(x_0, …, x_n) = (x_0, -x_1 x_0/(1-x_0), …, -x_n x_0/(1-x_0), -x_0/(1-x_0))`.
pub fn nabla(x: &QPoint) -> Result<QPoint> {
    let tower = x.tower();
    let x0 = &x.coords[0];
    let den = &tower.one() - x0;
    if den.is_zero() {
        return Err(Error::Singular);
    }
    let f = -(x0 / &den);
    let mut coords = vec![x0.clone()];
    coords.extend(x.coords[1..].iter().map(|c| c * &f));
    coords.push(f);
    let p = QPoint::new(coords)?;
    if !p.is_good_position() {
        return Err(Error::BadPosition(p.render()));
    }
    Ok(p)
}
