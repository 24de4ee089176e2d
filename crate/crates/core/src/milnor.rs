//! Formal Milnor symbols, their dlog forms, and the translation between points of
//! the simplex and symbols.

use std::fmt;

use crate::cycles::{QPoint, ZeroCycle};
use crate::error::{Error, Result};
use crate::factor::join_terms;
use crate::field::{Elem, FieldTower};
use crate::forms::{wedge_all, DifferentialForm};

/// An integral combination of symbols `{x_1, …, x_n}`. No normal form is kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorSymbol {
    tower: FieldTower,
    weight: usize,
    terms: Vec<(i64, Vec<Elem>)>,
}

impl MilnorSymbol {
    pub fn zero(tower: &FieldTower, weight: usize) -> Self {
        MilnorSymbol {
            tower: tower.clone(),
            weight,
            terms: Vec::new(),
        }
    }

    pub fn symbol(entries: &[Elem]) -> Result<Self> {
        let tower = entries
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty symbol".into()))?
            .tower()
            .clone();
        let mut s = Self::zero(&tower, entries.len());
        s.push(1, entries.to_vec())?;
        Ok(s)
    }

    fn push(&mut self, m: i64, entries: Vec<Elem>) -> Result<()> {
        if entries.len() != self.weight {
            return Err(Error::DimensionMismatch(format!(
                "symbol of weight {} in a sum of weight {}",
                entries.len(),
                self.weight
            )));
        }
        if entries.iter().any(|x| x.tower() != &self.tower) {
            return Err(Error::TowerMismatch);
        }
        if entries.iter().any(Elem::is_zero) {
            return Err(Error::ZeroArgument);
        }
        if m != 0 {
            self.terms.push((m, entries));
        }
        Ok(())
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn terms(&self) -> &[(i64, Vec<Elem>)] {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.tower != self.tower {
            return Err(Error::TowerMismatch);
        }
        let mut out = self.clone();
        for (m, e) in &other.terms {
            out.push(*m, e.clone())?;
        }
        Ok(out)
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mut out = Self::zero(&self.tower, self.weight);
        for (m, e) in &self.terms {
            out.push(k * m, e.clone()).unwrap();
        }
        out
    }

    /// Rewrites slot `slot` of term `term`, assumed equal to `x·y`, as
    /// `{…, x, …} + {…, y, …}`.
    pub fn expand_product(&self, term: usize, slot: usize, x: &Elem, y: &Elem) -> Result<Self> {
        let (m, entries) = self
            .terms
            .get(term)
            .ok_or(Error::IndexOutOfRange {
                index: term,
                max: self.terms.len().saturating_sub(1),
            })?
            .clone();
        if slot >= entries.len() {
            return Err(Error::IndexOutOfRange {
                index: slot,
                max: entries.len() - 1,
            });
        }
        if &(x * y) != &entries[slot] {
            return Err(Error::DegenerateData("factors do not multiply to the entry".into()));
        }
        let mut out = self.clone();
        out.terms.remove(term);
        for f in [x, y] {
            let mut e = entries.clone();
            e[slot] = f.clone();
            out.push(m, e)?;
        }
        Ok(out)
    }

    /// Swaps two slots of a term, changing its sign.
    pub fn swap_slots(&self, term: usize, i: usize, j: usize) -> Result<Self> {
        let mut out = self.clone();
        let t = out.terms.get_mut(term).ok_or(Error::IndexOutOfRange {
            index: term,
            max: self.terms.len().saturating_sub(1),
        })?;
        if i >= t.1.len() || j >= t.1.len() {
            return Err(Error::IndexOutOfRange {
                index: i.max(j),
                max: t.1.len() - 1,
            });
        }
        t.1.swap(i, j);
        if i != j {
            t.0 = -t.0;
        }
        Ok(out)
    }

    /// `{x_1, …, x_n} ↦ dlog x_1 ∧ … ∧ dlog x_n`.
    pub fn dlog(&self) -> Result<DifferentialForm> {
        let mut acc = DifferentialForm::zero(&self.tower, self.weight);
        for (m, e) in &self.terms {
            let logs: Vec<DifferentialForm> = e.iter().map(DifferentialForm::dlog).collect::<Result<_>>()?;
            acc = acc.add(&wedge_all(&self.tower, &logs)?.scale(&self.tower.int(*m)))?;
        }
        Ok(acc)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let pieces: Vec<String> = self
            .terms
            .iter()
            .map(|(m, e)| {
                let body = format!("{{{}}}", e.iter().map(Elem::render).collect::<Vec<_>>().join(", "));
                match m {
                    1 => body,
                    -1 => format!("-{body}"),
                    _ => format!("{m}*{body}"),
                }
            })
            .collect();
        join_terms(&pieces)
    }
}

impl fmt::Display for MilnorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A `k`-point `(u_0, …, u_n)` of the simplex `Σ u_i = 1` with all `u_i ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexPoint {
    coords: Vec<Elem>,
}

impl SimplexPoint {
    pub fn new(coords: Vec<Elem>) -> Result<Self> {
        let tower = coords
            .first()
            .ok_or_else(|| Error::DimensionMismatch("a point needs coordinates".into()))?
            .tower()
            .clone();
        if coords.iter().any(|c| c.tower() != &tower) {
            return Err(Error::TowerMismatch);
        }
        let sum = coords.iter().fold(tower.zero(), |acc, c| &acc + c);
        if !sum.is_one() {
            return Err(Error::DegenerateData(format!("simplex coordinates sum to {sum}, not 1")));
        }
        if coords.iter().any(Elem::is_zero) {
            return Err(Error::BadPosition("a simplex coordinate vanishes".into()));
        }
        Ok(SimplexPoint { coords })
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn render(&self) -> String {
        format!("({})", self.coords.iter().map(Elem::render).collect::<Vec<_>>().join(", "))
    }
}

/// `(u_0, …, u_n) ↦ {-u_0/u_n, …, -u_{n-1}/u_n}`.
pub fn point_to_symbol(u: &SimplexPoint) -> Result<MilnorSymbol> {
    let n = u.coords.len() - 1;
    if n == 0 {
        return Err(Error::DimensionMismatch("a 0-simplex point has no symbol".into()));
    }
    let last = u.coords[n].inv()?;
    let entries: Vec<Elem> = u.coords[..n].iter().map(|c| -(c * &last)).collect();
    MilnorSymbol::symbol(&entries)
}

/// `{b_1, …, b_n} ↦ (b_1/c, …, b_n/c, -1/c)` with `c = -1 + Σ b_i`; `None` when
/// `c = 0`, where the symbol maps to the zero cycle.
pub fn symbol_to_point(b: &[Elem]) -> Result<Option<SimplexPoint>> {
    let tower = b
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty symbol".into()))?
        .tower();
    if b.iter().any(Elem::is_zero) {
        return Err(Error::ZeroArgument);
    }
    let c = b.iter().fold(-tower.one(), |acc, x| &acc + x);
    if c.is_zero() {
        return Ok(None);
    }
    let cinv = c.inv()?;
    let mut coords: Vec<Elem> = b.iter().map(|x| x * &cinv).collect();
    coords.push(-cinv);
    SimplexPoint::new(coords).map(Some)
}

/// `ι(u_0, …, u_n) = (-1, u_0, …, u_n)`.
pub fn iota(u: &SimplexPoint) -> Result<QPoint> {
    let tower = u.coords[0].tower();
    let mut coords = vec![-tower.one()];
    coords.extend(u.coords.iter().cloned());
    QPoint::new(coords)
}

/// The composite `K^M_{n-1}(k) → SH^n(k, n)` on one symbol.
pub fn milnor_to_additive(b: &[Elem]) -> Result<ZeroCycle> {
    let tower = b
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty symbol".into()))?
        .tower();
    match symbol_to_point(b)? {
        None => Ok(ZeroCycle::zero(tower, b.len() + 1)),
        Some(p) => ZeroCycle::point(iota(&p)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_to_point_example() {
        let k = FieldTower::rationals(&["t"]);
        let t = k.var(0);
        let p = symbol_to_point(&[t.clone()]).unwrap().unwrap();
        assert_eq!(p.render(), "(t/(t - 1), -1/(t - 1))");
        assert!(symbol_to_point(&[k.one()]).unwrap().is_none());
        let s = point_to_symbol(&p).unwrap();
        assert_eq!(s.render(), "{t}");
    }

    #[test]
    fn dlog_examples() {
        let k = FieldTower::rationals(&["t1", "t2"]);
        let (a, b) = (k.var(0), k.var(1));
        let s = MilnorSymbol::symbol(&[a.clone(), b]).unwrap();
        assert_eq!(s.dlog().unwrap().render(), "(1/(t1*t2)) dt1^dt2");
        let st = MilnorSymbol::symbol(&[a.clone(), &k.one() - &a]).unwrap();
        assert!(st.dlog().unwrap().is_zero());
        let neg = MilnorSymbol::symbol(&[a.clone(), -&a]).unwrap();
        assert!(neg.dlog().unwrap().is_zero());
    }

    #[test]
    fn iota_example() {
        let k = FieldTower::rationals(&["u"]);
        let u = k.var(0);
        let p = SimplexPoint::new(vec![u.clone(), &k.one() - &u]).unwrap();
        assert_eq!(iota(&p).unwrap().render(), "(-1, u, -u + 1)");
    }

    #[test]
    fn rewriting() {
        let k = FieldTower::rationals(&["x", "y", "z"]);
        let (x, y, z) = (k.var(0), k.var(1), k.var(2));
        let s = MilnorSymbol::symbol(&[&x * &y, z.clone()]).unwrap();
        let e = s.expand_product(0, 0, &x, &y).unwrap();
        assert_eq!(e.dlog().unwrap(), s.dlog().unwrap());
        let w = s.swap_slots(0, 0, 1).unwrap();
        assert_eq!(w.dlog().unwrap(), s.dlog().unwrap());
    }
}
