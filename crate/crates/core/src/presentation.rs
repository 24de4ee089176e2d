//! Ω^{n-1}_k presented as `k ⊗ ∧^{n-1} k^×` modulo the relations, with the
//! derivation `D` and the comparison map to Kähler forms.

use std::fmt;

use crate::error::{Error, Result};
use crate::factor::join_terms;
use crate::field::{Elem, FieldTower};
use crate::forms::{wedge_all, DifferentialForm};

/// One tensor `a ⊗ (b_1 ∧ … ∧ b_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresTerm {
    pub a: Elem,
    pub b: Vec<Elem>,
}

/// A formal sum of tensors. Terms are normalized (sorted wedge slots, merged
/// first slots) but no normal form modulo the relations is attempted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationElement {
    tower: FieldTower,
    wedge_len: usize,
    terms: Vec<PresTerm>,
}

impl PresentationElement {
    pub fn zero(tower: &FieldTower, wedge_len: usize) -> Self {
        PresentationElement {
            tower: tower.clone(),
            wedge_len,
            terms: Vec::new(),
        }
    }

    /// The single tensor `a ⊗ (b_1 ∧ … ∧ b_m)`.
    pub fn term(a: &Elem, b: &[Elem]) -> Result<Self> {
        let mut out = Self::zero(a.tower(), b.len());
        out.push(a.clone(), b.to_vec())?;
        Ok(out)
    }

    fn push(&mut self, a: Elem, mut b: Vec<Elem>) -> Result<()> {
        if b.len() != self.wedge_len {
            return Err(Error::DimensionMismatch(format!(
                "wedge of length {} in an element of length {}",
                b.len(),
                self.wedge_len
            )));
        }
        if a.tower() != &self.tower || b.iter().any(|x| x.tower() != &self.tower) {
            return Err(Error::TowerMismatch);
        }
        if b.iter().any(Elem::is_zero) {
            return Err(Error::ZeroArgument);
        }
        if a.is_zero() {
            return Ok(());
        }
        // insertion sort by canonical string, tracking the sign
        let mut keys: Vec<String> = b.iter().map(Elem::render).collect();
        let mut odd = false;
        for i in 1..keys.len() {
            let mut j = i;
            while j > 0 && keys[j - 1] > keys[j] {
                keys.swap(j - 1, j);
                b.swap(j - 1, j);
                odd = !odd;
                j -= 1;
            }
        }
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Ok(());
        }
        let a = if odd { -a } else { a };
        if let Some(pos) = self.terms.iter().position(|t| t.b == b) {
            let s = &self.terms[pos].a + &a;
            if s.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].a = s;
            }
        } else {
            self.terms.push(PresTerm { a, b });
        }
        Ok(())
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    /// Number of wedge slots, `n - 1` for an element standing for an `(n-1)`-form.
    pub fn wedge_len(&self) -> usize {
        self.wedge_len
    }

    pub fn terms(&self) -> &[PresTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.tower != other.tower {
            return Err(Error::TowerMismatch);
        }
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.a.clone(), t.b.clone())?;
        }
        Ok(out)
    }

    /// The `k`-module structure acting on the first slot.
    pub fn scale(&self, x: &Elem) -> Self {
        let mut out = Self::zero(&self.tower, self.wedge_len);
        for t in &self.terms {
            out.push(&t.a * x, t.b.clone()).expect("terms stay valid");
        }
        out
    }

    /// `a ⊗ (b_1 ∧ …) ↦ a dlog b_1 ∧ … ∧ dlog b_m`.
    pub fn to_omega(&self) -> Result<DifferentialForm> {
        let mut acc = DifferentialForm::zero(&self.tower, self.wedge_len);
        for t in &self.terms {
            let logs: Vec<DifferentialForm> =
                t.b.iter().map(DifferentialForm::dlog).collect::<Result<_>>()?;
            acc = acc.add(&wedge_all(&self.tower, &logs)?.scale(&t.a))?;
        }
        Ok(acc)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let wrap = |s: String| if s.contains(' ') { format!("({s})") } else { s };
        let pieces: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let bs: Vec<String> = t.b.iter().map(|x| wrap(x.render())).collect();
                let rhs = if bs.is_empty() { "1".to_string() } else { bs.join(" ^ ") };
                format!("{} (x) {}", wrap(t.a.render()), rhs)
            })
            .collect();
        join_terms(&pieces)
    }
}

impl fmt::Display for PresentationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `D(b_1, …, b_m) = b_1⋯b_m ⊗ (b_1 ∧ … ∧ b_m)`, zero as soon as some `b_i = 0`.
pub fn derivation(tower: &FieldTower, b: &[Elem]) -> Result<PresentationElement> {
    if b.iter().any(|x| x.tower() != tower) {
        return Err(Error::TowerMismatch);
    }
    if b.iter().any(Elem::is_zero) {
        return Ok(PresentationElement::zero(tower, b.len()));
    }
    let prod = b.iter().fold(tower.one(), |acc, x| &acc * x);
    PresentationElement::term(&prod, b)
}

/// The generator `a ⊗ (a ∧ b_2 ∧ …) + (1-a) ⊗ ((1-a) ∧ b_2 ∧ …)` of the relations,
/// zero when `a ∈ {0, 1}`.
pub fn relation_element(a: &Elem, rest: &[Elem]) -> Result<PresentationElement> {
    let tower = a.tower();
    let one_minus = &tower.one() - a;
    let mut out = PresentationElement::zero(tower, rest.len() + 1);
    if a.is_zero() || one_minus.is_zero() {
        return Ok(out);
    }
    let mut b1 = vec![a.clone()];
    b1.extend_from_slice(rest);
    let mut b2 = vec![one_minus.clone()];
    b2.extend_from_slice(rest);
    out.push(a.clone(), b1)?;
    out.push(one_minus, b2)?;
    Ok(out)
}

/// `to_omega` of [`relation_element`]; identically zero.
pub fn relation_check(a: &Elem, rest: &[Elem]) -> Result<DifferentialForm> {
    relation_element(a, rest)?.to_omega()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_of_single_entry() {
        let k = FieldTower::rationals(&["t"]);
        let t = k.var(0);
        let dt = derivation(&k, &[t.clone()]).unwrap();
        assert_eq!(dt.render(), "t (x) t");
        assert_eq!(dt.to_omega().unwrap(), DifferentialForm::d(&t));
        assert!(derivation(&k, &[k.zero()]).unwrap().is_zero());
    }

    #[test]
    fn section_in_two_variables() {
        let k = FieldTower::rationals(&["t1", "t2"]);
        let (a, b) = (k.var(0), k.var(1));
        let d = derivation(&k, &[a.clone(), b.clone()]).unwrap();
        let expected = DifferentialForm::d(&a).wedge(&DifferentialForm::d(&b)).unwrap();
        assert_eq!(d.to_omega().unwrap(), expected);
        let one = PresentationElement::term(&k.one(), &[a, b]).unwrap();
        assert_eq!(one.to_omega().unwrap().render(), "(1/(t1*t2)) dt1^dt2");
    }

    #[test]
    fn alternating_slots() {
        let k = FieldTower::rationals(&["x", "y"]);
        let (x, y) = (k.var(0), k.var(1));
        let p = PresentationElement::term(&k.one(), &[y.clone(), x.clone()]).unwrap();
        let q = PresentationElement::term(&k.one(), &[x.clone(), y]).unwrap();
        assert!(p.add(&q).unwrap().is_zero());
        assert!(PresentationElement::term(&k.one(), &[x.clone(), x]).unwrap().is_zero());
    }

    #[test]
    fn relations_vanish() {
        let k = FieldTower::rationals(&["t", "t2"]);
        assert!(relation_check(&k.var(0), &[k.var(1)]).unwrap().is_zero());
        assert!(relation_check(&k.rational(1, 2).unwrap(), &[k.var(1)]).unwrap().is_zero());
        assert!(relation_element(&k.zero(), &[k.var(1)]).unwrap().is_zero());
        assert!(relation_check(&k.var(0), &[]).unwrap().is_zero());
    }
}
