//! Text input: field towers, elements, tuples, forms, symbols, presentation
//! elements and cycles. Accepts everything the renderers produce.

use num_bigint::BigInt;

use crate::cycles::{QPoint, ZeroCycle};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::forms::DifferentialForm;
use crate::milnor::MilnorSymbol;
use crate::poly::BaseField;
use crate::presentation::PresentationElement;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = bytes[start..i].iter().collect();
            out.push((start, Tok::Num(text.parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
        } else if "+-*/^(),{}".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(perr(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    tower: &'a FieldTower,
}

impl<'a> Parser<'a> {
    fn new(s: &str, tower: &'a FieldTower) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(s)?,
            pos: 0,
            end: s.chars().count(),
            tower,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(perr(self.here(), format!("expected `{c}`")))
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            return Err(perr(self.here(), "unexpected trailing input"));
        }
        Ok(())
    }

    /// Index of the variable `x` when `ident` is the differential `dx`.
    fn differential(&self, ident: &str) -> Option<usize> {
        if self.is_name(ident) {
            return None;
        }
        let rest = ident.strip_prefix('d')?;
        self.tower.var_index(rest).ok()
    }

    fn is_name(&self, ident: &str) -> bool {
        self.tower.vars().iter().any(|v| v == ident)
            || self.tower.extension().is_some_and(|e| e.name == ident)
    }

    fn at_differential(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if self.differential(s).is_some())
    }

    fn expr(&mut self) -> Result<Elem> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Elem> {
        let mut acc = self.unary()?;
        loop {
            if self.peek() == Some(&Tok::Sym('*')) {
                if matches!(self.toks.get(self.pos + 1), Some((_, Tok::Ident(s))) if self.differential(s).is_some())
                {
                    return Ok(acc);
                }
                self.pos += 1;
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let at = self.here();
                self.pos += 1;
                let d = self.unary()?;
                acc = acc.try_div(&d).map_err(|_| perr(at, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Elem> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Elem> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.here();
        let paren = self.eat('(');
        let neg = self.eat('-');
        let e = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                i64::try_from(n).map_err(|_| perr(at, "exponent too large"))?
            }
            _ => return Err(perr(at, "expected an integer exponent")),
        };
        if paren {
            self.expect(')')?;
        }
        let e = if neg { -e } else { e };
        base.pow(e).map_err(|_| perr(at, "negative power of zero"))
    }

    fn atom(&mut self) -> Result<Elem> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.tower.scalar(n.into()))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                if let Ok(i) = self.tower.var_index(&s) {
                    return Ok(self.tower.var(i));
                }
                if self.tower.extension().is_some_and(|e| e.name == s) {
                    return self.tower.theta();
                }
                Err(perr(at, format!("unknown name `{s}`")))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(perr(at, "expected a number, a name or `(`")),
        }
    }

    fn tuple(&mut self, open: char, close: char) -> Result<Vec<Elem>> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn form(&mut self) -> Result<DifferentialForm> {
        let mut acc: Option<DifferentialForm> = None;
        let mut first = true;
        loop {
            let neg = if first {
                self.eat('-')
            } else if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                break;
            };
            first = false;
            let at = self.here();
            let coeff = if self.at_differential() {
                self.tower.one()
            } else {
                let c = self.term()?;
                self.eat('*');
                c
            };
            let mut idx = Vec::new();
            while let Some(Tok::Ident(s)) = self.peek().cloned() {
                let Some(i) = self.differential(&s) else { break };
                self.pos += 1;
                idx.push(i);
                if !self.eat('^') {
                    break;
                }
            }
            let coeff = if neg { -coeff } else { coeff };
            let term = wedge_of(self.tower, &coeff, idx);
            acc = Some(match acc {
                None => term,
                Some(a) => a
                    .add(&term)
                    .map_err(|_| perr(at, "terms of different degree"))?,
            });
        }
        acc.ok_or_else(|| perr(self.here(), "empty form"))
    }
}

fn wedge_of(tower: &FieldTower, c: &Elem, idx: Vec<usize>) -> DifferentialForm {
    let deg = idx.len();
    let mut sorted = idx.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return DifferentialForm::zero(tower, deg);
    }
    let mut inversions = 0;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                inversions += 1;
            }
        }
    }
    let c = if inversions % 2 == 1 { -c } else { c.clone() };
    DifferentialForm::monomial(&c, sorted).expect("valid key")
}

/// Parses an element of `tower`, e.g. `(2*t1*t2 + 1)/(t1 - 1)`.
pub fn parse_elem(tower: &FieldTower, s: &str) -> Result<Elem> {
    let mut p = Parser::new(s, tower)?;
    let e = p.expr()?;
    p.done()?;
    Ok(e)
}

/// Parses `(x_0, x_1, …)`.
pub fn parse_tuple(tower: &FieldTower, s: &str) -> Result<Vec<Elem>> {
    let mut p = Parser::new(s, tower)?;
    let t = p.tuple('(', ')')?;
    p.done()?;
    Ok(t)
}

/// Parses a point of `Q^n`.
pub fn parse_point(tower: &FieldTower, s: &str) -> Result<QPoint> {
    QPoint::new(parse_tuple(tower, s)?)
}

/// Parses a sum of `coeff * dx^dy` terms; a bare expression is a 0-form.
pub fn parse_form(tower: &FieldTower, s: &str) -> Result<DifferentialForm> {
    let mut p = Parser::new(s, tower)?;
    let has_diff = p
        .toks
        .iter()
        .any(|(_, t)| matches!(t, Tok::Ident(s) if p.differential(s).is_some()));
    if !has_diff {
        if s.trim() == "0" {
            return Ok(DifferentialForm::zero(tower, 0));
        }
        let e = p.expr()?;
        p.done()?;
        return Ok(DifferentialForm::function(&e));
    }
    let f = p.form()?;
    p.done()?;
    Ok(f)
}

/// Parses one symbol `{x_1, …, x_n}` or a signed sum such as `{a, b} - 2*{c, d}`.
pub fn parse_symbol(tower: &FieldTower, s: &str) -> Result<MilnorSymbol> {
    let mut p = Parser::new(s, tower)?;
    let mut acc: Option<MilnorSymbol> = None;
    let mut first = true;
    loop {
        let sign = if first {
            if p.eat('-') {
                -1
            } else {
                1
            }
        } else if p.eat('+') {
            1
        } else if p.eat('-') {
            -1
        } else {
            break;
        };
        first = false;
        let at = p.here();
        let mut mult = 1i64;
        if let Some(Tok::Num(n)) = p.peek().cloned() {
            p.pos += 1;
            p.expect('*')?;
            mult = i64::try_from(n).map_err(|_| perr(at, "multiplicity too large"))?;
        }
        let entries = p.tuple('{', '}')?;
        let term = MilnorSymbol::symbol(&entries).map_err(|e| perr(at, e.to_string()))?;
        let term = term.scaled(sign * mult);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term).map_err(|e| perr(at, e.to_string()))?,
        });
    }
    p.done()?;
    acc.ok_or_else(|| perr(0, "empty symbol"))
}

/// Splits at top-level occurrences of `sep` (outside brackets).
fn split_top(s: &str, seps: &[&str]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut last = 0;
    let mut pending_sep = String::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (bi, c) = chars[i];
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            _ => {}
        }
        if depth == 0 {
            if let Some(sep) = seps.iter().find(|sep| s[bi..].starts_with(**sep)) {
                out.push((pending_sep.clone(), s[last..bi].to_string()));
                pending_sep = sep.to_string();
                last = bi + sep.len();
                while i < chars.len() && chars[i].0 < last {
                    i += 1;
                }
                continue;
            }
        }
        i += 1;
    }
    out.push((pending_sep, s[last..].to_string()));
    out
}

/// Parses `a (x) b1 ^ b2 + …` with `n - 1` wedge slots.
pub fn parse_presentation(tower: &FieldTower, n: usize, s: &str) -> Result<PresentationElement> {
    if n == 0 {
        return Err(perr(0, "n must be at least 1"));
    }
    let mut acc = PresentationElement::zero(tower, n - 1);
    if s.trim() == "0" {
        return Ok(acc);
    }
    for (sep, part) in split_top(s.trim(), &[" + ", " - "]) {
        let (a_txt, b_txt) = part
            .split_once(" (x) ")
            .ok_or_else(|| perr(0, format!("missing `(x)` in `{part}`")))?;
        let mut a = parse_elem(tower, a_txt)?;
        if sep == " - " {
            a = -a;
        }
        let bs: Vec<Elem> = if n == 1 {
            if b_txt.trim() != "1" {
                return Err(perr(0, "expected `1` for an empty wedge"));
            }
            Vec::new()
        } else {
            split_top(b_txt, &[" ^ "])
                .into_iter()
                .map(|(_, b)| parse_elem(tower, &b))
                .collect::<Result<_>>()?
        };
        let t = PresentationElement::term(&a, &bs).map_err(|e| perr(0, e.to_string()))?;
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

/// Parses a field tower: `Q`, `F5`, `Q(t1,t2)`, `Q(t)[th]/(th^2 - t)`.
pub fn parse_tower(s: &str) -> Result<FieldTower> {
    let s = s.trim();
    let (head, ext) = match s.find('[') {
        Some(i) => (&s[..i], Some(&s[i..])),
        None => (s, None),
    };
    let (base_txt, vars): (&str, Vec<String>) = match head.find('(') {
        Some(i) => {
            let inner = head[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| perr(head.len(), "expected `)` after the variables"))?;
            let vars = inner
                .split(',')
                .map(|v| v.trim().to_string())
                .filter(|v| !v.is_empty())
                .collect();
            (&head[..i], vars)
        }
        None => (head, Vec::new()),
    };
    let base = match base_txt.trim() {
        "Q" => BaseField::Rationals,
        b if b.starts_with('F') => {
            let p: u64 = b[1..]
                .parse()
                .map_err(|_| perr(1, format!("bad prime in `{b}`")))?;
            BaseField::Prime(p)
        }
        b => return Err(perr(0, format!("unknown base field `{b}`"))),
    };
    let tower = FieldTower::new(base, &vars).map_err(|e| perr(0, e.to_string()))?;
    let Some(ext) = ext else { return Ok(tower) };
    let close = ext.find(']').ok_or_else(|| perr(head.len(), "expected `]`"))?;
    let name = ext[1..close].trim();
    let poly_txt = ext[close + 1..]
        .trim()
        .strip_prefix('/')
        .ok_or_else(|| perr(head.len() + close + 1, "expected `/(P)` after the generator"))?
        .trim();
    let mut with_gen = vars.clone();
    with_gen.push(name.to_string());
    let aux = FieldTower::new(base, &with_gen).map_err(|e| perr(0, e.to_string()))?;
    let p = parse_elem(&aux, poly_txt)?;
    let r = p.as_ratfn().unwrap();
    let g = vars.len();
    if r.den().degree_in(g) > 0 {
        return Err(perr(0, "the minimal polynomial must be polynomial in the generator"));
    }
    let map: Vec<usize> = (0..=g).map(|i| if i < g { i } else { 0 }).collect();
    let den = tower.from_poly(r.den().remap(g, &map));
    let coeffs: Vec<Elem> = r
        .num()
        .to_univariate(g)
        .iter()
        .map(|c| &tower.from_poly(c.remap(g, &map)) / &den)
        .collect();
    if coeffs.len() < 2 {
        return Err(perr(0, "the minimal polynomial must have positive degree"));
    }
    let lead = coeffs.last().unwrap().clone();
    let lower: Vec<Elem> = coeffs[..coeffs.len() - 1].iter().map(|c| c / &lead).collect();
    tower.with_extension(name, &lower)
}

/// Parses the lines `m * (c0, ..., cn) over <field>` of a rendered cycle.
pub fn parse_cycle(base: &FieldTower, dim: usize, s: &str) -> Result<ZeroCycle> {
    let mut out = ZeroCycle::zero(base, dim);
    if s.trim() == "0" {
        return Ok(out);
    }
    for line in s.lines().filter(|l| !l.trim().is_empty()) {
        let (m, rest) = line
            .split_once(" * ")
            .ok_or_else(|| perr(0, format!("expected `m * (...)` in `{line}`")))?;
        let m: i64 = m.trim().parse().map_err(|_| perr(0, format!("bad multiplicity `{m}`")))?;
        let (pt, field) = rest
            .rsplit_once(" over ")
            .ok_or_else(|| perr(0, format!("expected `over <field>` in `{line}`")))?;
        let k = parse_tower(field)?;
        out.add_point(m, parse_point(&k, pt)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn towers_round_trip() {
        for s in ["Q", "F5(t1,t2)", "Q(t1,t2,t3)", "Q(t)[th]/(th^2 - t)", "Q[th]/(th^3 - th - 1)"] {
            assert_eq!(parse_tower(s).unwrap().to_string(), s);
        }
        assert!(parse_tower("F6(t)").is_err());
        assert!(parse_tower("Q[th]/(th^2 - 1)").is_err());
    }

    #[test]
    fn expressions() {
        let k = parse_tower("Q(t1,t2)").unwrap();
        let e = parse_elem(&k, "(2*t1*t2 + 1)/(t1 - 1)").unwrap();
        assert_eq!(e.render(), "(2*t1*t2 + 1)/(t1 - 1)");
        assert_eq!(parse_elem(&k, "t1^-1").unwrap(), k.var(0).inv().unwrap());
        assert!(matches!(parse_elem(&k, "1/(t1 - t1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_elem(&k, "x"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_elem(&k, "t1 +"), Err(Error::Parse { pos: 4, .. })));
    }

    #[test]
    fn forms_round_trip() {
        let k = parse_tower("Q(t1,t2)").unwrap();
        let f = parse_form(&k, "(1/(t1*t2)) dt1^dt2 - t1*dt2").unwrap_err();
        assert!(matches!(f, Error::Parse { .. }));
        let f = parse_form(&k, "(1/(t1*t2)) dt2^dt1").unwrap();
        assert_eq!(f.render(), "(-1/(t1*t2)) dt1^dt2");
        assert_eq!(parse_form(&k, &f.render()).unwrap(), f);
        let g = parse_form(&k, "t1*dt2 - dt1").unwrap();
        assert_eq!(parse_form(&k, &g.render()).unwrap(), g);
    }

    #[test]
    fn extension_elements() {
        let k = parse_tower("Q(t)[th]/(th^2 - t)").unwrap();
        let e = parse_elem(&k, "(th + 1)/(th - 1)").unwrap();
        assert_eq!(parse_elem(&k, &e.render()).unwrap(), e);
    }

    #[test]
    fn presentation_and_symbols() {
        let k = parse_tower("Q(t1,t2)").unwrap();
        let x = parse_presentation(&k, 3, "(t1 + 1) (x) t1^2 ^ (t2 - 1)").unwrap();
        assert_eq!(parse_presentation(&k, 3, &x.render()).unwrap(), x);
        let s = parse_symbol(&k, "{t1, t2} - 2*{t1, t1 + 1}").unwrap();
        assert_eq!(parse_symbol(&k, &s.render()).unwrap(), s);
    }
}
