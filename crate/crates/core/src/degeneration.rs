//! Constant-modulus degenerations: substitute `u_i = t^{-r_i} v_i` into
//! `ω = g(u) du_1 ∧ … ∧ du_m`, split `ω = t^s ν + s t^{s-1} dt ∧ γ` and study
//! the limits at `t = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::forms::{gamma_form, nu_form, wedge_all, DifferentialForm};
use crate::parse::{parse_elem, parse_form, parse_tower};
use crate::poly::BaseField;
use crate::report::{Check, Status, SuiteReport};

/// On-disk description of a scenario. Polynomials and forms are infix strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub name: String,
    /// Ground field including any parameters, e.g. `Q(a,b)`.
    #[serde(default = "default_field")]
    pub field: String,
    pub variables: Vec<String>,
    pub weights: Vec<i64>,
    #[serde(default = "default_one")]
    pub numerator: String,
    #[serde(default = "default_one")]
    pub denominator: String,
    #[serde(default = "default_parameter")]
    pub parameter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_variables: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homogeneous: Option<HomogeneousFile>,
    #[serde(default)]
    pub expected: ExpectedFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cusp: Option<CuspFile>,
}

fn default_field() -> String {
    "Q".into()
}
fn default_one() -> String {
    "1".into()
}
fn default_parameter() -> String {
    "t".into()
}
fn default_cusp_parameter() -> String {
    "s".into()
}

/// A homogeneous `f(U_0, …, U_m)` with `g = 1/f(1, u)`; used for `s = N - Σ r_i`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomogeneousFile {
    pub variables: Vec<String>,
    pub polynomial: String,
}

/// Expected values, written over `field(t, v…)`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ExpectedFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_limit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_limit: Option<String>,
}

/// A plane curve `curve(v_1, v_2) = 0` in the limit, a claimed residue function
/// of `γ|_{t=0}` along it, and a parametrization of the curve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CuspFile {
    pub curve: String,
    pub residue: String,
    #[serde(default = "default_cusp_parameter")]
    pub parameter: String,
    pub parametrization: Vec<String>,
    /// Claimed image of the residue function under the parametrization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_image: Option<String>,
}

#[derive(Clone, Debug)]
struct Cusp {
    curve: Elem,
    residue: Elem,
    tower: FieldTower,
    images: Vec<Elem>,
    residue_image: Option<Elem>,
}

#[derive(Clone, Debug)]
struct Homogeneous {
    tower: FieldTower,
    poly: Elem,
}

/// A parsed scenario. The source field is `field(u…)`, the target `field(t, v…)`
/// (with `t` first, then the `v`'s, then the parameters).
#[derive(Clone, Debug)]
pub struct DegenerationScenario {
    pub name: String,
    pub weights: Vec<i64>,
    source: FieldTower,
    target: FieldTower,
    coefficient: Elem,
    homogeneous: Option<Homogeneous>,
    expected_s: Option<i64>,
    expected: [Option<DifferentialForm>; 4],
    cusp: Option<Cusp>,
}

/// The output of [`split`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub omega: DifferentialForm,
    pub s: i64,
    pub nu: DifferentialForm,
    pub gamma: DifferentialForm,
}

impl Split {
    pub fn nu_limit(&self) -> Result<DifferentialForm> {
        self.nu.restrict_zero(0)
    }

    pub fn gamma_limit(&self) -> Result<DifferentialForm> {
        self.gamma.restrict_zero(0)
    }

    /// `t^s ν + s t^{s-1} dt ∧ γ`.
    pub fn reconstruct(&self) -> Result<DifferentialForm> {
        let k = self.nu.tower();
        let dt = DifferentialForm::d(&k.var(0));
        let tail = dt
            .wedge(&self.gamma.mul_var_pow(0, self.s - 1))?
            .scale(&k.int(self.s));
        self.nu.mul_var_pow(0, self.s).add(&tail)
    }
}

impl DegenerationScenario {
    pub fn from_file(f: &ScenarioFile) -> Result<Self> {
        let ground = parse_tower(&f.field)?;
        if ground.extension().is_some() {
            return Err(Error::InvalidTower("degenerations need a ground field without extension".into()));
        }
        let m = f.variables.len();
        if f.weights.len() != m || m == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} variables",
                f.weights.len(),
                m
            )));
        }
        let limit_vars = f
            .limit_variables
            .clone()
            .unwrap_or_else(|| (1..=m).map(|i| format!("v{i}")).collect());
        if limit_vars.len() != m {
            return Err(Error::DimensionMismatch("limit variables must match the variables".into()));
        }
        let params = ground.vars().to_vec();
        let source = FieldTower::new(ground.base_field(), &[f.variables.clone(), params.clone()].concat())?;
        let target = FieldTower::new(
            ground.base_field(),
            &[vec![f.parameter.clone()], limit_vars, params.clone()].concat(),
        )?;
        let num = parse_elem(&source, &f.numerator)?;
        let den = parse_elem(&source, &f.denominator)?;
        let coefficient = num.try_div(&den)?;
        let homogeneous = match &f.homogeneous {
            None => None,
            Some(h) => {
                if h.variables.len() != m + 1 {
                    return Err(Error::DimensionMismatch("homogeneous variables must be U_0..U_m".into()));
                }
                let tower = FieldTower::new(
                    ground.base_field(),
                    &[h.variables.clone(), params.clone(), vec![f.parameter.clone()]].concat(),
                )?;
                let poly = parse_elem(&tower, &h.polynomial)?;
                Some(Homogeneous { tower, poly })
            }
        };
        let opt_form = |s: &Option<String>| s.as_deref().map(|s| parse_form(&target, s)).transpose();
        let expected = [
            opt_form(&f.expected.nu)?,
            opt_form(&f.expected.gamma)?,
            opt_form(&f.expected.nu_limit)?,
            opt_form(&f.expected.gamma_limit)?,
        ];
        let cusp = match &f.cusp {
            None => None,
            Some(c) => {
                if m != 2 {
                    return Err(Error::DimensionMismatch("the cusp check needs two variables".into()));
                }
                let tower = FieldTower::new(ground.base_field(), &[vec![c.parameter.clone()], params].concat())?;
                if c.parametrization.len() != m {
                    return Err(Error::DimensionMismatch("one image per limit variable".into()));
                }
                let images = c
                    .parametrization
                    .iter()
                    .map(|s| parse_elem(&tower, s))
                    .collect::<Result<Vec<_>>>()?;
                let residue_image = c.residue_image.as_deref().map(|s| parse_elem(&tower, s)).transpose()?;
                Some(Cusp {
                    curve: parse_elem(&target, &c.curve)?,
                    residue: parse_elem(&target, &c.residue)?,
                    tower,
                    images,
                    residue_image,
                })
            }
        };
        Ok(DegenerationScenario {
            name: f.name.clone(),
            weights: f.weights.clone(),
            source,
            target,
            coefficient,
            homogeneous,
            expected_s: f.expected.s,
            expected,
            cusp,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: format!("scenario file: {e}"),
        })?;
        Self::from_file(&f)
    }

    pub fn source(&self) -> &FieldTower {
        &self.source
    }

    pub fn target(&self) -> &FieldTower {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `ω = g du_1 ∧ … ∧ du_m` on the source.
    pub fn omega(&self) -> DifferentialForm {
        DifferentialForm::monomial(&self.coefficient, (0..self.dim()).collect()).expect("valid key")
    }

    /// Same scenario with other weights.
    pub fn with_weights(&self, weights: &[i64]) -> Result<Self> {
        if weights.len() != self.dim() {
            return Err(Error::DimensionMismatch("weight count".into()));
        }
        let mut out = self.clone();
        out.weights = weights.to_vec();
        out.homogeneous = None;
        out.expected_s = None;
        out.expected = [None, None, None, None];
        out.cusp = None;
        Ok(out)
    }

    /// Pull-back of `ω` along `u_i = t^{-r_i} v_i`.
    pub fn pulled_back(&self) -> Result<DifferentialForm> {
        let k = &self.target;
        let m = self.dim();
        let t = k.var(0);
        let mut images: Vec<Elem> = (0..m).map(|i| &t.pow(-self.weights[i]).unwrap() * &k.var(1 + i)).collect();
        images.extend((0..self.source.nvars() - m).map(|j| k.var(1 + m + j)));
        self.omega().pullback(k, &images)
    }

    /// `N - Σ r_i` with `N` the `t`-degree of `f(U_0, t^{r_1}U_1, …)`.
    pub fn homogeneous_s(&self) -> Option<Result<i64>> {
        let h = self.homogeneous.as_ref()?;
        Some((|| {
            let k = &h.tower;
            let m = self.dim();
            let t = k.var(k.nvars() - 1);
            let mut images: Vec<Elem> = (0..k.nvars()).map(|i| k.var(i)).collect();
            for i in 0..m {
                images[1 + i] = &t.pow(self.weights[i])? * &k.var(1 + i);
            }
            let f = k.eval_ratfn(h.poly.as_ratfn().unwrap(), &images)?;
            let r = f.as_ratfn().unwrap();
            if !r.den().is_constant() {
                return Err(Error::DegenerateData("f(U_0, t^r U) is not a polynomial".into()));
            }
            let n = r.num().degree_in(k.nvars() - 1) as i64;
            Ok(n - self.weights.iter().sum::<i64>())
        })())
    }
}

/// Splits the pulled-back form as `t^s ν + s t^{s-1} dt ∧ γ`.
pub fn split(sc: &DegenerationScenario) -> Result<Split> {
    let omega = sc.pulled_back()?;
    let (a, b) = omega.split_differential(0);
    if a.is_zero() {
        return Err(Error::DegenerateData("the dt-free part vanishes".into()));
    }
    let s = a.valuation_in(0);
    if s == 0 {
        return Err(Error::DegenerateData("s = 0".into()));
    }
    let p = sc.target.characteristic();
    if p != 0 && s.unsigned_abs() % p == 0 {
        return Err(Error::CharacteristicObstruction {
            characteristic: p,
            divisor: s,
        });
    }
    let k = &sc.target;
    let nu = a.mul_var_pow(0, -s);
    let gamma = b.mul_var_pow(0, 1 - s).scale(&k.int(s).inv()?);
    for (name, f) in [("gamma", &gamma), ("nu", &nu)] {
        if !f.is_zero() && f.valuation_in(0) < 0 {
            return Err(Error::NegativeLimitValuation(format!(
                "{name} has t-adic valuation {}",
                f.valuation_in(0)
            )));
        }
    }
    Ok(Split { omega, s, nu, gamma })
}

/// Applies `d` in the limit variables `v_1..v_m` only.
pub fn d_limit(sc: &DegenerationScenario, f: &DifferentialForm) -> DifferentialForm {
    let vs: Vec<usize> = (1..=sc.dim()).collect();
    f.d_form_in(&vs)
}

/// Result of running a scenario.
#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_limit: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_limit: Option<String>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ScenarioReport {
    pub fn status(&self) -> Status {
        crate::report::overall(self.checks.iter().map(|c| c.status))
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("scenario {} over {}\n", self.scenario, self.field);
        let rows = [
            ("s", self.s.map(|s| s.to_string())),
            ("nu", self.nu.clone()),
            ("gamma", self.gamma.clone()),
            ("nu|t=0", self.nu_limit.clone()),
            ("gamma|t=0", self.gamma_limit.clone()),
        ];
        for (k, v) in rows {
            if let Some(v) = v {
                s.push_str(&format!("  {k} = {v}\n"));
            }
        }
        for c in &self.checks {
            s.push_str(&c.render_text());
            s.push('\n');
        }
        for n in &self.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }

    pub fn into_suite(self) -> SuiteReport {
        let mut r = SuiteReport::new(&format!("degeneration/{}", self.scenario));
        r.checks = self.checks;
        r
    }
}

const A_SPLIT: &str = "omega = t^s nu + s t^(s-1) dt ^ gamma";
const A_LIMIT: &str = "nu|t=0 = d gamma|t=0";
const A_HOMOG: &str = "s = N - sum r_i";

fn obstruction_status(e: &Error) -> Check {
    match e {
        Error::CharacteristicObstruction { .. } => Check::skipped("split", A_SPLIT, e.to_string()),
        _ => {
            let mut c = Check::new("split", A_SPLIT);
            c.record_error(e, || "split".into());
            c
        }
    }
}

/// Splits, reconstructs, takes limits and compares against the expectations.
pub fn run(sc: &DegenerationScenario) -> ScenarioReport {
    let mut rep = ScenarioReport {
        scenario: sc.name.clone(),
        field: sc.target.to_string(),
        s: None,
        nu: None,
        gamma: None,
        nu_limit: None,
        gamma_limit: None,
        checks: Vec::new(),
        notes: Vec::new(),
    };
    let sp = match split(sc) {
        Ok(sp) => sp,
        Err(e) => {
            rep.checks.push(obstruction_status(&e));
            return rep;
        }
    };
    rep.s = Some(sp.s);
    rep.nu = Some(sp.nu.render());
    rep.gamma = Some(sp.gamma.render());
    let rec = sp.reconstruct();
    rep.checks.push(Check::single(
        "reconstruction",
        A_SPLIT,
        rec.as_ref().is_ok_and(|r| r == &sp.omega),
        "",
    ));
    if let Some(es) = sc.expected_s {
        rep.checks.push(Check::single(
            "s",
            "s = t-adic valuation of the dt-free part",
            es == sp.s,
            format!("expected {es}, computed {}", sp.s),
        ));
    }
    if let Some(h) = sc.homogeneous_s() {
        let c = match h {
            Ok(hs) => Check::single("homogeneous s", A_HOMOG, hs == sp.s, format!("N - sum r = {hs}, valuation s = {}", sp.s)),
            Err(e) => Check::single("homogeneous s", A_HOMOG, false, e.to_string()),
        };
        rep.checks.push(c);
    }
    let limits = sp.nu_limit().and_then(|n| Ok((n, sp.gamma_limit()?)));
    match limits {
        Err(e) => rep.checks.push(Check::single("limits", A_LIMIT, false, e.to_string())),
        Ok((nu0, ga0)) => {
            rep.nu_limit = Some(nu0.render());
            rep.gamma_limit = Some(ga0.render());
            let dg = d_limit(sc, &ga0);
            rep.checks.push(Check::single(
                "limit identity",
                A_LIMIT,
                dg == nu0,
                if dg == nu0 { String::new() } else { format!("d gamma|t=0 = {}", dg.render()) },
            ));
            let names = ["nu", "gamma", "nu|t=0", "gamma|t=0"];
            let got = [&sp.nu, &sp.gamma, &nu0, &ga0];
            for i in 0..4 {
                if let Some(e) = &sc.expected[i] {
                    let ok = e == got[i];
                    rep.checks.push(Check::single(
                        &format!("expected {}", names[i]),
                        &format!("{} = {}", names[i], e.render()),
                        ok,
                        if ok { String::new() } else { format!("computed {}", got[i].render()) },
                    ));
                }
            }
            if let Some(c) = &sc.cusp {
                rep.checks.extend(cusp_checks(c, &nu0, &ga0));
            }
        }
    }
    rep
}

const A_CUSP_RES: &str = "Res(gamma|t=0) = h along the curve, pulled back";
const A_CUSP_D: &str = "d Res(gamma|t=0) = eps * Res(nu|t=0) on the curve";

/// Residues along the curve `g = 0` checked on its parametrization.
fn cusp_checks(c: &Cusp, nu0: &DifferentialForm, ga0: &DifferentialForm) -> Vec<Check> {
    let mut out = Vec::new();
    match cusp_data(c, nu0, ga0) {
        Err(e) => out.push(Check::unsupported("cusp residue", A_CUSP_RES, e.to_string())),
        Ok(d) => {
            let mut detail = format!(
                "residue function {} pulls back to {}; claimed {} pulls back to {}",
                d.h.render(),
                d.h_pull.render(),
                c.residue.render(),
                d.claim_pull.render()
            );
            let mut ok = d.beta_regular && d.h_pull == d.claim_pull;
            if let Some(img) = &c.residue_image {
                ok &= &d.h_pull == img;
                detail.push_str(&format!("; expected image {}", img.render()));
            }
            if !d.beta_regular {
                detail.push_str("; remainder has a pole along the curve");
            }
            out.push(Check::single("cusp residue", A_CUSP_RES, ok, detail));
            let detail = format!(
                "d({}) = {}; Res(nu|t=0) = {} pulls back to {}; eps = {}",
                d.h_pull.render(),
                d.dh.render(),
                d.res_nu.render(),
                d.res_nu_pull.render(),
                d.eps.map_or("none".into(), |e| e.to_string())
            );
            out.push(Check::single("cusp d-Res", A_CUSP_D, d.eps.is_some(), detail));
        }
    }
    out
}

struct CuspData {
    h: Elem,
    beta_regular: bool,
    h_pull: Elem,
    claim_pull: Elem,
    res_nu: DifferentialForm,
    res_nu_pull: DifferentialForm,
    dh: DifferentialForm,
    eps: Option<i64>,
}

fn cusp_data(c: &Cusp, nu0: &DifferentialForm, ga0: &DifferentialForm) -> Result<CuspData> {
    let g = &c.curve;
    let g1 = g.partial(1);
    if g1.is_zero() {
        return Err(Error::DegenerateData("the curve has vanishing partial in v1".into()));
    }
    let dg = DifferentialForm::d(g);
    // γ|0 = η/g with η = h dg + g β
    let eta = ga0.scale(g);
    let h = eta.coeff(&[1]).try_div(&g1)?;
    let beta = eta.sub(&dg.scale(&h))?.scale(&g.inv()?);
    let gpoly = g.as_ratfn().unwrap().num().clone();
    let beta_regular = beta.terms().values().all(|b| {
        let den = b.as_ratfn().unwrap().den();
        den.gcd(&gpoly).is_constant()
    });
    // ν|0 = K dv1∧dv2 = (gK/∂_1 g) dlog g ∧ dv2
    let kcoef = nu0.coeff(&[1, 2]);
    let res_nu = DifferentialForm::monomial(&(&(&kcoef * g) / &g1), vec![2])?;
    let ct = &c.tower;
    let mut images = vec![ct.zero()];
    images.extend(c.images.iter().cloned());
    images.extend((1..ct.nvars()).map(|i| ct.var(i)));
    let h_pull = ct.eval_ratfn(h.as_ratfn().unwrap(), &images)?;
    let claim_pull = ct.eval_ratfn(c.residue.as_ratfn().unwrap(), &images)?;
    let res_nu_pull = res_nu.pullback(ct, &images)?;
    let dh = DifferentialForm::d(&h_pull);
    let eps = if dh == res_nu_pull {
        Some(1)
    } else if dh == res_nu_pull.neg() {
        Some(-1)
    } else {
        None
    };
    Ok(CuspData {
        h,
        beta_regular,
        h_pull,
        claim_pull,
        res_nu,
        res_nu_pull,
        dh,
        eps,
    })
}

fn base_name(base: BaseField) -> String {
    match base {
        BaseField::Rationals => "Q".into(),
        BaseField::Prime(p) => format!("F{p}"),
    }
}

fn names(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

/// `g = 1/(u_0 u_1 ⋯ u_{n+1})` with `u_0 = 1 - Σ u_i`, all weights 1.
pub fn simplex_file(base: BaseField, n: usize) -> ScenarioFile {
    let m = n + 1;
    let us = names("u", 1..=m);
    let sum = us.join(" - ");
    let us_up: Vec<String> = std::iter::once("U0".to_string()).chain(names("U", 1..=m)).collect();
    let hom = format!("{}*(U0 - {})", names("U", 1..=m).join("*"), names("U", 1..=m).join(" - "));
    ScenarioFile {
        name: format!("simplex{n}"),
        field: base_name(base),
        variables: us.clone(),
        weights: vec![1; m],
        numerator: "1".into(),
        denominator: format!("(1 - {sum})*{}", us.join("*")),
        parameter: "t".into(),
        limit_variables: None,
        homogeneous: Some(HomogeneousFile {
            variables: us_up,
            polynomial: hom,
        }),
        expected: ExpectedFile {
            s: Some(1),
            ..Default::default()
        },
        cusp: None,
    }
}

/// `g = 1/(u_1^2 - u_2^3 - a u_2 - b)` with weights `(3, 2)`.
pub fn elliptic_file(base: BaseField) -> ScenarioFile {
    let f = "v1^2 - v2^3 - a*t^4*v2 - b*t^6";
    ScenarioFile {
        name: "elliptic".into(),
        field: format!("{}(a,b)", base_name(base)),
        variables: vec!["u1".into(), "u2".into()],
        weights: vec![3, 2],
        numerator: "1".into(),
        denominator: "u1^2 - u2^3 - a*u2 - b".into(),
        parameter: "t".into(),
        limit_variables: None,
        homogeneous: Some(HomogeneousFile {
            variables: vec!["U0".into(), "U1".into(), "U2".into()],
            polynomial: "U0*U1^2 - U2^3 - a*U0^2*U2 - b*U0^3".into(),
        }),
        expected: ExpectedFile {
            s: Some(1),
            nu: Some(format!("(1/({f})) dv1^dv2")),
            gamma: Some(format!("(2*v2/({f})) dv1 - (3*v1/({f})) dv2")),
            nu_limit: None,
            gamma_limit: None,
        },
        cusp: Some(CuspFile {
            curve: "v1^2 - v2^3".into(),
            residue: "v2/v1".into(),
            parameter: "s".into(),
            parametrization: vec!["s^3".into(), "s^2".into()],
            residue_image: Some("1/s".into()),
        }),
    }
}

/// `g = 1/(Σ u_i^2 - 1)^n` in `2n - 1` variables, all weights `-1`.
pub fn quadric_file(base: BaseField, n: usize) -> ScenarioFile {
    let m = 2 * n - 1;
    let us = names("u", 1..=m);
    let sq: Vec<String> = us.iter().map(|u| format!("{u}^2")).collect();
    ScenarioFile {
        name: format!("quadric{n}"),
        field: base_name(base),
        variables: us,
        weights: vec![-1; m],
        numerator: "1".into(),
        denominator: format!("({} - 1)^{n}", sq.join(" + ")),
        parameter: "t".into(),
        limit_variables: None,
        homogeneous: None,
        expected: ExpectedFile {
            s: Some(m as i64),
            ..Default::default()
        },
        cusp: None,
    }
}

/// `Σ_{i=1}^m sign(i) v_i dv_1 ∧ … \hat{dv_i} … ∧ dv_m` in the target of `sc`.
fn alternating_sum(sc: &DegenerationScenario, sign: impl Fn(usize) -> i64) -> Result<DifferentialForm> {
    let k = &sc.target;
    let m = sc.dim();
    let mut acc = DifferentialForm::zero(k, m - 1);
    for i in 1..=m {
        let key: Vec<usize> = (1..=m).filter(|&j| j != i).collect();
        let c = &k.int(sign(i)) * &k.var(i);
        acc = acc.add(&DifferentialForm::monomial(&c, key)?)?;
    }
    Ok(acc)
}

fn volume(sc: &DegenerationScenario) -> DifferentialForm {
    DifferentialForm::monomial(&sc.target.one(), (1..=sc.dim()).collect()).unwrap()
}

/// Embeds a form on `base(v_1..v_m)` into the target of `sc`.
fn to_target(sc: &DegenerationScenario, f: &DifferentialForm) -> Result<DifferentialForm> {
    let images: Vec<Elem> = (1..=f.tower().nvars()).map(|i| sc.target.var(i)).collect();
    f.pullback(&sc.target, &images)
}

/// `du/(u_0 ∏u) = Σ_{i=0}^{m} (-1)^i ∧_{j≠i} dlog u_j` on the source of a simplex scenario.
pub fn simplex_dlog_identity(sc: &DegenerationScenario) -> Result<bool> {
    let k = &sc.source;
    let m = sc.dim();
    let us: Vec<Elem> = (0..m).map(|i| k.var(i)).collect();
    let u0 = us.iter().fold(k.one(), |a, u| &a - u);
    let all: Vec<Elem> = std::iter::once(u0).chain(us).collect();
    let logs: Vec<DifferentialForm> = all.iter().map(DifferentialForm::dlog).collect::<Result<_>>()?;
    let mut rhs = DifferentialForm::zero(k, m);
    for i in 0..=m {
        let rest: Vec<DifferentialForm> = logs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| f.clone()).collect();
        let w = wedge_all(k, &rest)?;
        rhs = if i % 2 == 0 { rhs.add(&w)? } else { rhs.sub(&w)? };
    }
    Ok(rhs == sc.omega())
}

/// The simplex scenario with the closed-form limit comparisons.
pub fn simplex_report(base: BaseField, n: usize) -> Result<ScenarioReport> {
    let sc = DegenerationScenario::from_file(&simplex_file(base, n))?;
    let mut rep = run(&sc);
    rep.checks.push(Check::single(
        "dlog expansion",
        "du/(u0 prod u) = sum_i (-1)^i wedge_{j!=i} dlog u_j",
        simplex_dlog_identity(&sc)?,
        "",
    ));
    if let Ok(sp) = split(&sc) {
        let (nu0, ga0) = (sp.nu_limit()?, sp.gamma_limit()?);
        let g = to_target(&sc, &gamma_form(base, n + 1))?;
        let nu = to_target(&sc, &nu_form(base, n + 1))?;
        rep.checks.push(Check::single(
            "gamma limit",
            "gamma|t=0 = (1/v0) sum_i (-1)^i dlog v_1 ^ .. omit i .. ^ dlog v_m",
            ga0 == g,
            "",
        ));
        rep.checks.push(Check::single(
            "nu limit",
            "nu|t=0 = dv_1 ^ .. ^ dv_m / (v0 v1 .. vm)",
            nu0 == nu,
            "",
        ));
        rep.checks.push(Check::single(
            "closed forms",
            "d gamma_(m-1) = nu_m on Q^m",
            gamma_form(base, n + 1).d_form() == nu_form(base, n + 1),
            "",
        ));
    }
    Ok(rep)
}

/// The elliptic scenario, with the cusp check and a note on the printed middle term.
pub fn elliptic_report(base: BaseField) -> Result<ScenarioReport> {
    let mut file = elliptic_file(base);
    let p = base.characteristic();
    if p == 2 || p == 3 {
        file.cusp = None;
    }
    let sc = DegenerationScenario::from_file(&file)?;
    let mut rep = run(&sc);
    if sc.cusp.is_some() {
        let ct = &sc.cusp.as_ref().unwrap().tower;
        let s = ct.var(0);
        let printed = &(&s * &s) * &ct.rational(-1, 2)?;
        let printed_d = DifferentialForm::d(&printed);
        rep.notes.push(format!(
            "the constant-coefficient middle term -dv2/2 pulls back to {}, not to d(1/s) = {}",
            printed_d.render(),
            DifferentialForm::d(&s.inv()?).render()
        ));
    } else {
        rep.checks.push(Check::skipped("cusp residue", A_CUSP_RES, format!("characteristic {p}")));
    }
    Ok(rep)
}

/// The quadric scenario with the displayed expansion and limit comparisons.
/// The displayed sum `Σ(-1)^i` is matched with `i` counted from 0.
pub fn quadric_report(base: BaseField, n: usize) -> Result<ScenarioReport> {
    let sc = DegenerationScenario::from_file(&quadric_file(base, n))?;
    let mut rep = run(&sc);
    let k = &sc.target;
    let m = sc.dim() as i64;
    let t = k.var(0);
    let q = (1..=sc.dim()).fold(k.zero(), |a, i| &a + &(&k.var(i) * &k.var(i)));
    let den = (&(&(&t * &t) * &q) - &k.one()).pow(n as i64)?;
    let dt = DifferentialForm::d(&t);
    let pick = |sign: i64| -> Result<DifferentialForm> {
        let alt = alternating_sum(&sc, |i| if (i - 1) % 2 == 0 { sign } else { -sign })?;
        volume(&sc)
            .scale(&t.pow(m)?)
            .add(&dt.wedge(&alt)?.scale(&t.pow(m - 1)?))
            .map(|f| f.scale(&den.inv().unwrap()))
    };
    let omega = sc.pulled_back()?;
    let (plus, minus) = (pick(1)?, pick(-1)?);
    let which = if omega == plus {
        Some("(-1)^(i-1) for i = 1..m")
    } else if omega == minus {
        Some("(-1)^i for i = 1..m")
    } else {
        None
    };
    rep.checks.push(Check::single(
        "quadric expansion",
        "omega = (t^m dv_1..m + t^(m-1) dt ^ sum +-v_i dv_1..omit i..m) / (t^2 sum v_i^2 - 1)^n",
        which.is_some(),
        which.map_or("no sign matches".into(), |w| format!("sign {w}")),
    ));
    if let Ok(sp) = split(&sc) {
        let (nu0, ga0) = (sp.nu_limit()?, sp.gamma_limit()?);
        let vol = volume(&sc);
        let sign = if nu0 == vol {
            Some(1)
        } else if nu0 == vol.neg() {
            Some(-1)
        } else {
            None
        };
        rep.checks.push(Check::single(
            "quadric nu limit",
            "nu|t=0 = +-dv_1 ^ .. ^ dv_m",
            sign.is_some(),
            sign.map_or("not a multiple of the volume form".into(), |s| format!("sign {s:+}")),
        ));
        let inv_m = k.int(m).inv()?;
        let g_plus = alternating_sum(&sc, |i| if (i - 1) % 2 == 0 { 1 } else { -1 })?.scale(&inv_m);
        let which = if ga0 == g_plus {
            Some("(-1)^(i-1) for i = 1..m")
        } else if ga0 == g_plus.neg() {
            Some("(-1)^i for i = 1..m")
        } else {
            None
        };
        rep.checks.push(Check::single(
            "quadric gamma limit",
            "gamma|t=0 = (1/m) sum +-v_i dv_1 ^ .. omit i .. ^ dv_m",
            which.is_some(),
            which.map_or("no sign matches".into(), |w| format!("sign {w}")),
        ));
    }
    Ok(rep)
}

/// Builtin scenarios by name: `simplex1`..`simplex3`, `elliptic`, `quadric2`.
pub fn builtin(name: &str, base: BaseField) -> Option<Result<ScenarioReport>> {
    if let Some(n) = name.strip_prefix("simplex").and_then(|s| s.parse::<usize>().ok()) {
        return (n >= 1).then(|| simplex_report(base, n));
    }
    if let Some(n) = name.strip_prefix("quadric").and_then(|s| s.parse::<usize>().ok()) {
        return (n >= 1).then(|| quadric_report(base, n));
    }
    (name == "elliptic").then(|| elliptic_report(base))
}

pub const BUILTINS: &[&str] = &["simplex1", "simplex2", "simplex3", "elliptic", "quadric2"];

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_all_pass(rep: &ScenarioReport) {
        for c in &rep.checks {
            assert_eq!(c.status, Status::Pass, "{}", rep.render_text());
        }
    }

    #[test]
    fn simplex_limits() {
        for n in 1..=3 {
            let rep = simplex_report(BaseField::Rationals, n).unwrap();
            assert_eq!(rep.s, Some(1));
            assert_all_pass(&rep);
        }
    }

    #[test]
    fn elliptic_matches_display() {
        let rep = elliptic_report(BaseField::Rationals).unwrap();
        assert_all_pass(&rep);
        let d = rep.checks.iter().find(|c| c.name == "cusp d-Res").unwrap();
        assert!(d.detail.contains("eps = -1"), "{}", d.detail);
        let r = rep.checks.iter().find(|c| c.name == "cusp residue").unwrap();
        assert!(r.detail.contains("pulls back to 1/s"), "{}", r.detail);
    }

    #[test]
    fn quadric_limits() {
        let rep = quadric_report(BaseField::Rationals, 2).unwrap();
        assert_eq!(rep.s, Some(3));
        assert_all_pass(&rep);
        assert_eq!(rep.nu_limit.as_deref(), Some("(1) dv1^dv2^dv3"));
    }

    #[test]
    fn characteristic_obstruction() {
        let sc = DegenerationScenario::from_file(&quadric_file(BaseField::Prime(3), 2)).unwrap();
        assert!(matches!(split(&sc), Err(Error::CharacteristicObstruction { characteristic: 3, divisor: 3 })));
        assert_eq!(run(&sc).checks[0].status, Status::Skip);
    }

    #[test]
    fn negative_valuation() {
        let sc = DegenerationScenario::from_file(&simplex_file(BaseField::Rationals, 1)).unwrap();
        let bad = sc.with_weights(&[1, -1]).unwrap();
        let r = split(&bad);
        assert!(r.is_err() || r.unwrap().reconstruct().is_ok());
    }

    #[test]
    fn json_round_trip() {
        let f = elliptic_file(BaseField::Rationals);
        let text = serde_json::to_string_pretty(&f).unwrap();
        let sc = DegenerationScenario::from_json(&text).unwrap();
        assert_eq!(run(&sc).status(), Status::Pass);
    }
}
