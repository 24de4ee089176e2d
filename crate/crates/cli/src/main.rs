use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use addchow::cycles::{nabla, phi, phi_in_coordinates, ZeroCycle};
use addchow::curves::{curve_boundary, trace_curve, trace_ratio};
use addchow::degeneration::{self, DegenerationScenario, ScenarioReport};
use addchow::factor::minimal_polynomial;
use addchow::milnor::{iota, symbol_to_point};
use addchow::parse::{parse_elem, parse_point, parse_presentation, parse_symbol, parse_tower, parse_tuple};
use addchow::report::{exit_code, Check, Status};
use addchow::verify::{self, VerifyConfig};
use addchow::{Error, FieldTower, PresentationElement, QPoint};

#[derive(Parser)]
#[command(name = "addchow", version, about = "Additive higher Chow groups of 0-cycles and Kähler forms, computed exactly")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Field tower, e.g. `Q(t1,t2)`, `F5(t)`, `Q(t)[th]/(th^2 - t)`.
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    count: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Coordinate scale λ for `phi`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    scale: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// The cycle phi(a (x) b_1 ^ .. ^ b_{n-1}), or of a whole presentation element.
    Phi {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Comma-separated wedge entries, optionally parenthesized.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// A sum like `a (x) b1 ^ b2 - c (x) d1 ^ d2`.
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["a", "b"])]
        element: Option<String>,
    },
    /// eval_gamma of a point of Q^n.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// dlog of a Milnor symbol, with the symbol-to-cycle comparison.
    Dlog {
        /// E.g. `{t, 1 - t} - 2*{t, t + 1}`.
        #[arg(long, allow_hyphen_values = true)]
        symbol: String,
    },
    /// Split a degenerating form and take limits; a JSON file or a builtin name.
    Degenerate {
        #[arg(long)]
        scenario: String,
    },
    /// The trace curve of t in k' = k[th]/(P) through (-1, α_1, .., α_n).
    TraceCurve {
        /// Element of the extension given by --field.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// The point (-1, α_1, .., α_n) over the ground field.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// The map ∇ and the comparison of γ_n(∇x) with dγ_{n-1}(x).
    Nabla {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

/// Outcome of one command: rendered output plus the exit status.
struct Outcome {
    text: String,
    json: Value,
    status: Status,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let format = cli.common.format;
    match execute(&cli) {
        Ok(out) => {
            match format {
                Format::Text => print!("{}", ensure_newline(out.text)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
            }
            ExitCode::from(exit_code(out.status) as u8)
        }
        Err(e) => {
            match format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => println!("{}", json!({ "error": e.to_string() })),
            }
            ExitCode::from(error_code(&e))
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::UnsupportedDegree(_) | Error::CharacteristicObstruction { .. } => 3,
        _ => 2,
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse { pos: 0, msg: msg.into() }
}

fn tower(c: &Common) -> addchow::Result<FieldTower> {
    parse_tower(c.field.as_deref().unwrap_or("Q(t)"))
}

fn execute(cli: &Cli) -> addchow::Result<Outcome> {
    let c = &cli.common;
    match &cli.cmd {
        Cmd::Verify { suite } => cmd_verify(c, suite),
        Cmd::Phi { a, b, element } => cmd_phi(c, a.as_deref(), b.as_deref(), element.as_deref()),
        Cmd::Eval { point } => cmd_eval(c, point),
        Cmd::Dlog { symbol } => cmd_dlog(c, symbol),
        Cmd::Degenerate { scenario } => cmd_degenerate(c, scenario),
        Cmd::TraceCurve { t, point } => cmd_trace(c, t, point),
        Cmd::Nabla { point } => cmd_nabla(c, point),
    }
}

fn cmd_verify(c: &Common, suite: &str) -> addchow::Result<Outcome> {
    let cfg = VerifyConfig {
        field: c.field.as_deref().map(parse_tower).transpose()?,
        n: c.n,
        count: c.count,
        seed: c.seed,
    };
    let rep = verify::run(suite, &cfg)?;
    Ok(Outcome {
        text: rep.render_text(),
        json: serde_json::to_value(&rep).expect("report serializes"),
        status: rep.status,
    })
}

/// `t, 1 - t` or `(t, 1 - t)`.
fn entries(k: &FieldTower, s: &str) -> addchow::Result<Vec<addchow::Elem>> {
    let s = s.trim();
    parse_tuple(k, &format!("({s})")).or_else(|e| if s.starts_with('(') { parse_tuple(k, s) } else { Err(e) })
}

fn cmd_phi(c: &Common, a: Option<&str>, b: Option<&str>, element: Option<&str>) -> addchow::Result<Outcome> {
    let k = tower(c)?;
    let x = match element {
        Some(e) => {
            let n = c.n.ok_or_else(|| usage("--element needs --n"))?;
            parse_presentation(&k, n, e)?
        }
        None => {
            let a = parse_elem(&k, a.ok_or_else(|| usage("phi needs --a and --b, or --element"))?)?;
            let b = entries(&k, b.ok_or_else(|| usage("phi needs --b"))?)?;
            if let Some(n) = c.n {
                if b.len() + 1 != n {
                    return Err(usage(format!("--n {n} needs {} entries in --b, got {}", n - 1, b.len())));
                }
            }
            PresentationElement::term(&a, &b)?
        }
    };
    let (cycle, lambda) = match &c.scale {
        Some(l) => {
            let l = parse_elem(&k, l)?;
            (phi_in_coordinates(&x, &l)?, Some(l))
        }
        None => (phi(&x)?, None),
    };
    let mut j = json!({ "field": k.to_string(), "element": x.render(), "cycle": cycle.render() });
    if let Some(l) = &lambda {
        j["scale"] = json!(l.render());
    }
    Ok(Outcome {
        text: cycle.render(),
        json: j,
        status: Status::Pass,
    })
}

fn cmd_eval(c: &Common, point: &str) -> addchow::Result<Outcome> {
    let k = tower(c)?;
    let p = parse_point(&k, point)?;
    let form = p.eval_gamma()?;
    Ok(Outcome {
        text: form.render(),
        json: json!({ "field": k.to_string(), "point": p.render(), "form": form.render() }),
        status: Status::Pass,
    })
}

fn sign(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn cmd_dlog(c: &Common, symbol: &str) -> addchow::Result<Outcome> {
    let k = tower(c)?;
    let s = parse_symbol(&k, symbol)?;
    let form = s.dlog()?;
    let n = s.weight() + 1;
    let mut cyc = ZeroCycle::zero(&k, n);
    for (m, e) in s.terms() {
        if let Some(u) = symbol_to_point(e)? {
            cyc = cyc.add(&ZeroCycle::point(iota(&u)?)?.scaled(*m))?;
        }
    }
    let image = cyc.eval_gamma()?;
    let check = Check::single(
        "symbol square",
        "eval_gamma(iota(symbol_to_point(s))) = (-1)^(n+1) dlog s",
        image == form.scale(&k.int(sign(n + 1))),
        format!("eval_gamma of the cycle = {}", image.render()),
    );
    let text = format!("{}\n{}\n{}", form.render(), cyc.render(), check.render_text());
    Ok(Outcome {
        json: json!({
            "field": k.to_string(),
            "symbol": s.render(),
            "dlog": form.render(),
            "cycle": cyc.render(),
            "checks": [check],
        }),
        status: check.status,
        text,
    })
}

fn scenario_outcome(rep: ScenarioReport) -> Outcome {
    let mut status = rep.status();
    if rep.s.is_none() && status != Status::Fail {
        status = Status::Unsupported;
    }
    Outcome {
        text: rep.render_text(),
        json: serde_json::to_value(&rep).expect("report serializes"),
        status,
    }
}

fn cmd_degenerate(c: &Common, scenario: &str) -> addchow::Result<Outcome> {
    if !Path::new(scenario).exists() {
        let base = c.field.as_deref().map(parse_tower).transpose()?.map(|k| k.base_field());
        if let Some(rep) = degeneration::builtin(scenario, base.unwrap_or(addchow::BaseField::Rationals)) {
            return Ok(scenario_outcome(rep?));
        }
        return Err(usage(format!(
            "no scenario file `{scenario}` and no builtin of that name (builtins: {})",
            degeneration::BUILTINS.join(", ")
        )));
    }
    let text = std::fs::read_to_string(scenario).map_err(|e| usage(format!("{scenario}: {e}")))?;
    let sc = DegenerationScenario::from_json(&text)?;
    Ok(scenario_outcome(degeneration::run(&sc)))
}

fn cmd_trace(c: &Common, t: &str, point: &str) -> addchow::Result<Outcome> {
    let kp = tower(c)?;
    if kp.extension().is_none() {
        return Err(usage("trace-curve needs --field with an extension, e.g. `Q[th]/(th^2 - 2)`"));
    }
    let k = kp.base_tower();
    if k.extension().is_some() {
        return Err(usage("the ground field of --field must not itself be an extension"));
    }
    let t = parse_elem(&kp, t)?;
    if t.in_base() {
        return Err(usage("--t must generate the extension"));
    }
    let alpha = parse_point(&k, point)?;
    let n = alpha.dim();
    let p = minimal_polynomial(&(-t.inv()?));
    let r = trace_ratio(&p)?;
    let tr = t.trace()?;
    let lifted = QPoint::new(alpha.coords().iter().map(|x| kp.embed(x)).collect::<addchow::Result<_>>()?)?;
    let left = ZeroCycle::point(alpha.clone())?.star(&r)?.eval_gamma()?;
    let right = lifted.star(&t)?.eval_gamma_over(&k)?;
    let w = trace_curve(&p, &alpha)?;
    let bd = curve_boundary(&w)?;
    let lhs = bd.eval_gamma()?.scale(&k.int(sign(n)));
    let checks = vec![
        Check::single(
            "trace ratio",
            "a1/a0 = Tr(t), V^N + .. + a1 V + a0 the minimal polynomial of -1/t",
            r == tr,
            format!("a1/a0 = {}, Tr(t) = {}", r.render(), tr.render()),
        ),
        Check::single(
            "trace curve identity",
            "eval_gamma((-1)^n boundary W) = eval_gamma((a1/a0)*p) - Tr eval_gamma(t*p)",
            lhs == left.sub(&right)?,
            format!("eval_gamma((-1)^n boundary W) = {}", lhs.render()),
        ),
    ];
    let status = addchow::report::overall(checks.iter().map(|c| c.status));
    let mut text = format!(
        "minimal polynomial of -1/t: {}\ncurve: {}\nboundary:\n{}\n",
        p.render("V"),
        w.render(),
        bd.render()
    );
    for ch in &checks {
        text.push_str(&ch.render_text());
        text.push('\n');
    }
    Ok(Outcome {
        text,
        json: json!({
            "field": kp.to_string(),
            "t": t.render(),
            "minimal_polynomial": p.render("V"),
            "curve": w.render(),
            "boundary": bd.render(),
            "checks": checks,
        }),
        status,
    })
}

fn cmd_nabla(c: &Common, point: &str) -> addchow::Result<Outcome> {
    let k = tower(c)?;
    let x = parse_point(&k, point)?;
    let n = x.dim();
    let y = nabla(&x)?;
    let lhs = y.eval_gamma()?;
    let dg = x.eval_gamma()?.d_form();
    let relation = if lhs.is_zero() && dg.is_zero() {
        "both sides zero"
    } else if lhs == dg {
        "gamma_n(nabla x) = +d gamma_{n-1}(x)"
    } else if lhs == dg.neg() {
        "gamma_n(nabla x) = -d gamma_{n-1}(x)"
    } else {
        "gamma_n(nabla x) is not +-d gamma_{n-1}(x)"
    };
    let check = Check::single(
        "nabla",
        "gamma_n(nabla x) = (-1)^n d gamma_{n-1}(x)",
        lhs == dg.scale(&k.int(sign(n))),
        relation,
    );
    let text = format!(
        "{}\ngamma_n(nabla x) = {}\nd gamma_(n-1)(x) = {}\n{}",
        y.render(),
        lhs.render(),
        dg.render(),
        check.render_text()
    );
    Ok(Outcome {
        json: json!({
            "field": k.to_string(),
            "point": x.render(),
            "nabla": y.render(),
            "gamma_of_nabla": lhs.render(),
            "d_gamma": dg.render(),
            "checks": [check],
        }),
        status: check.status,
        text,
    })
}
