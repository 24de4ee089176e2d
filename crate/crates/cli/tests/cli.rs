use std::process::{Command, Output};

use addchow::parse::{parse_cycle, parse_elem, parse_form, parse_tower};
use addchow::random::Gen;

fn addchow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_addchow")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scenario(name: &str) -> String {
    format!("{}/../../scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn phi_example() {
    let o = addchow(&["phi", "--field", "Q(t)", "--n", "2", "--a", "t", "--b", "t"]);
    assert_eq!(o.status.code(), Some(0));
    let k = parse_tower("Q(t)").unwrap();
    let got = parse_cycle(&k, 2, &stdout(&o)).unwrap();
    let want = parse_cycle(&k, 2, "1 * (-1/t, 1/(t - 1), -1/(t*(t - 1))) over Q(t)").unwrap();
    assert_eq!(got, want);
}

#[test]
fn eval_example_round_trips() {
    let o = addchow(&["eval", "--point", "(-1 - t, t, 1)"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.trim(), "(-1/(t^2 + t)) dt");
    let k = parse_tower("Q(t)").unwrap();
    let f = parse_form(&k, out.trim()).unwrap();
    assert_eq!(f.render(), out.trim());
}

#[test]
fn scale_gives_the_starred_cycle() {
    let k = parse_tower("Q(t1,t2)").unwrap();
    let mut g = Gen::new(17);
    for _ in 0..20 {
        let (a, b1, b2) = (g.nonzero(&k), g.nonzero(&k), g.nonzero(&k));
        let lambda = g.nonzero(&k);
        let b = format!("{}, {}", b1.render(), b2.render());
        let base = ["phi", "--field", "Q(t1,t2)", "--n", "3", "--a"];
        let plain = addchow(&[&base[..], &[a.render().as_str(), "--b", b.as_str()]].concat());
        let lam = lambda.render();
        let scaled = addchow(&[&base[..], &[a.render().as_str(), "--b", b.as_str(), "--scale", lam.as_str()]].concat());
        assert_eq!((plain.status.code(), scaled.status.code()), (Some(0), Some(0)), "{}", String::from_utf8_lossy(&plain.stderr));
        let c0 = parse_cycle(&k, 3, &stdout(&plain)).unwrap();
        let c1 = parse_cycle(&k, 3, &stdout(&scaled)).unwrap();
        assert_eq!(c1, c0.star(&parse_elem(&k, &lam).unwrap()).unwrap());
    }
}

#[test]
fn dlog_of_steinberg_symbol_is_zero() {
    let o = addchow(&["dlog", "--symbol", "{t, 1 - t}"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("0\n"));
    let o = addchow(&["dlog", "--field", "Q(t1,t2)", "--symbol", "{t1, t2} - 2*{t2, t1 + 1}"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS  symbol square"));
}

#[test]
fn verify_lemma5_1_passes_with_anchors() {
    let o = addchow(&["verify", "--suite", "lemma5_1", "--n", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "PASS");
    let checks = v["suites"][0]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert!(!c["anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn verify_theorem_suite_small() {
    let o = addchow(&["verify", "--suite", "theorem5_2", "--field", "Q(t1,t2)", "--n", "3", "--count", "50", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("50/50"));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--suite", "prop4_2", "--n", "2", "--count", "10", "--seed", "3", "--format", "json"];
    assert_eq!(addchow(&args).stdout, addchow(&args).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(addchow(&["eval", "--point", "(1, 2"]).status.code(), Some(2));
    assert_eq!(addchow(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(addchow(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(addchow(&["phi", "--a", "t"]).status.code(), Some(2));
    // the printed (-1)^n sign fails at n = 1
    assert_eq!(addchow(&["nabla", "--point", "(-t, t)"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("even.json");
    let mut f: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(scenario("simplex2.json")).unwrap()).unwrap();
    f["field"] = "F2".into();
    f["weights"] = serde_json::json!([2, 1, 1]);
    f["expected"] = serde_json::json!({});
    f.as_object_mut().unwrap().remove("homogeneous");
    std::fs::write(&path, f.to_string()).unwrap();
    let o = addchow(&["degenerate", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("characteristic 2 divides 2"));
}

#[test]
fn elliptic_scenario_file() {
    let o = addchow(&["degenerate", "--scenario", &scenario("elliptic.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("PASS  expected nu"));
    assert!(out.contains("PASS  cusp d-Res"));
    assert!(out.contains("eps = -1"));
    let j = addchow(&["degenerate", "--scenario", "quadric2", "--format", "json"]);
    assert_eq!(j.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["s"], 3);
}

#[test]
fn trace_curve_command() {
    let o = addchow(&["trace-curve", "--field", "Q[th]/(th^2 - 2)", "--t", "th + 1", "--point", "(-1, 1/2, 1/2)"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("a1/a0 = 2, Tr(t) = 2"));
    assert!(out.contains("PASS  trace curve identity"));
}

#[test]
fn nabla_reports_the_sign() {
    let o = addchow(&["nabla", "--field", "Q(t1,t2)", "--point", "(-t1 - t2, t1, t2)"]);
    let out = stdout(&o);
    assert!(out.contains("gamma_n(nabla x)"));
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&addchow(&["nabla", "--field", "Q(t1,t2)", "--point", "(-t1 - t2, t1, t2)", "--format", "json"]))).unwrap();
    let k = parse_tower("Q(t1,t2)").unwrap();
    let p = addchow::parse::parse_point(&k, v["nabla"].as_str().unwrap()).unwrap();
    assert_eq!(p.dim(), 3);
}
