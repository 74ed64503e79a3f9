use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

const DELTA_ONE: &str = r#"{"domain":"halfplane","atoms":[{"pos":1,"mass":1}]}"#;
const EMPTY_DISC: &str = r#"{"domain":"disc"}"#;
const DISC_SINGULAR: &str = r#"{"domain":"disc","densities":[{"kind":"power","coeff":1.0,"exponent":-0.5,"base":"one_minus_x","support":[-1.0,1.0]}]}"#;
const HP_SINGULAR: &str = r#"{"domain":"halfplane","densities":[{"kind":"power","coeff":1.0,"exponent":-0.5,"base":"lambda","support":[0,1]}]}"#;
const HP_LEBESGUE: &str =
    r#"{"domain":"halfplane","densities":[{"kind":"power","coeff":1.0,"exponent":0,"base":"lambda","support":[0,1]}]}"#;

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Self {
        Work {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn spec(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_carleson"));
    cmd.args(args).env_remove("CARLESON_THREADS");
    if let Some(t) = threads {
        cmd.env("CARLESON_THREADS", t);
    }
    cmd.output().unwrap()
}

fn run_to(command: &str, spec: &Path, out: &Path, extra: &[&str]) -> (i32, Value) {
    let mut args = vec![
        command,
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = run(&args, None);
    let code = o.status.code().unwrap();
    let v = std::fs::read_to_string(out)
        .map(|s| serde_json::from_str(&s).unwrap())
        .unwrap_or(Value::Null);
    (code, v)
}

#[test]
fn widom_example_on_delta_one() {
    let w = Work::new();
    let (code, r) = run_to("widom", &w.spec("d1.json", DELTA_ONE), &w.path("r.json"), &[]);
    assert_eq!(code, 0);
    assert_eq!(r["widom"]["beta"], 0.5);
    assert_eq!(r["widom"]["gamma"], 0.5);
    assert_eq!(r["widom"]["verdict"], "bounded");
}

#[test]
fn positivity_of_the_empty_disc_measure() {
    let w = Work::new();
    let out = w.path("p.json");
    let (code, r) = run_to("positivity", &w.spec("e.json", EMPTY_DISC), &out, &["--N", "4"]);
    assert_eq!(code, 0);
    assert!(r["moments"]["values"].as_array().unwrap().iter().all(|v| v == 0.0));
    assert_eq!(r["sections"]["certificate"]["verdict"], "positive");
    assert_eq!(r["sections"]["certificate"]["min_eigenvalue"], 0.0);
    let csv = std::fs::read_to_string(out.with_extension("section.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().all(|l| l.split(',').count() == 4));
}

#[test]
fn kernel_check_on_delta_one() {
    let w = Work::new();
    let (code, r) = run_to("kernel-check", &w.spec("d1.json", DELTA_ONE), &w.path("k.json"), &[]);
    assert_eq!(code, 0);
    let k = &r["residuals"]["kernel_agreement"];
    assert!(k["value"].as_f64().unwrap() <= 1e-6);
    assert_eq!(k["passed"], true);
    assert!(r["residuals"]["difference_quotient"]["value"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn transport_on_delta_one() {
    let w = Work::new();
    let (code, r) = run_to("transport", &w.spec("d1.json", DELTA_ONE), &w.path("t.json"), &[]);
    assert_eq!(code, 0);
    assert!(r["residuals"]["transport"]["value"].as_f64().unwrap() <= 1e-6);
    assert!(r["residuals"]["constant_invisibility"]["value"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn symbol_writes_samples() {
    let w = Work::new();
    let out = w.path("s.json");
    let (code, r) = run_to("symbol", &w.spec("d1.json", DELTA_ONE), &out, &["--grid", "16"]);
    assert_eq!(code, 0);
    let sup = r["symbol"]["sup"].as_f64().unwrap();
    assert!((sup - 1.0 / (2.0 * std::f64::consts::PI)).abs() <= 1e-12);
    assert!(sup <= r["symbol"]["bound"].as_f64().unwrap());
    assert_eq!(r["symbol"]["samples"]["grid"].as_array().unwrap().len(), 32);
    let csv = std::fs::read_to_string(out.with_extension("symbol.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("p,re,im"));
    assert_eq!(csv.lines().count(), 33);
}

#[test]
fn full_report_contents() {
    let w = Work::new();
    let (code, r) = run_to(
        "report",
        &w.spec("l.json", HP_LEBESGUE),
        &w.path("r.json"),
        &["--N", "16"],
    );
    assert_eq!(code, 0);
    assert_eq!(r["moments"]["source"], "cayley_pushforward");
    let norms: Vec<f64> = r["sections"]["norms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["norm"].as_f64().unwrap())
        .collect();
    assert_eq!(norms.len(), 4);
    assert!(norms.windows(2).all(|p| p[1] >= p[0]));
    assert_eq!(r["sections"]["certificate"]["verdict"], "positive");
    assert_eq!(r["sections"]["contraction"]["verdict"], "contraction");
    assert!(r["symbol"]["sup"].as_f64().unwrap() <= r["symbol"]["bound"].as_f64().unwrap());
    assert!(r["residuals"]["kernel_agreement"]["value"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn every_output_carries_the_schema() {
    let w = Work::new();
    let spec = w.spec("d1.json", DELTA_ONE);
    let digest = hex::encode(Sha256::digest(DELTA_ONE.as_bytes()));
    for cmd in [
        "report",
        "widom",
        "symbol",
        "kernel-check",
        "positivity",
        "transport",
        "verify-all",
    ] {
        let (code, r) = run_to(cmd, &spec, &w.path(&format!("{cmd}.json")), &["--N", "8"]);
        assert_eq!(code, 0, "{cmd}");
        assert_eq!(r["schema_version"], 1, "{cmd}");
        assert_eq!(r["input_digest"], digest.as_str(), "{cmd}");
        assert_eq!(r["command"], cmd);
        for key in ["widom", "sections", "symbol", "residuals"] {
            assert!(r.get(key).is_some(), "{cmd} lacks {key}");
        }
    }
}

#[test]
fn verify_all_passes_on_delta_one() {
    let w = Work::new();
    let (code, r) = run_to("verify-all", &w.spec("d1.json", DELTA_ONE), &w.path("v.json"), &[]);
    assert_eq!(code, 0);
    let suites = r["suites"].as_array().unwrap();
    assert!(suites.len() >= 10);
    assert!(suites.iter().all(|s| s["status"] == "pass"), "{suites:?}");
}

#[test]
fn verify_all_on_the_singular_disc_density() {
    let w = Work::new();
    let (code, r) = run_to("verify-all", &w.spec("u.json", DISC_SINGULAR), &w.path("v.json"), &[]);
    assert_eq!(code, 0);
    let suite = |name: &str| {
        r["suites"]
            .as_array()
            .unwrap()
            .iter()
            .find(|s| s["name"] == name)
            .unwrap()
            .clone()
    };
    assert_eq!(r["widom"]["verdict"], "unbounded");
    assert_eq!(suite("widom")["status"], "info");
    assert_eq!(suite("moment_positivity")["status"], "pass");
    assert_eq!(suite("shift_contraction")["status"], "pass");
    assert_eq!(suite("kernel_agreement")["status"], "skipped");
}

#[test]
fn failing_tolerance_gives_nonzero_exit_with_a_report() {
    let w = Work::new();
    let spec = w.spec("d1.json", DELTA_ONE);
    let (code, r) = run_to("kernel-check", &spec, &w.path("k.json"), &["--tol", "1e-300"]);
    assert_eq!(code, 1);
    assert_eq!(r["passed"], false);
    let (code, r) = run_to("verify-all", &spec, &w.path("v.json"), &["--tol", "1e-300"]);
    assert_eq!(code, 1);
    assert!(r["suites"].as_array().unwrap().iter().any(|s| s["status"] == "fail"));
}

#[test]
fn exit_code_contract() {
    let w = Work::new();
    let out = w.path("x.json");
    let malformed = w.spec("bad.json", r#"{"domain":"disk"}"#);
    assert_eq!(run_to("widom", &malformed, &out, &[]).0, 2);
    assert_eq!(run_to("verify-all", &malformed, &out, &[]).0, 2);
    assert_eq!(run_to("widom", &w.spec("t.json", "{"), &out, &[]).0, 2);
    assert_eq!(run_to("widom", &w.path("missing.json"), &out, &[]).0, 2);
    let d1 = w.spec("d1.json", DELTA_ONE);
    assert_eq!(run_to("widom", &d1, &out, &["--N", "0"]).0, 2);
    assert_eq!(run_to("widom", &d1, &out, &["--grid", "4"]).0, 2);
    assert_eq!(run_to("symbol", &w.spec("e.json", EMPTY_DISC), &out, &[]).0, 2);
    let unbounded = w.spec("hu.json", HP_SINGULAR);
    for cmd in ["symbol", "kernel-check", "transport"] {
        assert_eq!(run_to(cmd, &unbounded, &out, &[]).0, 3, "{cmd}");
    }
    assert!(!out.exists());
    assert_eq!(run_to("widom", &unbounded, &out, &[]).0, 0);
    let o = run(&["nonsense", "--spec", d1.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["widom", "--spec", d1.to_str().unwrap()], Some("zero"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stdout_when_no_output_path() {
    let w = Work::new();
    let o = run(
        &["widom", "--spec", w.spec("d1.json", DELTA_ONE).to_str().unwrap()],
        None,
    );
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn reports_are_identical_across_thread_counts() {
    let w = Work::new();
    for body in [DELTA_ONE, HP_LEBESGUE, DISC_SINGULAR] {
        let spec = w.spec("m.json", body);
        let outputs: Vec<Vec<u8>> = ["1", "4", "1"]
            .iter()
            .map(|t| {
                let o = run(&["report", "--spec", spec.to_str().unwrap(), "--N", "16"], Some(t));
                assert!(o.status.success());
                o.stdout
            })
            .collect();
        assert_eq!(outputs[0], outputs[1]);
        assert_eq!(outputs[0], outputs[2]);
    }
}
