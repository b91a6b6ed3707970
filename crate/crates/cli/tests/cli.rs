use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use jbt::{main_with, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_NO, EXIT_OK};
use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

const M2: &str = r#"{"kind":"rect","m":2,"n":2}"#;
const UXV: &str = r#"{"recipe":"linear","factor":{"kind":"rect","m":2,"n":2},"op":{"kind":"unitary_multiplier","seed":7}}"#;

/// `{"factor": M₂, "data": rows}` from real entries.
fn m2(rows: [[f64; 2]; 2]) -> String {
    let data: Vec<Vec<[f64; 2]>> = rows.iter().map(|r| r.iter().map(|&x| [x, 0.0]).collect()).collect();
    format!(r#"{{"factor":{M2},"data":{}}}"#, serde_json::to_string(&data).unwrap())
}

fn put(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn jbt(args: &[&str]) -> jbt::Outcome {
    main_with(std::iter::once("jbt").chain(args.iter().copied()))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &jbt::Outcome) -> Value {
    serde_json::from_str(&out.text).unwrap()
}

#[test]
fn check_truncation_examples() {
    let d = TempDir::new().unwrap();
    let e11 = put(&d, "e11.json", &m2([[1.0, 0.0], [0.0, 0.0]]));
    let id = put(&d, "id.json", &m2([[1.0, 0.0], [0.0, 1.0]]));
    let e12 = put(&d, "e12.json", &m2([[0.0, 1.0], [0.0, 0.0]]));
    let bad = put(&d, "bad.json", "{\"factor\": ");
    assert_eq!(jbt(&["check-truncation", s(&e11), s(&id)]).code, EXIT_OK);
    assert_eq!(jbt(&["check-truncation", s(&e12), s(&e11)]).code, EXIT_NO);
    let out = jbt(&["check-truncation", s(&bad), s(&id)]);
    assert_eq!(out.code, EXIT_ERROR);
    assert!(out.note.as_deref().unwrap().contains("bad.json"));
    assert_eq!(jbt(&["check-truncation", "/nonexistent.json", s(&id)]).code, EXIT_ERROR);

    let out = jbt(&["--json", "check-truncation", s(&e11), s(&id)]);
    let v = json(&out);
    assert_eq!(v["tool"], "jbt");
    assert_eq!(v["truncation"], true);
    for k in ["definition", "decomposition", "peirce"] {
        assert_eq!(v["characterizations"][k], true);
    }
}

#[test]
fn factor_mismatch_is_an_error() {
    let d = TempDir::new().unwrap();
    let e11 = put(&d, "e11.json", &m2([[1.0, 0.0], [0.0, 0.0]]));
    let spin = put(&d, "s.json", r#"{"factor":{"kind":"spin","n":3},"data":[[1,0],[0,0],[0,0]]}"#);
    let out = jbt(&["check-truncation", s(&e11), s(&spin)]);
    assert_eq!(out.code, EXIT_ERROR);
    assert!(out.note.as_deref().unwrap().contains("mismatch"));
}

#[test]
fn sum_elements_are_accepted() {
    let d = TempDir::new().unwrap();
    let spin = r#"{"factor":{"kind":"spin","n":3},"data":[[1,0],[0,0],[0,0]]}"#;
    let a = put(&d, "a.json", &format!(r#"{{"parts":[{},{spin}]}}"#, m2([[1.0, 0.0], [0.0, 0.0]])));
    let b = put(&d, "b.json", &format!(r#"{{"parts":[{},{spin}]}}"#, m2([[1.0, 0.0], [0.0, 5.0]])));
    assert_eq!(jbt(&["check-truncation", s(&a), s(&b)]).code, EXIT_OK);
    assert_eq!(jbt(&["check-truncation", s(&b), s(&a)]).code, EXIT_NO);
}

#[test]
fn spectral_queries() {
    let d = TempDir::new().unwrap();
    let x = put(&d, "x.json", &m2([[8.0, 0.0], [0.0, 0.0]]));
    let v = json(&jbt(&["--json", "cube-root", s(&x)]));
    assert_eq!(v["result"]["data"][0][0][0], 2.0);
    assert!(v["cube_residual"].as_f64().unwrap() < 1e-12);

    let v = json(&jbt(&["--json", "gen-inverse", s(&x)]));
    assert!((v["result"]["data"][0][0][0].as_f64().unwrap() - 0.125).abs() < 1e-15);
    for k in ["q_a_residual", "q_b_residual", "commutator_residual"] {
        assert!(v[k].as_f64().unwrap() < 1e-12);
    }

    let out = jbt(&["--json", "range-tripotent", s(&x)]);
    let r = put(&d, "r.json", &serde_json::to_string(&json(&out)["result"]).unwrap());
    let t = json(&jbt(&["--json", "tripotent-check", s(&r)]));
    assert_eq!(t["tripotent"], true);
    assert_eq!(t["minimal"], true);
    assert_eq!(jbt(&["tripotent-check", s(&x)]).code, EXIT_NO);
}

#[test]
fn peirce_and_ttp_queries() {
    let d = TempDir::new().unwrap();
    let e11 = put(&d, "e11.json", &m2([[1.0, 0.0], [0.0, 0.0]]));
    let x = put(&d, "x.json", &m2([[1.0, 2.0], [3.0, 4.0]]));
    let p1 = put(&d, "p1.json", &m2([[0.5, 0.5], [0.5, 0.5]]));
    let v = json(&jbt(&["--json", "peirce", s(&e11), s(&x)]));
    assert_eq!(v["peirce_dims"], serde_json::json!([1, 2, 1]));
    let proj = &v["projections"];
    assert_eq!(proj[0]["data"][1][1][0], 4.0);
    assert_eq!(proj[2]["data"][0][0][0], 1.0);
    assert_eq!(proj[1]["data"][0][1][0], 2.0);

    let t = json(&jbt(&["--json", "ttp", s(&p1), s(&e11)]));
    assert!((t["re"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let id = put(&d, "id.json", &m2([[1.0, 0.0], [0.0, 1.0]]));
    assert_eq!(jbt(&["ttp", s(&id), s(&e11)]).code, EXIT_ERROR);
    assert_eq!(jbt(&["peirce", s(&x)]).code, EXIT_ERROR);
}

#[test]
fn verify_lemmas_default_config_passes() {
    let d = TempDir::new().unwrap();
    let report = d.path().join("report.json");
    let out = jbt(&["verify-lemmas", "--report", s(&report)]);
    assert_eq!(out.code, EXIT_OK, "{}", out.text);
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["config"]["seed"], 42);
    assert_eq!(v["config"]["trials"], 1000);
    assert_eq!(v["lemmas"].as_object().unwrap().len(), 8);
    assert!(v["version"].is_string());
}

#[test]
fn noise_floor_tolerance_reports_failures() {
    let out = jbt(&["--tol", "1e-16", "--trials", "30", "--json", "verify-lemmas", "--lemma", "jordan-identity"]);
    assert_eq!(out.code, EXIT_NO);
    assert!(out.note.as_deref().unwrap().contains("jordan-identity"));
    let v = json(&out);
    let r = &v["lemmas"]["jordan-identity"];
    assert!(r["failures"].as_u64().unwrap() > 0);
    assert!(r["max_residual"].as_f64().unwrap() > 1e-16);
}

#[test]
fn lemma_filter_runs_only_the_selection() {
    let out = jbt(&["--json", "--trials", "20", "verify-lemmas", "--lemma", "tripotent-truncation-order"]);
    assert_eq!(out.code, EXIT_OK);
    let keys: Vec<String> = json(&out)["lemmas"].as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, vec!["tripotent-truncation-order"]);
    assert_eq!(jbt(&["verify-lemmas", "--lemma", "no-such-suite"]).code, EXIT_ERROR);
    assert_eq!(jbt(&["--trials", "0", "verify-lemmas"]).code, EXIT_ERROR);
}

#[test]
fn config_file_and_flags() {
    let d = TempDir::new().unwrap();
    let cfg = put(&d, "cfg.json", r#"{"factors":[{"kind":"antisym","n":4}],"trials":15,"lemmas":["gelfand-naimark"]}"#);
    let v = json(&jbt(&["--json", "--seed", "9", "verify-lemmas", "--config", s(&cfg)]));
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["lemmas"]["gelfand-naimark"]["per_factor"][0]["factor"], "Antisym(4)");
    let v = json(&jbt(&["--json", "verify-lemmas", "--config", s(&cfg), "--factor", "Spin(5)"]));
    assert_eq!(v["lemmas"]["gelfand-naimark"]["per_factor"][0]["factor"], "Spin(5)");
    let bad = put(&d, "bad.json", r#"{"trails": 3}"#);
    assert_eq!(jbt(&["verify-lemmas", "--config", s(&bad)]).code, EXIT_ERROR);
}

#[test]
fn falsify_exit_codes() {
    let d = TempDir::new().unwrap();
    let uxv = put(&d, "uxv.json", UXV);
    let out = jbt(&["--json", "falsify", s(&uxv)]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["classification"]["verdict"]["type"], "complex_linear");
    assert_eq!(v["verdict"], "pass");

    let shift = put(
        &d,
        "shift.json",
        r#"{"recipe":"perturb","base":{"recipe":"linear","factor":{"kind":"rect","m":2,"n":2},"op":{"kind":"identity"}},
            "modification":{"kind":"norm_shift","eps":0.1}}"#,
    );
    let out = jbt(&["--json", "--trials", "1000", "falsify", s(&shift)]);
    assert_eq!(out.code, EXIT_NO);
    let w = &json(&out)["preservation"]["witnesses"][0];
    assert_eq!(w["rechecked"], true);
    assert!(w["a"]["parts"][0]["data"].is_array());

    assert_eq!(jbt(&["--trials", "10", "falsify", s(&uxv)]).code, EXIT_INCONCLUSIVE);

    let singular = put(
        &d,
        "sing.json",
        r#"{"recipe":"linear","factor":{"kind":"rect","m":1,"n":1},"op":{"kind":"matrix","matrix":[[1,0],[0,0]],"linearity":"real"}}"#,
    );
    assert_eq!(jbt(&["falsify", s(&singular)]).code, EXIT_ERROR);
    let unknown = put(&d, "u.json", r#"{"recipe":"teleport"}"#);
    assert_eq!(jbt(&["falsify", s(&unknown)]).code, EXIT_ERROR);
}

#[test]
fn falsify_reports_factor_matching_and_rank_one() {
    let d = TempDir::new().unwrap();
    let sum = put(
        &d,
        "sum.json",
        &format!(r#"{{"recipe":"sum","parts":[{UXV},{{"recipe":"conjlinear","factor":{{"kind":"sym","n":2}},"op":{{"kind":"identity"}}}}]}}"#),
    );
    let v = json(&jbt(&["--json", "--trials", "600", "falsify", s(&sum)]));
    assert_eq!(v["factor_matching"]["sigma"], serde_json::json!([0, 1]));
    assert_eq!(v["classification"]["verdict"]["tags"], serde_json::json!(["l", "cl"]));

    let h = put(&d, "h.json", r#"{"recipe":"linear","factor":{"kind":"rect","m":1,"n":3},"op":{"kind":"unitary_multiplier","seed":3}}"#);
    let v = json(&jbt(&["--json", "--trials", "600", "falsify", s(&h)]));
    assert_eq!(v["rank_one"]["behaviour"], "preserved");
    assert!(v["assumptions"][0].as_str().unwrap().contains("continuity"));
}

#[test]
fn binary_honours_env_seed_and_exit_codes() {
    let d = TempDir::new().unwrap();
    let report = d.path().join("r.json");
    let out = Command::new(env!("CARGO_BIN_EXE_jbt"))
        .args(["--trials", "5", "verify-lemmas", "--lemma", "ttp-values", "--report", s(&report)])
        .env("JBT_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["config"]["seed"], 7);

    let out = Command::new(env!("CARGO_BIN_EXE_jbt")).args(["check-truncation", "missing.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_ERROR));
    assert!(!out.stderr.is_empty());
}

#[derive(Debug, Clone)]
enum Input {
    Valid([[f64; 2]; 2]),
    Garbage(String),
    OtherFactor,
}

fn input() -> impl Strategy<Value = Input> {
    let entry = prop_oneof![Just(0.0), Just(1.0), -3.0..3.0f64];
    prop_oneof![
        3 => prop::array::uniform2(prop::array::uniform2(entry)).prop_map(Input::Valid),
        1 => "[ -~]{0,24}".prop_map(Input::Garbage),
        1 => Just(Input::OtherFactor),
    ]
}

fn body(i: &Input) -> String {
    match i {
        Input::Valid(rows) => m2(*rows),
        Input::Garbage(g) => g.clone(),
        Input::OtherFactor => r#"{"factor":{"kind":"sym","n":2},"data":[[[1,0],[0,0]],[[0,0],[0,0]]]}"#.into(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn check_truncation_exit_contract(a in input(), b in input()) {
        let d = TempDir::new().unwrap();
        let (pa, pb) = (put(&d, "a.json", &body(&a)), put(&d, "b.json", &body(&b)));
        let out = jbt(&["--json", "check-truncation", s(&pa), s(&pb)]);
        match (&a, &b) {
            (Input::Valid(_), Input::Valid(_)) => {
                prop_assert!(out.code == EXIT_OK || out.code == EXIT_NO);
                let v = json(&out);
                prop_assert_eq!(v["truncation"].as_bool().unwrap(), out.code == EXIT_OK);
            }
            (Input::Garbage(g), _) | (_, Input::Garbage(g)) if serde_json::from_str::<jbtriple::AnyElement>(g).is_err() => {
                prop_assert_eq!(out.code, EXIT_ERROR);
            }
            (Input::OtherFactor, Input::Valid(_)) | (Input::Valid(_), Input::OtherFactor) => {
                prop_assert_eq!(out.code, EXIT_ERROR);
            }
            _ => prop_assert!(out.code <= EXIT_ERROR),
        }
    }
}
