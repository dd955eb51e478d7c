use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn loopwitt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopwitt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn witt_bracket_in_rank_one() {
    let o = loopwitt(&["bracket", "D(1;1)*1", "D(1;-1)*1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-2*D(1;0)*1");
}

#[test]
fn bracket_of_function_by_derivation() {
    // [t^r, D(u;s)] = -(u,r) t^{r+s}
    let o = loopwitt(&["bracket", "t(2,0)*1", "D(1,1;0,1)*1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-2*t(2,1)*1");
}

#[test]
fn bracket_json_and_presentation_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"n":1,"B":{"kind":"polyquot","modulus":["-8","12","-6","1"],"eval_point":"2"}}"#,
    );
    let o = loopwitt(&[
        "bracket",
        "D(1;1)*x",
        "D(1;-1)*x",
        "--config",
        &cfg,
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bracket"], "D(1;0)*(-2x^2)");
}

#[test]
fn bracket_parse_error_has_position() {
    let o = loopwitt(&["bracket", "D(1;1", "t(1)*1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column"));
}

#[test]
fn irrep_info_dimension() {
    let o = loopwitt(&["irrep-info", "--mu", "1,1", "--n", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 8);
    let total: u64 = v["weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["multiplicity"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 8);
    assert!(v.get("matrices").is_none());
}

#[test]
fn irrep_info_matrices_are_exact_strings() {
    let o = loopwitt(&[
        "irrep-info",
        "--mu",
        "1",
        "--n",
        "2",
        "--c",
        "5/2",
        "--matrices",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 2);
    let e11 = &v["matrices"]["E11"];
    let e22 = &v["matrices"]["E22"];
    // Trace of E11 + E22 is c·d = 5.
    let mut trace = 0.0f64;
    for m in [e11, e22] {
        for k in 0..2 {
            let (p, q) = m[k][k].as_str().unwrap().split_once('/').unwrap();
            trace += p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap();
        }
    }
    assert_eq!(trace, 5.0);
}

#[test]
fn module_info_shape() {
    let o = loopwitt(&["module-info"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let slices = v["slices"].as_array().unwrap();
    assert_eq!(slices.len(), 49);
    assert!(slices
        .iter()
        .all(|s| s["dim"] == 2 && s["m"].as_array().unwrap().len() == 2));
    assert_eq!(v["alpha"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(v["mu"], serde_json::json!([1]));
    assert_eq!(v["c"], "1/1");
    assert_eq!(v["B"]["kind"], "trivial");
}

#[test]
fn verify_all_default_config_passes() {
    let o = loopwitt(&["verify-all", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for r in v.as_array().unwrap() {
        assert_eq!(r["failures"].as_array().unwrap().len(), 0, "{}", r["suite"]);
        assert_eq!(r["seed"], 42);
    }
}

#[test]
fn suite_and_seed_flags() {
    let o = loopwitt(&[
        "verify-all",
        "--suite",
        "bracket",
        "--suite",
        "quotient",
        "--seed",
        "9",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["suite"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["bracket", "quotient"]);
    assert!(v.as_array().unwrap().iter().all(|r| r["seed"] == 9));
}

#[test]
fn reports_are_reproducible() {
    let run = || {
        let o = loopwitt(&["verify-all", "--suite", "family-brackets", "--json"]);
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        for r in v.as_array_mut().unwrap() {
            r["wall_time_ms"] = Value::Null;
        }
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"n":3,"mu":[1]}"#);
    let o = loopwitt(&["verify-all", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mu"));

    let cfg = write_config(dir.path(), "{\"n\":2,\n\"mu\":[1,]}");
    let o = loopwitt(&["verify-all", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = loopwitt(&["verify-all", "--suite", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));

    let o = loopwitt(&["export"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let cfg = write_config(
        dir.path(),
        r#"{"n":1,"c":"3/2","window_radius":5,"cases_per_suite":10}"#,
    );
    let o = loopwitt(&["export", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    for name in [
        "summary.json",
        "config.json",
        "irrep.json",
        "module.json",
        "rank-one-module.json",
        "bracket.json",
    ] {
        assert!(out.join(name).exists(), "{name} missing");
    }
    let r: Value =
        serde_json::from_str(&fs::read_to_string(out.join("rank-one-algebra.json")).unwrap())
            .unwrap();
    assert_eq!(r["suite"], "rank-one-algebra");
    assert_eq!(r["config"]["n"], 1);
    assert!(r["failures"].as_array().unwrap().is_empty());
}
