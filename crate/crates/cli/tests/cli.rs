use std::path::PathBuf;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use riemann_sums::fourier::CutProjectScheme;
use serde_json::Value;

fn rsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsum"))
        .args(args)
        .env_remove("RSUM_THREADS")
        .output()
        .expect("binary runs")
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_run(args: &[&str]) -> (Value, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = rsum(&full);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", stderr(&o)));
    (v, o.status.code().unwrap())
}

fn validate(sub: &str, doc: &Value) {
    let path = fixtures().join("schemas").join(format!("{sub}.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let compiled = JSONSchema::compile(&schema).unwrap_or_else(|e| panic!("{sub} schema: {e}"));
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{sub} output violates its schema: {msgs:#?}");
}

#[test]
fn every_subcommand_matches_its_schema() {
    let golden = fixtures().join("somos_table.csv");
    let golden = golden.to_str().unwrap();
    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("density", vec!["--set", "prim2", "--eps-min", "0.01"]),
        ("density", vec!["--set", "fibonacci", "--f", "bump", "--radius", "2", "--eps-min", "0.01"]),
        ("coprime", vec!["--n", "10,100"]),
        ("ppt", vec!["--zmax", "9425", "--golden", golden]),
        ("lehmer", vec!["--n", "1,100"]),
        ("sector", vec!["--bound", "1000"]),
        ("equidist", vec!["--hmax", "1000"]),
        ("fermat", vec!["--zmax", "500"]),
        ("iep", vec!["--trials", "8"]),
        ("derange", vec!["--n-max", "40"]),
        ("poisson", vec!["--dim", "1", "--eta", "1/3"]),
        ("modelset", vec!["--radius", "50"]),
        ("spectrum", vec!["--cutoff", "1"]),
        ("primqc", vec!["--cutoff", "2,4"]),
        ("primqc", vec!["--cutoff", "1", "--list"]),
        ("twisted", vec!["--eta", "1/2,0", "--eps-min", "0.01"]),
    ];
    for (sub, rest) in runs {
        let mut args = vec![sub];
        args.extend(rest);
        let (doc, code) = json_run(&args);
        assert_eq!(code, 0, "{args:?}");
        validate(sub, &doc);
        assert_eq!(doc["config"]["subcommand"], sub);
    }
}

#[test]
fn triple_table_csv() {
    let o = rsum(&["ppt", "--zmax", "9425", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# config: "));
    assert_eq!(lines[1], "N,x,y,z");
    let data = &lines[2..];
    assert_eq!(data.len(), 1500);
    assert_eq!(data[0], "1,3,4,5");
    assert_eq!(data[1499], "1500,1233,9344,9425");
}

#[test]
fn golden_mismatch_is_a_tolerance_failure() {
    let golden = fixtures().join("somos_table.csv");
    let o = rsum(&["ppt", "--zmax", "100", "--golden", golden.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("golden_mismatches"));
}

#[test]
fn hundredth_ratio() {
    let o = rsum(&["lehmer", "--n", "100"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().last().unwrap(), "100,629,6.29");
}

#[test]
fn primitive_density_example() {
    let (doc, code) = json_run(&["density", "--set", "prim2", "--f", "ball", "--eps-min", "1e-3"]);
    assert_eq!(code, 0);
    let check = &doc["checks"][0];
    let actual = check["actual"].as_f64().unwrap();
    assert!((actual - 0.60793).abs() < 1e-4, "{actual}");
    assert_eq!(check["passed"], true);
    let eps: Vec<f64> = doc["rows"].as_array().unwrap().iter().map(|r| r[0].as_f64().unwrap()).collect();
    assert!(*eps.last().unwrap() <= 1e-3);
}

#[test]
fn config_is_fully_resolved() {
    let (doc, _) = json_run(&["sector", "--bound", "100"]);
    let c = &doc["config"];
    assert_eq!(c["params"]["alpha"], 0.0);
    assert_eq!(c["params"]["beta"], 1.0);
    assert_eq!(c["params"]["tol"], 0.02);
    assert_eq!(c["seed"], 0);
    assert_eq!(c["format"], "json");
    assert!(c["output"].is_null());

    let o = rsum(&["sector", "--bound", "100"]);
    let first = stdout(&o).lines().next().unwrap().to_string();
    let echoed: Value = serde_json::from_str(first.strip_prefix("# config: ").unwrap()).unwrap();
    assert_eq!(echoed["params"], c["params"]);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["iep", "--trials", "12", "--seed", "42"],
        vec!["density", "--set", "star", "--eps-min", "0.005"],
        vec!["spectrum", "--cutoff", "1.5", "--format", "json"],
        vec!["twisted", "--eta", "1/3,1/2", "--eps-min", "0.01"],
    ] {
        let a = rsum(&args);
        let b = rsum(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let single = Command::new(env!("CARGO_BIN_EXE_rsum"))
            .args(&args)
            .env("RSUM_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(a.stdout, single.stdout, "{args:?} with one thread");
    }
}

#[test]
fn seed_changes_random_trials() {
    let a = rsum(&["iep", "--trials", "6", "--seed", "1"]);
    let b = rsum(&["iep", "--trials", "6", "--seed", "2"]);
    assert!(a.status.success() && b.status.success());
    let body = |o: &Output| stdout(o).lines().skip(1).map(String::from).collect::<Vec<_>>();
    assert_ne!(body(&a), body(&b));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let to_file = rsum(&["coprime", "--n", "1000", "--output", path.to_str().unwrap()]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let direct = stdout(&rsum(&["coprime", "--n", "1000"]));
    // only the echoed output path differs
    let strip = |s: &str| s.lines().skip(1).map(String::from).collect::<Vec<_>>();
    assert_eq!(strip(&written), strip(&direct));
    assert!(written.lines().next().unwrap().contains("out.csv"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec![],
        vec!["nonsense"],
        vec!["density"],
        vec!["density", "--set", "prim2", "--unknown", "1"],
        vec!["density", "--set", "square"],
        vec!["lehmer", "--n", "0"],
        vec!["sector", "--alpha", "0.5", "--beta", "0.2"],
        vec!["poisson", "--dim", "2", "--eta", "0.5"],
        vec!["twisted", "--eta", "1/0,0"],
        vec!["ppt", "--zmax", "10", "--format", "xml"],
    ] {
        let o = rsum(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn help_and_version_exit_zero() {
    for args in [vec!["--help"], vec!["--version"], vec!["density", "--help"]] {
        let o = rsum(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert!(!o.stdout.is_empty());
    }
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_rsum"))
        .args(["lehmer", "--n", "3"])
        .env("RSUM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("RSUM_THREADS"));
}

#[test]
fn tolerance_failure_reports_all_three_numbers() {
    let o = rsum(&["coprime", "--n", "10", "--tol", "1e-6"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("expected 0.607927101854"), "{err}");
    assert!(err.contains("actual 0.63"), "{err}");
    assert!(err.contains("tolerance 0.000001") || err.contains("tolerance 1e-6"), "{err}");
    // the table is still written
    assert!(stdout(&o).contains("10,63,100,0.63,"));
}

#[test]
fn scheme_files_round_trip_and_reject_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("fib.json");
    std::fs::write(&good, CutProjectScheme::fibonacci().to_json()).unwrap();
    let from_file = rsum(&["modelset", "--radius", "30", "--scheme", good.to_str().unwrap()]);
    let builtin = rsum(&["modelset", "--radius", "30"]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    let body = |o: &Output| stdout(o).lines().skip(1).map(String::from).collect::<Vec<_>>();
    assert_eq!(body(&from_file), body(&builtin));

    let mut doc: Value = serde_json::from_str(&CutProjectScheme::fibonacci().to_json()).unwrap();
    doc["colour"] = Value::from("blue");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let o = rsum(&["spectrum", "--scheme", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn floats_use_twelve_significant_digits() {
    let (doc, _) = json_run(&["equidist", "--hmax", "1000"]);
    let theta2 = doc["rows"][0][2].as_f64().unwrap();
    assert_eq!(theta2, 0.785398163397);
    let o = rsum(&["derange", "--n-max", "20"]);
    let last = stdout(&o).lines().nth(22).unwrap().to_string();
    // exact integer, rounded probability
    assert!(last.starts_with("20,895014631192902121,0.367879441171,"), "{last}");
}
