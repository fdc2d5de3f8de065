use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperfit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("run hyperfit")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let text = ok(&full);
    let value: Value = serde_json::from_str(&text).unwrap();
    check_schema(value["command"].as_str().unwrap(), &value);
    value
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn check_schema(name: &str, value: &Value) {
    let path = schema_dir().join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let msgs: Vec<String> = match compiled.validate(value) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{name} output violates its schema: {msgs:?}");
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

fn synth(dir: &TempDir, name: &str, extra: &[&str]) -> String {
    let out = path(dir, name);
    let mut args = vec!["synth", "--out", out.as_str()];
    args.extend_from_slice(extra);
    json(&args);
    out
}

#[test]
fn help_lists_flags() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in ["fit", "predict", "evaluate", "curve", "stats", "synth", "summarize", "export-milp", "convert", "folds"] {
        assert!(text.contains(cmd), "{cmd} missing from help");
        let sub = run(&[cmd, "--help"]);
        assert!(sub.status.success());
        let sub = String::from_utf8(sub.stdout).unwrap();
        assert!(sub.contains("--seed") && sub.contains("--format"), "{cmd}");
    }
    let fit = ok(&["fit", "--help"]);
    for flag in ["--data", "--variant", "--solver", "--time-ms", "--iterations", "--patience"] {
        assert!(fit.contains(flag), "{flag}");
    }
}

#[test]
fn usage_error_exits_2() {
    let out = run(&["fit", "--data", "x.json", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn domain_error_exits_1_with_code() {
    let out = run(&["fit", "--data", "/nonexistent/d.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("hyperfit: error[E_IO]"), "{err}");
    assert_eq!(err.lines().count(), 1);

    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    fs::write(&bad, "{\"user_id\": 3}").unwrap();
    let out = run(&["fit", "--data", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[E_"));
}

#[test]
fn exact_fit_on_planted_data() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.json", &["--n", "10", "--items", "80"]);
    let fit = json(&["fit", "--data", &data, "--variant", "algo1", "--solver", "exact"]);
    assert_eq!(fit["objective"], "0");
    assert_eq!(fit["status"], "optimal");
    assert_eq!(fit["seed"], 42);
    let code = fit["code"].as_str().unwrap().to_string();
    let pred = json(&["predict", "--data", &data, "--model", &code]);
    assert_eq!(pred["mae"]["levels"], 0.0);

    let text = ok(&["fit", "--data", &data, "--solver", "exact"]);
    assert!(text.contains("objective  0"), "{text}");
}

#[test]
fn exact_rejects_budget() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.json", &["--n", "6", "--items", "20"]);
    let out = run(&["fit", "--data", &data, "--solver", "exact", "--iterations", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn curve_is_deterministic() {
    let args = ["--format", "json", "curve", "--lmax", "20", "--k", "10", "--seed", "42", "--iterations", "3000", "--users", "3"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let v: Value = serde_json::from_str(&a).unwrap();
    check_schema("curve", &v);
    assert_eq!(v["report"]["points"].as_array().unwrap().len(), 20);
}

#[test]
fn curve_csv_export() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "c.csv");
    json(&["curve", "--sizes", "1,5", "--k", "4", "--users", "2", "--n", "8", "--items", "20", "--solver", "exact", "--csv", &csv]);
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("user_id,fold,size,error,error_raw\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 4 * 2);
}

#[test]
fn evaluate_and_baseline_bridge() {
    let dir = TempDir::new().unwrap();
    let d1 = synth(&dir, "u1.json", &["--n", "8", "--items", "40", "--user-id", "u1"]);
    let d2 = synth(&dir, "u2.json", &["--n", "8", "--items", "40", "--user-id", "u2", "--seed", "7"]);
    let preds = path(&dir, "p.csv");
    let args = ["evaluate", "--data", &d1, "--data", &d2, "--k", "5", "--solver", "exact", "--predictions-out", &preds];
    let algo = json(&args);
    assert_eq!(algo["reports"].as_array().unwrap().len(), 2);
    let csv = fs::read_to_string(&preds).unwrap();
    assert!(csv.starts_with("user_id,fold,item_id,predicted_level,actual_level,method\n"));

    // scoring the written predictions as a baseline reproduces the errors
    let base = json(&[
        "evaluate", "--data", &d1, "--data", &d2, "--k", "5", "--method", "baseline", "--predictions", &preds,
        "--label", "algo1",
    ]);
    assert_eq!(base["mean_error"], algo["mean_error"]);

    // echo predictions score zero
    let echo: String = csv
        .lines()
        .enumerate()
        .map(|(k, line)| {
            if k == 0 {
                return format!("{line}\n");
            }
            let f: Vec<&str> = line.split(',').collect();
            format!("{},{},{},{},{},echo\n", f[0], f[1], f[2], f[4], f[4])
        })
        .collect();
    let echo_path = path(&dir, "echo.csv");
    fs::write(&echo_path, echo).unwrap();
    let zero = json(&["evaluate", "--data", &d1, "--k", "5", "--method", "baseline", "--predictions", &echo_path, "--label", "echo"]);
    assert_eq!(zero["mean_error"], 0.0);

    // a missing row is a coverage error
    let short: String = csv.lines().take(10).map(|l| format!("{l}\n")).collect();
    let short_path = path(&dir, "short.csv");
    fs::write(&short_path, short).unwrap();
    let out = run(&["evaluate", "--data", &d1, "--k", "5", "--method", "baseline", "--predictions", &short_path, "--label", "algo1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E_COVERAGE"));

    // stats over the two evaluate outputs
    let a_path = path(&dir, "a.json");
    let b_path = path(&dir, "b.json");
    fs::write(&a_path, algo.to_string()).unwrap();
    fs::write(&b_path, zero.to_string()).unwrap();
    let per_user = json(&["stats", "--a", &a_path, "--b", &a_path, "--aggregation", "per-user"]);
    assert_eq!(per_user["comparison"]["tests"].as_array().unwrap().len(), 2);
    let err = run(&["stats", "--a", &a_path, "--b", &b_path]);
    assert_eq!(err.status.code(), Some(1), "u2 is missing from b");
}

#[test]
fn fold_plan_round_trip() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.json", &["--n", "8", "--items", "23"]);
    let plan = path(&dir, "plan.json");
    let v = json(&["folds", "--data", &data, "--k", "4", "--fold-mode", "random", "--out", &plan]);
    assert_eq!(v["fold_sizes"], serde_json::json!([6, 6, 6, 5]));
    let plan_value: Value = serde_json::from_str(&fs::read_to_string(&plan).unwrap()).unwrap();
    check_schema("fold-plan", &plan_value);
    let eval = json(&["evaluate", "--data", &data, "--plan", &plan, "--solver", "exact"]);
    assert_eq!(eval["reports"][0]["k"], 4);
    assert_eq!(eval["reports"][0]["fold_mode"], "random");
}

#[test]
fn stats_from_lists() {
    let v = json(&["stats", "--a-errors", "1,2,3,4,5", "--b-errors", "11,12,13,14,15"]);
    let r = &v["comparison"]["tests"][0]["result"];
    assert_eq!(r["significant"], true);
    assert_eq!(r["welch_used"], false);
    let same = json(&["stats", "--a-errors", "1,2,3", "--b-errors", "1,2,3"]);
    assert_eq!(same["comparison"]["tests"][0]["result"]["t_statistic"], 0.0);
}

#[test]
fn summarize_and_export() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.json", &["--n", "6", "--items", "30", "--supervision", "star-rounded", "--variant", "algo2"]);
    let dataset: Value = serde_json::from_str(&fs::read_to_string(&data).unwrap()).unwrap();
    check_schema("dataset", &dataset);
    let s = json(&["summarize", "--data", &data]);
    assert_eq!(s["summaries"][0]["items"], 30);
    let table = ok(&["summarize", "--data", &data]);
    assert!(table.contains("average"));

    let lp = path(&dir, "m.lp");
    let e = json(&["export-milp", "--data", &data, "--variant", "algo2", "--out", &lp]);
    assert_eq!(e["summary"]["binary_vars"], 12);
    assert_eq!(e["summary"]["constraints"], 2 * 30 + 6);
    let text = fs::read_to_string(&lp).unwrap();
    assert!(text.contains("Subject To") && text.trim_end().ends_with("End"));
    assert_eq!(ok(&["export-milp", "--data", &data, "--variant", "algo2"]), text);
}

#[test]
fn convert_csv_files() {
    let dir = TempDir::new().unwrap();
    let items = path(&dir, "items.csv");
    let ratings = path(&dir, "ratings.csv");
    fs::write(&items, "item_id,a,b,c\nr1,1,0,0\nr2,0,1,1\nr3,1,1,0\n").unwrap();
    fs::write(&ratings, "user_id,item_id,rating\nu,r1,5\nu,r2,1\nu,r3,3\n").unwrap();
    let out = path(&dir, "d.json");
    let v = json(&["convert", "--items", &items, "--ratings", &ratings, "--out", &out]);
    assert_eq!(v["items"], 3);
    assert_eq!(v["attributes"], 3);
    let fit = json(&["fit", "--data", &out, "--solver", "brute"]);
    assert_eq!(fit["status"], "optimal");
}

#[test]
fn evaluate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.json", &["--n", "30", "--items", "60", "--supervision", "star-rounded"]);
    for solver in ["bnb", "local"] {
        let args = ["--format", "json", "evaluate", "--data", &data, "--solver", solver, "--iterations", "2000", "--fold-mode", "random"];
        assert_eq!(ok(&args), ok(&args));
    }
}
