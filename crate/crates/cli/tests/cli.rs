use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn camp_opt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_camp-opt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut all = vec!["run", "--out-dir", dir.to_str().unwrap()];
    all.extend_from_slice(args);
    camp_opt(&all)
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

const KARATE: &[&str] = &[
    "--dataset",
    "karate",
    "--kg",
    "5",
    "--kb",
    "5",
    "--s",
    "0.5",
    "--seed",
    "42",
];

#[test]
fn fundamental_report_records_equal_values() {
    let tmp = tempfile::tempdir().unwrap();
    let mut args = vec!["--setting", "fundamental"];
    args.extend_from_slice(KARATE);
    let out = run_in(tmp.path(), &args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(tmp.path());
    assert_eq!(r["values"]["maxmin"], r["values"]["minmax"]);
    assert_eq!(r["values"]["maxmin_equals_minmax"], Value::Bool(true));
    assert_eq!(r["config"]["tau_max"], 100);
    assert!(r["error"].is_null());
    let csv = fs::read_to_string(tmp.path().join("allocations.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("node,x,y,r,r_wg,r_wb,v_final"));
    assert_eq!(lines.count(), 34);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    for setting in ["fundamental", "ccc-maxmin", "robust"] {
        let mut args = vec!["--setting", setting, "--eps-l", "0.4", "--eps-o", "0.1"];
        args.extend_from_slice(KARATE);
        assert!(run_in(tmp.path(), &args).status.success());
        let first = fs::read(tmp.path().join("report.json")).unwrap();
        let first_csv = fs::read(tmp.path().join("allocations.csv")).unwrap();
        assert!(run_in(tmp.path(), &args).status.success());
        assert_eq!(first, fs::read(tmp.path().join("report.json")).unwrap());
        assert_eq!(
            first_csv,
            fs::read(tmp.path().join("allocations.csv")).unwrap()
        );
    }
}

#[test]
fn ccc_maxmin_dominates_minmax() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let mut args = vec!["--setting", "ccc-maxmin"];
    args.extend_from_slice(KARATE);
    assert!(run_in(&a, &args).status.success());
    args[1] = "ccc-minmax";
    assert!(run_in(&b, &args).status.success());
    let maxmin = report(&a)["values"]["maxmin"].as_f64().unwrap();
    let minmax = report(&b)["values"]["minmax"].as_f64().unwrap();
    assert!(maxmin >= minmax);
}

#[test]
fn trajectory_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let out = camp_opt(&[
        "trajectory",
        "--setting",
        "fundamental",
        "--tol",
        "1e-4",
        "--out-dir",
        dir,
    ]);
    assert!(out.status.success());
    let csv = fs::read_to_string(tmp.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("tau,node,opinion\n"));
    for tau in [1, 2, 4] {
        assert!(csv.lines().any(|l| l.starts_with(&format!("{tau},"))));
    }
    let sums = fs::read_to_string(tmp.path().join("trajectory_sum.csv")).unwrap();
    let steps = sums.lines().count() - 2;
    assert!(steps <= 12, "{steps} steps emitted");

    let zero = tmp.path().join("zero");
    let z = zero.to_str().unwrap();
    let out = camp_opt(&["trajectory", "--kg", "0", "--kb", "0", "--out-dir", z]);
    assert!(out.status.success());
    let csv = fs::read_to_string(zero.join("trajectory.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",0")));
}

#[test]
fn config_file_with_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("scenario.toml");
    fs::write(
        &cfg,
        "setting = \"concave-bounded\"\nkg = 3\nt = 10\nout-dir = \"out\"\n",
    )
    .unwrap();
    let out = camp_opt(&["run", "--config", cfg.to_str().unwrap(), "--kg", "2"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&tmp.path().join("out"));
    assert_eq!(r["config"]["kg"], 2.0);
    assert_eq!(r["config"]["t"], 10.0);
    let total: f64 = r["allocations"]["x"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .sum();
    assert!((total - 2.0).abs() < 1e-9);
}

#[test]
fn config_errors_exit_two_with_line() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "setting = \"fundamental\"\n\nkb = true\n").unwrap();
    let out = camp_opt(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let data = tmp.path().join("edges.txt");
    fs::write(&data, "1 2\n2 3 4 5\n").unwrap();
    let out = run_in(
        tmp.path(),
        &[
            "--setting",
            "fundamental",
            "--dataset",
            data.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = run_in(tmp.path(), &["--setting", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solver_errors_exit_three_with_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_in(tmp.path(), &["--setting", "concave", "--t", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(tmp.path())["error"]["code"], "ConcavityDomain");
}

#[test]
fn path_datasets_and_weight_class() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("path.txt");
    fs::write(&data, "a b\nb c\nc d\n").unwrap();
    let out = run_in(
        tmp.path(),
        &[
            "--setting",
            "fundamental",
            "--dataset",
            data.to_str().unwrap(),
            "--alpha",
            "3",
            "--kg",
            "1",
            "--kb",
            "1",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(tmp.path());
    assert_eq!(r["network"]["weights"], "weighted-class");
    assert!(r["values"]["value"].as_f64().unwrap().abs() < 1e-12);
    let csv = fs::read_to_string(tmp.path().join("allocations.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("a,"));
}

#[test]
fn verify_suites() {
    let out = camp_opt(&["verify", "--suite", "weight-class"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    assert_eq!(
        camp_opt(&["verify", "--suite", "bogus"]).status.code(),
        Some(2)
    );
}
