use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ttw4d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttw4d")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ttw4d-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(path: &PathBuf) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn eigen_example_passes_with_json_report() {
    let path = scratch("eigen.json");
    let o = ttw4d(&[
        "verify", "--suite", "eigen", "--k", "1,1,1", "--a", "1/2,1/2,1/2,1/2", "--omega", "1", "--nmax", "3", "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = read_json(&path);
    for key in ["suite", "params", "conventions", "cases", "max_residual", "pass", "wall_ms"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["suite"], "eigen");
    assert_eq!(r["pass"], true);
    assert!(r["max_residual"].as_f64().unwrap() <= 1e-7);
    assert_eq!(r["cases"].as_array().unwrap().len(), 4 * 256);
    assert_eq!(r["params"][0]["a"][0], "1/2");
}

#[test]
fn algebra_on_211_reports_conventions() {
    let printed = ttw4d(&["verify", "--suite", "algebra", "--k", "2,1,1", "--nmax", "6"]);
    assert_eq!(printed.status.code(), Some(1), "printed identities fail for i >= 2");
    assert!(stdout(&printed).contains("FAIL algebra"));

    let path = scratch("algebra.json");
    let o = ttw4d(&[
        "verify", "--suite", "algebra", "--k", "2,1,1", "--nmax", "6", "--form", "corrected", "--convention", "auto",
        "--report", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = read_json(&path);
    let conv = r["conventions"].as_array().unwrap();
    assert_eq!(conv.len(), 6, "bracket-pm and cubic for i = 1, 2, 3");
    for c in conv {
        assert_eq!(c["conventions"]["p_minus"], "antisymmetric");
        assert_eq!(c["holds"], true);
    }
}

#[test]
fn example_suite_requires_211() {
    let o = ttw4d(&["verify", "--suite", "example211", "--k", "3,1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("requires k=(2,1,1)"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["verify", "--suite", "eigen", "--k", "1,1"],
        vec!["verify", "--suite", "eigen", "--k", "1,x,1"],
        vec!["verify", "--suite", "eigen", "--k", "0,1,1"],
        vec!["verify", "--suite", "bogus"],
        vec!["verify", "--suite", "eigen", "--nmax", "9"],
        vec!["verify", "--suite", "algebra", "--convention", "sideways"],
        vec!["verify", "--suite", "eigen", "--format", "xml"],
        vec!["verify", "--no-such-flag"],
        vec!["spectrum", "--a", "1/2,1/2"],
    ] {
        let o = ttw4d(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn flags_override_config_file() {
    let cfg = scratch("run.conf");
    std::fs::write(&cfg, "# curvature probe\nsuite = curvature\nk = 1,1,1\npoints = 3\nseed = 7\n").unwrap();
    let o = ttw4d(&["verify", "--config", cfg.to_str().unwrap(), "--k", "2,1,1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["suite"], "curvature");
    assert_eq!(r["params"][0]["k"][0], "2");
    assert!(stdout(&o).contains("probe R = 6"));

    let bad = scratch("bad.conf");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(ttw4d(&["verify", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let run = || {
        let o = ttw4d(&["verify", "--suite", "conformal", "--k", "3/2,3/2,1", "--points", "4", "--seed", "11", "--format", "json"]);
        let mut r: Value = serde_json::from_slice(&o.stdout).unwrap();
        r["wall_ms"] = Value::Null;
        r
    };
    assert_eq!(run(), run());
}

#[test]
fn csv_has_one_row_per_case() {
    let path = scratch("ladders.csv");
    let o = ttw4d(&["verify", "--suite", "ladders", "--k", "2,1,1", "--nmax", "2", "--format", "csv", "--report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let cases: usize = stdout(&o).split(" cases").next().unwrap().rsplit(' ').next().unwrap().parse().unwrap();
    assert_eq!(text.lines().count(), cases + 1);
    assert!(text.starts_with("suite,params,check,state,point,residual"));
}

#[test]
fn spectrum_table_rows() {
    let o = ttw4d(&["spectrum", "--k", "1,1,1", "--nmax", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("-12ω"));

    let o = ttw4d(&["spectrum", "--k", "2,1,1", "--nmax", "2", "--format", "json"]);
    let rows: Value = serde_json::from_slice(&o.stdout).unwrap();
    let class_of = |n: [u64; 4]| {
        rows.as_array()
            .unwrap()
            .iter()
            .find(|r| r["state"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).eq(n))
            .map(|r| r["class"].clone())
            .unwrap()
    };
    assert_eq!(class_of([2, 0, 0, 0]), class_of([0, 1, 0, 0]));
    assert_ne!(class_of([0, 0, 0, 0]), class_of([0, 1, 0, 0]));
}
