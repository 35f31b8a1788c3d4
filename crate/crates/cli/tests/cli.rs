use std::process::{Command, Output};

fn qfock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfock")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn straighten_three_terms() {
    let o = qfock(&["straighten", "--word=-1,-2,4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("q^-1  u4 ∧ u-1 ∧ u-2"));
    assert!(text.contains("1-q^-2  u3 ∧ u0 ∧ u-2"));
    assert!(text.contains("-q^-1+q^-3  u2 ∧ u1 ∧ u-2"));
}

#[test]
fn straighten_repeated_index_is_zero() {
    let o = qfock(&["straighten", "--word=5,5"]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn straighten_json() {
    let o = qfock(&["straighten", "--word=4,2,-1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["word"], serde_json::json!([4, 2, -1]));
}

#[test]
fn canonical_degree_four_level_one() {
    let o = qfock(&["canonical", "--degree", "4", "--format", "json"]);
    assert!(o.status.success());
    let m: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let labels: Vec<String> = m["labels"].as_array().unwrap().iter().map(|l| l.to_string()).collect();
    let at = |s: &str| labels.iter().position(|l| l == s).unwrap();
    let row = &m["entries"][at("[[4]]")];
    assert_eq!(row[at("[[4]]")], serde_json::json!([[0, "1/1"]]));
    assert_eq!(row[at("[[3,1]]")], serde_json::json!([[-1, "-1/1"]]));
    assert_eq!(row[at("[[2,2]]")], serde_json::json!([[-2, "1/1"]]));
    assert_eq!(row[at("[[2,1,1]]")], serde_json::json!([]));
}

#[test]
fn canonical_degree_zero_is_identity() {
    let o = qfock(&["--l", "2", "--charge", "1,0", "canonical", "--degree", "0", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "label,\"(∅,∅)\"\n\"(∅,∅)\",1");
}

#[test]
fn warm_cache_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "--l", "2", "--charge", "2,0", "canonical", "--degree", "3", "--sign", "plus"];
    let cold = qfock(&args);
    let warm = qfock(&args);
    assert!(cold.status.success() && warm.status.success());
    assert_eq!(cold.stdout, warm.stdout);
}

#[test]
fn corrupt_cache_entry_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "canonical", "--degree", "3"];
    let cold = qfock(&args);
    for entry in walk(dir.path()) {
        std::fs::write(entry, "{not json").unwrap();
    }
    let again = qfock(&args);
    assert_eq!(cold.stdout, again.stdout);
}

fn walk(p: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut out = vec![];
    for e in std::fs::read_dir(p).unwrap() {
        let path = e.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out
}

#[test]
fn verify_sweep_passes() {
    let o = qfock(&["verify", "--theorem", "412", "--n", "2", "--l", "2", "--charge", "6,0", "--max-degree", "4"]);
    assert!(o.status.success());
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|r| r["equal"] == true));
}

#[test]
fn verify_rejects_non_dominant_charge() {
    let o = qfock(&["verify", "--theorem", "412", "--charge", "0,0", "--lambda", "[[2,2],[]]"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("not 0-dominant"));
}

#[test]
fn verify_heisenberg_suite() {
    let o = qfock(&["verify", "--suite", "heisenberg"]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(r["passed"], true);
}

#[test]
fn ribbon_and_boson_routes_agree() {
    let a = qfock(&["--n", "3", "apply-op", "--v", "2", "--lambda", "[[2,1]]"]);
    let b = qfock(&["--n", "3", "apply-op", "--v", "2", "--lambda", "[[2,1]]", "--route", "boson"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn rejects_bad_parameters() {
    assert!(!qfock(&["--n", "1", "bar", "--lambda", "[[1]]"]).status.success());
    assert!(!qfock(&["--l", "2", "--charge", "1,2,3", "bar", "--lambda", "[[1],[]]"]).status.success());
}
