use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lateral_core::graph::example::lasso;
use lateral_core::io::{family_to_string, graph_to_string};
use lateral_core::lateral::example;
use lateral_core::sample::{random_tree, seeded};
use serde_json::Value;
use tempfile::TempDir;

fn lateral(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lateral")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn family_file(dir: &TempDir, t: f64) -> PathBuf {
    write(dir, &format!("family-{t}.json"), &family_to_string(&example::family(t).unwrap()))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn inertia_of_a_diagonal_matrix() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "m.json", r#"{"n":4,"re":[[3,0,0,0],[0,0,0,0],[0,0,-1,0],[0,0,0,-2]]}"#);
    let v = json(&lateral(&["inertia", s(&f)]));
    assert_eq!((v["minus"].as_u64(), v["zero"].as_u64(), v["plus"].as_u64()), (Some(2), Some(1), Some(1)));
    let v = json(&lateral(&["inertia", s(&f), "--shift", "-1"]));
    assert_eq!((v["minus"].as_u64(), v["zero"].as_u64(), v["plus"].as_u64()), (Some(1), Some(1), Some(2)));
}

#[test]
fn bad_input_exit_codes() {
    let dir = TempDir::new().unwrap();
    let nh = write(&dir, "nh.json", r#"{"n":2,"re":[[1,2],[0,1]]}"#);
    assert_eq!(lateral(&["inertia", s(&nh)]).status.code(), Some(3));
    let bad = write(&dir, "bad.json", r#"{"n":2"#);
    assert_eq!(lateral(&["inertia", s(&bad)]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(lateral(&["inertia", s(&missing)]).status.code(), Some(2));
    let f = family_file(&dir, 1.0);
    assert_eq!(lateral(&["flow", s(&f), "--steps", "1"]).status.code(), Some(2));
    assert_eq!(lateral(&["surface", s(&f), "--grid", "4"]).status.code(), Some(2));
}

#[test]
fn hessian_at_the_largest_coupling() {
    let dir = TempDir::new().unwrap();
    let f = family_file(&dir, 2.5);
    let v = json(&lateral(&["hessian", s(&f)]));
    assert_eq!(v["morse_index"], 2);
    assert_eq!(v["sigma"], 2);
    assert_eq!(v["nullity"], 0);
    assert_eq!(v["theorem_index_holds"], true);
    let v = json(&lateral(&["shift", s(&f)]));
    assert_eq!(v["sigma"], 2);
}

#[test]
fn zero_coupling_operator_gives_q_equal_omega() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "k0.json",
        r#"{"S":{"n":3,"re":[[0,0,0],[0,1,0],[0,0,-1]]},"Omega":{"n":2,"re":[[1,0],[0,-1]]},"K0":{"re":[[0,0,0],[0,0,0]]},"lambda0":0}"#,
    );
    let v = json(&lateral(&["hessian", s(&f)]));
    assert_eq!(v["Q"]["re"], serde_json::json!([[1.0, 0.0], [0.0, -1.0]]));
    assert_eq!(v["morse_index"], 1);
    assert_eq!(v["sigma"], 0);
}

#[test]
fn flow_keeps_a_zero_branch() {
    let dir = TempDir::new().unwrap();
    let f = family_file(&dir, 1.0);
    let o = lateral(&["flow", s(&f), "--steps", "31"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,lambda_1,lambda_2,lambda_3,lambda_4"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 31);
    assert_eq!(rows[30][0], 3.0);
    for row in &rows {
        assert_eq!(row[1..].iter().filter(|v| v.abs() <= 1e-12).count(), 1, "{row:?}");
    }

    let o = lateral(&["flow", s(&f), "--steps", "2", "--tmin", "1", "--tmax", "1"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], rows[1]);
}

#[test]
fn surface_center_classification() {
    let dir = TempDir::new().unwrap();
    for (t, kind) in [(0.1, "minimum"), (2.5, "maximum")] {
        let f = family_file(&dir, t);
        let v = json(&lateral(&["surface", s(&f), "--format", "json", "--grid", "3", "--range", "1e-5"]));
        assert_eq!(v["classification"], kind);
        let points = v["points"].as_array().unwrap();
        assert_eq!(points.len(), 49);
        assert!(points.iter().all(|p| p["Lambda"].as_f64().unwrap().abs() <= 1e-8));
        let center = &points[24];
        assert_eq!((center["s1"].as_f64(), center["s2"].as_f64()), (Some(0.0), Some(0.0)));
        assert!(center["Lambda"].as_f64().unwrap().abs() <= 1e-12);
    }
}

#[test]
fn surface_csv_puts_metadata_on_stderr() {
    let dir = TempDir::new().unwrap();
    let f = family_file(&dir, 1.0);
    let o = lateral(&["surface", s(&f), "--grid", "3", "--range", "0.1"]);
    assert!(o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    let meta: Value = serde_json::from_str(err.trim().strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(meta["classification"], "saddle");
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("s1,s2,Lambda"));
    assert_eq!(text.lines().count(), 50);
}

#[test]
fn graph_reports_on_the_lasso_and_rejects_a_tree() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "lasso.json", &graph_to_string(&lasso(), None));
    let v = json(&lateral(&["graph", s(&f), "--all"]));
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 4);
    for r in reports {
        assert_eq!(r["theorem_holds"], true);
        assert_eq!(r["surplus"], r["morse_index_q"]);
    }
    let v = json(&lateral(&["graph", s(&f), "--level", "3"]));
    assert_eq!(v[0]["flip_count"], 3);
    assert_eq!(v[0]["surplus"], 1);

    let tree = random_tree(&mut seeded(0), 5);
    let t = write(&dir, "tree.json", &graph_to_string(&tree, None));
    assert_eq!(lateral(&["graph", s(&t)]).status.code(), Some(3));
}

#[test]
fn written_family_satisfies_the_identities() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("random.json");
    let o = lateral(&["selftest", "--seed", "7", "--write-family", s(&f)]);
    assert!(o.status.success());
    let v = json(&lateral(&["hessian", s(&f)]));
    assert_eq!(v["theorem_index_holds"], true);
    assert_eq!(v["theorem_nullity_holds"], true);
}

#[test]
fn output_is_deterministic_and_out_flag_writes_a_file() {
    let dir = TempDir::new().unwrap();
    let f = family_file(&dir, 1.0);
    let args = ["surface", s(&f), "--seed", "5", "--grid", "3", "--format", "json"];
    let a = lateral(&args);
    let b = lateral(&args);
    assert_eq!(a.stdout, b.stdout);

    let out = dir.path().join("flow.csv");
    let o = lateral(&["flow", s(&f), "--steps", "5", "--out", s(&out)]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&out).unwrap(), stdout(&lateral(&["flow", s(&f), "--steps", "5"])));
}

#[test]
fn schur_of_a_two_by_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "m.json", r#"{"n":2,"re":[[0,2],[2,3]]}"#);
    let v = json(&lateral(&["schur", s(&f), "--first", "0"]));
    assert!((v["re"][0][0].as_f64().unwrap() + 4.0 / 3.0).abs() <= 1e-14);
    assert_eq!(lateral(&["schur", s(&f), "--first", "0", "--format", "csv"]).status.code(), Some(2));
}
