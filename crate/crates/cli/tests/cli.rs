use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bflab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bflab")).args(args).current_dir(dir).output().expect("spawn bflab")
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(bytes)))
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn missing_file_is_a_precondition_error_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = bflab(&["energy", "--a", "does-not-exist.txt"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = json(&out.stderr);
    assert_eq!(err["error"], "io");
    assert!(err["message"].as_str().unwrap().contains("does-not-exist.txt"));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.txt", "1 2 x/3\n");
    let out = bflab(&["setop", "--a", "a.txt", "--op", "sum"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out.stderr)["message"].as_str().unwrap().contains("a.txt"));

    let out = bflab(&["suite", "nonsense"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out.stderr)["error"], "unknown_suite");
}

#[test]
fn oversized_energy_is_rejected_by_the_cost_guard() {
    let dir = tempfile::tempdir().unwrap();
    let gen = bflab(&["--seed", "3", "gen", "random", "--n", "40000", "--bound", "100000", "--points", "--out", "p.txt"], dir.path());
    assert_eq!(gen.status.code(), Some(0), "{}", String::from_utf8_lossy(&gen.stderr));
    let out = bflab(&["form", "--points", "p.txt", "--energy"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out.stderr)["error"], "cost_exceeded");
}

#[test]
fn fit_reports_the_slope() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "d.csv", "size,value\n4,64\n8,512\n16,4096\n");
    let out = bflab(&["fit", "--csv", "d.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert!((v["result"]["slope"].as_f64().unwrap() - 3.0).abs() < 1e-12);

    let out = bflab(&["--format", "csv", "fit", "--csv", "d.csv"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    let slope: f64 = text.lines().find_map(|l| l.strip_prefix("slope,")).unwrap().parse().unwrap();
    assert!((slope - 3.0).abs() < 1e-12);

    write(dir.path(), "bad.csv", "4,64
8,x
");
    let out = bflab(&["fit", "--csv", "bad.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out.stderr)["message"].as_str().unwrap().contains("bad.csv"));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let gen = ["--seed", "9", "gen", "random", "--n", "30", "--bound", "50"];
    let a = bflab(&gen, dir.path());
    let b = bflab(&gen, dir.path());
    assert_eq!(a.stdout, b.stdout);
    std::fs::write(dir.path().join("a.txt"), &a.stdout).unwrap();

    for args in [
        &["weak-es", "--a", "a.txt"][..],
        &["suite", "eps2", "--a", "a.txt"],
        &["--sequential", "suite", "eps2", "--a", "a.txt"],
    ] {
        let x = bflab(args, dir.path());
        let y = bflab(args, dir.path());
        assert_eq!(x.status.code(), Some(0));
        assert_eq!(x.stdout, y.stdout);
    }
    let par = json(&bflab(&["suite", "eps2", "--a", "a.txt"], dir.path()).stdout);
    let seq = json(&bflab(&["--sequential", "suite", "eps2", "--a", "a.txt"], dir.path()).stdout);
    assert_eq!(par["result"], seq["result"]);
}

#[test]
fn suite_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = bflab(&["gen", "progression", "--kind", "geometric", "--start", "1", "--step", "2", "--n", "16"], dir.path());
    std::fs::write(dir.path().join("g.txt"), &out.stdout).unwrap();
    let out = bflab(&["--seed", "5", "suite", "eps1", "--a", "g.txt"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["command"], "suite");
    assert_eq!(v["config"]["seed"], 5);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    for r in rows {
        for key in ["name", "measured", "bound", "ratio"] {
            assert!(r.get(key).is_some(), "row missing {key}: {r}");
        }
    }
    let aa = rows.iter().find(|r| r["name"] == "AA").unwrap();
    assert_eq!(aa["measured"], 31);
}

#[test]
fn erdos_bundle_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = bflab(&["gen", "erdos", "--n", "64", "--out", "bundle"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["p1.pts", "p2.pts", "lines.txt", "meta.json"] {
        assert!(dir.path().join("bundle").join(f).is_file(), "missing {f}");
    }
    let v = json(&out.stdout);
    assert_eq!(v["result"]["N"], 64);

    let dirs = std::fs::read_to_string(dir.path().join("bundle/lines.txt")).unwrap();
    assert!(dirs.lines().all(|l| l.split_whitespace().count() == 2));
    let out = bflab(
        &["count", "form-value", "--p", "bundle/p1.pts", "--q", "bundle/p2.pts", "--kind", "dot", "--c", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(json(&out.stdout)["result"]["count"].as_u64().unwrap() >= 256);

    let out = bflab(&["gen", "erdos", "--n", "64"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_can_be_written_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.txt", "1 2 3 4\n");
    let out = bflab(&["--out", "r.json", "energy", "--a", "a.txt"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["energy"], 44);
}
