use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn reeb(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reeb"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn workdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("reeb-cli-{name}-{}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    for spec in ["Y", "Y-perturbed", "figure1_left", "figure1_right", "segment"] {
        let o = reeb(&["gen", spec], &d);
        assert!(o.status.success());
        fs::write(d.join(format!("{spec}.txt")), o.stdout).unwrap();
    }
    d
}

#[test]
fn diagram_and_stats() {
    let d = workdir("diagram");
    let o = reeb(&["diagram", "Y.txt", "--check"], &d);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "Ord0 1 2\nExt0 0 3\n");
    let o = reeb(&["stats", "Y.txt"], &d);
    assert_eq!(stdout(&o), "V=4 E=3 b1=0 critical=[0, 1, 2, 3] a_f=1\n");
}

#[test]
fn exit_codes_follow_assertions() {
    let d = workdir("exit");
    let ok = reeb(&["bottleneck", "Y.txt", "Y-perturbed.txt", "--expect", "0.05"], &d);
    assert_eq!(ok.status.code(), Some(0));
    let wrong = reeb(&["bottleneck", "Y.txt", "Y-perturbed.txt", "--expect", "0.04"], &d);
    assert_eq!(wrong.status.code(), Some(1));
    let iso = reeb(&["iso", "figure1_left.txt", "figure1_right.txt", "--expect", "false"], &d);
    assert_eq!(iso.status.code(), Some(0));
    assert_eq!(stdout(&iso), "false\n");
    let missing = reeb(&["stats", "nope.txt"], &d);
    assert_eq!(missing.status.code(), Some(2));
    let bad_k = reeb(&["experiment", "recovery", "--K", "0.1"], &d);
    assert_eq!(bad_k.status.code(), Some(2));
}

#[test]
fn parse_errors_report_lines() {
    let d = workdir("parse");
    fs::write(d.join("bad.txt"), "v 0 0\nv 1 1\ne 0 7\n").unwrap();
    let o = reeb(&["stats", "bad.txt"], &d);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn operators_emit_graphs() {
    let d = workdir("ops");
    let o = reeb(&["merge", "Y.txt", "--a", "1.8", "--b", "2.6"], &d);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("# certificate: 0.4\n"));
    fs::write(d.join("merged.txt"), &out).unwrap();
    let o = reeb(&["diagram", "merged.txt"], &d);
    assert_eq!(stdout(&o), "Ord0 1 2.2\nExt0 0 3\n");
    let o = reeb(&["simplify", "Y.txt", "--alpha", "1"], &d);
    fs::write(d.join("flat.txt"), stdout(&o)).unwrap();
    let o = reeb(&["iso", "flat.txt", "segment.txt"], &d);
    assert!(stdout(&o).starts_with("true"));
    let o = reeb(&["transform", "Y-perturbed.txt", "--alpha", "0.1", "--anchors", "Y.txt"], &d);
    fs::write(d.join("recovered.txt"), stdout(&o)).unwrap();
    let o = reeb(&["iso", "recovered.txt", "Y.txt", "--expect", "true"], &d);
    assert!(o.status.success());
}

#[test]
fn records_are_json_lines() {
    let d = workdir("records");
    let o = reeb(&["experiment", "all", "--trials", "2", "--format", "records"], &d);
    assert!(o.status.success());
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summaries = lines.iter().filter(|l| l["type"] == "summary").count();
    assert_eq!(summaries, 8);
    let o = reeb(&["fdbound", "Y.txt", "Y-perturbed.txt", "--format", "records"], &d);
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["certificate"]["upper"], "0.05");
    assert_eq!(rec["certificate"]["lower"], "0.025");
}

#[test]
fn path_manifest_lengths() {
    let d = workdir("path");
    fs::write(d.join("path.txt"), "# two steps\n0 Y.txt\n0.5 Y-perturbed.txt\n1 Y.txt\n").unwrap();
    let o = reeb(&["pathlen", "path.txt", "--metric", "db"], &d);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("total 0.1\n"));
    let o = reeb(&["pathlen", "path.txt", "--metric", "fd"], &d);
    assert!(stdout(&o).ends_with("total 0.1\n"));
    let o = reeb(&["intrinsic", "figure1_left.txt", "figure1_right.txt"], &d);
    assert!(o.status.success());
    assert!(!stdout(&o).starts_with('0'));
}

#[test]
fn experiments_are_deterministic() {
    let d = workdir("determinism");
    let args = ["experiment", "stability", "--seed", "7", "--trials", "10", "--format", "records"];
    assert_eq!(stdout(&reeb(&args, &d)), stdout(&reeb(&args, &d)));
}
