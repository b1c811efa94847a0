//! End-to-end runs of the `qclets` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qclets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qclets")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn girth_of_girth_8_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let o = qclets(&["girth", &fixture("t4_3x5_g8_1.txt"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "girth 8");
    assert_eq!(
        std::fs::read_to_string(out).unwrap(),
        "method,girth\nwalk,girth 8\nbfs,girth 8\n"
    );
}

#[test]
fn malformed_matrix_is_a_parse_error_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 5 31\n0 0 0\n").unwrap();
    let out = dir.path().join("g.csv");
    let o = qclets(&["girth", bad.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(13));
    assert!(!out.exists());
}

#[test]
fn missing_file_is_an_io_error() {
    let o = qclets(&["girth", "/nonexistent/matrix.txt"]);
    assert_eq!(o.status.code(), Some(14));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(qclets(&["girth"]).status.code(), Some(2));
    let o = qclets(&["verify", &fixture("p2.txt"), "--girth", "8", "--range", "eight"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_tanner_code_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = qclets(&[
        "enumerate",
        &fixture("tanner.txt"),
        "--girth",
        "8",
        "--range",
        "8:3",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(10));
    let csv = std::fs::read_to_string(out).unwrap();
    assert!(csv.starts_with("a,b,count\n"));
    // (5,3) and (7,3) multiplicities of the length-155 Tanner code.
    assert!(csv.contains("\n5,3,155\n"), "{csv}");
    assert!(csv.contains("\n7,3,930\n"), "{csv}");
    assert!(csv.contains("\n8,2,465\n"), "{csv}");
}

#[test]
fn verify_reports_clean_and_dirty() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.toml");
    let o = qclets(&[
        "verify",
        &fixture("p2.txt"),
        "--girth",
        "8",
        "--range",
        "8:3;10:2",
        "-o",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&rep).unwrap().contains("clean = true"));
    let o = qclets(&["verify", &fixture("p2.txt"), "--girth", "8", "--range", "9:3"]);
    assert_eq!(o.status.code(), Some(10));
    assert!(stdout(&o).contains("clean = false"));
}

#[test]
fn table1_spot_checks() {
    let o = qclets(&["table1", "--dv", "3", "--girth", "6", "--range", "8:2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(8,2) s_3(13)/s_3(14)"), "{}", stdout(&o));
    let o = qclets(&["table1", "--dv", "4", "--girth", "8", "--range", "11:0"]);
    assert!(stdout(&o).contains("(11,0) s_4(0)/s_4(2)"), "{}", stdout(&o));
}

#[test]
fn plan_round_trips_through_db_file() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db.txt");
    let plan = dir.path().join("plan.txt");
    let o = qclets(&[
        "db-build",
        "--dv",
        "3",
        "--girth",
        "8",
        "--range",
        "8:3",
        "-o",
        db.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = qclets(&[
        "plan",
        "--dv",
        "3",
        "--girth",
        "8",
        "--range",
        "8:3",
        "--db",
        db.to_str().unwrap(),
        "-o",
        plan.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&plan).unwrap();
    let fresh = qclets(&["plan", "--dv", "3", "--girth", "8", "--range", "8:3"]);
    assert_eq!(stdout(&fresh), text);
}

#[test]
fn construct_small_code_and_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.toml");
    std::fs::write(
        &cfg,
        "rows = 3\ncols = 4\ngirth = 8\nranges = \"6:3\"\nmode = \"fixed\"\nlifting = 13\nbudget_secs = 120\nseed = 5\n",
    )
    .unwrap();
    let out = dir.path().join("m.txt");
    let o = qclets(&[
        "construct",
        "--config",
        cfg.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = std::fs::read_to_string(dir.path().join("m.txt.report.toml")).unwrap();
    assert!(report.contains("seed = 5"));
    let o = qclets(&["verify", out.to_str().unwrap(), "--girth", "8", "--range", "6:3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    // Same seed, same matrix.
    let again = dir.path().join("m2.txt");
    qclets(&[
        "construct",
        "--config",
        cfg.to_str().unwrap(),
        "-o",
        again.to_str().unwrap(),
    ]);
    assert_eq!(
        std::fs::read_to_string(out).unwrap(),
        std::fs::read_to_string(again).unwrap()
    );
}

#[test]
fn construct_without_seed_prints_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.txt");
    let o = qclets(&[
        "construct",
        "--rows",
        "3",
        "--cols",
        "3",
        "--girth",
        "6",
        "--range",
        "3:3",
        "--lifting",
        "7",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("seed "));
}

#[test]
fn simulate_writes_fer_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fer.csv");
    let o = qclets(&[
        "simulate",
        &fixture("tanner.txt"),
        "--snr",
        "2.0",
        "--seed",
        "1",
        "--min-errors",
        "5",
        "--max-frames",
        "2000",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out).unwrap();
    assert!(csv.starts_with("ebn0_db,frames,errors,fer\n2,"), "{csv}");
}
