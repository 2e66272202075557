use std::io::Write;
use std::process::{Command, Output};

use knotwist::invariants::ReportRecord;

fn knotwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotwist"))
        .args(args)
        .env_remove("KNOTWIST_FIXTURES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn small_fixtures() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# two knots only").unwrap();
    writeln!(f, "3_1 | braid | 1 1 1 | 1 | 1 - t + t^2").unwrap();
    writeln!(f, "4_1 | braid | 1 -2 1 -2 | 1 | 1 - 3*t + t^2").unwrap();
    f
}

#[test]
fn trefoil_over_integers() {
    let o = knotwist(&["invariant", "--knot", "3_1", "--k", "1", "--ring", "z"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("product: 1 - t + t^2"));
}

#[test]
fn braid_and_pd_inputs_agree() {
    let by_braid = knotwist(&["invariant", "--braid", "1 1 1", "--k", "2", "--format", "json"]);
    let by_pd = knotwist(&[
        "invariant",
        "--pd",
        "X(1,5,2,4);X(3,1,4,6);X(5,3,6,2)",
        "--k",
        "2",
        "--format",
        "json",
    ]);
    assert!(by_braid.status.success() && by_pd.status.success(), "{}", String::from_utf8_lossy(&by_pd.stderr));
    let a: serde_json::Value = serde_json::from_slice(&by_braid.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&by_pd.stdout).unwrap();
    assert_eq!(a["product"], b["product"]);
}

#[test]
fn json_is_a_report_record() {
    let o = knotwist(&["invariant", "--knot", "4_1", "--k", "3", "--format", "json"]);
    assert!(o.status.success());
    let rec: ReportRecord = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rec.name, "4_1");
    assert_eq!(rec.k, 3);
    assert_eq!(rec.classes.len(), 3);
    let again = serde_json::to_value(&rec).unwrap();
    let raw: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(again, raw);
}

#[test]
fn output_is_deterministic() {
    let args = ["invariant", "--knot", "5_2", "--k", "4", "--format", "json"];
    let a = knotwist(&args);
    let b = knotwist(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let single = knotwist(&["--threads", "1", "invariant", "--knot", "5_2", "--k", "4", "--format", "json"]);
    assert_eq!(a.stdout, single.stdout);
}

#[test]
fn csv_row() {
    let o = knotwist(&["invariant", "--knot", "3_1", "--k", "2", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("knot,k,num_classes,degree,head,tail"));
    assert!(lines.next().unwrap().starts_with("3_1,2,2,8,"));
}

#[test]
fn compare_mutant_pair() {
    let o = knotwist(&["compare", "10_40", "10_103", "--k", "3", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["kind"], "mutants-equal-up-to");

    let o = knotwist(&["compare", "3_1", "4_1", "--k", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["kind"], "mutants-distinguished");
}

#[test]
fn table_rows_check() {
    let o = knotwist(&["table", "--rows", "11_44:3,11_440:3", "--check"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("2 of 2 rows match"));
}

#[test]
fn unknown_knot_exits_2() {
    let o = knotwist(&["invariant", "--knot", "nosuch", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nosuch"));
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(knotwist(&["invariant", "--knot", "3_1", "--k", "2", "--p", "4"]).status.code(), Some(2));
    assert_eq!(knotwist(&["invariant", "--braid", "1 x 1", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn resource_limits_exit_3() {
    assert_eq!(knotwist(&["invariant", "--knot", "3_1", "--k", "9"]).status.code(), Some(3));
    let o = knotwist(&["--max-k", "2", "invariant", "--knot", "3_1", "--k", "3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn fixture_gap_exits_4() {
    let f = small_fixtures();
    let path = f.path().to_str().unwrap();
    let o = knotwist(&["--fixtures", path, "table", "--rows", "3_1:2,11_44:3"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("11_44"));
}

#[test]
fn fixtures_from_environment() {
    let f = small_fixtures();
    let o = Command::new(env!("CARGO_BIN_EXE_knotwist"))
        .args(["invariant", "--knot", "5_2", "--k", "1"])
        .env("KNOTWIST_FIXTURES", f.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_knotwist"))
        .args(["validate"])
        .env("KNOTWIST_FIXTURES", f.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 2);
}

#[test]
fn verdict_commands() {
    let o = knotwist(&["fibered", "--knot", "5_2", "--k-max", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("not fibered"));
    let o = knotwist(&["trivial", "--knot", "0_1", "--k-max", "3"]);
    assert!(stdout(&o).contains("trivial up to k = 3"));
    let o = knotwist(&["divides", "--knot", "3_1", "--k", "3"]);
    assert!(o.status.success());
    let o = knotwist(&["cover", "--knot", "4_1", "--k", "3"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("DIFFERENT"));
}
