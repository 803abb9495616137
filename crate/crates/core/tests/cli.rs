use std::process::{Command, Output};

fn mbl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_prints_line_type() {
    for (v, want) in [(["1", "0", "0"], "space-like"), (["0", "0", "1"], "time-like"), (["1", "0", "-1"], "light-like")] {
        let o = mbl(&["classify", v[0], v[1], v[2]]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), want);
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(mbl(&["classify", "0", "0", "0"]).status.code(), Some(2));
    assert_eq!(mbl(&["trace", "--point", "9,0,0", "--dir", "1,0,0"]).status.code(), Some(2));
    assert_eq!(mbl(&["check-cayley", "--params", "4,2,1", "--case", "S1", "--n", "4"]).status.code(), Some(2));
}

#[test]
fn check_cayley_reports_non_periodic_parameters() {
    let o = mbl(&["check-cayley", "--params", "4,2,1,3/2,-1/2", "--case", "S1", "--n", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("NOT SATISFIED"));
}

#[test]
fn trace_writes_json_and_csv() {
    let dir = std::env::temp_dir().join(format!("mbl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("t.csv");
    let o = mbl(&["trace", "--point", "0.1,0.2,0.1", "--dir", "1,0.3,0.2", "--bounces", "5", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_object());
    let rows = std::fs::read_to_string(&csv).unwrap().lines().count();
    assert_eq!(rows, 6);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn find_periodic_then_verify_round_trip() {
    let dir = std::env::temp_dir().join(format!("mbl-cli-fp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("spec.json");
    std::fs::write(&spec, r#"{"ellipsoid": [4, 2, 1], "case": "S1", "n": 4}"#).unwrap();
    let o = mbl(&["cross-validate", "--spec", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::write(&spec, r#"{"ellipsoid": [4, 2, 1], "case": "light", "n": 5}"#).unwrap();
    assert_eq!(mbl(&["find-periodic", "--spec", spec.to_str().unwrap()]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}
