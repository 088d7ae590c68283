use std::process::{Command, Output};

fn fplkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fplkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_size_three_tallies() {
    let o = fplkit(&["enumerate", "--size", "3", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    let total: u64 = rows.iter().map(|r| r.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 7);
}

#[test]
fn enumerate_size_one_has_one_row() {
    let o = fplkit(&["enumerate", "--size", "1", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().skip(1).collect::<Vec<_>>(), vec!["\"(1,2)\",1"]);
}

#[test]
fn enumerate_half_turn_size_three() {
    let o = fplkit(&["enumerate", "--size", "3", "--ht", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total"], "3");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn oversize_enumeration_is_refused() {
    let o = fplkit(&["enumerate", "--size", "12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the enumeration limit"));
}

#[test]
fn verify_rs_passes() {
    let o = fplkit(&["verify", "rs", "--size", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_bijection_passes() {
    let o = fplkit(&["verify", "bijection", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().next().unwrap().ends_with("pass"));
}

#[test]
fn proposition_report_does_not_set_exit_code() {
    let o = fplkit(&["verify", "proposition", "--which", "eq4", "--n", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["identity"], "proposition-eq4");
    assert_eq!(v["theorem_backed"], false);
}

#[test]
fn tables_shape_and_anchors() {
    let o = fplkit(&["tables", "--n", "3", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l,n,x,y,det,tilings,ratio"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 4 * 4);
    assert!(rows.iter().filter(|r| r[0] == "0" && r[1] == "0").all(|r| r[4] == "1/1"));
    let anchor = rows.iter().find(|r| r[..4] == ["1", "1", "1/1", "1/1"]).unwrap();
    assert_eq!(anchor[4], "3/1");
    // Regions over the vertex limit leave the oracle cells empty.
    let (checked, skipped): (Vec<_>, Vec<_>) = rows.iter().partition(|r| !r[5].is_empty());
    assert!(checked.iter().all(|r| r[4] == r[5] && r[6] == "1/1"));
    assert!(skipped.iter().all(|r| r[0] == "2" && r[1] == "3"));

    let o = fplkit(&["tables", "--n", "3", "--format", "csv", "--limit-vertices", "200"]);
    let text = stdout(&o);
    assert!(text.lines().skip(1).map(|l| l.split(',').collect::<Vec<_>>()).all(|r| r[4] == r[5] && r[6] == "1/1"));
}

#[test]
fn tables_single_weight_pair() {
    let o = fplkit(&["tables", "--n", "2", "--x", "1/2", "--y", "1", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 3 * 3);
}

#[test]
fn output_is_independent_of_workers() {
    let args = |w: &'static str| ["verify", "dg", "--size", "5", "--format", "json", "--workers", w];
    let one = fplkit(&args("1"));
    for w in ["2", "4"] {
        assert_eq!(fplkit(&args(w)).stdout, one.stdout);
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(fplkit(&["verify", "proposition", "--which", "eq9"]).status.code(), Some(2));
    assert_eq!(fplkit(&["tables", "--x", "a/b", "--y", "1"]).status.code(), Some(2));
    assert_eq!(fplkit(&["enumerate"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("fplkit-out-{}.csv", std::process::id()));
    let o = fplkit(&["enumerate", "--size", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written.lines().count(), 3);
}
