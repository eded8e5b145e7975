use std::process::{Command, Output};

fn gqd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqd")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_prints_all_three_measures() {
    let o = gqd(&["compute", "--J", "1", "--B", "1", "--D", "1", "--T", "1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("Q_T = 0.6880866357"), "{s}");
    assert!(s.contains("Q_H = 0.4512989678"), "{s}");
    assert!(s.contains("Q_B = 0.54898"), "{s}");
}

#[test]
fn compute_json_has_expected_keys() {
    let o = gqd(&["compute", "--measure", "trace,hellinger", "--format", "json", "--D", "-0.5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let items = v.as_array().unwrap();
    assert_eq!(items.len(), 2);
    for item in items {
        for key in ["value", "measure", "method", "diagnostics"] {
            assert!(item.get(key).is_some(), "missing {key}");
        }
    }
    assert_eq!(items[1]["diagnostics"]["branch"], "transverse");
}

#[test]
fn large_dm_limit_saturates() {
    let o = gqd(&["limits", "--case", "dinf"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 3);
    for line in s.lines() {
        assert!(line.contains("Q_T=1.000000") && line.contains("Q_H=1.000000"), "{line}");
    }
}

#[test]
fn oracle_suite_passes() {
    let o = gqd(&["verify", "--suite", "oracle", "--samples", "20"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn invalid_input_exits_with_usage_code() {
    for args in [
        &["compute", "--bogus"][..],
        &["compute", "--T", "-1"],
        &["sweep", "--vary", "D", "--from", "0", "--to", "1", "--steps", "1"],
        &["compute", "--method", "guess"],
    ] {
        let o = gqd(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn sweep_csv_is_deterministic_and_ordered() {
    let args = [
        "sweep", "--vary", "D", "--from", "0", "--to", "2", "--steps", "5", "--family-param", "B", "--family-values",
        "1,0", "--measure", "trace,hellinger",
    ];
    let first = gqd(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, gqd(&args).stdout);

    let s = stdout(&first);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("J,B,D,T,Q_T,Q_H,Q_B,method"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 10);
    for (k, row) in rows.iter().enumerate() {
        let b: f64 = row[1].parse().unwrap();
        let d: f64 = row[2].parse().unwrap();
        assert_eq!(b, if k < 5 { 1.0 } else { 0.0 });
        assert!((d - 0.5 * (k % 5) as f64).abs() < 1e-12);
        let qt: f64 = row[4].parse().unwrap();
        let qh: f64 = row[5].parse().unwrap();
        assert!((0.0..=1.0).contains(&qt) && (0.0..=1.0).contains(&qh));
        assert!(row[6].is_empty());
        assert_eq!(row[7], "closed_form");
    }
}

#[test]
fn sweep_writes_to_file() {
    let path = std::env::temp_dir().join(format!("gqd-sweep-{}.csv", std::process::id()));
    let o = gqd(&["sweep", "--vary", "T", "--from", "0.5", "--to", "1", "--steps", "3", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(text.lines().count(), 4);
}
