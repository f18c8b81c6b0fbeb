use std::process::{Command, Output};

fn qw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qw"))
        .args(args)
        .output()
        .expect("qw runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn derive_prints_the_documented_derivative() {
    let o = qw(&[
        "derive",
        "--word",
        "paper-example-1",
        "--q",
        "aba",
        "--horizon",
        "41",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "100011101100010\n");
}

#[test]
fn derive_uses_integers_past_ten() {
    let o = qw(&[
        "derive",
        "--word",
        "fibonacci",
        "--q",
        "01001010010",
        "--horizon",
        "200",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains(','), "{text}");
    assert!(text
        .trim()
        .split(',')
        .all(|t| t.parse::<u32>().unwrap() < 11));
}

#[test]
fn sturmian_verification_reports_json() {
    let o = qw(&["sturmian", "--cf", "1,1", "--verify-qp", "--n-max", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["all_checked_covered"], true);
    assert!(v["quasiperiod_lengths"].as_array().unwrap().len() >= 5);
}

#[test]
fn qp_scan_lists_covering_prefixes() {
    let o = qw(&[
        "qp",
        "scan",
        "--word",
        "periodic:aba",
        "--horizon",
        "30",
        "--max-qp",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["quasiperiod"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"aba"));
    assert!(names.contains(&"abaaba"));
    assert!(v
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["verdict"] == "covered"));
}

#[test]
fn qp_check_failure_is_an_invariant_failure() {
    let o = qw(&["qp", "check", "--word", "fibonacci", "--q", "01"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(
        qw(&["derive", "--word", "no-such-word", "--q", "a"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qw(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        qw(&[
            "rauzy",
            "--word",
            "fibonacci",
            "--n",
            "3",
            "--remove",
            "111"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn budget_errors_exit_with_three() {
    let o = qw(&[
        "tower", "--phi", "3:40", "--depth", "2", "--budget", "100000",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = qw(&[
        "generate",
        "--word",
        "fibonacci",
        "--length",
        "5000",
        "--budget",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn integrate_reproduces_the_example_prefix() {
    let o = qw(&[
        "integrate",
        "--base",
        "aabcaa",
        "--word",
        "paper-example-2-source",
        "--length",
        "57",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        "aabcaaaabcaaabcaaabcaabcaaabcaaaabcaaabcaaaabcaabcaaaabca"
    );
}

#[test]
fn tower_lengths() {
    let o = qw(&["tower", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["lengths"], serde_json::json!([3, 81, 11361]));
    assert_eq!(v["nested_and_covered"], true);
}

#[test]
fn rauzy_dot_and_deconnect() {
    let o = qw(&[
        "rauzy",
        "--word",
        "fibonacci",
        "--n",
        "3",
        "--remove",
        "010",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("dashed"));
    let o = qw(&[
        "rauzy",
        "--word",
        "fibonacci",
        "--n",
        "3",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["left_special"], serde_json::json!(["010"]));
}

#[test]
fn complexity_csv_columns() {
    let o = qw(&[
        "complexity",
        "--word",
        "fibonacci",
        "--n-max",
        "5",
        "--bits",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,p_n,saturated,log_p_n_over_n"));
    assert_eq!(lines.next(), Some("1,2,true,1.000000"));
}

#[test]
fn freq_csv_passes_on_fibonacci() {
    let o = qw(&[
        "freq",
        "--word",
        "fibonacci",
        "--u",
        "01",
        "--max-qp",
        "20",
        "--horizon",
        "50000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("u,q,mu_q,birkhoff,lower_bound,check_passed\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn qpzip_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fib.qpz");
    let p = path.to_str().unwrap();
    let o = qw(&[
        "qpzip",
        "encode",
        "--word",
        "fibonacci",
        "--horizon",
        "5000",
        "--out",
        p,
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(&std::fs::read(&path).unwrap()[..4], b"QPZ1");
    let o = qw(&["qpzip", "decode", "--input", p]);
    assert_eq!(o.status.code(), Some(0));
    let g = qw(&["generate", "--word", "fibonacci", "--length", "5000"]);
    assert_eq!(stdout(&o), stdout(&g));

    let mut bytes = std::fs::read(&path).unwrap();
    bytes.truncate(bytes.len() - 2);
    std::fs::write(&path, bytes).unwrap();
    assert_eq!(
        qw(&["qpzip", "decode", "--input", p]).status.code(),
        Some(1)
    );

    assert_eq!(
        qw(&["qpzip", "encode", "--word", "fibonacci"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn qpzip_cost_reports_bound() {
    let o = qw(&[
        "qpzip",
        "cost",
        "--word",
        "fibonacci",
        "--horizon",
        "20000",
        "--q-len",
        "21",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["rate"].as_f64().unwrap() <= v["rate_bound"].as_f64().unwrap());
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let o = qw(&[
            "complexity",
            "--word",
            "random",
            "--n-max",
            "12",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!std::fs::read(&a).unwrap().is_empty());
}

#[test]
fn json_word_descriptor() {
    let spec = r#"{"kind":"morphism","images":["ab","a"],"start":0,"alphabet":"ab"}"#;
    let o = qw(&["generate", "--word", spec, "--length", "8"]);
    assert_eq!(stdout(&o), "abaababa\n");
}
