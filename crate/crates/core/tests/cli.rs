use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn treenorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treenorm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Value of column `col` in the first data row of CSV output.
fn field(out: &str, col: &str) -> String {
    let mut lines = out.lines();
    let headers: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = headers.iter().position(|h| *h == col).unwrap();
    row[i].to_string()
}

#[test]
fn norm_examples() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (r#"{"depth":3,"entries":[{"node":"","value":1.0}]}"#, "1.0"),
        (r#"{"depth":3,"entries":[]}"#, "0.0"),
        (
            r#"{"depth":3,"entries":[{"node":"1","value":1.0},{"node":"01","value":1.0}]}"#,
            "1.414213562",
        ),
    ];
    for (i, (json, want)) in cases.iter().enumerate() {
        let f = write(&dir, &format!("v{i}.json"), json);
        let o = treenorm(&["norm", &f]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(field(&stdout(&o), "value"), *want);
    }
    let bad = write(
        &dir,
        "bad.json",
        r#"{"depth":2,"entries":[{"node":"012","value":1}]}"#,
    );
    assert_eq!(treenorm(&["norm", &bad]).status.code(), Some(2));
    let deep = write(
        &dir,
        "deep.json",
        r#"{"depth":2,"entries":[{"node":"01","value":1}]}"#,
    );
    assert_eq!(treenorm(&["norm", &deep]).status.code(), Some(2));
    assert_eq!(
        treenorm(&["norm", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn strict_mode_differs_from_extended() {
    let dir = TempDir::new().unwrap();
    // one path stops above two negative children; common bottoms cannot
    let f = write(
        &dir,
        "v.json",
        r#"{"depth":3,"entries":[{"node":"0","value":1},{"node":"00","value":-1},{"node":"01","value":-1},{"node":"1","value":1},{"node":"10","value":1}]}"#,
    );
    let ext = stdout(&treenorm(&["norm", &f]));
    let strict = stdout(&treenorm(&["norm", "--mode", "strict", &f]));
    assert_eq!(field(&ext, "value"), "2.236067977");
    assert_eq!(field(&strict, "value"), "2.0");
    assert_eq!(
        treenorm(&["norm", "--mode", "lenient", &f]).status.code(),
        Some(2)
    );
}

#[test]
fn rosenthal_report() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.txt", "# four branches\n111\n000\n001\n011\n");
    let o = treenorm(&["rosenthal", &f, "--coeffs", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, "picks"), "1;4");
    assert_eq!(field(&out, "t_nodes"), "1;01");
    assert_eq!(field(&out, "witness_norm"), "1.414213562");
    assert_eq!(field(&out, "lower"), "1.414213562");
    assert_eq!(field(&out, "upper"), "2.0");

    let one = write(&dir, "one.txt", "010\n");
    assert_eq!(treenorm(&["rosenthal", &one]).status.code(), Some(2));
    let ragged = write(&dir, "ragged.txt", "010\n01\n");
    assert_eq!(treenorm(&["rosenthal", &ragged]).status.code(), Some(2));
    assert_eq!(
        treenorm(&["rosenthal", &f, "--coeffs", "1,2,3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn distortion_table() {
    let o = treenorm(&["distortion", "--n-max", "2", "--effort", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(
        out.lines().next().unwrap(),
        "n,num_branches,eta1,eta2,upper_bound,lower_estimate,delta_bound"
    );
    let last = out.lines().last().unwrap();
    assert!(last.ends_with(",1.207106781"), "{last}");

    let o = treenorm(&["distortion", "--n-max", "8", "--effort", "50"]);
    let deltas: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(deltas.len(), 8);
    assert_eq!(*deltas.last().unwrap(), 0.6035533906);
    assert!(deltas.windows(2).all(|w| w[1] < w[0]));

    assert_eq!(
        treenorm(&["distortion", "--n-max", "5", "--depth", "3"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        treenorm(&["distortion", "--n-max", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        treenorm(&["distortion", "--n-max", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        treenorm(&["distortion", "--n-max", "2", "--tol", "-1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn json_output() {
    let o = treenorm(&[
        "distortion",
        "--n-max",
        "2",
        "--effort",
        "20",
        "--output",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["delta_bound"], 1.207106781);
}

#[test]
fn split_and_separate() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.txt", "000\n001\n010\n011\n");
    let o = treenorm(&["separate", &f, "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, "psi"), "00;01");
    assert_eq!(field(&out, "branches"), "000;010;001;011");
    assert_eq!(field(&out, "invariants"), "ok");
    assert_eq!(
        treenorm(&["separate", &f, "--n", "3"]).status.code(),
        Some(3)
    );

    let o = treenorm(&["split", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 8);
}

#[test]
fn dualnorm_bounds() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "f.json",
        r#"{"depth":2,"terms":[{"branch":"00","coeff":1.0},{"branch":"10","coeff":-1.0}]}"#,
    );
    let out = stdout(&treenorm(&["dualnorm", &f, "--effort", "100"]));
    let lower: f64 = field(&out, "lower").parse().unwrap();
    // printed to ten digits, so allow for rounding
    assert!(lower >= 2f64.sqrt() - 1e-9);
    assert_eq!(field(&out, "upper"), "2.0");
}

#[test]
fn espace_commands() {
    let dir = TempDir::new().unwrap();
    let v = write(
        &dir,
        "v.json",
        r#"{"entries":[{"index":0,"value":1},{"index":1,"value":-2},{"index":5,"value":3}]}"#,
    );
    assert_eq!(
        field(&stdout(&treenorm(&["espace", "norm", &v])), "value"),
        "3.0"
    );
    let p = stdout(&treenorm(&["espace", "project", &v, "--eta", "2"]));
    assert_eq!(p, "index,value\n0,1.0\n1,-2.0\n");
    let xs = write(
        &dir,
        "xs.json",
        r#"[{"entries":[{"index":0,"value":1}]},
            {"entries":[{"index":0,"value":1},{"index":1,"value":1}]},
            {"entries":[{"index":0,"value":1},{"index":1,"value":1},{"index":2,"value":1}]}]"#,
    );
    let out = stdout(&treenorm(&["espace", "blocks", &xs]));
    assert_eq!(out.lines().nth(2).unwrap(), "1,1,3,2,2,1.0,2:1.0");
    let empty = write(&dir, "empty.json", "[]");
    assert_eq!(
        treenorm(&["espace", "blocks", &empty]).status.code(),
        Some(2)
    );
}

#[test]
fn check_suites() {
    for suite in ["norm-oracle", "prop21", "rosenthal", "separation", "espace"] {
        let o = treenorm(&["check", "--suite", suite, "--cases", "100"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).contains(",pass,"));
    }
    assert_eq!(
        treenorm(&["check", "--suite", "nope"]).status.code(),
        Some(2)
    );
}

#[test]
fn same_seed_same_bytes() {
    let a = treenorm(&[
        "distortion",
        "--n-max",
        "4",
        "--seed",
        "9",
        "--effort",
        "100",
    ]);
    let b = treenorm(&[
        "distortion",
        "--n-max",
        "4",
        "--seed",
        "9",
        "--effort",
        "100",
    ]);
    assert_eq!(a.stdout, b.stdout);
    assert!(Path::new(env!("CARGO_BIN_EXE_treenorm")).exists());
}
