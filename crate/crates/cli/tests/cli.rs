//! End-to-end tests of the command-line interface: output formats, exit
//! codes, and byte-level determinism.

use std::process::{Command, Output};

fn qmink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmink"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn identities_all_pass_and_exit_zero() {
    let start = std::time::Instant::now();
    let out = qmink(&["identities", "--all", "--exact", "--q", "3/2"]);
    assert!(out.status.success(), "exit: {:?}", out.status);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 23, "one line per catalog entry:\n{}", text);
    for line in &lines {
        assert!(line.ends_with(" PASS"), "unexpected line: {}", line);
    }
    assert!(
        start.elapsed().as_secs() < 60,
        "identity suite exceeded a minute"
    );
}

#[test]
fn identities_single_entry() {
    let out = qmink(&["identities", "--id", "METRIC_VALUES", "--q", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "METRIC_VALUES PASS");
    let out = qmink(&["identities", "--id", "NOT_A_CHECK"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_csv_row_count() {
    // l = 0, 1/2, 1 gives 1 + 2 + 3 = 6 rows plus the header.
    let out = qmink(&["spectrum", "--q", "2", "--t", "1", "--l-max", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7, "header plus six rows:\n{}", text);
    assert_eq!(lines[0], "l,m,gamma,x3,v3,vsq,E,p3");
    // exact mode: gamma for l = 1/2 at q = 2 is 17/10
    assert!(lines[2].contains("17/10"), "line: {}", lines[2]);
}

#[test]
fn spectrum_float_mode() {
    let out = qmink(&["spectrum", "--q", "1.5", "--t", "1", "--l-max", "1/2", "--format", "json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with('['));
    assert!(text.contains("\"gamma\": 1"));
}

#[test]
fn normal_order_prints_canonical_form() {
    let out = qmink(&["normal-order", "Z*Zb - Zb*Z"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        "(q^2 - q^-2)*X3^2 + (q - q^-3)*X0*X3"
    );
}

#[test]
fn parse_error_exits_two() {
    let out = qmink(&["normal-order", "X5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qmink(&["normal-order", "X3 +"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_error_exits_three() {
    let out = qmink(&["lifetime", "--v", "1.5"]);
    assert_eq!(out.status.code(), Some(3));
    let out = qmink(&["boost", "--q", "2", "--l", "1/2", "--m", "3/2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn rmatrix_dump_has_256_lines() {
    let out = qmink(&["rmatrix"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 256);
    // the braiding rows with upper index 0 are Kronecker deltas
    assert!(text.contains("0 0 0 0 1"));
    assert!(text.lines().all(|l| l.split(' ').count() >= 5));
}

#[test]
fn metric_command_prints_entries() {
    let out = qmink(&["metric"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("G[0][0] = -q^(-3/2)"));
    assert!(text.contains("Ginv[0][0] = -q^(3/2)"));
}

#[test]
fn so3_and_sphere_pass() {
    let out = qmink(&["so3"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().all(|l| l.ends_with("PASS")));
    let out = qmink(&["sphere", "--t", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lambda = q - q^-1"));
    assert!(text.contains("closure: PASS"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["spectrum", "--q", "3/2", "--t", "1", "--l-max", "2", "--format", "json"],
        vec!["rmatrix", "--sign", "minus"],
        vec!["metric", "--format", "json"],
    ] {
        let a = qmink(&args);
        let b = qmink(&args);
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {:?}", args);
    }
}
