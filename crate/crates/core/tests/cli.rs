//! The `symlap` binary: streams, exit codes and byte-identical output.

use std::process::{Command, Output};

fn symlap(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_symlap"));
    cmd.args(args);
    if let Some(n) = threads {
        cmd.env("RAYON_NUM_THREADS", n.to_string());
    }
    cmd.output().expect("binary runs")
}

const COMMANDS: [&[&str]; 5] = [
    &["forward", "--signal", "sign", "--x1", "1", "--x2", "1", "--ymin", "-5", "--ymax", "5", "--steps", "40"],
    &["forward", "--signal", "gauss", "--x1", "0", "--x2", "0", "--ymin", "0", "--ymax", "3", "--steps", "12"],
    &["invert", "--expr", "1/(2*(s-1)) - s/(2*(s^2+1)) - 1/(2*(s^2+1)) + 1/cs - cs/(cs^2+1)", "--tmin", "-10", "--tmax", "10", "--steps", "50"],
    &["invert-numeric", "--expr", "1/s - 1/cs", "--x1", "1", "--x2", "1", "--tmin", "-2", "--tmax", "2", "--steps", "4", "--A", "500"],
    &["verify"],
];

#[test]
fn output_is_identical_across_runs_and_thread_counts() {
    for args in COMMANDS {
        let first = symlap(args, Some(1));
        assert!(first.status.success(), "{args:?}: {}", String::from_utf8_lossy(&first.stderr));
        for threads in [Some(1), Some(4), None] {
            let again = symlap(args, threads);
            assert_eq!(first.stdout, again.stdout, "{args:?} with {threads:?} threads");
            assert_eq!(again.status.code(), Some(0));
        }
    }
}

#[test]
fn forward_csv_has_header_and_steps_plus_one_rows() {
    let out = symlap(COMMANDS[0], None);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "y,re,im,err");
    assert_eq!(lines.len(), 42);
    assert!(text.ends_with('\n') && !text.contains('\r'));
    for line in &lines[1..] {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(fields.len(), 4);
        // shortest round-trip formatting: re-printing a parsed field is a no-op
        for (raw, v) in line.split(',').zip(&fields) {
            assert_eq!(raw, symlap::cli::format_number(*v));
            assert!(raw.len() <= v.to_string().len() && raw.len() <= format!("{v:e}").len());
        }
    }
    assert!(out.stderr.is_empty());
}

#[test]
fn invert_reproduces_the_oscillator_solution() {
    let out = symlap(COMMANDS[2], None);
    for line in String::from_utf8(out.stdout).unwrap().lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let exact = symlap::applications::ode_solution(v[0]);
        assert!((v[1] - exact).abs() <= 1e-9 * exact.abs().max(1.0), "{line}");
        assert!(v[2].abs() <= 1e-9 * exact.abs().max(1.0));
    }
}

#[test]
fn errors_go_to_stderr_with_distinct_exit_codes() {
    let cases: [(&[&str], i32, &str); 5] = [
        (&["forward", "--signal", "square", "--x1", "1", "--x2", "1", "--y", "0"], 2, "valid names"),
        (&["forward", "--signal", "sign", "--x1", "1"], 2, "--x2"),
        (&["invert", "--expr", "1/(s*cs)", "--t", "1"], 3, "position"),
        (&["forward", "--signal", "ode_rhs", "--x1", "1", "--x2", "1", "--y", "0"], 4, "positive half-line"),
        (&["invert", "--expr", "1/(s-800)", "--t", "1"], 5, "overflow"),
    ];
    for (args, code, needle) in cases {
        let out = symlap(args, None);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}

#[test]
fn verify_report_is_strict_json() {
    let out = symlap(&["verify"], None);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["all_pass"], true);
    let criteria = report["criteria"].as_array().unwrap();
    assert!(criteria.iter().any(|c| c["id"] == "example1_grid"));
    let covered: std::collections::BTreeSet<u64> = criteria.iter().map(|c| c["criterion"].as_u64().unwrap()).collect();
    assert_eq!(covered, (1..=10).collect());
    for c in criteria {
        assert_eq!(c["status"], "pass", "{c}");
        assert!(c["measured"].is_f64() || c["measured"].is_u64());
        assert!(c["tolerance"].is_number());
    }
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("symlap-out-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let out = symlap(&["invert", "--expr", "1/s + 1/cs", "--tmin", "-1", "--tmax", "1", "--steps", "2", "--out", p], None);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "t,re,im\n-1,1,0\n0,1,0\n1,1,0\n");
    std::fs::remove_file(path).unwrap();
}
