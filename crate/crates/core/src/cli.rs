//! Command-line front end.
//!
//! Commands return their stdout text so they can be tested without spawning
//! a process. Grid rows are computed in parallel and emitted in grid order.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::acceptance;
use crate::error::{Error, Result};
use crate::expr::parse_transform;
use crate::forward::{sl_forward, SLPoint};
use crate::inversion::{sl_inverse_numeric_with_sensitivity, split_transform_as_sl, SplitInverse, DEFAULT_A};
use crate::signal::catalog_signal_with_frequency;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_STEPS: usize = 100;

#[derive(Debug, Parser)]
#[command(name = "symlap", version, about = "Symmetric Laplace transform: forward evaluation, inversion, verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate SL(f)(x1, x2, y) for a catalog signal over a y-grid (CSV: y,re,im,err).
    Forward(ForwardArgs),
    /// Invert a split rational expression term by term over a t-grid (CSV: t,re,im).
    Invert(InvertArgs),
    /// Invert an expression by the truncated Fourier integral (one JSON line per t).
    InvertNumeric(InvertNumericArgs),
    /// Run the acceptance checks and print a JSON report.
    Verify(OutputArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write data to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A single value (`--y`) or a range (`--ymin --ymax --steps`).
#[derive(Debug, Args)]
pub struct YGrid {
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["ymin", "ymax"])]
    pub y: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "ymax")]
    pub ymin: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "ymin")]
    pub ymax: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TGrid {
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["tmin", "tmax"])]
    pub t: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "tmax")]
    pub tmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "tmin")]
    pub tmax: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ForwardArgs {
    #[arg(long)]
    pub signal: String,
    /// Frequency of the `sincos` / `cossin` signals.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub freq: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x2: f64,
    #[command(flatten)]
    pub grid: YGrid,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    #[command(flatten)]
    pub grid: TGrid,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct InvertNumericArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long, allow_negative_numbers = true)]
    pub x1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x2: f64,
    #[command(flatten)]
    pub grid: TGrid,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long = "A", default_value_t = DEFAULT_A)]
    pub a: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// `steps + 1` equally spaced points from `min` to `max`, both included.
pub fn grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::Usage("--steps must be at least 1".into()));
    }
    if !(min.is_finite() && max.is_finite()) || min > max {
        return Err(Error::Usage(format!("invalid range [{min}, {max}]")));
    }
    let h = (max - min) / steps as f64;
    Ok((0..=steps)
        .map(|k| if k == steps { max } else { min + h * k as f64 })
        .collect())
}

fn resolve_grid(single: Option<f64>, min: Option<f64>, max: Option<f64>, steps: usize, name: &str) -> Result<Vec<f64>> {
    match (single, min, max) {
        (Some(v), None, None) => Ok(vec![v]),
        (None, Some(lo), Some(hi)) => grid(lo, hi, steps),
        _ => Err(Error::Usage(format!("give either --{name} or both --{name}min and --{name}max"))),
    }
}

/// Evaluate every point in parallel; the first error in grid order wins.
fn rows<F>(points: &[f64], row: F) -> Result<Vec<String>>
where
    F: Fn(f64) -> Result<String> + Sync,
{
    let results: Vec<Result<String>> = points.par_iter().map(|&v| row(v)).collect();
    results.into_iter().collect()
}

/// Shortest round-trip decimal: plain or exponent form, whichever is shorter.
pub fn format_number(v: f64) -> String {
    let plain = v.to_string();
    let exp = format!("{v:e}");
    if exp.len() < plain.len() {
        exp
    } else {
        plain
    }
}

fn csv(header: &str, lines: Vec<String>) -> String {
    let mut out = String::with_capacity(64 * (lines.len() + 1));
    out.push_str(header);
    out.push('\n');
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn forward_rows(signal: &str, freq: f64, x1: f64, x2: f64, ys: &[f64], tol: f64) -> Result<String> {
    let f = catalog_signal_with_frequency(signal, freq)?;
    let lines = rows(ys, |y| {
        let r = sl_forward(&f, SLPoint::new(x1, x2, y), tol)?;
        Ok([y, r.value.re, r.value.im, r.abs_error_estimate].map(format_number).join(","))
    })?;
    Ok(csv("y,re,im,err", lines))
}

/// CSV `y,re,im,err` over `steps + 1` frequencies in `[y_min, y_max]`.
#[allow(clippy::too_many_arguments)]
pub fn cmd_forward(signal: &str, freq: f64, x1: f64, x2: f64, y_min: f64, y_max: f64, steps: usize, tol: f64) -> Result<String> {
    forward_rows(signal, freq, x1, x2, &grid(y_min, y_max, steps)?, tol)
}

fn invert_rows(expr: &str, ts: &[f64]) -> Result<String> {
    let inverse = SplitInverse::new(&parse_transform(expr)?)?;
    let lines = rows(ts, |t| {
        let v = inverse.eval(t)?;
        Ok([t, v.re, v.im].map(format_number).join(","))
    })?;
    Ok(csv("t,re,im", lines))
}

/// CSV `t,re,im` of the term-wise inverse over `steps + 1` times in `[t_min, t_max]`.
pub fn cmd_invert(expr: &str, t_min: f64, t_max: f64, steps: usize) -> Result<String> {
    invert_rows(expr, &grid(t_min, t_max, steps)?)
}

fn invert_numeric_lines(expr: &str, x1: f64, x2: f64, ts: &[f64], a: f64, tol: f64) -> Result<String> {
    let st = parse_transform(expr)?;
    let f = split_transform_as_sl(&st);
    let mut out = String::new();
    // each inversion is already parallel inside the quadrature
    for &t in ts {
        let report = sl_inverse_numeric_with_sensitivity(&f, x1, x2, t, a, tol)?;
        let line = serde_json::to_string(&report).map_err(|e| Error::Numeric(e.to_string()))?;
        writeln!(out, "{line}").expect("writing to a String");
    }
    Ok(out)
}

/// One JSON line `{t, re, im, quadrature_error, a_sensitivity}`.
pub fn cmd_invert_numeric(expr: &str, x1: f64, x2: f64, t: f64, a: f64, tol: f64) -> Result<String> {
    invert_numeric_lines(expr, x1, x2, &[t], a, tol)
}

/// JSON report and whether every check passed.
pub fn cmd_verify() -> (String, bool) {
    let report = acceptance::report();
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    (json + "\n", report.all_pass)
}

/// What a finished invocation prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn deliver(data: String, out: &Option<PathBuf>, code: i32) -> Outcome {
    match out {
        None => Outcome {
            stdout: data,
            stderr: String::new(),
            code,
        },
        Some(path) => match std::fs::write(path, data) {
            Ok(()) => Outcome {
                stdout: String::new(),
                stderr: String::new(),
                code,
            },
            Err(e) => Outcome {
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
                code: 2,
            },
        },
    }
}

fn execute(command: Command) -> Outcome {
    let (result, out) = match command {
        Command::Forward(a) => {
            let r = resolve_grid(a.grid.y, a.grid.ymin, a.grid.ymax, a.steps, "y")
                .and_then(|ys| forward_rows(&a.signal, a.freq, a.x1, a.x2, &ys, a.tol));
            (r, a.output.out)
        }
        Command::Invert(a) => {
            let r = resolve_grid(a.grid.t, a.grid.tmin, a.grid.tmax, a.steps, "t").and_then(|ts| invert_rows(&a.expr, &ts));
            (r, a.output.out)
        }
        Command::InvertNumeric(a) => {
            let r = resolve_grid(a.grid.t, a.grid.tmin, a.grid.tmax, a.steps, "t")
                .and_then(|ts| invert_numeric_lines(&a.expr, a.x1, a.x2, &ts, a.a, a.tol));
            (r, a.output.out)
        }
        Command::Verify(a) => {
            let (json, ok) = cmd_verify();
            return deliver(json, &a.out, if ok { 0 } else { 1 });
        }
    };
    match result {
        Ok(data) => deliver(data, &out, 0),
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

/// Parse arguments and run. Usage errors exit with 2; `--help` and
/// `--version` exit with 0.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: 2,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_rows(csv: &str) -> Vec<Vec<f64>> {
        csv.lines()
            .skip(1)
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect()
    }

    #[test]
    fn numbers_use_the_shorter_exact_form() {
        for (v, text) in [(0.0, "0"), (-4.75, "-4.75"), (7.042376864552856e-9, "7.042376864552856e-9"), (1e21, "1e21"), (123456.0, "123456"), (-0.0, "-0")] {
            assert_eq!(format_number(v), text);
            assert_eq!(text.parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn grid_includes_both_ends() {
        assert_eq!(grid(-1.0, 1.0, 2).unwrap(), vec![-1.0, 0.0, 1.0]);
        let g = grid(-3.0, 3.0, 7).unwrap();
        assert_eq!((g.len(), g[7]), (8, 3.0));
        assert!(matches!(grid(0.0, 1.0, 0), Err(Error::Usage(_))));
        assert!(grid(1.0, 0.0, 3).is_err());
    }

    #[test]
    fn forward_sign_three_rows() {
        let out = cmd_forward("sign", 1.0, 1.0, 1.0, -1.0, 1.0, 2, 1e-8).unwrap();
        assert!(out.starts_with("y,re,im,err\n"));
        let rows = parse_rows(&out);
        assert_eq!(rows.len(), 3);
        let last = &rows[2];
        assert_eq!(last[0], 1.0);
        assert!(last[1].abs() < 1e-8 && (last[2] + 1.0).abs() < 1e-8, "{last:?}");
    }

    #[test]
    fn forward_one_single_point() {
        let o = run(["symlap", "forward", "--signal", "one", "--x1", "2", "--x2", "3", "--y", "1"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let rows = parse_rows(&o.stdout);
        assert_eq!(rows.len(), 1);
        assert!((rows[0][1] - 0.7).abs() < 1e-8 && (rows[0][2] + 0.1).abs() < 1e-8, "{:?}", rows[0]);
    }

    #[test]
    fn forward_errors_map_to_exit_codes() {
        let o = run(["symlap", "forward", "--signal", "sign", "--x1", "0", "--x2", "1", "--y", "0"]);
        assert_eq!(o.code, 4);
        assert!(o.stderr.contains("positive half-line"), "{}", o.stderr);
        assert!(o.stdout.is_empty());
        let o = run(["symlap", "forward", "--signal", "nope", "--x1", "1", "--x2", "1", "--y", "0"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("sign, one"), "{}", o.stderr);
        let o = run(["symlap", "forward", "--signal", "sign", "--x1", "1"]);
        assert_eq!(o.code, 2);
        let o = run(["symlap", "forward", "--signal", "sign", "--x1", "1", "--x2", "1", "--ymin", "0", "--ymax", "1", "--steps", "0"]);
        assert_eq!(o.code, 2);
    }

    #[test]
    fn invert_ramp_expression() {
        let out = cmd_invert("1/s^2 - 1/cs^2", -3.0, 3.0, 6).unwrap();
        let rows = parse_rows(&out);
        assert_eq!(rows.len(), 7);
        for r in rows {
            assert!((r[1] - r[0]).abs() < 1e-12 && r[2].abs() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn invert_sign_expression() {
        for r in parse_rows(&cmd_invert("1/s - 1/cs", -2.0, 2.0, 4).unwrap()) {
            let expected = if r[0] >= 0.0 { 1.0 } else { -1.0 };
            assert!((r[1] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn invert_rejects_mixed_terms() {
        let o = run(["symlap", "invert", "--expr", "1/(s*cs)", "--tmin", "0", "--tmax", "1", "--steps", "2"]);
        assert_eq!(o.code, 3);
        assert!(o.stderr.contains("position"), "{}", o.stderr);
    }

    #[test]
    fn invert_accepts_leading_minus() {
        let o = run(["symlap", "invert", "--expr", "-1/cs", "--t", "-1"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert_eq!(parse_rows(&o.stdout)[0][1], -1.0);
    }

    #[test]
    fn invert_numeric_sign() {
        for (t, expected, tol) in [(0.0, 0.0, 5e-3), (1.0, 1.0, 1e-2), (-1.0, -1.0, 1e-2)] {
            let line = cmd_invert_numeric("1/s - 1/cs", 1.0, 1.0, t, 1000.0, 1e-8).unwrap();
            assert_eq!(line.lines().count(), 1);
            let v: serde_json::Value = serde_json::from_str(&line).unwrap();
            let re = v["re"].as_f64().unwrap();
            assert!((re - expected).abs() < tol, "t={t}: {re}");
            assert!(v["a_sensitivity"].as_f64().unwrap() < 1e-2);
        }
    }

    #[test]
    fn help_is_not_an_error() {
        let o = run(["symlap", "--help"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("forward"));
    }
}
