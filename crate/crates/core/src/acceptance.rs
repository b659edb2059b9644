//! Acceptance checks, shared by `symlap verify` and the `acceptance` test target.
//!
//! Every check measures one number and compares it against a fixed threshold.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::applications::{
    heat_residual, heat_solution, heat_transform_identity, ode_derivative, ode_residual, ode_solution,
    ode_transform_check, ODE_SPLIT_EXPRESSION,
};
use crate::cli;
use crate::error::Result;
use crate::expr::parse_transform;
use crate::forward::{fourier_reduction, sl_forward, sl_forward_symmetric, SLPoint};
use crate::inversion::{sl_inverse_numeric, sl_inverse_split};
use crate::rules::{check_rule_consistency, derivative_rule, BoundaryData, TransformPair};
use crate::signal::{catalog_signal, catalog_signal_with_frequency, conjugate, gauss_derivative, ComplexValue};

pub mod tolerance {
    pub const CLOSED_FORM: f64 = 1e-8;
    /// Quadrature tolerance used when checking against `CLOSED_FORM`.
    pub const FORWARD_QUADRATURE: f64 = 1e-9;
    pub const KERNEL_WITNESS: f64 = 1e-9;
    pub const SPLIT_EXACT: f64 = 1e-12;
    pub const NUMERIC_INVERSION: f64 = 1e-2;
    pub const JUMP_MIDPOINT: f64 = 5e-3;
    pub const INVERSION_A: f64 = 1e3;
    pub const INVERSION_QUADRATURE: f64 = 1e-8;
    pub const DERIVATIVE_RULE: f64 = 1e-7;
    pub const RULE_COMPOSITION: f64 = 1e-12;
    pub const HEAT_RESIDUAL: f64 = 1e-5;
    pub const HEAT_STEP: f64 = 1e-3;
    /// Allowed deviation of the step-halving error ratio from 4.
    pub const HEAT_ORDER: f64 = 0.5;
    pub const HEAT_IDENTITY: f64 = 1e-4;
    pub const ODE_RESIDUAL: f64 = 1e-12;
    pub const ODE_CONTINUITY: f64 = 1e-12;
    pub const ODE_TRANSFORM: f64 = 1e-7;
    pub const ODE_SPLIT: f64 = 1e-9;
}

/// Damping values of the closed-form grid.
pub const GRID_X: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];
/// Frequencies of the closed-form grid.
pub const GRID_Y: [f64; 5] = [-5.0, -1.0, 0.0, 1.0, 5.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: &'static str,
    pub criterion: u8,
    pub status: Status,
    /// `null` in JSON when the measurement itself failed.
    pub measured: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CriterionResult {
    /// Passes when `measured <= tolerance`.
    fn upper_bound(id: &'static str, criterion: u8, measured: Result<f64>, tolerance: f64) -> Self {
        match measured {
            Ok(m) => Self {
                id,
                criterion,
                status: if m <= tolerance { Status::Pass } else { Status::Fail },
                measured: m,
                tolerance,
                note: None,
            },
            Err(e) => Self {
                id,
                criterion,
                status: Status::Fail,
                measured: f64::NAN,
                tolerance,
                note: Some(e.to_string()),
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One human-readable line.
    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "[{status}] criterion {:>2} {:<28} measured {:<12.3e} tolerance {:.1e}",
            self.criterion, self.id, self.measured, self.tolerance
        );
        if let Some(note) = &self.note {
            s.push_str(&format!("  ({note})"));
        }
        s
    }
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |acc, v| Ok(acc.max(v?)))
}

/// Largest `|numeric SL - closed form|` over the grid with `x1 = x2 = x`.
fn closed_form_grid_error<F>(signal: &str, frequency: f64, closed_form: F) -> Result<f64>
where
    F: Fn(ComplexValue) -> ComplexValue,
{
    let f = catalog_signal_with_frequency(signal, frequency)?;
    max_of(GRID_X.iter().flat_map(|&x| GRID_Y.iter().map(move |&y| (x, y))).map(|(x, y)| {
        let s = c(x, y);
        let got = sl_forward(&f, SLPoint::new(x, x, y), tolerance::FORWARD_QUADRATURE)?;
        Ok((got.value - closed_form(s)).norm())
    }))
}

pub fn example1_grid() -> Vec<CriterionResult> {
    // 1/(x1 + iy) + 1/(-x2 + iy) with x1 = x2 = Re s
    let err = closed_form_grid_error("sign", 1.0, |s| s.inv() + c(-s.re, s.im).inv());
    vec![CriterionResult::upper_bound("example1_grid", 1, err, tolerance::CLOSED_FORM)]
}

pub fn closed_form_grids() -> Vec<CriterionResult> {
    let one = closed_form_grid_error("one", 1.0, |s| s.inv() + conjugate(s).inv());
    let sincos = max_of([1.0, 2.0].map(|w: f64| {
        closed_form_grid_error("sincos", w, move |s| {
            let sb = conjugate(s);
            w / (s * s + w * w) + sb / (sb * sb + w * w)
        })
    }));
    let cossin = max_of([1.0, 2.0].map(|w: f64| {
        closed_form_grid_error("cossin", w, move |s| {
            let sb = conjugate(s);
            s / (s * s + w * w) - w / (sb * sb + w * w)
        })
    }));
    vec![
        CriterionResult::upper_bound("example2_grid", 2, one, tolerance::CLOSED_FORM),
        CriterionResult::upper_bound("example3_grid", 2, sincos, tolerance::CLOSED_FORM),
        CriterionResult::upper_bound("example3_mirrored_grid", 2, cossin, tolerance::CLOSED_FORM),
    ]
}

pub fn reductions() -> Vec<CriterionResult> {
    let laplace = catalog_signal("heaviside").and_then(|h| {
        max_of(GRID_X.iter().flat_map(|&x| GRID_Y.iter().map(move |&y| c(x, y))).map(|s| {
            let got = sl_forward_symmetric(&h, s, tolerance::FORWARD_QUADRATURE)?;
            Ok((got.value - s.inv()).norm())
        }))
    });
    let fourier = catalog_signal("gauss").and_then(|g| {
        max_of([0.0f64, 1.0, 2.0].map(|y| {
            let got = fourier_reduction(&g, y, tolerance::FORWARD_QUADRATURE)?;
            let exact = std::f64::consts::PI.sqrt() * (-y * y / 4.0).exp();
            Ok((got.value - c(exact, 0.0)).norm())
        }))
    });
    vec![
        CriterionResult::upper_bound("laplace_reduction", 3, laplace, tolerance::CLOSED_FORM),
        CriterionResult::upper_bound("fourier_reduction", 3, fourier, tolerance::CLOSED_FORM),
    ]
}

pub fn kernel_witness() -> Vec<CriterionResult> {
    let err = catalog_signal("ramp").and_then(|r| {
        max_of([0.5, 1.0, 2.0].map(|x| Ok(sl_forward(&r, SLPoint::new(x, x, 0.0), 1e-10)?.value.norm())))
    });
    vec![CriterionResult::upper_bound("kernel_witness", 4, err, tolerance::KERNEL_WITNESS)]
}

pub fn split_inversion() -> Vec<CriterionResult> {
    let ts = [-3.0, -1.0, -0.25, 0.25, 1.0, 3.0];
    type Case = (&'static str, fn(f64) -> f64);
    let cases: [Case; 3] = [
        ("1/s^2 - 1/cs^2", |t| t),
        ("1/s + 1/cs", |_| 1.0),
        ("1/s - 1/cs", |t| if t >= 0.0 { 1.0 } else { -1.0 }),
    ];
    let err = max_of(cases.iter().flat_map(|(text, exact)| {
        ts.iter().map(move |&t| {
            let st = parse_transform(text)?;
            Ok((sl_inverse_split(&st, t)? - c(exact(t), 0.0)).norm())
        })
    }));
    vec![CriterionResult::upper_bound("split_inversion", 5, err, tolerance::SPLIT_EXACT)]
}

/// Closed-form transform of the sign function at `(x1, x2, y)`.
pub fn sign_transform(p: SLPoint) -> ComplexValue {
    c(p.x1, p.y).inv() + c(-p.x2, p.y).inv()
}

/// `(largest error, root-mean-square error, summed quadrature error)` over `ts`.
fn sign_reconstruction_error(a: f64, ts: &[f64]) -> Result<(f64, f64, f64)> {
    let mut worst: f64 = 0.0;
    let mut squares = 0.0;
    let mut noise = 0.0;
    for &t in ts {
        let exact = if t >= 0.0 { 1.0 } else { -1.0 };
        let r = sl_inverse_numeric(sign_transform, 1.0, 1.0, t, a, tolerance::INVERSION_QUADRATURE)?;
        let e = (r.value - c(exact, 0.0)).norm();
        worst = worst.max(e);
        squares += e * e;
        noise += r.quadrature_error;
    }
    Ok((worst, (squares / ts.len() as f64).sqrt(), noise))
}

/// `±(0.25 + 0.1k)`, `k < 24`: the truncation error oscillates like
/// `cos(At)/(At)` in `t`, so its decay is measured over a band of times.
fn convergence_times() -> Vec<f64> {
    (0..24).flat_map(|k| {
        let t = 0.25 + 0.1 * k as f64;
        [-t, t]
    })
    .collect()
}

pub fn numeric_inversion() -> Vec<CriterionResult> {
    let values = sign_reconstruction_error(tolerance::INVERSION_A, &[-2.0, -0.5, 0.5, 2.0]).map(|(e, _, _)| e);
    let midpoint = sl_inverse_numeric(sign_transform, 1.0, 1.0, 0.0, tolerance::INVERSION_A, tolerance::INVERSION_QUADRATURE)
        .map(|r| r.value.norm());
    // largest increase of the RMS error when A doubles, net of quadrature noise
    let ts = convergence_times();
    let growth = [250.0, 500.0, 1000.0]
        .map(|a| sign_reconstruction_error(a, &ts))
        .into_iter()
        .collect::<Result<Vec<_>>>()
        .map(|errs| {
            errs.windows(2)
                .map(|w| w[1].1 - w[0].1 - (w[0].2 + w[1].2))
                .fold(f64::NEG_INFINITY, f64::max)
        });
    vec![
        CriterionResult::upper_bound("numeric_inversion_values", 6, values, tolerance::NUMERIC_INVERSION),
        CriterionResult::upper_bound("numeric_inversion_midpoint", 6, midpoint, tolerance::JUMP_MIDPOINT),
        CriterionResult::upper_bound("numeric_inversion_convergence", 6, growth, 0.0),
    ]
}

/// Ten seeded points with `1 <= Re s <= 3`, `|Im s| <= 3`.
pub fn rule_sample_points() -> Vec<ComplexValue> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..10).map(|_| c(rng.gen_range(1.0..3.0), rng.gen_range(-3.0..3.0))).collect()
}

pub fn derivative_rules() -> Vec<CriterionResult> {
    let (g0, g1, g2) = (gauss_derivative(0), gauss_derivative(1), gauss_derivative(2));
    let points = rule_sample_points();
    let bd1 = BoundaryData::from_derivatives(&[&g0]);
    let bd2 = BoundaryData::from_derivatives(&[&g0, &g1]);
    let n1 = max_of(points.iter().map(|&s| check_rule_consistency(&g0, &g1, &bd1, s, tolerance::DERIVATIVE_RULE)));
    let n2 = max_of(points.iter().map(|&s| check_rule_consistency(&g0, &g2, &bd2, s, tolerance::DERIVATIVE_RULE)));
    let composition = (|| {
        let tp = TransformPair::from_signal(&g0, 1e-10);
        let once = derivative_rule(&tp, &bd1, 1)?;
        let twice = derivative_rule(&once, &BoundaryData::from_derivatives(&[&g1]), 1)?;
        let direct = derivative_rule(&tp, &bd2, 2)?;
        max_of(points.iter().map(|&s| Ok((twice.combined(s) - direct.combined(s)).norm())))
    })();
    vec![
        CriterionResult::upper_bound("derivative_rule_n1", 7, n1, tolerance::DERIVATIVE_RULE),
        CriterionResult::upper_bound("derivative_rule_n2", 7, n2, tolerance::DERIVATIVE_RULE),
        CriterionResult::upper_bound("derivative_rule_composition", 7, composition, tolerance::RULE_COMPOSITION),
    ]
}

/// Points `(x, t)` where the heat residual is checked.
pub const HEAT_POINTS: [(f64, f64); 6] = [(0.7, 0.3), (-1.2, 0.5), (0.3, 1.0), (0.4, 0.5), (1.5, 0.5), (-0.8, 1.2)];

pub fn heat_application() -> Vec<CriterionResult> {
    let boundary = max_of([1e-3, 0.1, 1.0, 10.0].map(|t| Ok(heat_solution(0.0, t)?.abs())));
    let h = tolerance::HEAT_STEP;
    let residual = max_of(HEAT_POINTS.map(|(x, t)| heat_residual(x, t, h)));
    let order = max_of(HEAT_POINTS.map(|(x, t)| {
        let ratio = heat_residual(x, t, h)? / heat_residual(x, t, 0.5 * h)?;
        Ok((ratio - 4.0).abs())
    }));
    let identity = max_of(
        [(c(1.0, 0.0), 0.5), (c(2.0, 1.0), 0.25)].map(|(s, t)| heat_transform_identity(s, t, tolerance::HEAT_IDENTITY)),
    );
    vec![
        CriterionResult::upper_bound("heat_boundary", 8, boundary, 0.0),
        CriterionResult::upper_bound("heat_pde_residual", 8, residual, tolerance::HEAT_RESIDUAL),
        CriterionResult::upper_bound("heat_convergence_order", 8, order, tolerance::HEAT_ORDER),
        CriterionResult::upper_bound("heat_transform_identity", 8, identity, tolerance::HEAT_IDENTITY),
    ]
}

pub fn ode_application() -> Vec<CriterionResult> {
    let residual = Ok((0..=200).map(|k| ode_residual(-10.0 + 0.1 * k as f64)).fold(0.0, f64::max));
    let tiny = f64::MIN_POSITIVE;
    let continuity = Ok((ode_solution(0.0) - ode_solution(-tiny))
        .abs()
        .max((ode_derivative(0.0) - ode_derivative(-tiny)).abs()));
    let transform = max_of([c(2.0, 0.0), c(3.0, 1.0)].map(|s| ode_transform_check(s, tolerance::ODE_TRANSFORM)));
    let split = parse_transform(ODE_SPLIT_EXPRESSION).and_then(|st| {
        max_of([-3.0, -1.0, -0.5, 0.5, 1.0, 3.0].map(|t| Ok((sl_inverse_split(&st, t)? - c(ode_solution(t), 0.0)).norm())))
    });
    vec![
        CriterionResult::upper_bound("ode_residual", 9, residual, tolerance::ODE_RESIDUAL),
        CriterionResult::upper_bound("ode_continuity", 9, continuity, tolerance::ODE_CONTINUITY),
        CriterionResult::upper_bound("ode_transform", 9, transform, tolerance::ODE_TRANSFORM),
        CriterionResult::upper_bound("ode_split_inversion", 9, split, tolerance::ODE_SPLIT),
    ]
}

/// Machine outputs that must not depend on the thread count.
fn reference_outputs() -> Vec<String> {
    let outputs = [
        cli::cmd_forward("sign", 1.0, 1.0, 1.0, -5.0, 5.0, 20, 1e-8),
        cli::cmd_forward("sincos", 2.0, 0.5, 1.5, -1.0, 1.0, 8, 1e-8),
        cli::cmd_invert("1/s^2 - 1/cs^2", -3.0, 3.0, 12),
        cli::cmd_invert_numeric("1/s - 1/cs", 1.0, 1.0, 0.5, 500.0, 1e-8),
    ];
    let mut out: Vec<String> = outputs
        .into_iter()
        .map(|r| r.unwrap_or_else(|e| format!("error: {e}")))
        .collect();
    out.push(format!("{:?}", example1_grid()));
    out
}

pub fn determinism() -> Vec<CriterionResult> {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map(|pool| pool.install(reference_outputs))
            .map_err(|e| crate::error::Error::Numeric(e.to_string()))
    };
    let mismatches = (|| {
        let serial = run(1)?;
        let again = run(1)?;
        let parallel = run(4)?;
        let count = serial
            .iter()
            .zip(&again)
            .chain(serial.iter().zip(&parallel))
            .filter(|(a, b)| a != b)
            .count();
        Ok(count as f64)
    })();
    vec![CriterionResult::upper_bound("determinism", 10, mismatches, 0.0)]
}

/// A group of checks for one criterion.
pub type Check = fn() -> Vec<CriterionResult>;

/// Every check, in criterion order.
pub fn run_all() -> Vec<CriterionResult> {
    [
        example1_grid as Check,
        closed_form_grids,
        reductions,
        kernel_witness,
        split_inversion,
        numeric_inversion,
        derivative_rules,
        heat_application,
        ode_application,
        determinism,
    ]
    .iter()
    .flat_map(|check| check())
    .collect()
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub all_pass: bool,
    pub criteria: Vec<CriterionResult>,
}

pub fn report() -> Report {
    let criteria = run_all();
    Report {
        all_pass: criteria.iter().all(CriterionResult::passed),
        criteria,
    }
}
