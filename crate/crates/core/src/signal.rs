//! Time-domain signals on the whole real line.
//!
//! A [`PiecewiseSignal`] is a pair of evaluable pieces, one for `t >= 0` and
//! one for `t < 0`, each carrying an [`Envelope`] that bounds its growth.
//! The value at `t = 0` belongs to the positive piece (`H(0) = 1`).

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result, Side};

pub type ComplexValue = Complex64;

/// Complex conjugate, `s -> s̄`.
#[inline]
pub fn conjugate(z: ComplexValue) -> ComplexValue {
    ComplexValue::new(z.re, -z.im)
}

/// Heaviside step with `H(0) = 1`.
#[inline]
pub fn heaviside(t: f64) -> f64 {
    if t >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// `|f(t)| <= m * exp(a * |t|)` on one half-line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialOrderBound {
    pub m: f64,
    pub a: f64,
}

impl ExponentialOrderBound {
    pub fn new(m: f64, a: f64) -> Self {
        assert!(m >= 0.0 && m.is_finite(), "envelope constant must be finite and >= 0");
        Self { m, a }
    }
}

/// Growth bound for one piece of a signal.
///
/// Only [`Envelope::Exponential`] is an exponential-order bound in the strict
/// sense. The other variants are turned into one on demand by
/// [`Envelope::resolve`], with a growth rate chosen relative to the damping
/// of the integral being evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum Envelope {
    Exponential(ExponentialOrderBound),
    /// `|f(t)| <= coefficient * |t|^degree`.
    Polynomial { coefficient: f64, degree: u32 },
    /// `|f(t)| <= coefficient * exp(-t^2 / 2)`.
    Gaussian { coefficient: f64 },
    /// `|sum w_i f_i| <= sum |w_i| envelope_i`.
    Combination(Vec<(f64, Envelope)>),
}

impl Envelope {
    pub fn exponential(m: f64, a: f64) -> Self {
        Envelope::Exponential(ExponentialOrderBound::new(m, a))
    }

    pub fn zero() -> Self {
        Envelope::exponential(0.0, 0.0)
    }

    /// Value of the envelope at distance `t_abs` from the origin.
    pub fn bound_at(&self, t_abs: f64) -> f64 {
        let t = t_abs.abs();
        match self {
            Envelope::Exponential(b) => b.m * (b.a * t).exp(),
            Envelope::Polynomial { coefficient, degree } => coefficient * t.powi(*degree as i32),
            Envelope::Gaussian { coefficient } => coefficient * (-0.5 * t * t).exp(),
            Envelope::Combination(parts) => {
                parts.iter().map(|(w, e)| w.abs() * e.bound_at(t)).sum()
            }
        }
    }

    /// True when the envelope is identically zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Envelope::Exponential(b) => b.m == 0.0,
            Envelope::Polynomial { coefficient, .. } | Envelope::Gaussian { coefficient } => {
                *coefficient == 0.0
            }
            Envelope::Combination(parts) => parts.iter().all(|(w, e)| *w == 0.0 || e.is_zero()),
        }
    }

    /// Infimum of the dampings for which `∫_0^∞ envelope(t) e^{-x t} dt` is finite,
    /// or `None` when every damping works.
    pub fn growth_rate(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        match self {
            Envelope::Exponential(b) => Some(b.a),
            Envelope::Polynomial { .. } => Some(0.0),
            Envelope::Gaussian { .. } => None,
            Envelope::Combination(parts) => parts
                .iter()
                .filter(|(w, e)| *w != 0.0 && !e.is_zero())
                .filter_map(|(_, e)| e.growth_rate())
                .reduce(f64::max),
        }
    }

    /// Produce an exponential-order bound `(M, a)` with `a < damping`, valid on
    /// `[0, ∞)`, that makes the tail bound `M e^{-(x-a)T}/(x-a) <= tail_tol`
    /// as early as possible among the candidates tried.
    pub fn resolve(&self, damping: f64, tail_tol: f64, side: Side) -> Result<ExponentialOrderBound> {
        if self.is_zero() {
            return Ok(ExponentialOrderBound::new(0.0, damping - 1.0));
        }
        if let Some(g) = self.growth_rate() {
            if !(damping > g) {
                return Err(Error::Divergence { side, damping, growth: g });
            }
        }
        match self {
            Envelope::Exponential(b) => Ok(*b),
            Envelope::Polynomial { coefficient, degree } => {
                // a = x/2, M = sup_t c t^k e^{-a t} = c (k / (e a))^k
                let a = 0.5 * damping;
                let k = *degree as f64;
                let m = if *degree == 0 {
                    *coefficient
                } else {
                    coefficient * (k / (std::f64::consts::E * a)).powf(k)
                };
                Ok(ExponentialOrderBound::new(m, a))
            }
            Envelope::Gaussian { coefficient } => {
                let candidates = (-2..=6).map(|k| damping - 2f64.powi(k));
                let best = candidates
                    .filter_map(|a| {
                        // sup_{t>=0} exp(-t^2/2 - a t)
                        let m = if a >= 0.0 { *coefficient } else { coefficient * (0.5 * a * a).exp() };
                        m.is_finite().then(|| ExponentialOrderBound::new(m, a))
                    })
                    .min_by(|p, q| {
                        tail_length(p, damping, tail_tol).total_cmp(&tail_length(q, damping, tail_tol))
                    })
                    .expect("candidate list is non-empty");
                Ok(best)
            }
            Envelope::Combination(parts) => {
                let mut m = 0.0;
                let mut a = f64::NEG_INFINITY;
                for (w, e) in parts.iter().filter(|(w, e)| *w != 0.0 && !e.is_zero()) {
                    let b = e.resolve(damping, tail_tol, side)?;
                    m += w.abs() * b.m;
                    a = a.max(b.a);
                }
                Ok(ExponentialOrderBound::new(m, a))
            }
        }
    }
}

fn tail_length(b: &ExponentialOrderBound, x: f64, tol: f64) -> f64 {
    let rate = x - b.a;
    ((b.m / (tol * rate)).ln() / rate).max(0.0)
}

type Piece = Arc<dyn Fn(f64) -> ComplexValue + Send + Sync>;

/// A function on the real line given by two half-line pieces.
#[derive(Clone)]
pub struct PiecewiseSignal {
    name: String,
    pos: Piece,
    neg: Piece,
    bound_pos: Envelope,
    bound_neg: Envelope,
}

impl fmt::Debug for PiecewiseSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiecewiseSignal")
            .field("name", &self.name)
            .field("bound_pos", &self.bound_pos)
            .field("bound_neg", &self.bound_neg)
            .finish_non_exhaustive()
    }
}

impl PiecewiseSignal {
    /// `neg` is called with `t < 0` (and, for one-sided limits, with `t = 0`).
    pub fn new<P, N>(name: impl Into<String>, pos: P, neg: N, bound_pos: Envelope, bound_neg: Envelope) -> Self
    where
        P: Fn(f64) -> ComplexValue + Send + Sync + 'static,
        N: Fn(f64) -> ComplexValue + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            pos: Arc::new(pos),
            neg: Arc::new(neg),
            bound_pos,
            bound_neg,
        }
    }

    /// Real-valued pieces.
    pub fn real<P, N>(name: impl Into<String>, pos: P, neg: N, bound_pos: Envelope, bound_neg: Envelope) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        N: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(
            name,
            move |t| ComplexValue::new(pos(t), 0.0),
            move |t| ComplexValue::new(neg(t), 0.0),
            bound_pos,
            bound_neg,
        )
    }

    pub fn zero() -> Self {
        Self::real("zero", |_| 0.0, |_| 0.0, Envelope::zero(), Envelope::zero())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bound_pos(&self) -> &Envelope {
        &self.bound_pos
    }

    pub fn bound_neg(&self) -> &Envelope {
        &self.bound_neg
    }

    /// f(t) with the `H(0) = 1` convention.
    pub fn eval(&self, t: f64) -> ComplexValue {
        if t >= 0.0 {
            (self.pos)(t)
        } else {
            (self.neg)(t)
        }
    }

    /// Positive piece evaluated at `t` (callers pass `t >= 0`).
    pub fn eval_pos(&self, t: f64) -> ComplexValue {
        (self.pos)(t)
    }

    /// Negative piece evaluated at `t` (callers pass `t <= 0`; `t = 0` yields `f(0-)`).
    pub fn eval_neg(&self, t: f64) -> ComplexValue {
        (self.neg)(t)
    }

    /// f(0+)
    pub fn right_limit_at_zero(&self) -> ComplexValue {
        (self.pos)(0.0)
    }

    /// f(0-)
    pub fn left_limit_at_zero(&self) -> ComplexValue {
        (self.neg)(0.0)
    }

    /// `alpha * self + beta * other`.
    pub fn linear_combination(&self, alpha: ComplexValue, other: &Self, beta: ComplexValue) -> Self {
        let (fp, gp) = (self.pos.clone(), other.pos.clone());
        let (fn_, gn) = (self.neg.clone(), other.neg.clone());
        let env = |e: &Envelope, h: &Envelope| {
            Envelope::Combination(vec![(alpha.norm(), e.clone()), (beta.norm(), h.clone())])
        };
        Self {
            name: format!("({alpha})*{} + ({beta})*{}", self.name, other.name),
            pos: Arc::new(move |t| alpha * fp(t) + beta * gp(t)),
            neg: Arc::new(move |t| alpha * fn_(t) + beta * gn(t)),
            bound_pos: env(&self.bound_pos, &other.bound_pos),
            bound_neg: env(&self.bound_neg, &other.bound_neg),
        }
    }

    /// Spot-check both envelopes at the given nonzero sample points. Returns the
    /// first sample that violates its envelope.
    pub fn check_envelope(&self, samples: &[f64]) -> Option<f64> {
        samples.iter().copied().find(|&t| {
            let (v, env) = if t >= 0.0 {
                (self.eval_pos(t), &self.bound_pos)
            } else {
                (self.eval_neg(t), &self.bound_neg)
            };
            v.norm() > env.bound_at(t) * (1.0 + 1e-12)
        })
    }
}

/// Names accepted by [`catalog_signal`].
pub const CATALOG_NAMES: [&str; 8] = ["sign", "one", "heaviside", "ramp", "sincos", "cossin", "ode_rhs", "gauss"];

/// Look up a built-in signal. `sincos` and `cossin` use frequency 1.
pub fn catalog_signal(name: &str) -> Result<PiecewiseSignal> {
    catalog_signal_with_frequency(name, 1.0)
}

/// Look up a built-in signal; `frequency` applies to `sincos` and `cossin`.
pub fn catalog_signal_with_frequency(name: &str, frequency: f64) -> Result<PiecewiseSignal> {
    let unit = || Envelope::exponential(1.0, 0.0);
    let w = frequency;
    let signal = match name {
        "sign" => PiecewiseSignal::real("sign", |_| 1.0, |_| -1.0, unit(), unit()),
        "one" => PiecewiseSignal::real("one", |_| 1.0, |_| 1.0, unit(), unit()),
        "heaviside" => PiecewiseSignal::real("heaviside", |_| 1.0, |_| 0.0, unit(), Envelope::zero()),
        "ramp" => {
            let poly = || Envelope::Polynomial { coefficient: 1.0, degree: 1 };
            PiecewiseSignal::real("ramp", |t| t, |t| t, poly(), poly())
        }
        "sincos" => PiecewiseSignal::real(
            "sincos",
            move |t| (w * t).sin(),
            move |t| (w * t).cos(),
            unit(),
            unit(),
        ),
        "cossin" => PiecewiseSignal::real(
            "cossin",
            move |t| (w * t).cos(),
            move |t| (w * t).sin(),
            unit(),
            unit(),
        ),
        "ode_rhs" => PiecewiseSignal::real(
            "ode_rhs",
            f64::exp,
            |_| 1.0,
            Envelope::exponential(1.0, 1.0),
            unit(),
        ),
        "gauss" => {
            let env = || Envelope::Gaussian { coefficient: 1.0 };
            PiecewiseSignal::real("gauss", |t| (-t * t).exp(), |t| (-t * t).exp(), env(), env())
        }
        _ => {
            return Err(Error::Catalog {
                name: name.to_string(),
                valid: CATALOG_NAMES.to_vec(),
            })
        }
    };
    Ok(signal)
}

/// Derivatives of `e^{-t^2}` up to second order, with Gaussian envelopes.
pub fn gauss_derivative(order: usize) -> PiecewiseSignal {
    let g = |t: f64| (-t * t).exp();
    match order {
        0 => catalog_signal("gauss").expect("gauss is in the catalog"),
        1 => {
            // max 2|t| e^{-t^2/2} = 2 e^{-1/2}
            let env = || Envelope::Gaussian { coefficient: 1.22 };
            let f = move |t: f64| -2.0 * t * g(t);
            PiecewiseSignal::real("gauss'", f, f, env(), env())
        }
        2 => {
            // max |4t^2 - 2| e^{-t^2/2} = 8 e^{-5/4}
            let env = || Envelope::Gaussian { coefficient: 2.3 };
            let f = move |t: f64| (4.0 * t * t - 2.0) * g(t);
            PiecewiseSignal::real("gauss''", f, f, env(), env())
        }
        _ => panic!("gauss_derivative supports orders 0..=2"),
    }
}
