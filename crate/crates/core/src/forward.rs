//! Forward symmetric Laplace transform.
//!
//! `SL(f)(x1, x2, y) = ∫ e^{(-x1 H(t) + x2 H(-t) - iy) t} f(t) dt`, evaluated as
//! `L(f(t))(x1 + iy) + L(f(-t))(x2 - iy)`: the negative half-line is folded onto
//! `[0, ∞)` so both halves go through the same quadrature.

use crate::error::{Error, Result, Side};
use crate::quadrature::{half_line_integral, QuadratureResult};
use crate::signal::{ComplexValue, Envelope, PiecewiseSignal};

/// A point `(x1, x2, y)` of the transform domain.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SLPoint {
    pub x1: f64,
    pub x2: f64,
    pub y: f64,
}

impl SLPoint {
    pub fn new(x1: f64, x2: f64, y: f64) -> Self {
        Self { x1, x2, y }
    }

    /// `x1 = x2 = Re s`, `y = Im s`.
    pub fn symmetric(s: ComplexValue) -> Self {
        Self::new(s.re, s.re, s.im)
    }

    /// Argument of the positive half: `x1 + iy`.
    pub fn s(&self) -> ComplexValue {
        ComplexValue::new(self.x1, self.y)
    }

    /// Argument of the negative half: `x2 - iy`.
    pub fn s_bar(&self) -> ComplexValue {
        ComplexValue::new(self.x2, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSample {
    pub point: SLPoint,
    pub value: ComplexValue,
    pub abs_error_estimate: f64,
}

/// One-sided Laplace transform `∫_0^∞ piece(t) e^{-z t} dt` of a half-line piece
/// with the given envelope. `Re z` must exceed the envelope's growth rate.
pub fn laplace_half<F>(piece: F, envelope: &Envelope, z: ComplexValue, tol: f64, side: Side) -> Result<QuadratureResult>
where
    F: Fn(f64) -> ComplexValue,
{
    let bound = envelope.resolve(z.re, 0.5 * tol, side)?;
    half_line_integral(move |t| piece(t) * (-z * t).exp(), bound, z.re, tol).map_err(|e| match e {
        Error::Divergence { damping, growth, .. } => Error::Divergence { side, damping, growth },
        other => other,
    })
}

/// `L(f(t))(z)` using only the positive piece.
pub fn laplace_positive(f: &PiecewiseSignal, z: ComplexValue, tol: f64) -> Result<QuadratureResult> {
    laplace_half(|t| f.eval_pos(t), f.bound_pos(), z, tol, Side::Positive)
}

/// `L(f(-t))(w) = ∫_0^∞ f(-u) e^{-w u} du` using only the negative piece.
pub fn laplace_negative(f: &PiecewiseSignal, w: ComplexValue, tol: f64) -> Result<QuadratureResult> {
    laplace_half(|u| f.eval_neg(-u), f.bound_neg(), w, tol, Side::Negative)
}

pub fn sl_forward(f: &PiecewiseSignal, p: SLPoint, tol: f64) -> Result<TransformSample> {
    let half_tol = 0.5 * tol;
    let (pos, neg) = rayon::join(
        || laplace_positive(f, p.s(), half_tol),
        || laplace_negative(f, p.s_bar(), half_tol),
    );
    let (pos, neg) = (pos?, neg?);
    Ok(TransformSample {
        point: p,
        value: pos.value + neg.value,
        abs_error_estimate: pos.abs_error_estimate + neg.abs_error_estimate,
    })
}

/// `SL(f)(s) = L(f(t))(s) + L(f(-t))(s̄)`.
pub fn sl_forward_symmetric(f: &PiecewiseSignal, s: ComplexValue, tol: f64) -> Result<TransformSample> {
    sl_forward(f, SLPoint::symmetric(s), tol)
}

/// Fourier transform `∫ f(t) e^{-iyt} dt`, i.e. the transform at `x1 = x2 = 0`.
/// Requires both envelopes to certify absolute integrability.
pub fn fourier_reduction(f: &PiecewiseSignal, y: f64, tol: f64) -> Result<TransformSample> {
    for (side, env) in [(Side::Positive, f.bound_pos()), (Side::Negative, f.bound_neg())] {
        if let Some(g) = env.growth_rate() {
            if g >= 0.0 {
                return Err(Error::NotIntegrable(format!(
                    "`{}` has growth rate {g} on the {side}",
                    f.name()
                )));
            }
        }
    }
    sl_forward(f, SLPoint::new(0.0, 0.0, y), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{catalog_signal, catalog_signal_with_frequency};

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn sign_at_unit_point() {
        // 1/(1+i) + 1/(-1+i) = (1-i)/2 + (-1-i)/2 = -i
        let oracle = c(1.0, 1.0).inv() + c(-1.0, 1.0).inv();
        assert!((oracle - c(0.0, -1.0)).norm() < 1e-15);
        let f = catalog_signal("sign").unwrap();
        let r = sl_forward(&f, SLPoint::new(1.0, 1.0, 1.0), 1e-10).unwrap();
        assert!((r.value - oracle).norm() <= 1e-10);
    }

    #[test]
    fn one_at_asymmetric_point() {
        // 1/(2+i) + 1/(3-i) = (2-i)/5 + (3+i)/10 = 0.7 - 0.1i
        let oracle = c(2.0, 1.0).inv() + c(3.0, -1.0).inv();
        assert!((oracle - c(0.7, -0.1)).norm() < 1e-15);
        let f = catalog_signal("one").unwrap();
        let r = sl_forward(&f, SLPoint::new(2.0, 3.0, 1.0), 1e-10).unwrap();
        assert!((r.value - c(0.7, -0.1)).norm() <= 1e-10);
    }

    #[test]
    fn ramp_vanishes_for_real_s() {
        let f = catalog_signal("ramp").unwrap();
        for x in [0.5, 1.0, 2.0] {
            let r = sl_forward(&f, SLPoint::new(x, x, 0.0), 1e-10).unwrap();
            assert!(r.value.norm() <= 1e-9, "x={x}: {}", r.value);
        }
    }

    #[test]
    fn sincos_at_one() {
        let f = catalog_signal_with_frequency("sincos", 1.0).unwrap();
        let r = sl_forward(&f, SLPoint::new(1.0, 1.0, 0.0), 1e-10).unwrap();
        assert!((r.value - c(1.0, 0.0)).norm() <= 1e-10);
    }

    #[test]
    fn symmetric_examples() {
        let sign = catalog_signal("sign").unwrap();
        let r = sl_forward_symmetric(&sign, c(1.0, 1.0), 1e-10).unwrap();
        assert!((r.value - c(0.0, -1.0)).norm() <= 1e-10);
        let h = catalog_signal("heaviside").unwrap();
        let r = sl_forward_symmetric(&h, c(2.0, 0.0), 1e-10).unwrap();
        assert!((r.value - c(0.5, 0.0)).norm() <= 1e-10);
        let one = catalog_signal("one").unwrap();
        let r = sl_forward_symmetric(&one, c(1.0, 0.0), 1e-10).unwrap();
        assert!((r.value - c(2.0, 0.0)).norm() <= 1e-10);
    }

    #[test]
    fn fourier_reduction_of_gaussian() {
        let g = catalog_signal("gauss").unwrap();
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let r = fourier_reduction(&g, 0.0, 1e-10).unwrap();
        assert!((r.value - c(sqrt_pi, 0.0)).norm() <= 1e-10);
        let r = fourier_reduction(&g, 2.0, 1e-10).unwrap();
        assert!((r.value - c(sqrt_pi * (-1.0f64).exp(), 0.0)).norm() <= 1e-10);
    }

    #[test]
    fn fourier_reduction_rejects_constant() {
        let one = catalog_signal("one").unwrap();
        let err = fourier_reduction(&one, 1.0, 1e-8).unwrap_err();
        assert!(matches!(err, Error::NotIntegrable(_)));
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn divergence_names_the_side() {
        let f = catalog_signal("sign").unwrap();
        let e = sl_forward(&f, SLPoint::new(0.0, 1.0, 0.0), 1e-8).unwrap_err();
        assert!(matches!(e, Error::Divergence { side: Side::Positive, .. }));
        let e = sl_forward(&f, SLPoint::new(1.0, -0.5, 0.0), 1e-8).unwrap_err();
        assert!(matches!(e, Error::Divergence { side: Side::Negative, .. }));
        let ode = catalog_signal("ode_rhs").unwrap();
        let e = sl_forward(&ode, SLPoint::new(1.0, 1.0, 0.0), 1e-8).unwrap_err();
        assert!(matches!(e, Error::Divergence { side: Side::Positive, .. }));
    }

    #[test]
    fn laplace_reduction_for_causal_signals() {
        let h = catalog_signal("heaviside").unwrap();
        let decay = PiecewiseSignal::real(
            "causal_exp",
            |t| (-t).exp(),
            |_| 0.0,
            Envelope::exponential(1.0, -1.0),
            Envelope::zero(),
        );
        for s in [c(0.5, 0.0), c(1.0, 3.0), c(4.0, -2.0)] {
            let r = sl_forward_symmetric(&h, s, 1e-9).unwrap();
            assert!((r.value - s.inv()).norm() <= 1e-9);
            let r = sl_forward_symmetric(&decay, s, 1e-9).unwrap();
            assert!((r.value - (s + 1.0).inv()).norm() <= 1e-9);
        }
    }
}
