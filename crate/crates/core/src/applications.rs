//! The two worked problems: the heat equation on the line with sign-function
//! initial data and `u(0, t) = 0`, and the forced oscillator `y'' + y = f` with a
//! forcing that is `e^t` for `t >= 0` and `1` for `t < 0`.


use crate::error::{Error, Result, Side};
use crate::forward::laplace_half;
use crate::signal::{catalog_signal, conjugate, ComplexValue, Envelope, PiecewiseSignal};

/// Error function, within about one ulp on the whole line.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// `u(x, t)`: `erf(x/(2√t))` for `x >= 0`, `-erf(-x/(2√t))` for `x < 0`.
pub fn heat_solution(x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("heat solution needs t > 0, got {t}")));
    }
    let scale = 2.0 * t.sqrt();
    Ok(if x >= 0.0 { erf(x / scale) } else { -erf(-x / scale) })
}

/// `|D²ₓu - Dₜu|` with second-order central differences of step `h`.
pub fn heat_residual(x: f64, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) || t - h <= 0.0 {
        return Err(Error::Domain(format!("need h > 0 and t - h > 0, got h = {h}, t = {t}")));
    }
    if x == 0.0 {
        return Err(Error::Domain("the solution is not smooth across x = 0 at fixed t".into()));
    }
    let u = |x, t| heat_solution(x, t);
    let uxx = (u(x + h, t)? - 2.0 * u(x, t)? + u(x - h, t)?) / (h * h);
    let ut = (u(x, t + h)? - u(x, t - h)?) / (2.0 * h);
    Ok((uxx - ut).abs())
}

/// `G(s, t) = L(u(·, t))(s)` and `G̃(w, t) = L(u(-·, t))(w)` by quadrature.
fn heat_half_transforms(s: ComplexValue, w: ComplexValue, t: f64, tol: f64) -> Result<(ComplexValue, ComplexValue)> {
    let bound = Envelope::exponential(1.0, 0.0);
    let g = laplace_half(|x| ComplexValue::new(heat_solution(x, t).unwrap_or(f64::NAN), 0.0), &bound, s, tol, Side::Positive)?;
    let gt = laplace_half(|x| ComplexValue::new(heat_solution(-x, t).unwrap_or(f64::NAN), 0.0), &bound, w, tol, Side::Negative)?;
    Ok((g.value, gt.value))
}

/// `G(s, t) + G̃(s̄, t)`, the symmetric transform of `u(·, t)` at `s`.
pub fn heat_transform(s: ComplexValue, t: f64, tol: f64) -> Result<ComplexValue> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("heat solution needs t > 0, got {t}")));
    }
    let (g, gt) = heat_half_transforms(s, conjugate(s), t, tol)?;
    Ok(g + gt)
}

/// `|s² G + s̄² G̃ - (Gₜ + G̃ₜ)|` with the `t`-derivatives taken by central
/// differences of step `t/500` and the transforms by quadrature.
pub fn heat_transform_identity(s: ComplexValue, t: f64, tol: f64) -> Result<f64> {
    if !(s.re > 0.0) {
        return Err(Error::Divergence {
            side: Side::Positive,
            damping: s.re,
            growth: 0.0,
        });
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("heat solution needs t > 0, got {t}")));
    }
    let sb = conjugate(s);
    let dt = 2e-3 * t;
    // difference quotients amplify quadrature error by 1/dt
    let quad_tol = (1e-3 * tol * dt).max(1e-13);
    let (g, gt) = heat_half_transforms(s, sb, t, quad_tol)?;
    let (gp, gtp) = heat_half_transforms(s, sb, t + dt, quad_tol)?;
    let (gm, gtm) = heat_half_transforms(s, sb, t - dt, quad_tol)?;
    let time_derivative = (gp + gtp - gm - gtm) / (2.0 * dt);
    Ok((s * s * g + sb * sb * gt - time_derivative).norm())
}

/// The displayed ODE solution.
pub fn ode_solution(t: f64) -> f64 {
    if t >= 0.0 {
        // y'' = a + p and y = a - p share a and p so y'' + y reproduces e^t
        0.5 * t.exp() - 0.5 * (t.cos() + t.sin())
    } else {
        1.0 - t.cos()
    }
}

pub fn ode_derivative(t: f64) -> f64 {
    if t >= 0.0 {
        0.5 * t.exp() + 0.5 * (t.sin() - t.cos())
    } else {
        t.sin()
    }
}

pub fn ode_second_derivative(t: f64) -> f64 {
    if t >= 0.0 {
        0.5 * t.exp() + 0.5 * (t.cos() + t.sin())
    } else {
        t.cos()
    }
}

/// The ODE solution as a signal, with envelopes for transforming it.
pub fn ode_solution_signal() -> PiecewiseSignal {
    // |½e^t - ½(cos t + sin t)| <= (½ + √2/2) e^t
    PiecewiseSignal::real(
        "ode_solution",
        ode_solution,
        ode_solution,
        Envelope::exponential(1.21, 1.0),
        Envelope::exponential(2.0, 0.0),
    )
}

/// `|y''(t) + y(t) - f(t)|` with analytic derivatives.
pub fn ode_residual(t: f64) -> f64 {
    let forcing = catalog_signal("ode_rhs").expect("ode_rhs is in the catalog");
    (ode_second_derivative(t) + ode_solution(t) - forcing.eval(t).re).abs()
}

/// `L(y(t))(s) = ½/(s-1) - ½ s/(s²+1) - ½/(s²+1)`.
pub fn ode_positive_image(s: ComplexValue) -> ComplexValue {
    let q = (s * s + 1.0).inv();
    0.5 * (s - 1.0).inv() - 0.5 * s * q - 0.5 * q
}

/// `L(y(-t))(w) = 1/w - w/(w²+1)`.
pub fn ode_negative_image(w: ComplexValue) -> ComplexValue {
    w.inv() - w * (w * w + 1.0).inv()
}

/// Largest deviation between the quadrature transforms of the solution's two
/// halves and the closed-form images above, at `s` and `s̄` respectively.
pub fn ode_transform_check(s: ComplexValue, tol: f64) -> Result<f64> {
    let y = ode_solution_signal();
    let q = 0.1 * tol;
    let pos = laplace_half(|t| y.eval_pos(t), y.bound_pos(), s, q, Side::Positive)?;
    let sb = conjugate(s);
    let neg = laplace_half(|u| y.eval_neg(-u), y.bound_neg(), sb, q, Side::Negative)?;
    let d_pos = (pos.value - ode_positive_image(s)).norm();
    let d_neg = (neg.value - ode_negative_image(sb)).norm();
    Ok(d_pos.max(d_neg))
}

/// The transform of the solution, split as typed on the command line.
pub const ODE_SPLIT_EXPRESSION: &str = "1/(2*(s-1)) - s/(2*(s^2+1)) - 1/(2*(s^2+1)) + 1/cs - cs/(cs^2+1)";
