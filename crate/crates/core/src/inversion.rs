//! Inverting the symmetric Laplace transform.
//!
//! Two independent routes:
//!
//! * [`sl_inverse_split`] inverts a [`SplitTransform`] term by term: the `s`
//!   part gives `f` on `t >= 0`, the `s̄` part gives `f(-t)` for `t < 0`, each via
//!   partial fractions and the table `c/(s-a)^k -> c t^{k-1} e^{at}/(k-1)!`.
//! * [`sl_inverse_numeric`] evaluates the Fourier-type inversion integral
//!   `e^{(x1 H(t) - x2 H(-t)) t} (1/2π) ∫_{-A}^{A} F(x1, x2, y) e^{iyt} dy`, which
//!   converges to `(f(t+) + f(t-))/2` as `A` grows.

use crate::error::{Error, Result};
use crate::expr::{polynomial_roots, Polynomial, RationalFunction, SplitTransform};
use crate::forward::SLPoint;
use crate::quadrature::finite_oscillatory_integral;
use crate::signal::ComplexValue;

/// Largest admissible `Re(a) t` in an exponential table term.
pub const EXP_OVERFLOW_GUARD: f64 = 700.0;

/// Default half-width of the inversion integral.
pub const DEFAULT_A: f64 = 1000.0;

/// `coefficient / (s - pole)^order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialFractionTerm {
    pub pole: ComplexValue,
    pub order: usize,
    pub coefficient: ComplexValue,
}

impl PartialFractionTerm {
    pub fn eval(&self, s: ComplexValue) -> ComplexValue {
        self.coefficient / (s - self.pole).powu(self.order as u32)
    }
}

/// Decompose a proper rational function over its (clustered) poles.
///
/// For a pole `a` of order `m` with `den = (s-a)^m q(s)`, the coefficient of
/// `(s-a)^{-(m-j)}` is the `j`-th Taylor coefficient of `num/q` at `a`.
pub fn partial_fractions(r: &RationalFunction) -> Result<Vec<PartialFractionTerm>> {
    if r.is_zero() {
        return Ok(Vec::new());
    }
    if !r.is_proper() {
        return Err(Error::Improper {
            num_degree: r.num().degree().unwrap_or(0),
            den_degree: r.den().degree().unwrap_or(0),
        });
    }
    let roots = polynomial_roots(r.den())?;
    let mut terms = Vec::new();
    for (idx, root) in roots.iter().enumerate() {
        let others = roots
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != idx)
            .fold(Polynomial::one(), |acc, (_, o)| {
                acc * Polynomial::from_roots(&vec![o.value; o.multiplicity])
            });
        let m = root.multiplicity;
        let num_taylor = r.num().taylor_at(root.value);
        let q_taylor = others.taylor_at(root.value);
        let at = |v: &[ComplexValue], k: usize| v.get(k).copied().unwrap_or_default();
        let q0 = at(&q_taylor, 0);
        let mut series: Vec<ComplexValue> = Vec::with_capacity(m);
        for j in 0..m {
            let mut acc = at(&num_taylor, j);
            for i in 1..=j {
                acc -= at(&q_taylor, i) * series[j - i];
            }
            series.push(acc / q0);
        }
        for (j, c) in series.into_iter().enumerate() {
            if c != ComplexValue::default() {
                terms.push(PartialFractionTerm {
                    pole: root.value,
                    order: m - j,
                    coefficient: c,
                });
            }
        }
    }
    Ok(terms)
}

/// `Σ c t^{k-1} e^{a t} / (k-1)!` for `t >= 0`.
pub fn inverse_laplace_rational(terms: &[PartialFractionTerm], t: f64) -> Result<ComplexValue> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("inverse Laplace table needs t >= 0, got {t}")));
    }
    let mut total = ComplexValue::default();
    for term in terms {
        let growth = term.pole.re * t;
        if growth > EXP_OVERFLOW_GUARD {
            return Err(Error::Overflow(growth));
        }
        let k = term.order as i32 - 1;
        let factorial: f64 = (1..=k).map(f64::from).product();
        total += term.coefficient * t.powi(k) * (term.pole * t).exp() / factorial;
    }
    Ok(total)
}

/// Inverse through the split: `L⁻¹(g1)(t)` for `t >= 0`, `L⁻¹(g2)(-t)` for `t < 0`.
pub fn sl_inverse_split(st: &SplitTransform, t: f64) -> Result<ComplexValue> {
    let (side, arg) = if t >= 0.0 { (&st.g1, t) } else { (&st.g2, -t) };
    inverse_laplace_rational(&partial_fractions(side)?, arg)
}

/// Both halves decomposed once, for evaluating on a grid.
#[derive(Debug, Clone)]
pub struct SplitInverse {
    pub positive: Vec<PartialFractionTerm>,
    pub negative: Vec<PartialFractionTerm>,
}

impl SplitInverse {
    /// Fails if either side is improper.
    pub fn new(st: &SplitTransform) -> Result<Self> {
        Ok(Self {
            positive: partial_fractions(&st.g1)?,
            negative: partial_fractions(&st.g2)?,
        })
    }

    pub fn eval(&self, t: f64) -> Result<ComplexValue> {
        if t >= 0.0 {
            inverse_laplace_rational(&self.positive, t)
        } else {
            inverse_laplace_rational(&self.negative, -t)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericInversion {
    /// Approximation of `(f(t+) + f(t-))/2`.
    pub value: ComplexValue,
    /// Discretization error of the `y`-integral, times the exponential prefactor.
    pub quadrature_error: f64,
}

/// Fourier-integral inversion at a single `t`, truncated at `|y| <= a`.
pub fn sl_inverse_numeric<F>(f: F, x1: f64, x2: f64, t: f64, a: f64, tol: f64) -> Result<NumericInversion>
where
    F: Fn(SLPoint) -> ComplexValue + Sync,
{
    let damping = if t >= 0.0 { x1 * t } else { -x2 * t };
    let prefactor = damping.exp();
    if !prefactor.is_finite() {
        return Err(Error::Overflow(damping));
    }
    // the y-integral is scaled back up by the prefactor
    let r = finite_oscillatory_integral(|y| f(SLPoint::new(x1, x2, y)), t, a, tol / prefactor)?;
    Ok(NumericInversion {
        value: r.value * prefactor,
        quadrature_error: r.abs_error_estimate * prefactor,
    })
}

/// Result of a numeric inversion together with the truncation proxy
/// `|result(A) - result(A/2)|`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NumericInversionReport {
    pub t: f64,
    pub re: f64,
    pub im: f64,
    pub quadrature_error: f64,
    pub a_sensitivity: f64,
}

pub fn sl_inverse_numeric_with_sensitivity<F>(f: F, x1: f64, x2: f64, t: f64, a: f64, tol: f64) -> Result<NumericInversionReport>
where
    F: Fn(SLPoint) -> ComplexValue + Sync,
{
    let full = sl_inverse_numeric(&f, x1, x2, t, a, tol)?;
    let half = sl_inverse_numeric(&f, x1, x2, t, 0.5 * a, tol)?;
    Ok(NumericInversionReport {
        t,
        re: full.value.re,
        im: full.value.im,
        quadrature_error: full.quadrature_error,
        a_sensitivity: (full.value - half.value).norm(),
    })
}

/// `F(x1, x2, y) = g1(x1 + iy) + g2(x2 - iy)`. Poles on the integration line
/// evaluate to NaN, which the quadrature reports as a numeric failure.
pub fn split_transform_as_sl(st: &SplitTransform) -> impl Fn(SLPoint) -> ComplexValue + Sync + '_ {
    move |p: SLPoint| {
        st.eval_sides(p.s(), p.s_bar())
            .unwrap_or(ComplexValue::new(f64::NAN, f64::NAN))
    }
}
