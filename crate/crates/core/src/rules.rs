//! Transform-domain images of derivatives.
//!
//! For `f` with one-sided limits `f^{(k)}(0±)`:
//!
//! ```text
//! L(f^{(n)}(t))(s)  = s^n L(f)(s) - Σ_{k<n} s^{n-1-k} f^{(k)}(0+)
//! L(f^{(n)}(-t))(w) = (-w)^n L(f(-t))(w) + Σ_{k<n} (-w)^{n-1-k} f^{(k)}(0-)
//! ```
//!
//! and `SL(f^{(n)})(s)` is the first image at `s` plus the second at `s̄`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::forward::{laplace_negative, laplace_positive, sl_forward_symmetric};
use crate::signal::{conjugate, ComplexValue, PiecewiseSignal};

/// One-sided values `f(0±), f'(0±), …, f^{(n-1)}(0±)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub right_values: Vec<ComplexValue>,
    pub left_values: Vec<ComplexValue>,
}

impl BoundaryData {
    pub fn new(right_values: Vec<ComplexValue>, left_values: Vec<ComplexValue>) -> Result<Self> {
        if right_values.len() != left_values.len() {
            return Err(Error::LengthMismatch {
                expected: right_values.len(),
                got: left_values.len(),
            });
        }
        Ok(Self {
            right_values,
            left_values,
        })
    }

    /// Both sides equal, as for a function that is smooth at zero.
    pub fn continuous(values: Vec<ComplexValue>) -> Self {
        Self {
            right_values: values.clone(),
            left_values: values,
        }
    }

    /// Read `f^{(k)}(0±)` off analytic derivatives `[f, f', …, f^{(n-1)}]`.
    pub fn from_derivatives(derivatives: &[&PiecewiseSignal]) -> Self {
        Self {
            right_values: derivatives.iter().map(|d| d.right_limit_at_zero()).collect(),
            left_values: derivatives.iter().map(|d| d.left_limit_at_zero()).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.right_values.len()
    }
}

type Image = Arc<dyn Fn(ComplexValue) -> ComplexValue + Send + Sync>;

/// Images `L(f(t))(·)` and `L(f(-t))(·)` as callable mappings.
#[derive(Clone)]
pub struct TransformPair {
    pub pos: Image,
    pub neg: Image,
}

impl TransformPair {
    pub fn new<P, N>(pos: P, neg: N) -> Self
    where
        P: Fn(ComplexValue) -> ComplexValue + Send + Sync + 'static,
        N: Fn(ComplexValue) -> ComplexValue + Send + Sync + 'static,
    {
        Self {
            pos: Arc::new(pos),
            neg: Arc::new(neg),
        }
    }

    /// `pos(s) + neg(s̄)`, i.e. the symmetric transform at `s`.
    pub fn combined(&self, s: ComplexValue) -> ComplexValue {
        (self.pos)(s) + (self.neg)(conjugate(s))
    }

    /// Images computed by quadrature of the signal's two pieces. Quadrature
    /// failures surface as NaN.
    pub fn from_signal(f: &PiecewiseSignal, tol: f64) -> Self {
        let (fp, fn_) = (f.clone(), f.clone());
        let nan = ComplexValue::new(f64::NAN, f64::NAN);
        Self::new(
            move |z| laplace_positive(&fp, z, tol).map_or(nan, |r| r.value),
            move |w| laplace_negative(&fn_, w, tol).map_or(nan, |r| r.value),
        )
    }
}

/// Images of the `n`-th derivative from the images of `f` and its boundary data.
pub fn derivative_rule(tp: &TransformPair, bd: &BoundaryData, n: usize) -> Result<TransformPair> {
    if bd.right_values.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: bd.right_values.len(),
        });
    }
    if bd.left_values.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: bd.left_values.len(),
        });
    }
    let (pos, neg) = (tp.pos.clone(), tp.neg.clone());
    let (right, left) = (bd.right_values.clone(), bd.left_values.clone());
    let n32 = n as u32;
    Ok(TransformPair::new(
        move |s| {
            let boundary: ComplexValue = right
                .iter()
                .enumerate()
                .map(|(k, v)| s.powu(n32 - 1 - k as u32) * v)
                .sum();
            s.powu(n32) * pos(s) - boundary
        },
        move |w| {
            let m = -w;
            let boundary: ComplexValue = left
                .iter()
                .enumerate()
                .map(|(k, v)| m.powu(n32 - 1 - k as u32) * v)
                .sum();
            m.powu(n32) * neg(w) + boundary
        },
    ))
}

/// `|SL(f^{(n)})(s) - rule image(s)|`, with `n = bd.order()`, where the
/// left-hand side is a direct transform of the supplied derivative and the
/// right-hand side applies [`derivative_rule`] to quadrature images of `f`.
pub fn check_rule_consistency(
    f: &PiecewiseSignal,
    f_nth: &PiecewiseSignal,
    bd: &BoundaryData,
    s: ComplexValue,
    tol: f64,
) -> Result<f64> {
    let n = bd.order();
    // the rule multiplies the images by |s|^n, so they need extra accuracy
    let inner = tol / (10.0 * (1.0 + s.norm()).powi(n as i32));
    let direct = sl_forward_symmetric(f_nth, s, 0.1 * tol)?.value;
    let pos = laplace_positive(f, s, inner)?.value;
    let neg = laplace_negative(f, conjugate(s), inner)?.value;
    let tp = TransformPair::new(move |_| pos, move |_| neg);
    let image = derivative_rule(&tp, bd, n)?.combined(s);
    Ok((direct - image).norm())
}
