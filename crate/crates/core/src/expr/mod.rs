//! Transform-domain expressions in `s` and `s̄`.
//!
//! Expressions are parsed into a [`SplitTransform`]: a rational function in
//! `s` plus a rational function in `s̄`, ready for term-wise inversion.

mod parser;
mod poly;
mod rational;
mod roots;

use std::fmt;

pub use parser::parse_transform;
pub use poly::Polynomial;
pub use rational::{evaluate_rational, RationalFunction, POLE_GUARD};
pub use roots::{polynomial_roots, Root, CLUSTER_DISTANCE, RESIDUAL_BOUND};

use crate::error::Result;
use crate::signal::{conjugate, ComplexValue};

/// `g1(s) + g2(s̄)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitTransform {
    /// Part in `s`; images of the `t >= 0` half.
    pub g1: RationalFunction,
    /// Part in `s̄`; images of the `t < 0` half.
    pub g2: RationalFunction,
}

impl SplitTransform {
    /// Evaluate with independent arguments for the two sides.
    pub fn eval_sides(&self, s: ComplexValue, s_bar: ComplexValue) -> Result<ComplexValue> {
        let a = if self.g1.is_zero() { ComplexValue::default() } else { self.g1.eval(s)? };
        let b = if self.g2.is_zero() { ComplexValue::default() } else { self.g2.eval(s_bar)? };
        Ok(a + b)
    }

    /// `g1(s) + g2(conj(s))`.
    pub fn eval(&self, s: ComplexValue) -> Result<ComplexValue> {
        self.eval_sides(s, conjugate(s))
    }
}

impl fmt::Display for SplitTransform {
    /// Output parses back to an equivalent transform.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}", self.g1.render("s"), self.g2.render("cs"))
    }
}
