//! Numerical and semi-symbolic toolkit for the symmetric Laplace transform
//!
//! `SL(f)(x1, x2, y) = ∫ e^{(-x1 H(t) + x2 H(-t) - iy) t} f(t) dt`,
//!
//! a two-sided transform with independent damping on each half-line. It is
//! the classical Laplace transform for signals vanishing on `t < 0` and the
//! Fourier transform at `x1 = x2 = 0`.

// `!(x > y)` is used on purpose so that NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod applications;
pub mod cli;
pub mod error;
pub mod expr;
pub mod forward;
pub mod inversion;
pub mod quadrature;
pub mod rules;
pub mod signal;

pub use error::{Error, Result, Side};
pub use forward::{fourier_reduction, sl_forward, sl_forward_symmetric, SLPoint, TransformSample};
pub use signal::{catalog_signal, conjugate, ComplexValue, Envelope, ExponentialOrderBound, PiecewiseSignal};
