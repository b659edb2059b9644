use std::fmt;

use thiserror::Error;

/// Which half-line of the real axis an integral runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Positive => f.write_str("positive half-line (t >= 0)"),
            Side::Negative => f.write_str("negative half-line (t < 0)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown signal `{name}`; valid names: {}", valid.join(", "))]
    Catalog { name: String, valid: Vec<&'static str> },

    #[error("divergent integral on the {side}: damping {damping} must exceed growth rate {growth}")]
    Divergence { side: Side, damping: f64, growth: f64 },

    #[error("function is not absolutely integrable on the real line: {0}")]
    NotIntegrable(String),

    #[error("quadrature did not reach tolerance {tol:e} within {evaluations} evaluations (best estimate {estimate}, error {error:e})")]
    Accuracy {
        estimate: num_complex::Complex64,
        error: f64,
        tol: f64,
        evaluations: usize,
    },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("term at position {pos} mixes `s` and `cs`; the expression cannot be split")]
    MixedTerm { pos: usize },

    #[error("division by the zero polynomial at position {pos}")]
    DivisionByZero { pos: usize },

    #[error("rational function is not proper (numerator degree {num_degree} >= denominator degree {den_degree}); it has no inverse in the partial-fraction table")]
    Improper { num_degree: usize, den_degree: usize },

    #[error("evaluation at a pole: {0}")]
    Pole(num_complex::Complex64),

    #[error("exponential overflow: Re(pole)*t = {0}")]
    Overflow(f64),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid arguments: {0}")]
    Usage(String),

    #[error("boundary data has {got} one-sided values per side, derivative order is {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Catalog { .. } | Error::Usage(_) | Error::LengthMismatch { .. } => 2,
            Error::Syntax { .. }
            | Error::MixedTerm { .. }
            | Error::DivisionByZero { .. }
            | Error::Improper { .. } => 3,
            Error::Divergence { .. } | Error::NotIntegrable(_) => 4,
            Error::Accuracy { .. }
            | Error::Pole(_)
            | Error::Overflow(_)
            | Error::Numeric(_)
            | Error::Domain(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
