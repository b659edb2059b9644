use std::fmt;

use super::poly::Polynomial;
use crate::error::{Error, Result};
use crate::signal::ComplexValue;

/// Below this denominator modulus an evaluation is reported as a pole.
pub const POLE_GUARD: f64 = 1e-300;

/// `num / den` with `den` monic.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Normalizes so the denominator is monic and strips common powers of the
    /// variable. Fails when `den` is the zero polynomial.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero { pos: 0 });
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let common = num.zero_root_multiplicity().min(den.zero_root_multiplicity());
        let (num, den) = (num.shift_down(common), den.shift_down(common));
        let k = den.leading().inv();
        Ok(Self {
            num: num.scaled(k),
            den: den.scaled(k),
        })
    }

    pub fn zero() -> Self {
        Self {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: ComplexValue) -> Self {
        Self {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `deg num < deg den`; the zero function counts as proper.
    pub fn is_proper(&self) -> bool {
        match self.num.degree() {
            None => true,
            Some(n) => n < self.den.degree().unwrap_or(0),
        }
    }

    pub fn eval(&self, z: ComplexValue) -> Result<ComplexValue> {
        let d = self.den.eval(z);
        if d.norm() < POLE_GUARD {
            return Err(Error::Pole(z));
        }
        Ok(self.num.eval(z) / d)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // reuse a shared denominator when one divides the other
        let (num, den) = if self.den.approx_eq(&other.den, 1e-14) {
            (&self.num + &other.num, self.den.clone())
        } else if let Some(q) = self.den.exact_div(&other.den) {
            (&self.num + &(&other.num * &q), self.den.clone())
        } else if let Some(q) = other.den.exact_div(&self.den) {
            (&(&self.num * &q) + &other.num, other.den.clone())
        } else {
            (
                &(&self.num * &other.den) + &(&other.num * &self.den),
                &self.den * &other.den,
            )
        };
        Self::new(num, den).expect("product of nonzero denominators")
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.num * &other.num, &self.den * &other.den).expect("product of nonzero denominators")
    }

    /// Fails when `other` is identically zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero { pos: 0 });
        }
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn pow(&self, n: u32) -> Self {
        Self::new(self.num.pow(n), self.den.pow(n)).expect("power of a nonzero denominator")
    }

    pub fn scale(&self, k: ComplexValue) -> Self {
        Self::new(self.num.scaled(k), self.den.clone()).expect("nonzero denominator")
    }

    /// Render using only the expression grammar, in the given variable.
    pub fn render(&self, var: &str) -> String {
        format!("({})/({})", self.num.render(var), self.den.render(var))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("s"))
    }
}

/// Free-function form of [`RationalFunction::eval`].
pub fn evaluate_rational(r: &RationalFunction, z: ComplexValue) -> Result<ComplexValue> {
    r.eval(z)
}
