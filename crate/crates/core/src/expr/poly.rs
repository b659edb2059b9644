use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use crate::signal::ComplexValue;

/// Dense polynomial with complex coefficients in ascending degree.
///
/// The highest stored coefficient is nonzero; the zero polynomial has no
/// coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<ComplexValue>,
}

/// Coefficients below this fraction of the operands' scale are treated as
/// cancellation noise when trimming sums.
const CANCELLATION: f64 = 1e-14;

impl Polynomial {
    pub fn new(mut coeffs: Vec<ComplexValue>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ComplexValue::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| ComplexValue::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: ComplexValue) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(ComplexValue::new(1.0, 0.0))
    }

    /// The variable itself.
    pub fn identity() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    /// `∏ (z - r)` over the given roots.
    pub fn from_roots(roots: &[ComplexValue]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| acc * Self::new(vec![-r, ComplexValue::new(1.0, 0.0)]))
    }

    pub fn coeffs(&self) -> &[ComplexValue] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> ComplexValue {
        self.coeffs.last().copied().unwrap_or_default()
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: ComplexValue) -> ComplexValue {
        self.coeffs.iter().rev().fold(ComplexValue::default(), |acc, &c| acc * z + c)
    }

    /// `Σ |c_k| |z|^k`, the natural size of `p(z)` for backward-error tests.
    pub fn eval_abs(&self, z: ComplexValue) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scaled(&self, k: ComplexValue) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Coefficients of `h -> p(a + h)`, i.e. the Taylor coefficients of `p` at `a`.
    pub fn taylor_at(&self, a: ComplexValue) -> Vec<ComplexValue> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let hi = c[j + 1];
                c[j] += a * hi;
            }
        }
        c
    }

    /// Number of vanishing low-order coefficients, i.e. the multiplicity of the root at 0.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.norm() == 0.0).count()
    }

    /// Divide by `z^k`, dropping the low-order coefficients.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).copied().collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Long division, `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ComplexValue::default(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * d;
            }
            rem[k + dd] = ComplexValue::default();
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient when `divisor` divides `self` up to cancellation noise.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        let noise = 1e-12 * self.scale().max(q.scale() * divisor.scale());
        (r.scale() <= noise).then_some(q)
    }

    /// Approximate equality, coefficient-wise and relative to the larger scale.
    pub fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        self.coeffs.len() == other.coeffs.len() && {
            let scale = self.scale().max(other.scale());
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| (a - b).norm() <= rel * scale)
        }
    }

    fn trim_noise(mut self, scale: f64) -> Self {
        while self.coeffs.last().is_some_and(|c| c.norm() <= CANCELLATION * scale) {
            self.coeffs.pop();
        }
        self
    }

    /// Render with the given variable name using only the expression grammar.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == ComplexValue::default() {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            write!(out, "({} + {}*i)", c.re, c.im).unwrap();
            match k {
                0 => {}
                1 => write!(out, "*{var}").unwrap(),
                _ => write!(out, "*{var}^{k}").unwrap(),
            }
        }
        out
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or_default() + rhs.coeffs.get(k).copied().unwrap_or_default()
            })
            .collect();
        Polynomial::new(coeffs).trim_noise(self.scale().max(rhs.scale()))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![ComplexValue::default(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}
