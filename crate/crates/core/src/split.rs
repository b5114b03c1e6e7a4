//! Split-complex (hyperbolic) numbers `x + k'y` with `k'^2 = 1`.
//!
//! The quadratic form `x^2 - y^2` vanishes on the null cone `x = ±y`, so it is
//! never used as a tolerance norm. Tolerances use [`SplitComplex::mag`], the
//! component sup-norm.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// A split-complex number `re + k' im`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SplitComplex {
    pub re: f64,
    pub im: f64,
}

impl SplitComplex {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };
    pub const ONE: Self = Self { re: 1.0, im: 0.0 };
    /// The hyperbolic unit `k'`.
    pub const K: Self = Self { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// `x^2 - y^2 = z * conj(z)`; negative off the right/left wedges.
    pub fn quad(self) -> f64 {
        self.re * self.re - self.im * self.im
    }

    /// Squared modulus with the sign convention `y^2 - x^2`.
    pub fn paper_sq_modulus(self) -> f64 {
        -self.quad()
    }

    /// Component sup-norm `max(|re|, |im|)`.
    pub fn mag(self) -> f64 {
        self.re.abs().max(self.im.abs())
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.re * s, self.im * s)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn is_null(self) -> bool {
        self.quad().abs() <= 1e-14 * (1.0 + self.re * self.re + self.im * self.im)
    }

    pub fn inv(self) -> Result<Self> {
        if self.is_null() {
            return Err(Error::NullDivisor(self.re, self.im));
        }
        let q = self.quad();
        Ok(Self::new(self.re / q, -self.im / q))
    }

    /// Integer power; negative exponents go through [`inv`](Self::inv).
    pub fn powi(self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self };
        let mut acc = Self::ONE;
        let mut b = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc *= b;
            }
            b *= b;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Split exponential `e^{k'θ} = cosh θ + k' sinh θ`.
    pub fn exp_hyper(theta: f64) -> Result<Self> {
        let z = Self::new(theta.cosh(), theta.sinh());
        if z.is_finite() {
            Ok(z)
        } else {
            Err(Error::OutOfRange(format!("exp_hyper({theta}) overflows")))
        }
    }

    pub fn from_polar(rho: f64, theta: f64) -> Result<Self> {
        Ok(Self::exp_hyper(theta)?.scale(rho))
    }

    /// Polar coordinates `(ρ, θ)` with `z = ρ e^{k'θ}`; only defined on the
    /// right wedge `re > |im|`.
    pub fn to_polar(self) -> Result<(f64, f64)> {
        if !(self.re > self.im.abs()) {
            return Err(Error::OutsideWedge(self.re, self.im));
        }
        // (re - im)(re + im) avoids cancellation near the cone.
        let rho = ((self.re - self.im) * (self.re + self.im)).sqrt();
        let theta = 0.5 * ((self.re + self.im) / (self.re - self.im)).ln();
        Ok((rho, theta))
    }
}

impl fmt::Display for SplitComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{}-{}k'", self.re, -self.im)
        } else {
            write!(f, "{}+{}k'", self.re, self.im)
        }
    }
}

impl From<f64> for SplitComplex {
    fn from(re: f64) -> Self {
        Self::real(re)
    }
}

impl Add for SplitComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for SplitComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for SplitComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re + self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<f64> for SplitComplex {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Div<f64> for SplitComplex {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        Self::new(self.re / rhs, self.im / rhs)
    }
}

impl Neg for SplitComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl AddAssign for SplitComplex {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for SplitComplex {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for SplitComplex {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Sum for SplitComplex {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}
