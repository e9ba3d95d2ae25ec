//! Complex numbers carried as `mantissa · exp(log_scale)`.
//!
//! Wavefunctions of the Morse problem multiply a super-exponentially small
//! factor `exp(-exp(-x))` by a Kummer function that grows like `exp(2 exp(-x))`;
//! both leave the floating-point range long before their product does.

use num_complex::Complex;
use num_traits::Zero;

use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled<T> {
    pub mantissa: Complex<T>,
    pub log_scale: T,
}

impl<T: Real> Scaled<T> {
    pub fn zero() -> Self {
        Self {
            mantissa: Complex::zero(),
            log_scale: T::zero(),
        }
    }

    pub fn from_complex(value: Complex<T>) -> Self {
        Self {
            mantissa: value,
            log_scale: T::zero(),
        }
    }

    /// `exp(log)` without ever forming the exponential.
    pub fn from_log(log: Complex<T>) -> Self {
        if log.re == T::neg_infinity() {
            return Self::zero();
        }
        Self {
            mantissa: Complex::from_polar(T::one(), log.im),
            log_scale: log.re,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Multiplies by `exp(log)`.
    pub fn mul_exp(self, log: Complex<T>) -> Self {
        if log.re == T::neg_infinity() {
            return Self::zero();
        }
        Self {
            mantissa: self.mantissa * Complex::from_polar(T::one(), log.im),
            log_scale: self.log_scale + log.re,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        Self {
            mantissa: self.mantissa * other.mantissa,
            log_scale: self.log_scale + other.log_scale,
        }
        .normalized()
    }

    pub fn mul_complex(self, factor: Complex<T>) -> Self {
        Self {
            mantissa: self.mantissa * factor,
            log_scale: self.log_scale,
        }
        .normalized()
    }

    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let top = self.log_scale.max(other.log_scale);
        let a = self.mantissa * (self.log_scale - top).exp();
        let b = other.mantissa * (other.log_scale - top).exp();
        Self {
            mantissa: a + b,
            log_scale: top,
        }
        .normalized()
    }

    /// Moves the magnitude of the mantissa into the scale so that `|mantissa| ≈ 1`.
    pub fn normalized(self) -> Self {
        let m = self.mantissa.norm();
        if m == T::zero() || !m.is_finite() {
            return self;
        }
        let l = m.ln();
        Self {
            mantissa: self.mantissa / m,
            log_scale: self.log_scale + l,
        }
    }

    /// Rescales to a prescribed `log_scale` (the mantissa absorbs the difference).
    pub fn at_scale(self, log_scale: T) -> Complex<T> {
        if self.is_zero() {
            return Complex::zero();
        }
        self.mantissa * (self.log_scale - log_scale).exp()
    }

    /// `ln|value|`; `-inf` for zero.
    pub fn ln_abs(&self) -> T {
        let m = self.mantissa.norm();
        if m == T::zero() {
            T::neg_infinity()
        } else {
            self.log_scale + m.ln()
        }
    }

    pub fn arg(&self) -> T {
        self.mantissa.arg()
    }

    /// Recombined value; may under- or overflow.
    pub fn value(&self) -> Complex<T> {
        if self.is_zero() {
            return Complex::zero();
        }
        let n = self.normalized();
        n.mantissa * n.log_scale.exp()
    }

    /// True if `value()` is a finite, non-denormal-underflowed number (or exactly zero).
    pub fn is_representable(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let l = self.ln_abs();
        l < T::ln_max() && l > T::ln_min_positive()
    }
}
