use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{nearest_integer, Real};

/// Classification of the Morse strength `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    Generic,
    /// `A = N`.
    Integer(u32),
    /// `A = (2N - 1) / 2`.
    HalfInteger(u32),
}

/// Morse potential `V(x) = e^{-2x} - 2(A + 1/2) e^{-x}` in units with `hbar^2/2m = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialParams<T> {
    a: T,
    regime: Regime,
}

impl<T: Real> PotentialParams<T> {
    pub fn new(a: T) -> Result<Self> {
        if !(a > T::zero()) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Morse strength A must be positive and finite, got {a}"
            )));
        }
        let tol = T::int_tol();
        let regime = match nearest_integer(a, tol) {
            Some(n) if n >= 1 => Regime::Integer(n as u32),
            _ => match nearest_integer(T::lit(2.0) * a + T::one(), tol * T::lit(2.0)) {
                Some(two_n) if two_n >= 2 && two_n % 2 == 0 => Regime::HalfInteger((two_n / 2) as u32),
                _ => Regime::Generic,
            },
        };
        Ok(Self { a, regime })
    }

    /// Morse strength `A`.
    #[inline]
    pub fn a(&self) -> T {
        self.a
    }

    #[inline]
    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// `[A]`, the integer part.
    pub fn floor_a(&self) -> u32 {
        match self.regime {
            Regime::Integer(n) => n,
            _ => self.a.floor().to_u32().unwrap_or(0),
        }
    }

    /// `A + 1/2` coefficient factor `1 + 2A`.
    #[inline]
    pub fn one_plus_two_a(&self) -> T {
        T::one() + T::lit(2.0) * self.a
    }

    /// Potential energy at `x`.
    pub fn potential(&self, x: T) -> T {
        let e = (-x).exp();
        e * e - self.one_plus_two_a() * e
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        assert_eq!(PotentialParams::new(2.3).unwrap().regime(), Regime::Generic);
        assert_eq!(PotentialParams::new(2.0).unwrap().regime(), Regime::Integer(2));
        assert_eq!(PotentialParams::new(2.0 + 1e-12).unwrap().regime(), Regime::Integer(2));
        assert_eq!(PotentialParams::new(2.5).unwrap().regime(), Regime::HalfInteger(3));
        assert_eq!(PotentialParams::new(0.5).unwrap().regime(), Regime::HalfInteger(1));
        assert_eq!(PotentialParams::new(0.4).unwrap().regime(), Regime::Generic);
        assert_eq!(PotentialParams::new(7.25).unwrap().regime(), Regime::Generic);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(PotentialParams::new(0.0).is_err());
        assert!(PotentialParams::new(-1.0).is_err());
        assert!(PotentialParams::new(f64::NAN).is_err());
    }

    #[test]
    fn floor() {
        assert_eq!(PotentialParams::new(2.3).unwrap().floor_a(), 2);
        assert_eq!(PotentialParams::new(3.0 - 1e-12).unwrap().floor_a(), 3);
        assert_eq!(PotentialParams::new(0.4).unwrap().floor_a(), 0);
    }
}
