//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the library is generic over (`f32`, `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Tolerance used everywhere to decide "this value is an integer".
    ///
    /// `1e-9` in double precision; widened to a few ulps for narrower types.
    #[inline]
    fn int_tol() -> Self {
        Self::lit(1e-9).max(Self::epsilon() * Self::lit(64.0))
    }

    /// Largest `x` for which `exp(x)` is finite.
    #[inline]
    fn ln_max() -> Self {
        Self::max_value().ln()
    }

    /// Smallest `x` for which `exp(x)` is a normal number.
    #[inline]
    fn ln_min_positive() -> Self {
        Self::min_positive_value().ln()
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Integer `n` if `x` lies within `tol` of it.
pub(crate) fn nearest_integer<T: Real>(x: T, tol: T) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() <= tol {
        r.to_i64()
    } else {
        None
    }
}
