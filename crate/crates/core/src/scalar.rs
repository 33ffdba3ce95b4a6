//! Scalar abstraction for load currents.
//!
//! Every solver and evaluator in this crate is written against [`Current`], so
//! the same code runs on `f64`, `f32` and exact rationals. The kernel regressor
//! additionally needs `num_traits::Float` and is therefore float-only.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// A current magnitude (amperes) or any quantity derived from one.
pub trait Current:
    Copy + PartialOrd + Num + Signed + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// False for NaN and infinities.
    fn is_finite_value(&self) -> bool;

    /// Absolute tolerance under which two balance measures count as equal.
    fn tie_tolerance() -> Self;

    fn three() -> Self {
        Self::one() + Self::one() + Self::one()
    }

    /// Lossy conversion for reporting.
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Current for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn tie_tolerance() -> Self {
        1e-9
    }
}

impl Current for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn tie_tolerance() -> Self {
        1e-9
    }
}

impl Current for Ratio<i64> {
    fn is_finite_value(&self) -> bool {
        true
    }

    fn tie_tolerance() -> Self {
        Ratio::zero()
    }
}

/// Larger of two partially ordered values; the first wins on ties or NaN.
pub(crate) fn max_of<T: PartialOrd>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}
