//! Scalar abstractions shared by every module.
//!
//! The combinatorial parts of the crate (window sums, prefix sums, variation,
//! dual norms) only need ordered ring arithmetic and therefore run on
//! integers, rationals and floats alike. Anything that integrates a sampled
//! signal or takes roots is restricted to [`Real`].

use std::fmt::Debug;

use num_rational::{Ratio, Rational64};
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Ordered signed number usable as a sequence entry.
pub trait Scalar:
    Num + Signed + PartialOrd + Copy + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
    /// Absolute tolerance used for comparisons of derived quantities.
    ///
    /// Zero for exact types.
    fn default_tolerance() -> Self;

    /// `false` for NaN and infinities; always `true` for exact types.
    fn is_finite_value(&self) -> bool;

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Lossy conversion for reporting.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Scalar with exact (or correctly rounded) division.
pub trait Field: Scalar {
    fn half(self) -> Self {
        self / (Self::one() + Self::one())
    }
}

/// Floating point scalar for sampled signals.
pub trait Real: Field + Float {}

impl Scalar for f64 {
    fn default_tolerance() -> Self {
        1e-9
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn default_tolerance() -> Self {
        1e-4
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for i64 {
    fn default_tolerance() -> Self {
        0
    }
    fn is_finite_value(&self) -> bool {
        true
    }
}

impl Scalar for i32 {
    fn default_tolerance() -> Self {
        0
    }
    fn is_finite_value(&self) -> bool {
        true
    }
}

impl Scalar for Rational64 {
    fn default_tolerance() -> Self {
        Ratio::from_integer(0)
    }
    fn is_finite_value(&self) -> bool {
        true
    }
}

impl Field for f64 {}
impl Field for f32 {}
impl Field for Rational64 {}

impl Real for f64 {}
impl Real for f32 {}

/// Converts an integer event value into the scalar domain.
pub(crate) fn from_event<T: Scalar>(v: i64) -> T {
    T::from_i64(v).expect("event value representable in scalar type")
}
