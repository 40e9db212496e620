//! Norms on finite real sequences.
//!
//! The discrepancy norm of `x = (x_1, ..., x_n)` is the largest absolute sum
//! over a contiguous window. It equals the range of the walk whose positions
//! are the prefix sums of `x`, starting at the origin, which gives the
//! single-pass evaluation in [`discrepancy_fast`].

use std::ops::Deref;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Finite sequence of finite scalars.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SequenceD<T>(Vec<T>);

impl<T: Scalar> SequenceD<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub fn discrepancy(&self) -> T {
        discrepancy_fast(&self.0)
    }

    pub fn alexiewicz(&self) -> T {
        alexiewicz_norm(&self.0)
    }

    pub fn total_variation(&self) -> Result<T> {
        total_variation(&self.0)
    }
}

impl<T> Deref for SequenceD<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T: Scalar> TryFrom<Vec<T>> for SequenceD<T> {
    type Error = Error;

    fn try_from(values: Vec<T>) -> Result<Self> {
        Self::new(values)
    }
}

/// Which norm to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    Discrepancy,
    Alexiewicz,
    TotalVariation,
    /// `p >= 1`; `f64::INFINITY` is accepted and equals [`NormKind::Sup`].
    P(f64),
    Sup,
}

impl NormKind {
    pub fn evaluate<T: Real>(&self, x: &[T]) -> Result<T> {
        match *self {
            NormKind::Discrepancy => Ok(discrepancy_fast(x)),
            NormKind::Alexiewicz => Ok(alexiewicz_norm(x)),
            NormKind::TotalVariation => total_variation(x),
            NormKind::P(p) => p_norm(x, p),
            NormKind::Sup => Ok(sup_norm(x)),
        }
    }
}

/// Direct evaluation of the window supremum in `O(n^2)`.
///
/// Kept as the reference for [`discrepancy_fast`].
pub fn discrepancy_naive<T: Scalar>(x: &[T]) -> T {
    let mut best = T::zero();
    for start in 0..x.len() {
        let mut sum = T::zero();
        for &v in &x[start..] {
            sum = sum + v;
            best = best.max_of(sum.abs());
        }
    }
    best
}

/// Discrepancy norm from the prefix-sum range, `O(n)`.
pub fn discrepancy_fast<T: Scalar>(x: &[T]) -> T {
    let (hi, lo) = discrete_range_identity(x);
    hi - lo
}

/// Maximum and minimum of the prefix sums, the empty prefix included.
///
/// Their difference is the discrepancy of `x`.
pub fn discrete_range_identity<T: Scalar>(x: &[T]) -> (T, T) {
    let mut sum = T::zero();
    let mut hi = T::zero();
    let mut lo = T::zero();
    for &v in x {
        sum = sum + v;
        hi = hi.max_of(sum);
        lo = lo.min_of(sum);
    }
    (hi, lo)
}

/// Largest absolute prefix sum.
pub fn alexiewicz_norm<T: Scalar>(x: &[T]) -> T {
    let mut sum = T::zero();
    let mut best = T::zero();
    for &v in x {
        sum = sum + v;
        best = best.max_of(sum.abs());
    }
    best
}

/// Sum of absolute consecutive differences. Undefined for an empty sequence.
pub fn total_variation<T: Scalar>(x: &[T]) -> Result<T> {
    if x.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(x.windows(2)
        .fold(T::zero(), |acc, w| acc + (w[1] - w[0]).abs()))
}

pub fn sup_norm<T: Scalar>(x: &[T]) -> T {
    x.iter().fold(T::zero(), |acc, v| acc.max_of(v.abs()))
}

pub fn l1_norm<T: Scalar>(x: &[T]) -> T {
    x.iter().fold(T::zero(), |acc, &v| acc + v.abs())
}

/// `(sum |x_i|^p)^(1/p)`, or the sup norm for `p = inf`.
pub fn p_norm<T: Real>(x: &[T], p: f64) -> Result<T> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if p.is_infinite() {
        return Ok(sup_norm(x));
    }
    if p == 1.0 {
        return Ok(l1_norm(x));
    }
    let p = T::from_f64(p).ok_or(Error::InvalidExponent(p))?;
    let sum = x
        .iter()
        .fold(T::zero(), |acc, &v| acc + Float::powf(v.abs(), p));
    Ok(Float::powf(sum, T::one() / p))
}
