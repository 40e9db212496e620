//! Misalignment profiles and the discrepancy/variation inequality.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::{discrepancy_fast, l1_norm, total_variation};
use crate::scalar::{Real, Scalar};

/// `Delta_x(k) = ||(x_{i+k} - x_i)_i||_D` for a range of shifts, with `x`
/// zero outside its index set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MisalignmentProfile<T> {
    pub k_values: Vec<i64>,
    pub deltas: Vec<T>,
    /// `max x_i - min x_i` over the zero-padded sequence.
    #[serde(rename = "lipschitz_L")]
    pub lipschitz_l: T,
}

impl<T: Scalar> MisalignmentProfile<T> {
    pub fn delta(&self, k: i64) -> Option<T> {
        let k_max = *self.k_values.last()?;
        if k.abs() > k_max {
            return None;
        }
        Some(self.deltas[(k + k_max) as usize])
    }

    pub fn k_max(&self) -> i64 {
        self.k_values.last().copied().unwrap_or(0)
    }

    /// Two-column `k,delta` export.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,delta\n");
        for (k, d) in self.k_values.iter().zip(&self.deltas) {
            out.push_str(&format!("{k},{}\n", d.to_f64_lossy()));
        }
        out
    }
}

/// `(x_{i+k} - x_i)` over indices where at least one operand is in range.
pub fn shifted_difference<T: Scalar>(x: &[T], k: i64) -> Vec<T> {
    let n = x.len() as i64;
    let at = |i: i64| {
        if (0..n).contains(&i) {
            x[i as usize]
        } else {
            T::zero()
        }
    };
    let (start, end) = (0.min(-k), n.max(n - k));
    (start..end).map(|i| at(i + k) - at(i)).collect()
}

/// Profile for `k` in `[-k_max, k_max]`.
pub fn misalignment<T: Scalar>(x: &[T], k_max: usize) -> MisalignmentProfile<T> {
    misalignment_with(x, k_max, |d| discrepancy_fast(d))
}

/// Same shifts measured with the Euclidean norm, for comparison.
pub fn euclidean_misalignment<T: Real>(x: &[T], k_max: usize) -> MisalignmentProfile<T> {
    misalignment_with(x, k_max, |d| {
        d.iter().fold(T::zero(), |acc, &v| acc + v * v).sqrt()
    })
}

fn misalignment_with<T: Scalar, F: Fn(&[T]) -> T>(
    x: &[T],
    k_max: usize,
    norm: F,
) -> MisalignmentProfile<T> {
    let k_max = k_max as i64;
    let k_values: Vec<i64> = (-k_max..=k_max).collect();
    let deltas = k_values
        .iter()
        .map(|&k| norm(&shifted_difference(x, k)))
        .collect();
    MisalignmentProfile {
        k_values,
        deltas,
        lipschitz_l: padded_range(x),
    }
}

fn padded_range<T: Scalar>(x: &[T]) -> T {
    let (lo, hi) = x.iter().fold((T::zero(), T::zero()), |(lo, hi), &v| {
        (lo.min_of(v), hi.max_of(v))
    });
    hi - lo
}

/// `Delta_x(k) <= |k| * L` for all `|k| <= k_max`.
pub fn check_p4_lipschitz<T: Scalar>(x: &[T], k_max: usize) -> bool {
    let profile = misalignment(x, k_max);
    let tol = T::default_tolerance();
    profile
        .k_values
        .iter()
        .zip(&profile.deltas)
        .all(|(&k, &d)| {
            let k: T = T::from_i64(k.abs()).expect("shift fits scalar");
            d <= k * profile.lipschitz_l + tol
        })
}

/// `Delta_x(0) <= Delta_x(1) <= ... <= Delta_x(k_max)` for nonnegative `x`.
pub fn check_p6_monotone<T: Scalar>(x: &[T], k_max: usize) -> Result<bool> {
    if let Some(index) = x.iter().position(|&v| v < T::zero()) {
        return Err(Error::NegativeEntry { index });
    }
    let profile = misalignment(x, k_max);
    let tol = T::default_tolerance();
    let right = &profile.deltas[k_max..];
    Ok(right.windows(2).all(|w| w[0] <= w[1] + tol))
}

/// `Delta_x(k) = Delta_x(-k)` within tolerance.
pub fn check_p5_symmetric<T: Scalar>(x: &[T], k_max: usize) -> bool {
    let profile = misalignment(x, k_max);
    let tol = T::default_tolerance();
    let d = &profile.deltas;
    (0..d.len()).all(|i| (d[i] - d[d.len() - 1 - i]).abs() <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeisenbergReport<T> {
    pub l1: T,
    pub disc: T,
    pub bv: T,
    pub holds: bool,
    /// `disc * bv - l1`.
    pub slack: T,
    /// Sign changes between consecutive nonzero entries.
    #[serde(rename = "S")]
    pub sign_changes: usize,
}

/// Number of sign changes once zeros are removed.
pub fn sign_changes<T: Scalar>(x: &[T]) -> usize {
    let nonzero: Vec<bool> = x
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    nonzero.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `x` with all zero entries removed.
pub fn cancel_zeros<T: Scalar>(x: &[T]) -> Vec<T> {
    x.iter().copied().filter(|v| !v.is_zero()).collect()
}

/// Evaluates `||x||_1 <= ||x||_D * ||x||_BV` for non-constant `x` in
/// `{-1,0,1}^n`.
pub fn heisenberg_check<T: Scalar>(x: &[T]) -> Result<HeisenbergReport<T>> {
    let one = T::one();
    if let Some(index) = x
        .iter()
        .position(|&v| !(v.is_zero() || v == one || v == -one))
    {
        return Err(Error::NotTernary { index });
    }
    let bv = total_variation(x)?;
    if bv.is_zero() {
        return Err(Error::ConstantInput);
    }
    let l1 = l1_norm(x);
    let disc = discrepancy_fast(x);
    let product = disc * bv;
    Ok(HeisenbergReport {
        l1,
        disc,
        bv,
        holds: l1 <= product + T::default_tolerance(),
        slack: product - l1,
        sign_changes: sign_changes(x),
    })
}
