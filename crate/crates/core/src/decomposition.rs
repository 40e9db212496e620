//! Jordan-type decompositions for bounded discrepancy.
//!
//! A sequence (or sampled function) has discrepancy at most `r` exactly when
//! it is the increment of a difference of two nondecreasing parts whose gap
//! stays within `r/2`. On finite grids every lower limit reduces to a plain
//! cumulative value, so the constructions below only need prefix sums.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::{cumulative, from_usize, Signal};
use crate::scalar::{Field, Real, Scalar};

/// `eta(k) = (chi2(k) - chi2(k-1)) - (chi1(k) - chi1(k-1))`, indexed from 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteJordan<T> {
    pub alpha: T,
    pub r: T,
    pub chi1: Vec<T>,
    pub chi2: Vec<T>,
}

impl<T: Field> DiscreteJordan<T> {
    /// Accepts an arbitrary pair of nondecreasing sequences of equal length
    /// `n + 1`. `alpha` is read off `chi2(0)`, `r` is twice the gap bound.
    pub fn from_parts(chi1: Vec<T>, chi2: Vec<T>) -> Result<Self> {
        if chi1.len() != chi2.len() || chi1.is_empty() {
            return Err(Error::Inconsistent(
                "chi1 and chi2 must be non-empty and of equal length".into(),
            ));
        }
        if !is_nondecreasing(&chi1) || !is_nondecreasing(&chi2) {
            return Err(Error::Inconsistent("parts must be nondecreasing".into()));
        }
        let alpha = -chi2[0];
        let mut out = Self {
            alpha,
            r: T::zero(),
            chi1,
            chi2,
        };
        out.r = out.max_gap() + out.max_gap();
        Ok(out)
    }

    /// The sequence whose decomposition this is.
    pub fn reconstruct(&self) -> Vec<T> {
        (1..self.chi1.len())
            .map(|k| (self.chi2[k] - self.chi2[k - 1]) - (self.chi1[k] - self.chi1[k - 1]))
            .collect()
    }

    /// `sup_k |chi2(k) - chi1(k)|`.
    pub fn max_gap(&self) -> T {
        self.chi1
            .iter()
            .zip(&self.chi2)
            .fold(T::zero(), |acc, (&a, &b)| acc.max_of((b - a).abs()))
    }

    /// Upper bound on the discrepancy of [`Self::reconstruct`] certified by
    /// the decomposition alone: the range of `chi2 - chi1`, at most twice the gap.
    pub fn discrepancy_bound(&self) -> T {
        let gaps = self.chi1.iter().zip(&self.chi2).map(|(&a, &b)| b - a);
        let first = self.chi2[0] - self.chi1[0];
        let (lo, hi) = gaps.fold((first, first), |(lo, hi), g| (lo.min_of(g), hi.max_of(g)));
        hi - lo
    }
}

pub(crate) fn is_nondecreasing<T: PartialOrd>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[0] <= w[1])
}

/// Splits `eta` into positive and negative cumulative parts, centred so the
/// gap never exceeds half the discrepancy. Single pass plus one shift.
pub fn jordan_discrete<T: Field>(eta: &[T]) -> DiscreteJordan<T> {
    let n = eta.len();
    let mut pos = Vec::with_capacity(n + 1);
    let mut neg = Vec::with_capacity(n + 1);
    let (mut p, mut m) = (T::zero(), T::zero());
    let (mut hi, mut lo) = (T::zero(), T::zero());
    pos.push(p);
    neg.push(m);
    for &v in eta {
        if v > T::zero() {
            p = p + v;
        } else {
            m = m - v;
        }
        pos.push(p);
        neg.push(m);
        let s = p - m;
        hi = hi.max_of(s);
        lo = lo.min_of(s);
    }
    // midpoint of the prefix-sum range
    let alpha = (hi + lo).half();
    let chi2 = pos.into_iter().map(|x| x - alpha).collect();
    DiscreteJordan {
        alpha,
        r: hi - lo,
        chi1: neg,
        chi2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid<T> {
    pub t0: T,
    pub dt: T,
    pub points: usize,
}

impl<T: Real> Grid<T> {
    fn of(f: &Signal<T>) -> Self {
        Self {
            t0: f.t0(),
            dt: f.dt(),
            points: f.len() + 1,
        }
    }

    pub fn time(&self, k: usize) -> T {
        self.t0 + self.dt * from_usize::<T>(k)
    }
}

/// Continuous counterpart on the `n + 1` cumulative grid points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuousJordan<T> {
    pub c_star: T,
    pub r: T,
    pub h1: Vec<T>,
    pub h2: Vec<T>,
    pub grid: Grid<T>,
}

impl<T: Real> ContinuousJordan<T> {
    pub fn max_gap(&self) -> T {
        self.h1
            .iter()
            .zip(&self.h2)
            .fold(T::zero(), |acc, (&a, &b)| acc.max_of((b - a).abs()))
    }

    /// `max_k |((h2 - h1)(k+1) - (h2 - h1)(k)) / dt - f_k|`.
    pub fn derivative_residual(&self, f: &Signal<T>) -> T {
        let dt = self.grid.dt;
        f.samples()
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (k, &x)| {
                let step = (self.h2[k + 1] - self.h1[k + 1]) - (self.h2[k] - self.h1[k]);
                acc.max_of((step / dt - x).abs())
            })
    }
}

fn interpolate<T: Real>(v: &[T], k: usize, frac: T) -> T {
    v[k] + (v[k + 1] - v[k]) * frac
}

/// Index of the earliest maximum and earliest minimum.
fn extreme_indices<T: Scalar>(v: &[T]) -> (usize, usize) {
    let (mut hi, mut lo) = (0, 0);
    for (i, &x) in v.iter().enumerate() {
        if x > v[hi] {
            hi = i;
        }
        if x < v[lo] {
            lo = i;
        }
    }
    (hi, lo)
}

pub fn jordan_continuous<T: Real>(f: &Signal<T>) -> Result<ContinuousJordan<T>> {
    if f.len() < 2 {
        return Err(Error::TooFewSamples {
            need: 2,
            got: f.len(),
        });
    }
    let grid = Grid::of(f);
    let dt = f.dt();
    let total = f.cumulative_integral();
    let (hi, lo) = extreme_indices(&total);
    let r = total[hi] - total[lo];
    if r == T::zero() {
        let zeros = vec![T::zero(); grid.points];
        return Ok(ContinuousJordan {
            c_star: f.t0(),
            r,
            h1: zeros.clone(),
            h2: zeros,
            grid,
        });
    }

    // maximizing window [a*, b*]; find the first cell where half the window
    // integral is reached
    let (a, b) = (hi.min(lo), hi.max(lo));
    let target = (total[a] + total[b]).half();
    let rising = total[b] > total[a];
    let crossed = |x: T| if rising { x >= target } else { x <= target };
    let k = (a..b)
        .find(|&k| crossed(total[k + 1]))
        .expect("window endpoints straddle the midpoint");
    let frac = (target - total[k]) / (total[k + 1] - total[k]);
    let c_star = grid.time(k) + dt * frac;

    let pos = cumulative(f.samples(), dt, |x| x.max_of(T::zero()));
    let neg = cumulative(f.samples(), dt, |x| -x.min_of(T::zero()));
    let (pos_c, neg_c) = (interpolate(&pos, k, frac), interpolate(&neg, k, frac));
    let out = ContinuousJordan {
        c_star,
        r,
        h1: neg.into_iter().map(|x| x - neg_c).collect(),
        h2: pos.into_iter().map(|x| x - pos_c).collect(),
        grid,
    };

    let tol = T::default_tolerance()
        * (T::one() + r + f.samples().iter().fold(T::zero(), |a, x| a + x.abs()) * dt);
    if out.max_gap() > r.half() + tol {
        return Err(Error::Inconsistent(format!(
            "gap {:?} exceeds half the discrepancy {:?}",
            out.max_gap(),
            r.half()
        )));
    }
    if !is_nondecreasing(&out.h1) || !is_nondecreasing(&out.h2) {
        return Err(Error::Inconsistent("parts are not monotone".into()));
    }
    Ok(out)
}

/// The primitive of `f` shifted to have range `[0, r]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeFunction<T> {
    pub g: Vec<T>,
    /// The shift: minimum of the unshifted cumulative integral.
    pub c: T,
    pub r: T,
    pub grid: Grid<T>,
}

pub fn range_function<T: Real>(f: &Signal<T>) -> Result<RangeFunction<T>> {
    if f.len() < 2 {
        return Err(Error::TooFewSamples {
            need: 2,
            got: f.len(),
        });
    }
    let total = f.cumulative_integral();
    let (hi, lo) = extreme_indices(&total);
    let c = total[lo];
    Ok(RangeFunction {
        g: total.iter().map(|&x| x - c).collect(),
        c,
        r: total[hi] - c,
        grid: Grid::of(f),
    })
}
