//! Dual norms of the discrepancy and Alexiewicz norms.
//!
//! A weight function `f` acts on event sequences by
//! `L_f(eta) = sum_i f(t_i) * eta(t_i)`. Functionals are evaluated on
//! *balanced* event sequences, those whose values sum to zero. On that
//! subspace adding a constant to `f` does not change `L_f`, which is what
//! makes the dual norms comparable to the total variation of `f` (a
//! seminorm that ignores constants):
//!
//! * `||f||_D* = max(up, down)`, where `up` and `down` are the summed rising
//!   and falling increments of `f`, so `||f||_BV / 2 <= ||f||_D* <= ||f||_BV`;
//! * `||f||_A* = ||f||_BV`.
//!
//! The dual discrepancy norm is computed by a two-state dynamic program over
//! alternating `+1/-1` selections; [`dual_discrepancy_oracle`] enumerates
//! the unit ball directly and is used to validate it.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::events::EventSequence;
use crate::norms::{discrepancy_fast, total_variation};
use crate::scalar::{from_event, Field, Scalar};

/// Pointwise weights `f_L(t_i)` of a linear functional.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalWeights<T> {
    times: Vec<f64>,
    weights: Vec<T>,
}

impl<T: Scalar> FunctionalWeights<T> {
    pub fn new(times: Vec<f64>, weights: Vec<T>) -> Result<Self> {
        if times.len() != weights.len() {
            return Err(Error::LengthMismatch {
                times: times.len(),
                weights: weights.len(),
            });
        }
        if let Some(index) = times.iter().position(|t| !t.is_finite()) {
            return Err(Error::UnorderedEvents { index });
        }
        if let Some(index) = times.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::UnorderedEvents { index: index + 1 });
        }
        if let Some(index) = weights.iter().position(|w| !w.is_finite_value()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { times, weights })
    }

    /// Weights at the integer times `0, 1, ..., n-1`.
    pub fn from_values(weights: Vec<T>) -> Result<Self> {
        let times = (0..weights.len()).map(|i| i as f64).collect();
        Self::new(times, weights)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Event sequence with values `eta` at this functional's times.
    pub fn events_at(&self, eta: &[i64]) -> EventSequence {
        EventSequence::new(self.times.iter().copied().zip(eta.iter().copied()))
            .expect("functional times are strictly increasing")
    }
}

/// `L_f(eta)`. Every event time must carry a weight.
pub fn apply_functional<T: Scalar>(f: &FunctionalWeights<T>, eta: &EventSequence) -> Result<T> {
    let index: HashMap<u64, usize> = f
        .times
        .iter()
        .enumerate()
        .map(|(i, t)| (t.to_bits(), i))
        .collect();
    eta.events().iter().try_fold(T::zero(), |acc, e| {
        let i = index
            .get(&normalize_zero(e.time).to_bits())
            .ok_or(Error::MissingWeight { time: e.time })?;
        Ok(acc + f.weights[*i] * from_event::<T>(e.value))
    })
}

fn normalize_zero(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t
    }
}

fn dot<T: Scalar>(f: &[T], eta: &[i64]) -> T {
    f.iter()
        .zip(eta)
        .fold(T::zero(), |acc, (&w, &v)| acc + w * from_event::<T>(v))
}

/// Best balanced alternating selection starting with `sign`; `O(n)`.
///
/// `open` holds the best sum after an odd number of picks (awaiting the
/// closing opposite sign), `closed` after an even number (balanced).
fn alternating_dp<T: Scalar>(f: &[T], sign: i64) -> (T, Vec<i64>) {
    let s: T = from_event(sign);
    let n = f.len();
    // back-pointers: opener -> previous closer, closer -> its opener
    let mut open: Option<(T, usize)> = None;
    let mut closed: (T, Option<usize>) = (T::zero(), None);
    let mut open_from: Vec<Option<usize>> = vec![None; n];
    let mut closed_from: Vec<Option<usize>> = vec![None; n];
    for (i, &w) in f.iter().enumerate() {
        let (prev_open, prev_closed) = (open, closed);
        // open a pair at i
        let cand = prev_closed.0 + s * w;
        if open.is_none_or(|(v, _)| cand > v) {
            open = Some((cand, i));
            open_from[i] = prev_closed.1;
        }
        // close a pair at i
        if let Some((v, last)) = prev_open {
            let cand = v - s * w;
            if cand > closed.0 {
                closed = (cand, Some(i));
                closed_from[i] = Some(last);
            }
        }
    }
    let mut eta = vec![0i64; n];
    let mut cursor = closed.1;
    while let Some(j) = cursor {
        eta[j] = -sign;
        let o = closed_from[j].expect("closing pick has an opener");
        eta[o] = sign;
        cursor = open_from[o];
    }
    (closed.0, eta)
}

/// `||f||_D*` with a witness `eta` in `{-1,0,1}^n`, alternating and balanced,
/// attaining it. For `n >= 2` the witness has discrepancy exactly 1.
pub fn dual_discrepancy_fast<T: Scalar>(f: &FunctionalWeights<T>) -> (T, Vec<i64>) {
    let w = &f.weights;
    let (up_val, up_eta) = alternating_dp(w, -1);
    let (down_val, down_eta) = alternating_dp(w, 1);
    let (value, mut eta) = if down_val > up_val {
        (down_val, down_eta)
    } else {
        (up_val, up_eta)
    };
    if eta.iter().all(|&v| v == 0) && w.len() >= 2 {
        // value is 0 here; any unit pair attains it
        eta[0] = -1;
        eta[1] = 1;
    }
    (value, eta)
}

/// Which unit-ball points the oracle enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// `eta` in `{-1,0,1}^n`, `n <= 12`.
    Ternary,
    /// `eta` in `{-2,...,2}^n`, `n <= 8`.
    Extended,
}

impl OracleMode {
    pub fn max_len(self) -> usize {
        match self {
            OracleMode::Ternary => 12,
            OracleMode::Extended => 8,
        }
    }

    fn radius(self) -> i64 {
        match self {
            OracleMode::Ternary => 1,
            OracleMode::Extended => 2,
        }
    }
}

/// `max |L_f(eta)| / ||eta||_D` over every nonzero balanced `eta` of the mode.
pub fn dual_discrepancy_oracle<T: Field>(f: &FunctionalWeights<T>, mode: OracleMode) -> Result<T> {
    let n = f.len();
    if n > mode.max_len() {
        return Err(Error::TooLarge {
            n,
            max: mode.max_len(),
        });
    }
    let radius = mode.radius();
    let mut eta = vec![-radius; n];
    let mut best = T::zero();
    loop {
        if eta.iter().sum::<i64>() == 0 && eta.iter().any(|&v| v != 0) {
            let norm: T = from_event(discrepancy_fast(&eta));
            best = best.max_of(dot(&f.weights, &eta).abs() / norm);
        }
        // odometer
        let mut i = 0;
        while i < n && eta[i] == radius {
            eta[i] = -radius;
            i += 1;
        }
        if i == n {
            break;
        }
        eta[i] += 1;
    }
    Ok(best)
}

/// Positions of local extrema; a plateau counts once, at its first index.
fn local_extrema<T: Scalar>(w: &[T]) -> Vec<usize> {
    let mut runs: Vec<usize> = Vec::new();
    for (i, v) in w.iter().enumerate() {
        if runs.last().is_none_or(|&j| w[j] != *v) {
            runs.push(i);
        }
    }
    if runs.len() < 2 {
        return Vec::new();
    }
    let mut out = vec![runs[0]];
    for k in 1..runs.len() - 1 {
        let (a, b, c) = (w[runs[k - 1]], w[runs[k]], w[runs[k + 1]]);
        if (b > a) != (c > b) {
            out.push(runs[k]);
        }
    }
    out.push(runs[runs.len() - 1]);
    out
}

/// `||f||_A* = ||f||_BV` with the extremum witness: `-1` (or `+1`) at the
/// first extremum, `+-2` alternating at interior extrema, closing with `+-1`.
/// The witness has Alexiewicz norm 1 and `L_f(witness) = ||f||_BV`.
pub fn alexiewicz_dual<T: Scalar>(f: &FunctionalWeights<T>) -> Result<(T, Vec<i64>)> {
    let w = &f.weights;
    let bv = total_variation(w)?;
    let mut eta = vec![0i64; w.len()];
    let ext = local_extrema(w);
    if let Some((&first, rest)) = ext.split_first() {
        let mut sign = if w[ext[1]] > w[first] { -1 } else { 1 };
        eta[first] = sign;
        for (k, &i) in rest.iter().enumerate() {
            sign = -sign;
            eta[i] = if k + 1 == rest.len() { sign } else { 2 * sign };
        }
    }
    Ok((bv, eta))
}

/// `||f||_D* / ||f||_BV`, in `[1/2, 1]`; equal to 1 exactly for monotone `f`.
pub fn monotonicity_measure<T: Field>(f: &FunctionalWeights<T>) -> Result<T> {
    let bv = total_variation(&f.weights)?;
    if bv == T::zero() {
        return Err(Error::ConstantInput);
    }
    let (dual, _) = dual_discrepancy_fast(f);
    let mu = dual / bv;
    let tol = T::default_tolerance();
    if mu < T::one().half() - tol || mu > T::one() + tol {
        return Err(Error::Inconsistent(format!(
            "monotonicity measure {mu:?} outside [1/2, 1]"
        )));
    }
    Ok(mu)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualNormReport<T> {
    pub dual_d: T,
    pub bv: T,
    pub dual_a: T,
    pub mu_mon: Option<T>,
    pub witness: Vec<i64>,
}

pub fn dual_report<T: Field>(f: &FunctionalWeights<T>) -> Result<DualNormReport<T>> {
    let (dual_d, witness) = dual_discrepancy_fast(f);
    let (dual_a, _) = alexiewicz_dual(f)?;
    let bv = total_variation(&f.weights)?;
    let mu_mon = match monotonicity_measure(f) {
        Ok(mu) => Some(mu),
        Err(Error::ConstantInput) => None,
        Err(e) => return Err(e),
    };
    Ok(DualNormReport {
        dual_d,
        bv,
        dual_a,
        mu_mon,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessCheck<T> {
    /// `M = ||f||_BV`.
    pub bound: T,
    pub probes: usize,
    /// Largest `|L_f(eta)| / ||eta||_D` seen over the probes.
    pub worst_ratio: T,
    pub holds: bool,
}

/// Probes `|L_f(eta)| <= ||f||_BV * ||eta||_D` on the dual witness plus
/// `probes` random balanced alternating sequences.
pub fn boundedness_check<T: Field, R: Rng + ?Sized>(
    f: &FunctionalWeights<T>,
    probes: usize,
    rng: &mut R,
) -> Result<BoundednessCheck<T>> {
    let bound = total_variation(&f.weights)?;
    let n = f.len();
    let tol = T::default_tolerance();
    let mut worst = T::zero();
    let mut holds = true;
    let mut check = |eta: &[i64]| {
        let norm = discrepancy_fast(eta);
        if norm == 0 {
            return;
        }
        let value = dot(&f.weights, eta).abs();
        let norm: T = from_event(norm);
        worst = worst.max_of(value / norm);
        holds &= value <= bound * norm + tol;
    };
    check(&dual_discrepancy_fast(f).1);
    for _ in 0..probes {
        check(&random_balanced_alternating(n, rng));
    }
    Ok(BoundednessCheck {
        bound,
        probes: probes + 1,
        worst_ratio: worst,
        holds,
    })
}

/// Random `eta` in `{-1,0,1}^n` with alternating nonzero signs and zero sum.
pub fn random_balanced_alternating<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<i64> {
    let mut eta = vec![0i64; n];
    let mut sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut last = None;
    for (i, slot) in eta.iter_mut().enumerate() {
        if rng.gen_bool(0.5) {
            *slot = sign;
            last = Some(i);
            sign = -sign;
        }
    }
    // an odd number of picks leaves the walk off zero; drop the last one
    if eta.iter().sum::<i64>() != 0 {
        if let Some(i) = last {
            eta[i] = 0;
        }
    }
    eta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::alexiewicz_norm;
    use num_rational::Rational64;
    use rand::SeedableRng;

    fn w(v: &[i64]) -> FunctionalWeights<i64> {
        FunctionalWeights::from_values(v.to_vec()).unwrap()
    }

    fn wq(v: &[i64]) -> FunctionalWeights<Rational64> {
        FunctionalWeights::from_values(v.iter().map(|&x| Rational64::from_integer(x)).collect())
            .unwrap()
    }

    #[test]
    fn apply_examples() {
        let f = w(&[1, 2, 3]);
        let eta = EventSequence::new([(0.0, -1), (2.0, 1)]).unwrap();
        assert_eq!(apply_functional(&f, &eta), Ok(2));
        assert_eq!(apply_functional(&f, &EventSequence::empty()), Ok(0));
        let stray = EventSequence::new([(0.5, 1)]).unwrap();
        assert_eq!(
            apply_functional(&f, &stray),
            Err(Error::MissingWeight { time: 0.5 })
        );
    }

    #[test]
    fn weights_validation() {
        assert!(FunctionalWeights::new(vec![0.0, 0.0], vec![1i64, 2]).is_err());
        assert!(FunctionalWeights::new(vec![0.0], vec![1i64, 2]).is_err());
        assert!(FunctionalWeights::new(vec![0.0], vec![f64::NAN]).is_err());
    }

    #[test]
    fn dual_examples() {
        let (v, eta) = dual_discrepancy_fast(&w(&[1, 2, 3]));
        assert_eq!(v, 2);
        assert_eq!(dot(&[1i64, 2, 3], &eta), 2);
        assert_eq!(discrepancy_fast(&eta), 1);
        assert_eq!(dual_discrepancy_fast(&w(&[4, 4, 4])).0, 0);
        let (v, eta) = dual_discrepancy_fast(&w(&[0, 1, 0]));
        assert_eq!(v, 1);
        assert_eq!(dot(&[0i64, 1, 0], &eta).abs(), 1);
    }

    #[test]
    fn constant_weights_get_unit_witness() {
        let (v, eta) = dual_discrepancy_fast(&w(&[5, 5, 5]));
        assert_eq!(v, 0);
        assert_eq!(discrepancy_fast(&eta), 1);
        assert_eq!(eta.iter().sum::<i64>(), 0);
        let (v, eta) = dual_discrepancy_fast(&w(&[5]));
        assert_eq!((v, eta), (0, vec![0]));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            dual_discrepancy_oracle(&wq(&[1, 2, 3]), OracleMode::Ternary).unwrap(),
            Rational64::from_integer(2)
        );
        assert_eq!(
            dual_discrepancy_oracle(&wq(&[7, 7, 7, 7]), OracleMode::Extended).unwrap(),
            Rational64::from_integer(0)
        );
        assert!(matches!(
            dual_discrepancy_oracle(&wq(&[0; 13]), OracleMode::Ternary),
            Err(Error::TooLarge { n: 13, max: 12 })
        ));
        assert!(dual_discrepancy_oracle(&wq(&[0; 9]), OracleMode::Extended).is_err());
    }

    #[test]
    fn extrema_with_plateaus() {
        assert_eq!(local_extrema(&[0, 1, 1, 0]), vec![0, 1, 3]);
        assert_eq!(local_extrema(&[2, 2, 2]), Vec::<usize>::new());
        assert_eq!(local_extrema(&[1, 2, 3]), vec![0, 2]);
        assert_eq!(local_extrema(&[3, 1, 4, 1, 5]), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn alexiewicz_dual_examples() {
        let (bv, eta) = alexiewicz_dual(&w(&[0, 1, 0])).unwrap();
        assert_eq!(bv, 2);
        assert_eq!(eta, vec![-1, 2, -1]);
        assert_eq!(alexiewicz_norm(&eta), 1);
        assert_eq!(dot(&[0i64, 1, 0], &eta), 2);

        let (bv, eta) = alexiewicz_dual(&w(&[1, 3, 2])).unwrap();
        assert_eq!(bv, 3);
        assert_eq!(dot(&[1i64, 3, 2], &eta), 3);
        assert_eq!(alexiewicz_norm(&eta), 1);

        let (bv, eta) = alexiewicz_dual(&w(&[6, 6])).unwrap();
        assert_eq!((bv, eta), (0, vec![0, 0]));
    }

    #[test]
    fn monotonicity_examples() {
        assert_eq!(
            monotonicity_measure(&wq(&[0, 1, 0])).unwrap(),
            Rational64::new(1, 2)
        );
        assert_eq!(
            monotonicity_measure(&wq(&[1, 1, 2, 5])).unwrap(),
            Rational64::from_integer(1)
        );
        assert_eq!(
            monotonicity_measure(&wq(&[3, 3])),
            Err(Error::ConstantInput)
        );
        let f = FunctionalWeights::from_values(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(monotonicity_measure(&f).unwrap(), 0.5);
    }

    #[test]
    fn report_fields() {
        let r = dual_report(&wq(&[0, 1, 0])).unwrap();
        assert_eq!(r.dual_d, Rational64::from_integer(1));
        assert_eq!(r.bv, Rational64::from_integer(2));
        assert_eq!(r.dual_a, Rational64::from_integer(2));
        assert_eq!(r.mu_mon, Some(Rational64::new(1, 2)));
        assert_eq!(dual_report(&wq(&[2, 2])).unwrap().mu_mon, None);
    }

    #[test]
    fn boundedness_examples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let b = boundedness_check(&wq(&[1, 2, 3]), 200, &mut rng).unwrap();
        assert!(b.holds);
        assert_eq!(b.bound, Rational64::from_integer(2));
        assert!(b.worst_ratio <= Rational64::from_integer(2));

        let c = boundedness_check(&wq(&[4, 4, 4, 4]), 50, &mut rng).unwrap();
        assert!(c.holds);
        assert_eq!(c.worst_ratio, Rational64::from_integer(0));

        let f = wq(&[0, 1, 0]);
        let b = boundedness_check(&f, 0, &mut rng).unwrap();
        assert_eq!(b.worst_ratio, Rational64::from_integer(1));
    }

    #[test]
    fn random_probes_are_balanced_unit_vectors() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for n in 0..20 {
            let eta = random_balanced_alternating(n, &mut rng);
            assert_eq!(eta.iter().sum::<i64>(), 0);
            assert!(discrepancy_fast(&eta) <= 1);
        }
    }
}
