//! Threshold-based encoders and the quasi-isometry check.
//!
//! A [`Signal`] holds `n` uniform samples; sample `i` stands for the value on
//! the cell `[t0 + i*dt, t0 + (i+1)*dt)`. Integrals use the left rectangle
//! rule, so the cumulative integral lives on `n + 1` grid points with value 0
//! at `t0`.
//!
//! Distances between encodings are measured with events weighted by the
//! threshold, `theta * ||eta_f - eta_g||_D`, which puts input and output
//! distances in the same unit. With that scaling both Send-on-Delta and
//! Integrate-and-Fire satisfy the relaxed bi-Lipschitz bound with `A = 1` and
//! `B = 4 * theta`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::events::{difference, event_discrepancy, EventSequence};
use crate::scalar::Real;

/// Uniformly sampled real signal with compact support.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Signal<T> {
    t0: T,
    dt: T,
    samples: Vec<T>,
}

impl<T: Real> Signal<T> {
    pub fn new(t0: T, dt: T, samples: Vec<T>) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::InvalidSignal("t0 must be finite"));
        }
        if !(dt.is_finite() && dt > T::zero()) {
            return Err(Error::InvalidSignal("dt must be positive and finite"));
        }
        if samples.is_empty() {
            return Err(Error::InvalidSignal("at least one sample is required"));
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { t0, dt, samples })
    }

    /// Samples `f` at `t0 + i*dt` for `i < n`.
    pub fn from_fn<F: FnMut(T) -> T>(t0: T, dt: T, n: usize, mut f: F) -> Result<Self> {
        let samples = (0..n).map(|i| f(t0 + dt * from_usize::<T>(i))).collect();
        Self::new(t0, dt, samples)
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, i: usize) -> T {
        self.t0 + self.dt * from_usize::<T>(i)
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        let tol = T::default_tolerance();
        self.len() == other.len()
            && (self.t0 - other.t0).abs() <= tol
            && (self.dt - other.dt).abs() <= tol
    }

    /// Sample-wise `self - other` on a shared grid.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| a - b)
            .collect();
        Self::new(self.t0, self.dt, samples)
    }

    /// Left-rectangle cumulative integral, `n + 1` values starting at 0.
    pub fn cumulative_integral(&self) -> Vec<T> {
        cumulative(&self.samples, self.dt, |x| x)
    }
}

pub(crate) fn from_usize<T: Real>(i: usize) -> T {
    T::from_usize(i).expect("index representable as float")
}

pub(crate) fn cumulative<T: Real, F: Fn(T) -> T>(samples: &[T], dt: T, map: F) -> Vec<T> {
    let mut out = Vec::with_capacity(samples.len() + 1);
    let mut acc = T::zero();
    out.push(acc);
    for &x in samples {
        acc = acc + map(x) * dt;
        out.push(acc);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Sod,
    If,
}

/// What the integrate-and-fire accumulator does after firing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IfMode {
    /// Subtract the threshold and keep the residual.
    #[default]
    Carry,
    /// Drop the residual. Loses the bounded tracking error; comparison only.
    Reset,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig<T> {
    pub scheme: Scheme,
    pub theta: T,
    pub if_mode: IfMode,
}

impl<T: Real> SamplerConfig<T> {
    pub fn new(scheme: Scheme, theta: T) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self {
            scheme,
            theta,
            if_mode: IfMode::Carry,
        })
    }

    pub fn with_if_mode(mut self, mode: IfMode) -> Self {
        self.if_mode = mode;
        self
    }

    pub fn encode(&self, f: &Signal<T>) -> Result<EventSequence> {
        match self.scheme {
            Scheme::Sod => sod_encode(f, self.theta),
            Scheme::If => if_encode_with(f, self.theta, self.if_mode),
        }
    }
}

fn check_theta<T: Real>(theta: T) -> Result<()> {
    if theta.is_finite() && theta > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidThreshold)
    }
}

fn push_events(out: &mut EventSequence, time: f64, value: i64, count: usize) {
    for _ in 0..count {
        out.push(time, value)
            .expect("encoder emits events in time order");
    }
}

/// Send-on-Delta: an event whenever the signal leaves the band of width
/// `theta` around the reference level, which starts at the first sample.
pub fn sod_encode<T: Real>(f: &Signal<T>, theta: T) -> Result<EventSequence> {
    check_theta(theta)?;
    let mut out = EventSequence::empty();
    let mut level = f.samples[0];
    for (i, &x) in f.samples.iter().enumerate().skip(1) {
        let time = f.time(i).to_f64_lossy();
        let mut ups = 0;
        while x - level >= theta {
            level = level + theta;
            ups += 1;
        }
        let mut downs = 0;
        while x - level <= -theta {
            level = level - theta;
            downs += 1;
        }
        push_events(&mut out, time, 1, ups);
        push_events(&mut out, time, -1, downs);
    }
    Ok(out)
}

/// Integrate-and-Fire with residual carry.
pub fn if_encode<T: Real>(f: &Signal<T>, theta: T) -> Result<EventSequence> {
    if_encode_with(f, theta, IfMode::Carry)
}

pub fn if_encode_with<T: Real>(f: &Signal<T>, theta: T, mode: IfMode) -> Result<EventSequence> {
    check_theta(theta)?;
    let mut out = EventSequence::empty();
    let mut acc = T::zero();
    for (i, &x) in f.samples.iter().enumerate() {
        let time = f.time(i).to_f64_lossy();
        acc = acc + x * f.dt;
        let mut ups = 0;
        while acc >= theta {
            acc = acc - theta;
            ups += 1;
        }
        let mut downs = 0;
        while acc <= -theta {
            acc = acc + theta;
            downs += 1;
        }
        if mode == IfMode::Reset && ups + downs > 0 {
            acc = T::zero();
        }
        push_events(&mut out, time, 1, ups);
        push_events(&mut out, time, -1, downs);
    }
    Ok(out)
}

/// `max(samples) - min(samples)`, the input metric for Send-on-Delta.
pub fn range_seminorm<T: Real>(f: &Signal<T>) -> T {
    let (lo, hi) = f
        .samples
        .iter()
        .fold((f.samples[0], f.samples[0]), |(lo, hi), &x| {
            (lo.min_of(x), hi.max_of(x))
        });
    hi - lo
}

/// `sup |int_a^b f|` as the range of the cumulative integral.
pub fn integral_discrepancy<T: Real>(f: &Signal<T>) -> T {
    let cum = f.cumulative_integral();
    let (lo, hi) = cum.iter().fold((T::zero(), T::zero()), |(lo, hi), &x| {
        (lo.min_of(x), hi.max_of(x))
    });
    hi - lo
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiIsometryReport<T> {
    pub d_input: T,
    pub d_output: T,
    #[serde(rename = "A")]
    pub a: T,
    #[serde(rename = "B")]
    pub b: T,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// Distance to the nearer bound; negative when a bound is violated.
    pub margin: T,
}

impl<T: Real> QuasiIsometryReport<T> {
    fn evaluate(d_input: T, d_output: T, a: T, b: T, tol: T) -> Self {
        let lower = d_input / a - b;
        let upper = a * d_input + b;
        Self {
            d_input,
            d_output,
            a,
            b,
            lower_ok: d_output >= lower - tol,
            upper_ok: d_output <= upper + tol,
            margin: (d_output - lower).min_of(upper - d_output),
        }
    }

    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// Input distance matching the scheme: range for SOD, integral discrepancy
/// for IF.
pub fn input_distance<T: Real>(scheme: Scheme, f: &Signal<T>, g: &Signal<T>) -> Result<T> {
    let h = f.sub(g)?;
    Ok(match scheme {
        Scheme::Sod => range_seminorm(&h),
        Scheme::If => integral_discrepancy(&h),
    })
}

/// `theta * ||encode(f) - encode(g)||_D`.
pub fn output_distance<T: Real>(cfg: &SamplerConfig<T>, f: &Signal<T>, g: &Signal<T>) -> Result<T> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    let diff = difference(&cfg.encode(f)?, &cfg.encode(g)?);
    let count = T::from_i64(event_discrepancy(&diff)).ok_or(Error::InvalidThreshold)?;
    Ok(cfg.theta * count)
}

/// Checks `d_in/A - B <= d_out <= A*d_in + B` with `A = 1`, `B = 4*theta`.
pub fn quasi_isometry_check<T: Real>(
    f: &Signal<T>,
    g: &Signal<T>,
    cfg: &SamplerConfig<T>,
) -> Result<QuasiIsometryReport<T>> {
    quasi_isometry_check_with_tol(f, g, cfg, T::default_tolerance())
}

pub fn quasi_isometry_check_with_tol<T: Real>(
    f: &Signal<T>,
    g: &Signal<T>,
    cfg: &SamplerConfig<T>,
    tol: T,
) -> Result<QuasiIsometryReport<T>> {
    let d_input = input_distance(cfg.scheme, f, g)?;
    let d_output = output_distance(cfg, f, g)?;
    let four = T::from_u8(4).expect("small constant");
    Ok(QuasiIsometryReport::evaluate(
        d_input,
        d_output,
        T::one(),
        four * cfg.theta,
        tol,
    ))
}

/// Largest `n` accepted by [`sod_hypercube_image`].
pub const HYPERCUBE_MAX_DIM: usize = 12;

/// SOD images (threshold 1) of all vertices of `{0,1}^n`.
///
/// Each image is the event value emitted at samples `2..=n`, with 0 where no
/// event fires, so every image has length `n - 1`.
pub fn sod_hypercube_image(n: usize) -> Result<BTreeSet<Vec<i64>>> {
    if n > HYPERCUBE_MAX_DIM {
        return Err(Error::TooLarge {
            n,
            max: HYPERCUBE_MAX_DIM,
        });
    }
    if n == 0 {
        return Err(Error::TooFewSamples { need: 1, got: 0 });
    }
    let mut images = BTreeSet::new();
    for code in 0u32..(1 << n) {
        let samples: Vec<f64> = (0..n).map(|i| f64::from((code >> i) & 1)).collect();
        let signal = Signal::new(0.0, 1.0, samples)?;
        let events = sod_encode(&signal, 1.0)?;
        let mut image = vec![0i64; n - 1];
        for e in events.events() {
            // sample i sits at time i; position i-1 in the image
            let slot = e.time as usize - 1;
            image[slot] += e.value;
        }
        images.insert(image);
    }
    Ok(images)
}
