//! Weyl's discrepancy norm for event sequences produced by threshold-based
//! sampling.
//!
//! * [`norms`]: discrepancy, Alexiewicz, variation and p-norms of sequences.
//! * [`events`]: event sequences, their norm and the induced metric.
//! * [`sampling`]: Send-on-Delta and Integrate-and-Fire encoders and the
//!   quasi-isometry check.
//! * [`decomposition`]: Jordan-type decompositions and range functions.
//! * [`duality`]: dual norms and the monotonicity measure.
//! * [`analysis`]: misalignment profiles and the discrepancy/variation
//!   inequality.
//! * [`cli`]: the `discnorm` command-line front-end.
//!
//! Combinatorial code is generic over [`Scalar`], so integer and rational
//! inputs are evaluated exactly. Signal processing is generic over [`Real`].

pub mod analysis;
pub mod cli;
pub mod decomposition;
pub mod duality;
pub mod error;
pub mod events;
pub mod norms;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use events::{Event, EventSequence};
pub use norms::{NormKind, SequenceD};
pub use sampling::{IfMode, SamplerConfig, Scheme, Signal};
pub use scalar::{Field, Real, Scalar};

pub use num_rational::Rational64;

/// Real-valued sequence.
pub type Sequence = SequenceD<f64>;
/// Integer sequence, evaluated exactly.
pub type IntSequence = SequenceD<i64>;
/// Rational sequence, evaluated exactly.
pub type RationalSequence = SequenceD<Rational64>;

pub type Signal64 = Signal<f64>;
pub type Signal32 = Signal<f32>;

pub type Weights = duality::FunctionalWeights<f64>;
pub type RationalWeights = duality::FunctionalWeights<Rational64>;

pub type Jordan = decomposition::DiscreteJordan<f64>;
pub type RationalJordan = decomposition::DiscreteJordan<Rational64>;
pub type ContinuousJordan = decomposition::ContinuousJordan<f64>;

pub type DualNormReport = duality::DualNormReport<f64>;
pub type QuasiIsometryReport = sampling::QuasiIsometryReport<f64>;
pub type HeisenbergReport = analysis::HeisenbergReport<i64>;
pub type MisalignmentProfile = analysis::MisalignmentProfile<f64>;
