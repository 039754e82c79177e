//! Analysis toolkit for the backoff process of a saturated single-cell
//! 802.11 network.
//!
//! The crate covers the chain from protocol parameters to the statistics
//! the backoff process exhibits at different time scales:
//!
//! - [`fpe`] solves the attempt-rate/collision-probability fixed point and
//!   derives the stage distribution and tail exponent;
//! - [`moments`] computes the per-packet backoff law Ω exactly (mean, CV,
//!   convolution density, fractional-moment classification);
//! - [`simulator`] generates sample paths, either slot-by-slot with real
//!   collisions or as superposed renewal processes driven by the analytic
//!   law;
//! - [`fairness`] evaluates inter-transmission probabilities in the
//!   Gaussian and heavy-tailed regimes, backed by α-stable and Telecom
//!   process numerics;
//! - [`estimators`] provides tail-index, wavelet logscale, Hurst, and
//!   Poissonness estimators to validate the limit claims on traces;
//! - [`synth`] generates reference processes (fGn, white noise, Poisson)
//!   used as estimator fixtures.
//!
//! All randomized routines take explicit seeds and are deterministic given
//! them. Everything is a pure function of its inputs and safe to call from
//! multiple threads.

pub mod error;
pub mod estimators;
pub mod fairness;
pub mod fpe;
pub mod moments;
pub mod params;
pub(crate) mod quad;
pub mod simulator;
pub mod synth;

pub use error::{Error, Result};
pub use params::{ProtocolParams, StageCount};
