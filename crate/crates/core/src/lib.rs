//! Erdős–Rényi limit constants for maxima of partial sums.
//!
//! The crate covers three layers:
//!
//! * [`rate_engine`]: cumulant generating functions of the increment and
//!   window laws, numeric Legendre transforms and the closed-form rate
//!   functions built from them.
//! * [`limit_solver`]: the classical constant `α(C)` (fixed windows of
//!   length `C log n`) and the stochastic constant `α̃(C)` (Poisson or other
//!   random window lengths with mean `C log n`), found by bisection over a
//!   nested one-dimensional minimization.
//! * [`simulator`] and [`spectral`]: reproducible Monte Carlo checks of the
//!   constants, and the sparse random matrix experiment in which the squared
//!   spectral norm is bounded below by the maximal row statistic.
//!
//! All internal computation is in nats. The Bernoulli "bits" constant `c`
//! relates to the natural constant through [`c_to_big_c`].

pub mod error;
pub mod exec;
pub mod limit_solver;
pub mod optimize;
pub mod rate_engine;
pub mod simulator;
pub mod spectral;

pub use error::{RateError, SimError, SolveError, SpectralError};
pub use exec::ExecMode;
pub use limit_solver::{SolveResult, SolverOptions};
pub use rate_engine::{IncrementLaw, Interval, WindowLaw};

/// Converts the base-2 Bernoulli constant `c` into the natural-log constant
/// `C`, so that windows of length `C ln n` equal `c log₂ n`.
pub fn c_to_big_c(c: f64) -> f64 {
    c / std::f64::consts::LN_2
}

/// Inverse of [`c_to_big_c`].
pub fn big_c_to_c(big_c: f64) -> f64 {
    big_c * std::f64::consts::LN_2
}
