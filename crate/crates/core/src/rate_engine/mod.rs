//! Cumulant generating functions, Legendre transforms and rate functions.
//!
//! Rates take the value `+∞` outside their effective domain instead of
//! failing, so that variational objectives can compare them directly.

mod entropy;
mod increment;
mod legendre;
mod profile;
mod tabulated;
mod window;

use std::fmt;

pub use entropy::{entropy_h, g};
pub use increment::IncrementLaw;
pub use legendre::{legendre, Cgf, FnCgf, EXPANSION_LIMIT};
pub use profile::RateProfile;
pub use tabulated::TabulatedCgf;
pub use window::{poisson_rate, BoundedWindow, WindowLaw};

pub(crate) use entropy::bernoulli_rate_bits;

use crate::error::RateError;

/// Tolerance for inner one-dimensional optimizations.
pub const DEFAULT_INNER_TOL: f64 = 1e-10;

/// Closed interval with possibly infinite ends.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Membership with the upper end excluded when it is finite.
    pub fn contains_open_hi(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `log E e^{τξ}`.
pub fn cgf(law: &IncrementLaw, tau: f64) -> Result<f64, RateError> {
    law.cgf(tau)
}

/// `χ(t)` of the window law.
pub fn window_scaled_cgf(wlaw: &WindowLaw, t: f64) -> Result<f64, RateError> {
    wlaw.window_scaled_cgf(t)
}

/// Window rate `f(y)`.
pub fn rate_f(wlaw: &WindowLaw, y: f64) -> f64 {
    wlaw.rate(y)
}

/// Legendre transform `D(a)` of the increment CGF.
pub fn cramer_d(law: &IncrementLaw, a: f64, tol: f64) -> Result<f64, RateError> {
    law.cramer_d(a, tol)
}
