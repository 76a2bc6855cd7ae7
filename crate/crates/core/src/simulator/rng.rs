//! Random streams for the Monte Carlo experiments.
//!
//! Every trial derives its own 64-bit key from `(seed, trial)` with the
//! SplitMix64 finalizer, and every use within the trial (increments, window
//! lengths, matrix edges, …) reads a separate ChaCha8 stream keyed by that
//! value. ChaCha is counter based, so streams never overlap and results do
//! not depend on which thread runs the trial.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::SimError;
use crate::rate_engine::{IncrementLaw, WindowLaw};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Increments = 1,
    Windows = 2,
    Edges = 3,
    Weights = 4,
    StartVector = 5,
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Key of trial `trial` under the run seed `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed ^ splitmix64(trial))
}

pub fn stream(key: u64, purpose: Purpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(purpose as u64);
    rng
}

/// Draws `n` increments.
pub fn sample_increments<R: Rng>(law: &IncrementLaw, rng: &mut R, n: usize) -> Result<Vec<f64>, SimError> {
    let out = match law {
        IncrementLaw::BernoulliPM1 => {
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let word = rng.next_u64();
                let take = (n - out.len()).min(64);
                out.extend((0..take).map(|b| if word >> b & 1 == 1 { 1.0 } else { -1.0 }));
            }
            out
        }
        IncrementLaw::Gaussian { variance } => {
            let s = variance.sqrt();
            (0..n)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(rng);
                    s * z
                })
                .collect()
        }
        IncrementLaw::SquaredGaussianWeight { weight_variance } => {
            let s = weight_variance.sqrt();
            (0..n)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(rng);
                    (s * z).powi(2)
                })
                .collect()
        }
        IncrementLaw::Degenerate { value } => vec![*value; n],
        IncrementLaw::Tabulated(_) => {
            return Err(SimError::Config(
                "a tabulated CGF does not determine a sampler".into(),
            ))
        }
    };
    Ok(out)
}

/// Draws `n` window lengths, failing if any exceeds `cap`.
pub fn sample_windows<R: Rng>(wlaw: &WindowLaw, rng: &mut R, n: usize, cap: u64) -> Result<Vec<u64>, SimError> {
    let out: Vec<u64> = match wlaw {
        WindowLaw::Poisson { p } => {
            let d = Poisson::new(*p).map_err(|e| SimError::Config(e.to_string()))?;
            (0..n).map(|_| d.sample(rng) as u64).collect()
        }
        WindowLaw::Deterministic { k, .. } => vec![k.round() as u64; n],
        WindowLaw::BoundedSupport(b) => (0..n).map(|_| b.quantile(rng.random::<f64>())).collect(),
    };
    if let Some(&drawn) = out.iter().find(|&&l| l > cap) {
        return Err(SimError::Overflow { drawn, cap });
    }
    Ok(out)
}
