//! Sparse weighted random matrices: spectral norm versus the largest row
//! statistic.
//!
//! For a symmetric `Ŵ`, `‖Ŵ‖² ≥ max_i ‖Ŵ e_i‖² = max_i T_i`, so every sample
//! gives a deterministic check of the norm computation against the row sums.

mod power;
mod sample;

use serde::{Deserialize, Serialize};
use statrs::statistics::{Data, OrderStatistics};

use crate::error::{SolveError, SpectralError};
use crate::exec::{try_map_indexed, ExecMode};
use crate::limit_solver::{stochastic_alpha, SolveResult, SolverOptions};
use crate::rate_engine::WindowLaw;
use crate::simulator::rng::trial_seed;

pub use power::{spectral_norm, NormEstimate, PowerOptions};
pub use sample::{SparseSymmetricSample, WeightLaw};

/// Slack allowed in `‖Ŵ‖² ≥ H` for eigensolver error.
pub const LOWER_BOUND_SLACK: f64 = 1e-6;

/// `(H, Ĥ)`: the largest full row sum `T_i = (1/p) Σ_j a_ij w_ij²` and the
/// largest upper-triangle row sum `T̂_i`, which only counts `j ≥ i`.
pub fn row_statistics(sample: &SparseSymmetricSample) -> (f64, f64) {
    let mut h: f64 = 0.0;
    let mut h_hat: f64 = 0.0;
    for i in 0..sample.n() {
        let (mut t, mut t_hat) = (0.0, 0.0);
        for (j, w) in sample.row(i) {
            let sq = w * w;
            t += sq;
            if j >= i {
                t_hat += sq;
            }
        }
        h = h.max(t);
        h_hat = h_hat.max(t_hat);
    }
    (h / sample.p(), h_hat / sample.p())
}

/// Per-sample output row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub seed: u64,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: f64,
    pub norm: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "H_hat")]
    pub h_hat: f64,
    pub lower_bound_ok: bool,
    pub iterations: usize,
    pub residual: f64,
}

impl SpectralReport {
    pub fn from_sample(sample: &SparseSymmetricSample, opts: &PowerOptions) -> Result<Self, SpectralError> {
        let est = spectral_norm(sample, opts)?;
        let (h, h_hat) = row_statistics(sample);
        Ok(SpectralReport {
            seed: sample.seed(),
            n: sample.n(),
            p: sample.p(),
            norm: est.norm,
            h,
            h_hat,
            lower_bound_ok: est.norm * est.norm >= h - LOWER_BOUND_SLACK,
            iterations: est.iterations,
            residual: est.residual,
        })
    }
}

/// What to sample in a batch of spectral experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    pub n: usize,
    pub p: f64,
    pub weight_law: WeightLaw,
    pub seed: u64,
    pub trials: usize,
    pub include_diagonal: bool,
    pub power: PowerOptions,
    pub exec: ExecMode,
}

impl SpectralConfig {
    pub fn new(n: usize, p: f64, weight_law: WeightLaw, seed: u64, trials: usize) -> Self {
        SpectralConfig {
            n,
            p,
            weight_law,
            seed,
            trials,
            include_diagonal: false,
            power: PowerOptions::default(),
            exec: ExecMode::default(),
        }
    }
}

/// One report per trial; trial `t` samples with key `trial_seed(seed, t)`.
pub fn run_reports(config: &SpectralConfig) -> Result<Vec<SpectralReport>, SpectralError> {
    try_map_indexed(config.trials, config.exec, |t| {
        let key = trial_seed(config.seed, t as u64);
        let sample =
            SparseSymmetricSample::sample(config.n, config.p, config.weight_law, key, config.include_diagonal)?;
        SpectralReport::from_sample(&sample, &config.power)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `p = (ln N)^{1+γ}`.
    Dense,
    /// `p = (ln N)^{1−γ}`.
    Sparse,
}

impl Regime {
    pub fn density(self, n: usize, gamma: f64) -> f64 {
        let l = (n as f64).ln();
        match self {
            Regime::Dense => l.powf(1.0 + gamma),
            Regime::Sparse => l.powf(1.0 - gamma),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub gamma: f64,
    pub regime: Regime,
    pub p: f64,
    pub median_norm: f64,
}

/// Median norms at dimension `n` for both regimes and every `γ ∈ (0, 1)`.
/// The dense medians should sit near `2v` and the sparse ones should grow
/// with `n`.
pub fn regime_sweep(
    n: usize,
    gammas: &[f64],
    weight_law: WeightLaw,
    trials: usize,
    seed: u64,
    exec: ExecMode,
) -> Result<Vec<RegimeRow>, SpectralError> {
    let mut rows = Vec::with_capacity(2 * gammas.len());
    for &gamma in gammas {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(SpectralError::Dimension { n, p: f64::NAN });
        }
        for regime in [Regime::Dense, Regime::Sparse] {
            let p = regime.density(n, gamma);
            let cfg = SpectralConfig {
                exec,
                ..SpectralConfig::new(n, p, weight_law, seed, trials)
            };
            let norms: Vec<f64> = run_reports(&cfg)?.iter().map(|r| r.norm).collect();
            rows.push(RegimeRow {
                n,
                gamma,
                regime,
                p,
                median_norm: Data::new(norms).median(),
            });
        }
    }
    Ok(rows)
}

/// The stochastic constant for the squared weights with Poisson windows,
/// which bounds `lim H(N, C ln N)` from above.
pub fn alpha_hat(weight_law: &WeightLaw, big_c: f64, opts: &SolverOptions) -> Result<SolveResult, SolveError> {
    let window = WindowLaw::poisson(1.0)?;
    stochastic_alpha(&weight_law.squared_increment_law(), &window, big_c, opts)
}
