//! Monte Carlo maxima of window averages, fixed and random window lengths.

mod eta;
pub mod rng;
mod sweep;
mod tail;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::exec::{try_map_indexed, ExecMode};
use crate::rate_engine::{IncrementLaw, WindowLaw};

pub use eta::{
    brute_force_eta, classical_from_stream, stochastic_from_stream, BruteWindows, WindowConvention, WindowMax,
};
pub use sweep::{convergence_sweep, median_eta, SweepRow};
pub use tail::{binomial_tail_bounds, TailBounds, TAIL_LOWER_CONST, TAIL_UPPER_CONST};

use rng::{sample_increments, sample_windows, stream, trial_seed, Purpose};

/// Largest window length a stochastic trial may draw before giving up.
pub const DEFAULT_LAMBDA_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Window {
    /// Classical experiment with window length `k`.
    Fixed { k: usize },
    /// Random lengths `λ_i` drawn independently of the increments.
    Random(WindowLaw),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub window: Window,
    pub law: IncrementLaw,
    pub seed: u64,
    pub trials: usize,
    pub convention: WindowConvention,
    pub lambda_cap: u64,
    pub exec: ExecMode,
}

impl SimConfig {
    pub fn classical(n: usize, k: usize, law: IncrementLaw, seed: u64, trials: usize) -> Self {
        SimConfig {
            n,
            window: Window::Fixed { k },
            law,
            seed,
            trials,
            convention: WindowConvention::default(),
            lambda_cap: DEFAULT_LAMBDA_CAP,
            exec: ExecMode::default(),
        }
    }

    pub fn stochastic(n: usize, wlaw: WindowLaw, law: IncrementLaw, seed: u64, trials: usize) -> Self {
        SimConfig {
            window: Window::Random(wlaw),
            ..SimConfig::classical(n, 1, law, seed, trials)
        }
    }

    pub fn with_exec(mut self, exec: ExecMode) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_convention(mut self, convention: WindowConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.n == 0 {
            return Err(SimError::Config("n must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(SimError::Config("trials must be at least 1".into()));
        }
        if let Window::Fixed { k } = self.window {
            if k == 0 || k > self.n {
                return Err(SimError::Config(format!("need 1 <= k <= n, got k = {k}, n = {}", self.n)));
            }
        }
        Ok(())
    }
}

/// One simulated maximum. `seed` is the per-trial key, so a row can be
/// regenerated on its own; `argmax_index` is 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub n: usize,
    pub window_param: f64,
    pub eta: f64,
    pub argmax_index: usize,
    /// Longest drawn window; empty for classical trials.
    pub max_window: Option<u64>,
    pub wall_ms: f64,
}

/// One classical trial keyed by `key` (see [`rng::trial_seed`]).
pub fn classical_eta(config: &SimConfig, key: u64) -> Result<TrialRecord, SimError> {
    config.validate()?;
    let Window::Fixed { k } = config.window else {
        return Err(SimError::Config("classical_eta needs a fixed window".into()));
    };
    let start = Instant::now();
    let len = config.n - k + config.convention.terms(k);
    let xs = sample_increments(&config.law, &mut stream(key, Purpose::Increments), len)?;
    let m = classical_from_stream(&xs, k, config.convention)?;
    Ok(TrialRecord {
        seed: key,
        n: config.n,
        window_param: k as f64,
        eta: m.eta,
        argmax_index: m.argmax + 1,
        max_window: None,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// One stochastic trial keyed by `key`: draws `λ₁…λ_n`, then enough
/// increments for every window, so all `n` sums exist.
pub fn stochastic_eta(config: &SimConfig, key: u64) -> Result<TrialRecord, SimError> {
    config.validate()?;
    let Window::Random(wlaw) = &config.window else {
        return Err(SimError::Config("stochastic_eta needs a window law".into()));
    };
    let start = Instant::now();
    let windows = sample_windows(wlaw, &mut stream(key, Purpose::Windows), config.n, config.lambda_cap)?;
    let longest = windows.iter().copied().max().unwrap_or(0);
    let len = config.n - 1 + config.convention.terms(longest as usize);
    let xs = sample_increments(&config.law, &mut stream(key, Purpose::Increments), len)?;
    let p = wlaw.p();
    let m = stochastic_from_stream(&xs, &windows, p, config.convention)?;
    Ok(TrialRecord {
        seed: key,
        n: config.n,
        window_param: p,
        eta: m.eta,
        argmax_index: m.argmax + 1,
        max_window: Some(longest),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// All `config.trials` trials, in trial order. Trial `t` uses the key
/// `trial_seed(config.seed, t)`, so the records do not depend on `exec`.
pub fn run_trials(config: &SimConfig) -> Result<Vec<TrialRecord>, SimError> {
    config.validate()?;
    try_map_indexed(config.trials, config.exec, |t| {
        let key = trial_seed(config.seed, t as u64);
        match config.window {
            Window::Fixed { .. } => classical_eta(config, key),
            Window::Random(_) => stochastic_eta(config, key),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones() -> IncrementLaw {
        IncrementLaw::degenerate(1.0).unwrap()
    }

    #[test]
    fn all_ones_classical() {
        for (n, k) in [(1, 1), (50, 7), (1000, 1000)] {
            let r = run_trials(&SimConfig::classical(n, k, ones(), 3, 2)).unwrap();
            assert!(r.iter().all(|t| t.eta == 1.0));
        }
    }

    #[test]
    fn deterministic_half_window_all_ones() {
        let w = WindowLaw::deterministic(50.0, 50.0).unwrap();
        let r = run_trials(&SimConfig::stochastic(100, w, ones(), 1, 1)).unwrap();
        assert_eq!(r[0].eta, 1.0);
        assert_eq!(r[0].max_window, Some(50));
    }

    #[test]
    fn zero_windows_give_zero() {
        let w = WindowLaw::deterministic(0.0, 3.0).unwrap();
        let r = run_trials(&SimConfig::stochastic(40, w, IncrementLaw::BernoulliPM1, 9, 3)).unwrap();
        assert!(r.iter().all(|t| t.eta == 0.0));
    }

    #[test]
    fn invalid_configs() {
        let bad_k = SimConfig::classical(10, 11, ones(), 1, 1);
        assert!(matches!(run_trials(&bad_k), Err(SimError::Config(_))));
        let no_trials = SimConfig::classical(10, 2, ones(), 1, 0);
        assert!(run_trials(&no_trials).is_err());
        let w = WindowLaw::poisson(200.0).unwrap();
        let mut capped = SimConfig::stochastic(100, w, ones(), 1, 1);
        capped.lambda_cap = 100;
        assert!(matches!(run_trials(&capped), Err(SimError::Overflow { .. })));
    }

    #[test]
    fn records_ignore_exec_mode() {
        let w = WindowLaw::poisson(6.0).unwrap();
        let cfg = SimConfig::stochastic(2000, w, IncrementLaw::gaussian(1.0).unwrap(), 17, 6);
        let strip = |v: Vec<TrialRecord>| v.into_iter().map(|r| TrialRecord { wall_ms: 0.0, ..r }).collect::<Vec<_>>();
        let a = strip(run_trials(&cfg.clone().with_exec(ExecMode::Sequential)).unwrap());
        let b = strip(run_trials(&cfg.with_exec(ExecMode::Parallel)).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn bernoulli_eta_range_and_index() {
        let cfg = SimConfig::classical(500, 9, IncrementLaw::BernoulliPM1, 5, 20);
        for r in run_trials(&cfg).unwrap() {
            assert!((-1.0..=1.0).contains(&r.eta));
            assert!((1..=500 - 9 + 1).contains(&r.argmax_index));
        }
    }

    #[test]
    fn stochastic_eta_bounded_by_longest_window() {
        let w = WindowLaw::poisson(8.0).unwrap();
        let cfg = SimConfig::stochastic(3000, w, IncrementLaw::BernoulliPM1, 2, 8);
        for r in run_trials(&cfg).unwrap() {
            assert!(r.eta <= r.max_window.unwrap() as f64 / 8.0);
            assert!((1..=3000).contains(&r.argmax_index));
        }
    }

    #[test]
    fn plus_one_convention_draws_extra_term() {
        let cfg = SimConfig::classical(10, 10, ones(), 1, 1).with_convention(WindowConvention::KPlus1Terms);
        let r = run_trials(&cfg).unwrap();
        // k + 1 ones divided by k
        assert_eq!(r[0].eta, 1.1);
    }

    #[test]
    fn trial_matches_brute_force_on_same_stream() {
        let w = WindowLaw::poisson(4.0).unwrap();
        let cfg = SimConfig::stochastic(150, w.clone(), IncrementLaw::BernoulliPM1, 11, 1);
        let key = trial_seed(11, 0);
        let rec = stochastic_eta(&cfg, key).unwrap();
        let ws = sample_windows(&w, &mut stream(key, Purpose::Windows), 150, DEFAULT_LAMBDA_CAP).unwrap();
        let len = 149 + *ws.iter().max().unwrap() as usize;
        let xs = sample_increments(&IncrementLaw::BernoulliPM1, &mut stream(key, Purpose::Increments), len).unwrap();
        let brute = brute_force_eta(&xs, BruteWindows::PerIndex(&ws), 4.0, WindowConvention::KTerms).unwrap();
        assert_eq!(rec.eta, brute.eta);
        assert_eq!(rec.argmax_index, brute.argmax + 1);
    }
}
