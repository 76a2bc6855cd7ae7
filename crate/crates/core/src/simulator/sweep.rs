use serde::{Deserialize, Serialize};
use statrs::statistics::{Data, OrderStatistics};

use crate::error::SimError;

use super::{run_trials, SimConfig, TrialRecord, Window};

/// Median and quartiles of the trial maxima at one sequence length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub median_eta: f64,
    pub q1: f64,
    pub q3: f64,
}

pub fn median_eta(records: &[TrialRecord]) -> f64 {
    Data::new(records.iter().map(|r| r.eta).collect::<Vec<_>>()).median()
}

/// Repeats `base` at every `n` in `n_grid` with the window rescaled to the
/// natural-log scale `C ln n`: `k = ⌊C ln n⌋` for fixed windows, mean
/// `p = C ln n` (unfloored) for random ones.
pub fn convergence_sweep(base: &SimConfig, n_grid: &[usize], big_c: f64) -> Result<Vec<SweepRow>, SimError> {
    if !(big_c > 0.0) || !big_c.is_finite() {
        return Err(SimError::Config(format!("C must be positive, got {big_c}")));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SimError::Config("n grid must be strictly increasing".into()));
    }
    n_grid
        .iter()
        .map(|&n| {
            let scale = big_c * (n as f64).ln();
            let window = match &base.window {
                Window::Fixed { .. } => Window::Fixed {
                    k: (scale.floor() as usize).max(1),
                },
                Window::Random(w) => Window::Random(w.with_p(scale)?),
            };
            let cfg = SimConfig {
                n,
                window,
                ..base.clone()
            };
            let records = run_trials(&cfg)?;
            let mut data = Data::new(records.iter().map(|r| r.eta).collect::<Vec<_>>());
            Ok(SweepRow {
                n,
                median_eta: data.median(),
                q1: data.lower_quartile(),
                q3: data.upper_quartile(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate_engine::{IncrementLaw, WindowLaw};

    #[test]
    fn degenerate_law_is_flat() {
        let base = SimConfig::classical(10, 1, IncrementLaw::degenerate(1.0).unwrap(), 4, 3);
        let rows = convergence_sweep(&base, &[100, 1000, 5000], 2.0).unwrap();
        assert!(rows.iter().all(|r| r.median_eta == 1.0 && r.q1 == 1.0 && r.q3 == 1.0));
    }

    #[test]
    fn stochastic_window_is_rescaled() {
        let base = SimConfig::stochastic(
            10,
            WindowLaw::deterministic(1.0, 1.0).unwrap(),
            IncrementLaw::degenerate(1.0).unwrap(),
            4,
            2,
        );
        let rows = convergence_sweep(&base, &[1000], 1.0).unwrap();
        // λ ≡ round(ln 1000) = 7 against p = ln 1000
        let expect = 7.0 / 1000f64.ln();
        assert!((rows[0].median_eta - expect).abs() < 1e-12);
    }

    #[test]
    fn rejects_unsorted_grid() {
        let base = SimConfig::classical(10, 1, IncrementLaw::BernoulliPM1, 4, 3);
        assert!(convergence_sweep(&base, &[100, 10], 2.0).is_err());
        assert!(convergence_sweep(&base, &[100], 0.0).is_err());
    }

    #[test]
    fn quartiles_bracket_median() {
        let base = SimConfig::classical(10, 1, IncrementLaw::BernoulliPM1, 8, 9);
        for r in convergence_sweep(&base, &[1000, 10_000], 1.5).unwrap() {
            assert!(r.q1 <= r.median_eta && r.median_eta <= r.q3);
        }
    }
}
