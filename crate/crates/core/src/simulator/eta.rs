//! Maximal window averages of a fixed stream.

use serde::{Deserialize, Serialize};

use crate::error::SimError;

/// How many increments a window of nominal length `k` sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowConvention {
    /// `ξ_i + … + ξ_{i+k−1}`.
    #[default]
    KTerms,
    /// `ξ_i + … + ξ_{i+k}`.
    KPlus1Terms,
}

impl WindowConvention {
    pub fn terms(self, k: usize) -> usize {
        match self {
            WindowConvention::KTerms => k,
            WindowConvention::KPlus1Terms => k + 1,
        }
    }
}

/// Maximum and its 0-based position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowMax {
    pub eta: f64,
    pub argmax: usize,
}

/// `max_i S_i(k) / k` by a sliding update, with `i` ranging over every window
/// that fits inside the stream. Ties keep the first position.
pub fn classical_from_stream(
    stream: &[f64],
    k: usize,
    convention: WindowConvention,
) -> Result<WindowMax, SimError> {
    if k == 0 {
        return Err(SimError::Config("window length k must be at least 1".into()));
    }
    let len = convention.terms(k);
    if len > stream.len() {
        return Err(SimError::Length {
            len: stream.len(),
            need: len,
        });
    }
    let mut sum = 0.0;
    for x in &stream[..len] {
        sum += x;
    }
    let (mut best, mut argmax) = (sum, 0);
    for i in 1..=stream.len() - len {
        sum = sum + stream[i + len - 1] - stream[i - 1];
        if sum > best {
            best = sum;
            argmax = i;
        }
    }
    Ok(WindowMax {
        eta: best / k as f64,
        argmax,
    })
}

/// `max_i S_i(λ_i) / p` over `i < windows.len()`, using prefix sums. The
/// stream must extend past the last index far enough for every window.
pub fn stochastic_from_stream(
    stream: &[f64],
    windows: &[u64],
    p: f64,
    convention: WindowConvention,
) -> Result<WindowMax, SimError> {
    check_stochastic(stream, windows, convention)?;
    let mut prefix = Vec::with_capacity(stream.len() + 1);
    let mut acc = 0.0;
    prefix.push(acc);
    for x in stream {
        acc += x;
        prefix.push(acc);
    }
    let mut best = f64::NEG_INFINITY;
    let mut argmax = 0;
    for (i, &lambda) in windows.iter().enumerate() {
        let len = convention.terms(lambda as usize);
        let s = prefix[i + len] - prefix[i];
        if s > best {
            best = s;
            argmax = i;
        }
    }
    Ok(WindowMax {
        eta: best / p,
        argmax,
    })
}

fn check_stochastic(stream: &[f64], windows: &[u64], convention: WindowConvention) -> Result<(), SimError> {
    if windows.is_empty() {
        return Err(SimError::Config("need at least one window".into()));
    }
    let need = windows
        .iter()
        .enumerate()
        .map(|(i, &l)| i + convention.terms(l as usize))
        .max()
        .unwrap();
    if need > stream.len() {
        return Err(SimError::Length {
            len: stream.len(),
            need,
        });
    }
    Ok(())
}

/// Window specification for [`brute_force_eta`].
#[derive(Debug, Clone, PartialEq)]
pub enum BruteWindows<'a> {
    /// Classical: every position with a fixed `k`, divided by `k`.
    Fixed(usize),
    /// Stochastic: one length per position, divided by `p`.
    PerIndex(&'a [u64]),
}

/// Direct double-loop evaluation of every window sum, summed left to right.
/// Test oracle for [`classical_from_stream`] and [`stochastic_from_stream`].
pub fn brute_force_eta(
    stream: &[f64],
    windows: BruteWindows<'_>,
    p: f64,
    convention: WindowConvention,
) -> Result<WindowMax, SimError> {
    let direct = |i: usize, len: usize| {
        let mut s = 0.0;
        for j in i..i + len {
            s += stream[j];
        }
        s
    };
    let mut best = f64::NEG_INFINITY;
    let mut argmax = 0;
    let divisor = match windows {
        BruteWindows::Fixed(k) => {
            if k == 0 {
                return Err(SimError::Config("window length k must be at least 1".into()));
            }
            let len = convention.terms(k);
            if len > stream.len() {
                return Err(SimError::Length {
                    len: stream.len(),
                    need: len,
                });
            }
            for i in 0..=stream.len() - len {
                let s = direct(i, len);
                if s > best {
                    best = s;
                    argmax = i;
                }
            }
            k as f64
        }
        BruteWindows::PerIndex(ws) => {
            check_stochastic(stream, ws, convention)?;
            for (i, &l) in ws.iter().enumerate() {
                let s = direct(i, convention.terms(l as usize));
                if s > best {
                    best = s;
                    argmax = i;
                }
            }
            p
        }
    };
    Ok(WindowMax {
        eta: best / divisor,
        argmax,
    })
}
