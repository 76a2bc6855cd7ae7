//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::LN_2;
use std::process::Command;
use std::time::Instant;

use erlimit::limit_solver::{
    classical_alpha, classical_alpha_bernoulli, stochastic_alpha, stochastic_alpha_bernoulli,
};
use erlimit::rate_engine::{cramer_d, entropy_h, legendre, poisson_rate, BoundedWindow};
use erlimit::simulator::rng::{sample_increments, sample_windows, splitmix64, stream, Purpose};
use erlimit::simulator::{
    binomial_tail_bounds, brute_force_eta, convergence_sweep, BruteWindows, SimConfig,
    WindowConvention, DEFAULT_LAMBDA_CAP,
};
use erlimit::spectral::{
    regime_sweep, run_reports, spectral_norm, PowerOptions, Regime, SparseSymmetricSample, SpectralConfig,
    WeightLaw,
};
use erlimit::{c_to_big_c, ExecMode, IncrementLaw, Interval, SolverOptions, WindowLaw};
use nalgebra::DMatrix;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn classical_exactness() -> Outcome {
    let start = Instant::now();
    let one = classical_alpha_bernoulli(1.0, &opts()).map_err(err)?.alpha;
    let half = classical_alpha_bernoulli(0.5, &opts()).map_err(err)?.alpha;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    check(
        (one - 1.0).abs() <= 1e-9 && half == 1.0 && ms < 1.0,
        format!("alpha(1) = {one}, alpha(0.5) = {half}, {ms:.3} ms"),
    )
}

fn rate_oracles() -> Outcome {
    let start = Instant::now();
    let poisson = WindowLaw::poisson(1.0).map_err(err)?;
    let whole_line = Interval::new(0.0, f64::INFINITY);
    let mut worst_f: f64 = 0.0;
    for i in 1..=100 {
        let y = i as f64 / 10.0;
        let numeric = legendre(&poisson, y, whole_line, 1e-12).map_err(err)?;
        worst_f = worst_f.max((numeric - poisson_rate(y)).abs());
    }
    let mut worst_d: f64 = 0.0;
    for i in -99..=99 {
        let a = i as f64 / 100.0;
        let numeric = cramer_d(&IncrementLaw::BernoulliPM1, a, 1e-12).map_err(err)?;
        let closed = LN_2 * (1.0 - entropy_h((1.0 + a) / 2.0).map_err(err)?);
        worst_d = worst_d.max((numeric - closed).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst_f <= 1e-8 && worst_d <= 1e-8 && secs < 1.0,
        format!("max |f error| = {worst_f:.2e}, max |D error| = {worst_d:.2e}, {secs:.3} s"),
    )
}

fn degenerate_window() -> Outcome {
    let start = Instant::now();
    let window = WindowLaw::deterministic(1.0, 1.0).map_err(err)?;
    let law = IncrementLaw::BernoulliPM1;
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let big_c = 1.0 + 49.0 * i as f64 / 9.0;
        let a = classical_alpha(&law, big_c, &opts()).map_err(err)?.alpha;
        let s = stochastic_alpha(&law, &window, big_c, &opts()).map_err(err)?.alpha;
        worst = worst.max((a - s).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst <= 2e-8 && secs < 1.0,
        format!("max |alpha~ - alpha| = {worst:.2e} over C in [1, 50], {secs:.3} s"),
    )
}

fn dominance() -> Outcome {
    let start = Instant::now();
    let poisson = WindowLaw::poisson(1.0).map_err(err)?;
    let tilde = |c: f64| stochastic_alpha_bernoulli(&poisson, c, &opts()).map(|r| r.alpha).map_err(err);
    let mut dominated = true;
    for c in [1.0, 2.0, 4.0, 8.0] {
        let a = classical_alpha_bernoulli(c, &opts()).map_err(err)?.alpha;
        dominated &= tilde(c)? > a;
    }
    let (t01, t1, t8, tbig) = (tilde(0.1)?, tilde(1.0)?, tilde(8.0)?, tilde(1e6)?);
    let secs = start.elapsed().as_secs_f64();
    check(
        dominated && t01 > t1 && t1 > t8 && tbig <= 5e-3 && secs < 5.0,
        format!(
            "alpha~ > alpha on {{1,2,4,8}}: {dominated}; alpha~(0.1) = {t01:.6}, alpha~(1) = {t1:.6}, \
             alpha~(8) = {t8:.6}, alpha~(1e6) = {tbig:.2e}, {secs:.3} s"
        ),
    )
}

fn bounded_support() -> Outcome {
    let start = Instant::now();
    let w = WindowLaw::BoundedSupport(BoundedWindow::truncated_poisson(30.0, 0.5, 2.0).map_err(err)?);
    let mut values = Vec::new();
    for c in [0.1, 0.01] {
        values.push(stochastic_alpha_bernoulli(&w, c, &opts()).map_err(err)?.alpha);
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        values.iter().all(|&a| a <= 2.0) && secs < 5.0,
        format!("alpha~(0.1) = {:.6}, alpha~(0.01) = {:.6}, {secs:.3} s", values[0], values[1]),
    )
}

fn simulation_convergence() -> Outcome {
    let start = Instant::now();
    let c = 2.0;
    let big_c = c_to_big_c(c);
    let alpha = classical_alpha_bernoulli(c, &opts()).map_err(err)?.alpha;
    let poisson = WindowLaw::poisson(1.0).map_err(err)?;
    let alpha_tilde = stochastic_alpha_bernoulli(&poisson, c, &opts()).map_err(err)?.alpha;
    let grid = [1_000, 1_000_000];
    let classical = SimConfig::classical(1, 1, IncrementLaw::BernoulliPM1, 1, 16);
    let stochastic = SimConfig::stochastic(1, poisson, IncrementLaw::BernoulliPM1, 1, 16);
    let rc = convergence_sweep(&classical, &grid, big_c).map_err(err)?;
    let rs = convergence_sweep(&stochastic, &grid, big_c).map_err(err)?;
    let gc = [(rc[0].median_eta - alpha).abs(), (rc[1].median_eta - alpha).abs()];
    let gs = [(rs[0].median_eta - alpha_tilde).abs(), (rs[1].median_eta - alpha_tilde).abs()];
    let secs = start.elapsed().as_secs_f64();
    check(
        gc[1] <= 0.1 && gs[1] <= 0.15 && gc[1] < gc[0] && gs[1] < gs[0] && secs < 60.0,
        format!(
            "classical gap {:.4} -> {:.4} (alpha = {alpha:.6}), stochastic gap {:.4} -> {:.4} \
             (alpha~ = {alpha_tilde:.6}), {secs:.1} s",
            gc[0], gc[1], gs[0], gs[1]
        ),
    )
}

/// Random configurations on ±1 streams, whose window sums are exact
/// integers in floating point.
fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    for i in 0..1000u64 {
        let h = splitmix64(0xACCE_55 ^ i);
        let n = 1 + (h % 200) as usize;
        let conv = if h >> 40 & 1 == 0 {
            WindowConvention::KTerms
        } else {
            WindowConvention::KPlus1Terms
        };
        let key = splitmix64(h);
        let rec = if i % 2 == 0 {
            let k = 1 + ((h >> 8) as usize % n);
            let cfg = SimConfig::classical(n, k, IncrementLaw::BernoulliPM1, 0, 1).with_convention(conv);
            let rec = erlimit::simulator::classical_eta(&cfg, key).map_err(err)?;
            let xs = sample_increments(&IncrementLaw::BernoulliPM1, &mut stream(key, Purpose::Increments), n - k + conv.terms(k))
                .map_err(err)?;
            let brute = brute_force_eta(&xs, BruteWindows::Fixed(k), 0.0, conv).map_err(err)?;
            (rec, brute)
        } else {
            let p = 0.5 + (h >> 16) as f64 % 1000.0 / 50.0;
            let w = WindowLaw::poisson(p).map_err(err)?;
            let cfg = SimConfig::stochastic(n, w.clone(), IncrementLaw::BernoulliPM1, 0, 1).with_convention(conv);
            let rec = erlimit::simulator::stochastic_eta(&cfg, key).map_err(err)?;
            let ws = sample_windows(&w, &mut stream(key, Purpose::Windows), n, DEFAULT_LAMBDA_CAP).map_err(err)?;
            let longest = *ws.iter().max().unwrap() as usize;
            let xs = sample_increments(&IncrementLaw::BernoulliPM1, &mut stream(key, Purpose::Increments), n - 1 + conv.terms(longest))
                .map_err(err)?;
            let brute = brute_force_eta(&xs, BruteWindows::PerIndex(&ws), p, conv).map_err(err)?;
            (rec, brute)
        };
        let (rec, brute) = rec;
        if rec.eta != brute.eta || rec.argmax_index != brute.argmax + 1 {
            mismatches += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        mismatches == 0 && secs < 10.0,
        format!("{mismatches} mismatches in 1000 configs, {secs:.2} s"),
    )
}

fn tail_sandwich() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for l in [10u64, 100, 1000, 10_000] {
        for i in 1..=9 {
            let x = i as f64 / 10.0;
            let b = binomial_tail_bounds(l, x * l as f64).map_err(err)?;
            if !b.holds() {
                failures.push(format!("(l = {l}, x = {x})"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        failures.is_empty() && secs < 5.0,
        format!("36 cases, violations: [{}], {secs:.3} s", failures.join(", ")),
    )
}

fn dense_norm(sample: &SparseSymmetricSample) -> f64 {
    let n = sample.n();
    let rows = sample.to_dense();
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    m.symmetric_eigenvalues().iter().fold(0.0, |acc: f64, l| acc.max(l.abs()))
}

fn spectral_lower_bound() -> Outcome {
    let start = Instant::now();
    let n = 1000;
    let mut violations = 0;
    let mut worst_margin = f64::INFINITY;
    for law in [WeightLaw::Gaussian { v: 1.0 }, WeightLaw::BernoulliPM1 { v: 1.0 }] {
        let cfg = SpectralConfig::new(n, (n as f64).ln(), law, 9, 100);
        for r in run_reports(&cfg).map_err(err)? {
            let margin = r.norm * r.norm - r.h;
            worst_margin = worst_margin.min(margin);
            if margin < -1e-6 {
                violations += 1;
            }
        }
    }
    let mut worst_oracle: f64 = 0.0;
    for (t, (size, p)) in [(200usize, 5.3), (200, 40.0), (100, 100.0), (150, 2.5)].into_iter().enumerate() {
        for law in [WeightLaw::Gaussian { v: 1.0 }, WeightLaw::BernoulliPM1 { v: 1.0 }] {
            let s = SparseSymmetricSample::sample(size, p, law, splitmix64(t as u64), false).map_err(err)?;
            let est = spectral_norm(&s, &PowerOptions::default()).map_err(err)?;
            worst_oracle = worst_oracle.max((est.norm - dense_norm(&s)).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        violations == 0 && worst_oracle <= 1e-6 && secs < 120.0,
        format!(
            "{violations} violations in 200 samples (min norm^2 - H = {worst_margin:.3e}), \
             max |power - eigensolve| = {worst_oracle:.2e}, {secs:.1} s"
        ),
    )
}

fn regime() -> Outcome {
    let start = Instant::now();
    let trials = 40;
    let mut ok = true;
    let mut parts = Vec::new();
    for law in [WeightLaw::BernoulliPM1 { v: 1.0 }, WeightLaw::Gaussian { v: 1.0 }] {
        let small = regime_sweep(500, &[0.5], law, trials, 3, ExecMode::Parallel).map_err(err)?;
        let large = regime_sweep(2000, &[0.5], law, trials, 3, ExecMode::Parallel).map_err(err)?;
        let pick = |rows: &[erlimit::spectral::RegimeRow], r: Regime| {
            rows.iter().find(|x| x.regime == r).unwrap().median_norm
        };
        let two_v = 2.0 * law.v();
        let (d500, d2000) = (pick(&small, Regime::Dense), pick(&large, Regime::Dense));
        let (s500, s2000) = (pick(&small, Regime::Sparse), pick(&large, Regime::Sparse));
        ok &= (d2000 - two_v).abs() < (d500 - two_v).abs() && s2000 > s500;
        let name = match law {
            WeightLaw::BernoulliPM1 { .. } => "pm1",
            WeightLaw::Gaussian { .. } => "gaussian",
        };
        parts.push(format!("{name}: dense {d500:.4} -> {d2000:.4}, sparse {s500:.4} -> {s2000:.4}"));
    }
    let secs = start.elapsed().as_secs_f64();
    check(ok && secs < 300.0, format!("{}, {secs:.1} s", parts.join("; ")))
}

fn reproducibility() -> Outcome {
    let dir = std::env::temp_dir().join(format!("erlimit-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;
    let commands: [&[&str]; 6] = [
        &["solve-classical", "--c", "3"],
        &["solve-stochastic", "--c", "2", "--window", "bounded"],
        &["compare", "--c-grid", "1,2,4,8", "--format", "json"],
        &["simulate", "--window", "poisson", "--c", "2", "--n", "100000", "--format", "json"],
        &["sweep", "--c", "2", "--n-grid", "1000,10000,100000"],
        &["spectral", "--N", "1000", "--weights", "gaussian", "--trials", "8"],
    ];
    let mut differing = Vec::new();
    for (i, args) in commands.iter().enumerate() {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.join(format!("{i}-{run}"));
            let status = Command::new(env!("CARGO_BIN_EXE_erlimit"))
                .args(*args)
                .args(["--no-timestamp", "--output"])
                .arg(&path)
                .status()
                .map_err(err)?;
            if !status.success() {
                return Err(format!("{args:?} exited with {status}"));
            }
            outputs.push(std::fs::read(&path).map_err(err)?);
        }
        if outputs[0] != outputs[1] {
            differing.push(args[0]);
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    check(
        differing.is_empty(),
        format!("{} commands re-run, differing: {differing:?}", commands.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("classical Bernoulli exactness", classical_exactness),
        ("rate-function oracle equivalence", rate_oracles),
        ("degenerate-window reduction", degenerate_window),
        ("dominance and divergence", dominance),
        ("bounded-support finiteness", bounded_support),
        ("simulation convergence", simulation_convergence),
        ("oracle equivalence at small scale", oracle_equivalence),
        ("tail sandwich", tail_sandwich),
        ("spectral lower bound", spectral_lower_bound),
        ("regime qualitative check", regime),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
