use erlimit::limit_solver::{
    classical_alpha, classical_alpha_bernoulli, stochastic_alpha, stochastic_alpha_bernoulli,
};
use erlimit::simulator::{convergence_sweep, run_trials, SimConfig, TrialRecord, Window, DEFAULT_LAMBDA_CAP};
use erlimit::spectral::{regime_sweep, run_reports, PowerOptions, SpectralConfig};
use erlimit::{big_c_to_c, c_to_big_c, ExecMode, IncrementLaw, SolveResult, SolverOptions, WindowLaw};
use serde::Serialize;
use serde_json::json;

use crate::args::{Command, LawKind, WindowKind};
use crate::error::CliError;
use crate::output::emit;
use crate::settings::{
    self, constant, pick, require_constant, FileConfig, OutputChoice, WindowChoice, DEFAULT_SEED, DEFAULT_TRIALS,
};

#[derive(Debug, Serialize)]
struct SolveRow {
    c: f64,
    #[serde(rename = "C")]
    big_c: f64,
    alpha: f64,
    residual: f64,
    inner_minimizer: Option<f64>,
    iterations: usize,
    saturated: bool,
}

impl SolveRow {
    fn new(big_c: f64, r: SolveResult) -> Self {
        SolveRow {
            c: big_c_to_c(big_c),
            big_c,
            alpha: r.alpha,
            residual: r.residual,
            inner_minimizer: r.inner_minimizer,
            iterations: r.iterations,
            saturated: r.saturated,
        }
    }
}

#[derive(Debug, Serialize)]
struct CompareRow {
    c: f64,
    #[serde(rename = "C")]
    big_c: f64,
    alpha: f64,
    alpha_tilde: f64,
    dominates: bool,
}

fn exec(out: &OutputChoice) -> ExecMode {
    if out.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel
    }
}

fn solve_classical(kind: LawKind, law: &IncrementLaw, big_c: f64, opts: &SolverOptions) -> Result<SolveResult, CliError> {
    Ok(match kind {
        // the bits form is exact for ±1 steps, including the boundary c = 1
        LawKind::Bernoulli => classical_alpha_bernoulli(big_c_to_c(big_c), opts)?,
        _ => classical_alpha(law, big_c, opts)?,
    })
}

fn solve_stochastic(
    kind: LawKind,
    law: &IncrementLaw,
    wlaw: &WindowLaw,
    big_c: f64,
    opts: &SolverOptions,
) -> Result<SolveResult, CliError> {
    Ok(match kind {
        LawKind::Bernoulli => stochastic_alpha_bernoulli(wlaw, big_c_to_c(big_c), opts)?,
        _ => stochastic_alpha(law, wlaw, big_c, opts)?,
    })
}

fn law_json(kind: LawKind, law: &IncrementLaw) -> serde_json::Value {
    json!({ "law": kind, "mean": law.mean(), "variance": law.variance() })
}

fn window_json(w: &WindowChoice) -> serde_json::Value {
    json!({ "window": w.kind, "y_lo": w.y_lo, "y_hi": w.y_hi, "p_nominal": w.p_nominal })
}

fn zero_clock(records: Vec<TrialRecord>, out: &OutputChoice) -> Vec<TrialRecord> {
    if out.timestamp {
        return records;
    }
    records.into_iter().map(|r| TrialRecord { wall_ms: 0.0, ..r }).collect()
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::SolveClassical {
            law,
            constant: cst,
            solver,
            out,
        } => {
            let file = FileConfig::load(out.config.as_deref())?;
            let out = OutputChoice::resolve(&out, &file);
            let (kind, law) = settings::law(&law, &file)?;
            let big_c = require_constant(&cst, &file)?;
            let tol = settings::tolerance(solver.tol, &file)?;
            let r = solve_classical(kind, &law, big_c, &SolverOptions::with_tol(tol))?;
            let config = json!({ "law": law_json(kind, &law), "C": big_c, "tol": tol });
            emit("solve-classical", config, &[SolveRow::new(big_c, r)], &out)
        }
        Command::SolveStochastic {
            law,
            window,
            constant: cst,
            solver,
            out,
        } => {
            let file = FileConfig::load(out.config.as_deref())?;
            let out = OutputChoice::resolve(&out, &file);
            let (kind, law) = settings::law(&law, &file)?;
            let window = WindowChoice::resolve(&window, &file, WindowKind::Poisson)?;
            let big_c = require_constant(&cst, &file)?;
            let tol = settings::tolerance(solver.tol, &file)?;
            let r = solve_stochastic(kind, &law, &window.solver_law()?, big_c, &SolverOptions::with_tol(tol))?;
            let config = json!({
                "law": law_json(kind, &law), "window": window_json(&window), "C": big_c, "tol": tol,
            });
            emit("solve-stochastic", config, &[SolveRow::new(big_c, r)], &out)
        }
        Command::Compare {
            law,
            window,
            c_grid,
            big_c_grid,
            solver,
            out,
        } => {
            let file = FileConfig::load(out.config.as_deref())?;
            let out = OutputChoice::resolve(&out, &file);
            let (kind, law) = settings::law(&law, &file)?;
            let window = WindowChoice::resolve(&window, &file, WindowKind::Poisson)?;
            let wlaw = window.solver_law()?;
            let grid: Vec<f64> = match (c_grid, big_c_grid) {
                (Some(g), _) => g.into_iter().map(c_to_big_c).collect(),
                (_, Some(g)) => g,
                _ => match (file.c_grid.clone(), file.big_c_grid.clone()) {
                    (Some(_), Some(_)) => {
                        return Err(CliError::Usage("config file sets both c_grid and C_grid".into()))
                    }
                    (Some(g), _) => g.into_iter().map(c_to_big_c).collect(),
                    (_, Some(g)) => g,
                    _ => return Err(CliError::Usage("one of --c-grid or --C-grid is required".into())),
                },
            };
            let tol = settings::tolerance(solver.tol, &file)?;
            let opts = SolverOptions::with_tol(tol);
            let rows = grid
                .iter()
                .map(|&big_c| {
                    if !(big_c > 0.0 && big_c.is_finite()) {
                        return Err(CliError::Usage(format!("grid constants must be positive, got {big_c}")));
                    }
                    let alpha = solve_classical(kind, &law, big_c, &opts)?.alpha;
                    let alpha_tilde = solve_stochastic(kind, &law, &wlaw, big_c, &opts)?.alpha;
                    Ok(CompareRow {
                        c: big_c_to_c(big_c),
                        big_c,
                        alpha,
                        alpha_tilde,
                        dominates: alpha_tilde > alpha,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let config = json!({
                "law": law_json(kind, &law), "window": window_json(&window), "C_grid": grid, "tol": tol,
            });
            emit("compare", config, &rows, &out)
        }
        Command::Simulate {
            law,
            window,
            constant: cst,
            sim,
            n,
            k,
            p,
            out,
        } => {
            let file = FileConfig::load(out.config.as_deref())?;
            let out = OutputChoice::resolve(&out, &file);
            let (kind, law) = settings::law(&law, &file)?;
            let window = WindowChoice::resolve(&window, &file, WindowKind::Fixed)?;
            let n = n.or(file.n).ok_or_else(|| CliError::Usage("--n is required".into()))?;
            let scale = constant(&cst, &file)?.map(|big_c| big_c * (n as f64).ln());
            let missing = || CliError::Usage("give --c, --C, or an explicit --k / --p".into());
            let win = match window.kind {
                WindowKind::Fixed => {
                    let k = match k.or(file.k) {
                        Some(k) => k,
                        None => (scale.ok_or_else(missing)?.floor() as usize).max(1),
                    };
                    Window::Fixed { k }
                }
                _ => {
                    let p = match p.or(file.p) {
                        Some(p) => p,
                        None => scale.ok_or_else(missing)?,
                    };
                    Window::Random(window.law(p)?.expect("random window"))
                }
            };
            let cfg = SimConfig {
                n,
                window: win.clone(),
                law: law.clone(),
                seed: pick(sim.seed, file.seed, DEFAULT_SEED),
                trials: pick(sim.trials, file.trials, DEFAULT_TRIALS),
                convention: settings::convention(sim.convention, &file),
                lambda_cap: pick(sim.lambda_cap, file.lambda_cap, DEFAULT_LAMBDA_CAP),
                exec: exec(&out),
            };
            let records = zero_clock(run_trials(&cfg)?, &out);
            let param = match &win {
                Window::Fixed { k } => json!({ "k": k }),
                Window::Random(w) => json!({ "p": w.p() }),
            };
            let config = json!({
                "law": law_json(kind, &law), "window": window_json(&window), "window_param": param,
                "n": n, "seed": cfg.seed, "trials": cfg.trials, "convention": cfg.convention,
                "lambda_cap": cfg.lambda_cap,
            });
            emit("simulate", config, &records, &out)
        }
        Command::Sweep {
            law,
            window,
            constant: cst,
            sim,
            n_grid,
            out,
        } => {
            let file = FileConfig::load(out.config.as_deref())?;
            let out = OutputChoice::resolve(&out, &file);
            let (kind, law) = settings::law(&law, &file)?;
            let window = WindowChoice::resolve(&window, &file, WindowKind::Fixed)?;
            let big_c = require_constant(&cst, &file)?;
            let grid = n_grid
                .or(file.n_grid.clone())
                .ok_or_else(|| CliError::Usage("--n-grid is required".into()))?;
            let win = match window.kind {
                WindowKind::Fixed => Window::Fixed { k: 1 },
                WindowKind::Bounded => {
                    return Err(CliError::Usage(
                        "bounded windows keep their own scale; use simulate with --p".into(),
                    ))
                }
                _ => Window::Random(window.law(1.0)?.expect("random window")),
            };
            let base = SimConfig {
                n: 1,
                window: win,
                law: law.clone(),
                seed: pick(sim.seed, file.seed, DEFAULT_SEED),
                trials: pick(sim.trials, file.trials, DEFAULT_TRIALS),
                convention: settings::convention(sim.convention, &file),
                lambda_cap: pick(sim.lambda_cap, file.lambda_cap, DEFAULT_LAMBDA_CAP),
                exec: exec(&out),
            };
            let rows = convergence_sweep(&base, &grid, big_c)?;
            let config = json!({
                "law": law_json(kind, &law), "window": window_json(&window), "C": big_c, "n_grid": grid,
                "seed": base.seed, "trials": base.trials, "convention": base.convention,
            });
            emit("sweep", config, &rows, &out)
        }
        Command::Spectral {
            big_n,
            p,
            constant: cst,
            weights,
            v,
            include_diagonal,
            power_tol,
            max_iter,
            gammas,
            sim,
            out,
        } => {
            let file = FileConfig::load(out.config.as_deref())?;
            let out = OutputChoice::resolve(&out, &file);
            let n = big_n.or(file.big_n).ok_or_else(|| CliError::Usage("--N is required".into()))?;
            let weight_law = settings::weight_law(weights, v, &file)?;
            let seed = pick(sim.seed, file.seed, DEFAULT_SEED);
            let trials = pick(sim.trials, file.trials, DEFAULT_TRIALS);
            let defaults = PowerOptions::default();
            let power = PowerOptions {
                tol: pick(power_tol, file.power_tol, defaults.tol),
                max_iter: pick(max_iter, file.max_iter, defaults.max_iter),
            };
            if let Some(gammas) = gammas.or(file.gammas.clone()) {
                let rows = regime_sweep(n, &gammas, weight_law, trials, seed, exec(&out))?;
                let config = json!({
                    "N": n, "weights": weight_law, "gammas": gammas, "seed": seed, "trials": trials,
                });
                return emit("spectral", config, &rows, &out);
            }
            let ln_n = (n as f64).ln();
            let p = match p.or(file.p) {
                Some(p) => p,
                None => constant(&cst, &file)?.unwrap_or(1.0) * ln_n,
            };
            let cfg = SpectralConfig {
                n,
                p,
                weight_law,
                seed,
                trials,
                include_diagonal: include_diagonal || file.include_diagonal.unwrap_or(false),
                power,
                exec: exec(&out),
            };
            let rows = run_reports(&cfg)?;
            let config = json!({
                "N": n, "p": p, "weights": weight_law, "seed": seed, "trials": trials,
                "include_diagonal": cfg.include_diagonal, "power_tol": power.tol, "max_iter": power.max_iter,
            });
            emit("spectral", config, &rows, &out)
        }
    }
}
