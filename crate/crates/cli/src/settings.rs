//! Merging of command-line flags with an optional TOML file.

use std::fs::File;
use std::path::{Path, PathBuf};

use erlimit::rate_engine::{BoundedWindow, TabulatedCgf};
use erlimit::simulator::WindowConvention;
use erlimit::spectral::WeightLaw;
use erlimit::{c_to_big_c, IncrementLaw, WindowLaw};
use serde::Deserialize;

use crate::args::{ConstArgs, ConventionKind, Format, LawArgs, LawKind, OutputArgs, WeightKind, WindowArgs, WindowKind};
use crate::error::CliError;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_TRIALS: usize = 16;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_P_NOMINAL: f64 = 30.0;

/// Every key a config file may set. Keys use the flag names with `_` for
/// `-`, so `--lambda-cap` becomes `lambda_cap`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub law: Option<LawKind>,
    pub variance: Option<f64>,
    pub value: Option<f64>,
    pub cgf_table: Option<PathBuf>,
    pub window: Option<WindowKind>,
    pub y_lo: Option<f64>,
    pub y_hi: Option<f64>,
    pub p_nominal: Option<f64>,
    pub c: Option<f64>,
    #[serde(rename = "C")]
    pub big_c: Option<f64>,
    pub tol: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub convention: Option<ConventionKind>,
    pub lambda_cap: Option<u64>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<f64>,
    pub n_grid: Option<Vec<usize>>,
    #[serde(rename = "N")]
    pub big_n: Option<usize>,
    pub weights: Option<WeightKind>,
    pub v: Option<f64>,
    pub include_diagonal: Option<bool>,
    pub power_tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub gammas: Option<Vec<f64>>,
    pub c_grid: Option<Vec<f64>>,
    #[serde(rename = "C_grid")]
    pub big_c_grid: Option<Vec<f64>>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub no_timestamp: Option<bool>,
    pub sequential: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("--config {}: {}", path.display(), e.message())))
    }
}

/// A flag value wins over the file value, which wins over the default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive and finite, got {x}")))
    }
}

/// The window constant in nats, or `None` when neither form was given.
pub fn constant(args: &ConstArgs, file: &FileConfig) -> Result<Option<f64>, CliError> {
    if file.c.is_some() && file.big_c.is_some() {
        return Err(CliError::Usage("config file sets both c and C; they are mutually exclusive".into()));
    }
    let big_c = match (args.c, args.big_c) {
        (Some(c), _) => Some(c_to_big_c(positive("c", c)?)),
        (_, Some(big)) => Some(positive("C", big)?),
        _ => match (file.c, file.big_c) {
            (Some(c), _) => Some(c_to_big_c(positive("c", c)?)),
            (_, Some(big)) => Some(positive("C", big)?),
            _ => None,
        },
    };
    Ok(big_c)
}

pub fn require_constant(args: &ConstArgs, file: &FileConfig) -> Result<f64, CliError> {
    constant(args, file)?.ok_or_else(|| CliError::Usage("one of --c or --C is required".into()))
}

pub fn law(args: &LawArgs, file: &FileConfig) -> Result<(LawKind, IncrementLaw), CliError> {
    let kind = pick(args.law, file.law, LawKind::Bernoulli);
    let variance = pick(args.variance, file.variance, 1.0);
    let law = match kind {
        LawKind::Bernoulli => IncrementLaw::BernoulliPM1,
        LawKind::Gaussian => IncrementLaw::gaussian(positive("variance", variance)?)?,
        LawKind::SquaredGaussian => IncrementLaw::squared_gaussian_weight(positive("variance", variance)?)?,
        LawKind::Degenerate => IncrementLaw::degenerate(pick(args.value, file.value, 1.0))?,
        LawKind::Tabulated => {
            let path = args
                .cgf_table
                .clone()
                .or_else(|| file.cgf_table.clone())
                .ok_or_else(|| CliError::Usage("--law tabulated needs --cgf-table".into()))?;
            let f = File::open(&path).map_err(|e| CliError::Usage(format!("--cgf-table {}: {e}", path.display())))?;
            IncrementLaw::Tabulated(TabulatedCgf::from_csv(f)?)
        }
    };
    Ok((kind, law))
}

/// Resolved window choice; `p` is filled in once the scale is known.
#[derive(Debug, Clone, Copy)]
pub struct WindowChoice {
    pub kind: WindowKind,
    pub y_lo: f64,
    pub y_hi: f64,
    pub p_nominal: f64,
}

impl WindowChoice {
    pub fn resolve(args: &WindowArgs, file: &FileConfig, default: WindowKind) -> Result<Self, CliError> {
        let choice = WindowChoice {
            kind: pick(args.window, file.window, default),
            y_lo: pick(args.y_lo, file.y_lo, 0.5),
            y_hi: pick(args.y_hi, file.y_hi, 2.0),
            p_nominal: positive("p-nominal", pick(args.p_nominal, file.p_nominal, DEFAULT_P_NOMINAL))?,
        };
        if !(choice.y_lo >= 0.0 && choice.y_lo < 1.0 && choice.y_hi > 1.0 && choice.y_hi.is_finite()) {
            return Err(CliError::Usage(format!(
                "bounded window needs 0 <= y-lo < 1 < y-hi, got [{}, {}]",
                choice.y_lo, choice.y_hi
            )));
        }
        Ok(choice)
    }

    /// The random window law with mean `p`; `None` for fixed windows.
    pub fn law(&self, p: f64) -> Result<Option<WindowLaw>, CliError> {
        let p = positive("p", p)?;
        Ok(match self.kind {
            WindowKind::Fixed => None,
            WindowKind::Poisson => Some(WindowLaw::poisson(p)?),
            WindowKind::Deterministic => Some(WindowLaw::deterministic(p, p)?),
            WindowKind::Bounded => Some(WindowLaw::BoundedSupport(BoundedWindow::truncated_poisson(
                p, self.y_lo, self.y_hi,
            )?)),
        })
    }

    /// Window law for the solvers, where only the shape matters.
    pub fn solver_law(&self) -> Result<WindowLaw, CliError> {
        match self.kind {
            WindowKind::Fixed => Err(CliError::Usage(
                "--window fixed has no stochastic constant; use solve-classical".into(),
            )),
            WindowKind::Bounded => Ok(self.law(self.p_nominal)?.expect("bounded window is random")),
            _ => Ok(self.law(1.0)?.expect("window is random")),
        }
    }
}

pub fn convention(kind: Option<ConventionKind>, file: &FileConfig) -> WindowConvention {
    match pick(kind, file.convention, ConventionKind::KTerms) {
        ConventionKind::KTerms => WindowConvention::KTerms,
        ConventionKind::KPlus1Terms => WindowConvention::KPlus1Terms,
    }
}

pub fn weight_law(kind: Option<WeightKind>, v: Option<f64>, file: &FileConfig) -> Result<WeightLaw, CliError> {
    let v = pick(v, file.v, 1.0);
    if !(v >= 0.0 && v.is_finite()) {
        return Err(CliError::Usage(format!("--v must be nonnegative, got {v}")));
    }
    Ok(match pick(kind, file.weights, WeightKind::Bernoulli) {
        WeightKind::Bernoulli => WeightLaw::BernoulliPM1 { v },
        WeightKind::Gaussian => WeightLaw::Gaussian { v },
    })
}

pub fn tolerance(flag: Option<f64>, file: &FileConfig) -> Result<f64, CliError> {
    positive("tol", pick(flag, file.tol, DEFAULT_TOL))
}

/// Output options after merging.
#[derive(Debug, Clone)]
pub struct OutputChoice {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub timestamp: bool,
    pub sequential: bool,
}

impl OutputChoice {
    pub fn resolve(args: &OutputArgs, file: &FileConfig) -> Self {
        OutputChoice {
            format: pick(args.format, file.format, Format::Csv),
            output: args.output.clone().or_else(|| file.output.clone()),
            timestamp: !(args.no_timestamp || file.no_timestamp.unwrap_or(false)),
            sequential: args.sequential || file.sequential.unwrap_or(false),
        }
    }
}
