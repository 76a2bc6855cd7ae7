use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("argument {value} lies outside the domain {domain}")]
    Domain { value: f64, domain: String },
    #[error("invalid bracket [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },
    #[error("cumulant generating function fails the chord test at t = {at}")]
    NotConvex { at: f64 },
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("tabulated cgf: {0}")]
    Table(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("constant must be positive, got {0}")]
    InvalidC(f64),
    #[error("no finite objective value for alpha = {alpha}")]
    Infeasible { alpha: f64 },
    #[error("alpha exceeded the cap {cap} (objective {last_value} still below target {target})")]
    CapReached {
        cap: f64,
        last_value: f64,
        target: f64,
    },
    #[error(transparent)]
    Rate(#[from] RateError),
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("drawn window length {drawn} exceeds the cap {cap}")]
    Overflow { drawn: u64, cap: u64 },
    #[error("stream of length {len} is too short for the requested windows (need {need})")]
    Length { len: usize, need: usize },
    #[error(transparent)]
    Rate(#[from] RateError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("invalid dimension or density: N = {n}, p = {p}")]
    Dimension { n: usize, p: f64 },
    #[error("power iteration did not converge in {iterations} steps (norm estimate {norm}, residual {residual})")]
    NoConvergence {
        norm: f64,
        iterations: usize,
        residual: f64,
    },
}
