use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter {name} = {value} violates {bound}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        bound: String,
    },

    #[error("argument {name} = {value} outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("evaluation on the singular line x = 1 (x = {0})")]
    SingularLine(f64),

    #[error("root bracket failed: {0}")]
    Bracket(String),

    #[error("quadrature tolerance not met: estimate {estimate:e} > requested {requested:e}")]
    QuadratureTolerance { estimate: f64, requested: f64 },

    #[error("zero polynomial where a nonzero one is required: {0}")]
    ZeroPolynomial(&'static str),

    #[error("degenerate resultant input: {0}")]
    Degenerate(&'static str),

    #[error("ODE integration failed: {0}")]
    Integration(String),

    #[error("tail window too short: {0}")]
    InsufficientTail(String),

    #[error("momentum left X_k at t = {t}: min m = {min_m:e}")]
    Positivity { t: f64, min_m: f64 },

    #[error("blow-up at t = {t}: max |m| = {max_m:e}")]
    BlowUp { t: f64, max_m: f64 },

    #[error("under-resolved at t = {t}: spectral tail {tail:e}")]
    Resolution { t: f64, tail: f64 },

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
