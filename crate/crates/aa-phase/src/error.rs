use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Numerical-layer errors. Configuration-file problems are a separate type
/// ([`crate::config::ConfigError`]) because the CLI maps the two classes to
/// different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} ({context})")]
    DimensionMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },

    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error(
        "gauge rate lambda = {lambda:e} must be > 0: the gauge schedule f(t) = lambda*t \
         with f(T) = lambda*T = 2*pi has no period for lambda <= 0"
    )]
    GaugeUndefined { lambda: f64 },

    #[error("cannot normalize a state with zero norm")]
    ZeroNorm,

    #[error("Mandel Q is undefined for a state with zero mean photon number")]
    ZeroMeanPhoton,

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error(
        "tail mass {tail:e} still exceeds tolerance {tol:e} at the maximum dimension {max_dim}"
    )]
    TailUnreachable { tail: f64, tol: f64, max_dim: usize },

    #[error("eigensolver failed on a {dim}x{dim} operator: {detail}")]
    Eigensolver { dim: usize, detail: String },

    #[error("invalid step count {steps}: {reason}")]
    StepCount { steps: usize, reason: &'static str },

    #[error("imaginary residue {residue:e} exceeds threshold {threshold:e} in {context}")]
    ResidueTooLarge {
        residue: f64,
        threshold: f64,
        context: &'static str,
    },

    #[error(
        "gauge identity violated: gamma + beta_closed = {value:.17e} differs from 2*pi \
         by {defect:e} (threshold {threshold:e})"
    )]
    GaugeIdentity {
        value: f64,
        defect: f64,
        threshold: f64,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
