use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("decimal precision must be at least 1 digit, got {0}")]
    InvalidPrecision(i64),

    #[error("malformed decimal literal {0:?}")]
    Parse(String),

    #[error("cannot render {requested} digits from a {available}-digit value")]
    DigitsExceedPrecision { requested: usize, available: u64 },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("energy {eps} lies below the minimum {min} of the potential; no turning point")]
    NoTurningPoint { eps: f64, min: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("wavefunction vanishes at the evaluation point (pole of the log-derivative)")]
    Pole,

    #[error("bracketing failed: {0}")]
    BracketFailure(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("mismatch has the same sign at both bracket ends after precision raise ({0})")]
    SignAnomaly(String),

    #[error("certification failed: only {agreed} digits agree\n  first:  {first}\n  second: {second}")]
    CertificationFailure { agreed: usize, first: String, second: String },

    #[error("{requested} digits cannot resolve a splitting of order 1e{magnitude:.1}; need at least {required}")]
    ResolutionTooLow { requested: u64, required: u64, magnitude: f64 },

    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("interrupted after {0} evaluations; checkpoint written")]
    Interrupted(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
