use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {x} lies outside the domain [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} cap exceeded: requested {requested}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("orbit of {x} left the domain at step {step}")]
    Escape { x: f64, step: usize },

    #[error("potential is outside class U: {0}")]
    NotClassU(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("power iteration did not converge in {iters} iterations (last relative change {change:e})")]
    NoConvergence { iters: usize, change: f64 },

    #[error("no periodic points of period {0} were found")]
    NoPeriodicPoints(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("pole encountered: {0}")]
    Pole(String),

    #[error("every sample point was filtered out")]
    NoSamples,

    #[error("verification failed: {0}")]
    Verification(String),
}
