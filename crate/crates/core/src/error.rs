use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    Validation(String),

    #[error("network has no positive weight")]
    ZeroNetwork,

    #[error("vertex {0} is isolated (zero degree); decompose into components first")]
    IsolatedVertex(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("network is disconnected; use connected_components first")]
    Disconnected,

    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("quadrature did not converge on [{lo}, {hi}]")]
    Oracle { lo: f64, hi: f64 },

    #[error(
        "rejection sampling infeasible: pilot acceptance rate {rate:.3e} for {requested} samples"
    )]
    Feasibility { rate: f64, requested: usize },

    #[error("drift lower bound H = {0:.3e} is not positive; A is below threshold")]
    HNotPositive(f64),

    #[error("cannot parse network: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}
