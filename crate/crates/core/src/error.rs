use thiserror::Error;

/// Errors raised by the solver, the observables and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("effective potential is undefined at r = {r} nm (requires r > 0)")]
    Domain { r: f64 },

    #[error("requested {requested} states, grid admits between 1 and {max}")]
    StateCount { requested: usize, max: usize },

    #[error("state index {index} out of range ({available} states available)")]
    StateIndex { index: usize, available: usize },

    #[error("inverse iteration did not converge for state {state} (residual norms {residuals:?})")]
    Convergence { state: usize, residuals: Vec<f64> },

    #[error("annulus [{lo}, {hi}] nm is not inside the grid [{r_min}, {r_max}] nm")]
    Annulus { lo: f64, hi: f64, r_min: f64, r_max: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no zero #{index} of J_{order} found while scanning [{from}, {to}]")]
    RootBracket { order: f64, index: usize, from: f64, to: f64 },

    #[error("shooting could not bracket state {state}: {reason}")]
    Shooting { state: usize, reason: String },

    #[error("shooting solution for state {expected} has {found} interior nodes")]
    NodeCount { expected: usize, found: usize },

    #[error("sweep point {axis} = {value}: {source}")]
    SweepPoint {
        axis: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("azimuthal window is empty")]
    EmptyWindow,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
