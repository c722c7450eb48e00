use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "solver diverged at t = {t}: Bloch norm {norm} leaves the unit ball; try a smaller dt"
    )]
    SolverDivergence { t: f64, norm: f64 },

    /// Energy bookkeeping failed by far more than integrator error allows.
    #[error("energy ledger inconsistent: residual {residual:e} exceeds {limit:e}")]
    Inconsistency { residual: f64, limit: f64 },

    #[error("Fock truncation insufficient: {0}; raise n_max")]
    Truncation(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(line: usize, msg: impl Into<String>) -> Self {
        Error::Config {
            line,
            message: msg.into(),
        }
    }

    /// True for errors caused by user input rather than numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
