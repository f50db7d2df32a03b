use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Display strings lead with the name of the violated contract so that
/// command-line users see e.g. `NegativityError: ...` verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("DimensionError: {0}")]
    Dimension(String),

    #[error("HermiticityError: max |A - A^dagger| = {residual:.3e} exceeds tolerance {tol:.3e}")]
    Hermiticity { residual: f64, tol: f64 },

    #[error(
        "TraceError: trace is {trace} (|trace - 1| = {deviation:.3e} exceeds tolerance {tol:.3e})"
    )]
    Trace {
        trace: f64,
        deviation: f64,
        tol: f64,
    },

    #[error("NegativityError: minimum eigenvalue {min_eigenvalue:.6e} is below -{tol:.3e}")]
    Negativity { min_eigenvalue: f64, tol: f64 },

    #[error("UnitarityError: max |U^dagger U - I| = {residual:.3e} exceeds tolerance {tol:.3e}")]
    Unitarity { residual: f64, tol: f64 },

    #[error("ZeroVectorError: cannot normalise the zero vector")]
    ZeroVector,

    #[error("RankError: matrix of dimension {dim} has numerical rank {rank}; a rank-deficient state is required")]
    Rank { rank: usize, dim: usize },

    #[error("DomainError: {0}")]
    Domain(String),

    #[error("SpectrumError: {0}")]
    Spectrum(String),

    #[error("ConvergenceError: {0}")]
    Convergence(String),

    #[error("ClockError: {0}")]
    Clock(String),

    #[error("ReproducibilityError: {0}")]
    Reproducibility(String),

    #[error("ParseError at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by the inputs themselves rather than by numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Dimension(_)
                | Error::Hermiticity { .. }
                | Error::Trace { .. }
                | Error::Negativity { .. }
                | Error::Unitarity { .. }
                | Error::ZeroVector
                | Error::Rank { .. }
                | Error::Parse { .. }
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
