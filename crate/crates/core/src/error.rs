use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised anywhere in the simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |h - h†| = {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("process matrix is not completely positive (min eigenvalue {min_eigenvalue:.3e})")]
    NotCp { min_eigenvalue: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("Kraus set is incomplete (defect {defect:.3e} > tolerance {tolerance:.3e})")]
    IncompleteSet { defect: f64, tolerance: f64 },

    #[error("operator is not a contraction: norm {norm:.12} exceeds 1 by {excess:.3e}")]
    NotContraction { norm: f64, excess: f64 },

    #[error("state vector is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("matrix has (near) zero Frobenius norm")]
    ZeroMatrix,

    #[error("linear system is singular (condition number {condition:.3e})")]
    SingularSystem { condition: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Data(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// The innermost error, with pipeline stage tags removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for failures of a numerical method rather than of the input data.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self.root(),
            Error::NoConvergence { .. } | Error::SingularSystem { .. }
        )
    }
}

/// Tags errors with the pipeline stage they came from.
pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| Error::Stage {
            stage,
            source: Box::new(e),
        })
    }
}
