use crate::bp::SolveStatus;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by graph construction, I/O, and the numeric pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on user-supplied data failed (dimensions, ranges,
    /// value constraints). The message names the offending argument.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A normalized Laplacian was requested for a graph with a degree-zero
    /// node, where the scaling by `1/degree` is undefined.
    #[error("node {node} is isolated: normalized Laplacians need every degree positive")]
    IsolatedNode { node: usize },

    /// The Jacobi eigensolver failed to reach its off-diagonal tolerance
    /// within the sweep cap.
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },

    /// A basis-pursuit subproblem inside the l1 clustering loop ended in a
    /// non-optimal state.
    #[error("basis pursuit failed on indicator column {column}: {status:?}")]
    SolverFailure { column: usize, status: SolveStatus },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    /// Text input (edge list, dense matrix, plan file, CSV) that does not
    /// match the documented format. `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
