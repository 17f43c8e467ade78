use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed catalog text. Positions are 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A vertex index lies outside `1..=n`.
    #[error("vertex index {index} out of range 1..={n}")]
    VertexOutOfRange { index: usize, n: usize },

    /// The same hyperedge appears twice in one record.
    #[error("duplicate edge {edge} at line {line}")]
    DuplicateEdge { edge: String, line: usize },

    /// A size cap was exceeded (qubit count, edge count, matrix dimension).
    #[error("capacity exceeded: {what} = {got}, limit {limit}")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    /// Invalid argument to a family generator or measure.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Unknown hypergraph family name.
    #[error("unknown family \"{0}\"")]
    UnknownFamily(String),

    /// Probability outside `[0, 1]`.
    #[error("probability {value} for order {order} outside [0, 1]")]
    ProbabilityRange { order: usize, value: f64 },

    /// A randomization parameter required by the hypergraph is missing.
    #[error("no success probability given for edge order {order}")]
    MissingOrder { order: usize },

    /// Dimension mismatch between two states or matrices.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Input matrix is not Hermitian within tolerance.
    #[error("matrix not Hermitian: max |M - M^dagger| entry = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    /// The Jacobi eigensolver failed to converge.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {offdiag:.3e})")]
    EigenNoConvergence { sweeps: usize, offdiag: f64 },

    /// The witness expectation has no root in `[0, 1]`.
    #[error("witness expectation has no sign change on [0, 1]; the witness never fires")]
    WitnessNeverFires,

    /// The SDP solver stopped before reaching its gap target.
    #[error("SDP solver hit the iteration limit at iteration {iterations}; attained gap {gap:.3e}")]
    SdpMaxIterations { iterations: usize, gap: f64 },

    /// The SDP solver encountered an unrecoverable numerical failure.
    #[error("SDP numerical failure at iteration {iterations}: {msg} (gap {gap:.3e})")]
    SdpNumerical {
        iterations: usize,
        gap: f64,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
