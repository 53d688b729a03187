//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the library.
///
/// Numerical routines distinguish *invalid input* (dimension or shape
/// mismatches, tolerance violations on claimed structure) from *numerical
/// breakdown* (an iteration that failed to converge).  Callers that sample
/// random inputs can treat every variant except [`Error::ConvergenceFailure`]
/// as a bug on their side.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A matrix argument was not square.
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    /// A matrix argument contained NaN or infinite entries.
    #[error("matrix entries must be finite")]
    NonFinite,

    /// Two arguments that must share a dimension did not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Claimed Hermitian input with too large an asymmetry `||A - A*||_F`.
    #[error("matrix is not Hermitian: asymmetry {defect:e} exceeds tolerance")]
    NotHermitian { defect: f64 },

    /// Claimed unitary input with too large a defect `||U*U - I||_F`.
    #[error("matrix is not unitary: defect {defect:e} exceeds tolerance")]
    NotUnitary { defect: f64 },

    /// Claimed orthogonal projection input that is not Hermitian-idempotent
    /// with eigenvalues near {0, 1}, or whose rank is trivial.
    #[error("matrix is not an orthogonal projection: {0}")]
    NotProjection(String),

    /// Basis columns that were supposed to be orthonormal are not.
    #[error("columns are not orthonormal: defect {defect:e} exceeds tolerance")]
    NotOrthonormal { defect: f64 },

    /// An eigenvalue or joint-diagonalization iteration did not converge.
    #[error("iterative decomposition failed to converge: {0}")]
    ConvergenceFailure(String),

    /// A gauge specifier string or a user-supplied gauge callback was
    /// rejected (bad grammar, `p < 1`, `k = 0`, or a sampled norm axiom
    /// violation for custom gauges).
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),

    /// A subspace rank is incompatible with the ambient dimension.
    #[error("rank too large: need 2*m <= n, got m={m}, n={n}")]
    RankTooLarge { m: usize, n: usize },

    /// Two projections that must have equal rank do not.
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    /// A tangent direction is not codiagonal with respect to the projection
    /// it is attached to (its diagonal blocks are too large).
    #[error("direction is not codiagonal with the projection: residual {residual:e}")]
    NotCodiagonal { residual: f64 },

    /// A curve parameter fell outside the path domain `[0, b]`.
    #[error("parameter {t} outside path domain [0, {b}]")]
    OutOfDomain { t: f64, b: f64 },

    /// Two consecutive samples of a discretized curve are so far apart that
    /// the connecting geodesic is ambiguous (a relative phase reached the
    /// branch boundary at pi).
    #[error("consecutive samples too far apart: relative phase {phase} reaches the branch cut")]
    GapTooLarge { phase: f64 },

    /// An operation that detects additive alignment was invoked with a gauge
    /// that is not flagged nondegenerate, so the detection theorem does not
    /// apply.
    #[error("gauge '{0}' is not nondegenerate; alignment detection is unavailable")]
    NondegeneracyRequired(String),

    /// A polygonal path description is inconsistent (breakpoints not
    /// strictly increasing, exponent count mismatch, exponent norm above pi,
    /// and so on).
    #[error("invalid path: {0}")]
    InvalidPath(String),

    /// A verification or CLI configuration value is out of range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A JSON payload did not match the expected wire schema.
    #[error("malformed input: {0}")]
    Malformed(String),
}
