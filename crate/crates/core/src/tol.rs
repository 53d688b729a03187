//! Centralized numerical tolerances.
//!
//! Every acceptance threshold used by constructors and checks lives here so
//! the numeric contract of the crate is visible in one place.  The values
//! are calibrated for double precision and ambient dimensions up to a few
//! hundred; they are deliberately loose enough to accept the output of our
//! own decompositions and tight enough to reject structurally wrong input.

/// Per-entry unitarity scale: a matrix passes the unitary check when
/// `||U*U - I||_F <= n * EPS_UNITARY` for ambient dimension `n`.
pub const EPS_UNITARY: f64 = 1e-8;

/// Relative Hermitian asymmetry bound: reject when
/// `||A - A*||_F > HERMITIAN_ASYMMETRY * (1 + ||A||_F)`.
pub const HERMITIAN_ASYMMETRY: f64 = 1e-8;

/// Idempotency bound for orthogonal projections: `||P^2 - P||_F`.
pub const PROJECTION_IDEMPOTENCY: f64 = 1e-8;

/// How close the trace of a projection must be to an integer rank.
pub const PROJECTION_TRACE: f64 = 1e-6;

/// Projection eigenvalues must avoid the open band `(0.1, 0.9)`;
/// anything inside is neither a clear 0 nor a clear 1.
pub const PROJECTION_EIGENVALUE_BAND: (f64, f64) = (0.1, 0.9);

/// Distance to the logarithm branch boundary at `pi` below which a
/// connecting geodesic is flagged as non-unique (and discretized-curve
/// reconstruction refuses to pick a branch).
pub const BRANCH_BOUNDARY: f64 = 1e-9;

/// Slack added to `pi` when validating exponent spectral norms, so that
/// exponents computed by our own logarithm (norm `pi` up to rounding)
/// are always accepted.
pub const SPECTRAL_SLACK: f64 = 1e-9;

/// Codiagonality bound for Grassmannian tangent directions, scaled by
/// `(1 + ||X||_F)`: the two diagonal blocks of `X` must vanish to this
/// precision.
pub const CODIAGONAL_RESIDUAL: f64 = 1e-8;

/// Default additivity tolerance for alignment detection on distances.
pub const ALIGNMENT_DISTANCE: f64 = 1e-8;

/// Termination width for the golden-section search that recovers the
/// alignment parameter `t0` on `[0, 1]`.
pub const ALIGNMENT_T: f64 = 1e-10;

/// Residual factor for a recovered alignment point: the reconstruction
/// must match within `ALIGNMENT_RESIDUAL_FACTOR * sqrt(n)` in Frobenius
/// norm.
pub const ALIGNMENT_RESIDUAL_FACTOR: f64 = 1e-6;

/// Relative tolerance used when two vectors or values produced by
/// different decompositions of the same object are compared (for example
/// eigenvalues of the modulus against singular values).
pub const CROSS_DECOMPOSITION: f64 = 1e-10;

/// Off-diagonal energy (relative to the matrix scale) at which the joint
/// diagonalization of the commuting Hermitian parts of a unitary matrix is
/// declared converged.
pub const JOINT_DIAG_OFF: f64 = 1e-14;

/// Hard cap on joint-diagonalization sweeps; reaching it without meeting
/// the residual gate is reported as a convergence failure.
pub const JOINT_DIAG_MAX_SWEEPS: usize = 64;

/// Sampled-axiom tolerance for user-supplied gauges and Lagrangians
/// (homogeneity, permutation and sign invariance, triangle inequality).
pub const CUSTOM_AXIOM: f64 = 1e-9;
