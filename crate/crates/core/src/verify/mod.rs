//! Seeded randomized verification: samplers for Haar unitaries, bounded
//! Hermitian displacements, and uniform subspaces, plus the property
//! suites that exercise the geometric identities at scale and emit
//! machine-readable reports.

pub mod sampling;
pub mod suites;

pub use sampling::{sample_haar_unitary, sample_hermitian_ball, sample_projection, substream};
pub use suites::{
    run_all, suite_grassmann, suite_minimality, suite_thompson, suite_uniqueness_descent,
    SuiteReport, TrialConfig,
};
