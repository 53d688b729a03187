//! Numerical toolkit for length and action minimization in the unitary
//! group, and for the induced angle geometry on the Grassmann manifold of
//! subspaces.
//!
//! The crate is organised in layers:
//!
//! * [`matcore`] — validated dense matrix types and the spectral kernels
//!   everything else uses (Hermitian eigendecomposition, singular values,
//!   operator modulus, `exp(iX)` and its principal inverse);
//! * [`lagrangian`] — symmetric gauge functions (Schatten, Ky Fan, custom),
//!   the unitarily invariant norms they induce, and symmetric Lagrangian
//!   densities with convexity metadata;
//! * [`unitary_paths`] — geodesic segments and polygonal paths in the
//!   unitary group, their action and length functionals, geodesic
//!   distances, and additive-alignment detection;
//! * [`grassmann`] — orthogonal projections, direct rotations between
//!   equal-rank subspaces, principal angles and angular metrics;
//! * [`verify`] — a seeded randomized harness that stress-tests the
//!   geometric inequalities behind the library and reports violations as
//!   data;
//! * [`json`] — serde wire formats for matrices, paths, projections and
//!   verification reports.

pub mod error;
pub mod grassmann;
pub mod json;
pub mod lagrangian;
pub mod matcore;
pub mod optim;
pub mod tol;
pub mod unitary_paths;
pub mod verify;

pub use error::{Error, Result};
pub use lagrangian::{GaugeFunction, Lagrangian};
pub use matcore::{C64, ComplexMatrix, HermitianMatrix, SingularSpectrum, UnitaryMatrix};

/// Re-export of the linear algebra backend so downstream crates can build
/// matrices against the same version.
pub use nalgebra;
