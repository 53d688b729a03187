//! The Grassmann manifold of rank-`m` orthogonal projections in dimension
//! `n`: direct rotations, geodesics by conjugation, principal angles, and
//! the angular metrics induced by gauges.
//!
//! A projection `P` embeds into the unitary group as the symmetry
//! `S_P = 2P - I`; the embedding doubles distances.  For equal-rank `P`
//! and `Q` there is a *direct rotation*: a `P`-codiagonal Hermitian `X`
//! with `||X|| <= pi/2` and `Q = exp(iX) P exp(-iX)`, computed here as
//! half the principal logarithm of `S_Q S_P`.  Its spectrum consists of
//! the principal angles in pairs `{+-theta_i}` padded by zeros, which
//! makes the angle metric `rho_phi = phi(theta, 0, ...)` and the
//! geodesic distance of the induced pair-averaging gauge `psi` agree.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lagrangian::GaugeFunction;
use crate::matcore::{
    exp_i, hermitian_eig, principal_log, singular_values, C64, ComplexMatrix, HermitianMatrix,
    UnitaryMatrix,
};
use crate::tol;

/// A rank-`m` orthogonal projection (`1 <= m <= n-1`), validated to be
/// Hermitian, idempotent, and spectrally clean (eigenvalues near 0 or 1).
#[derive(Clone, Debug)]
pub struct Projection {
    mat: HermitianMatrix,
    rank: usize,
}

impl Projection {
    /// Validates and wraps a projection matrix.  Rejects matrices that are
    /// not Hermitian, not idempotent within `1e-8` (Frobenius), have an
    /// eigenvalue inside the band `(0.1, 0.9)` (neither a clear 0 nor a
    /// clear 1), whose trace is not the rank within `1e-6`, or whose rank
    /// is trivial (0 or n).
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        let herm = HermitianMatrix::new(mat)?;
        let defect = (herm.as_matrix() * herm.as_matrix() - herm.as_matrix()).norm();
        if defect > tol::PROJECTION_IDEMPOTENCY {
            return Err(Error::NotProjection(format!(
                "idempotency defect {defect:e}"
            )));
        }
        let eigenvalues = herm.eigenvalues()?;
        let (lo, hi) = tol::PROJECTION_EIGENVALUE_BAND;
        let mut rank = 0usize;
        let mut trace = 0.0;
        for &lambda in &eigenvalues {
            if lambda > lo && lambda < hi {
                return Err(Error::NotProjection(format!(
                    "eigenvalue {lambda} falls inside ({lo}, {hi})"
                )));
            }
            if lambda > 0.5 {
                rank += 1;
            }
            trace += lambda;
        }
        if (trace - rank as f64).abs() > tol::PROJECTION_TRACE {
            return Err(Error::NotProjection(format!(
                "trace {trace} is not the integer rank {rank}"
            )));
        }
        let n = herm.dim();
        if rank == 0 || rank == n {
            return Err(Error::NotProjection(format!(
                "rank must satisfy 1 <= m <= n-1, got m={rank}, n={n}"
            )));
        }
        Ok(Self { mat: herm, rank })
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Rank `m` (dimension of the range).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Borrows the underlying dense storage.
    pub fn as_matrix(&self) -> &DMatrix<C64> {
        self.mat.as_matrix()
    }

    /// View as a Hermitian matrix.
    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.mat
    }

    /// The complementary projection `I - P` (rank `n - m`), useful for
    /// reducing rank-`m > n/2` problems to the `2m <= n` regime.
    pub fn complement(&self) -> Self {
        let n = self.dim();
        let id = DMatrix::<C64>::identity(n, n);
        Self {
            mat: HermitianMatrix::new(id - self.as_matrix()).expect("complement stays Hermitian"),
            rank: n - self.rank,
        }
    }

    /// The symmetry (Hermitian involutive unitary) `S_P = 2P - I`.
    pub fn to_symmetry(&self) -> Symmetry {
        let n = self.dim();
        let id = DMatrix::<C64>::identity(n, n);
        let s = self.as_matrix().map(|z| z * 2.0) - id;
        Symmetry {
            // Unitary up to four times the idempotency tolerance; the
            // projection constructor has already bounded that.
            unitary: UnitaryMatrix::from_unitary(s),
        }
    }
}

/// Builds the projection `B B*` onto the column span of `columns`.
/// The columns must be orthonormal within `1e-8`.
pub fn projection_from_basis(columns: &DMatrix<C64>) -> Result<Projection> {
    let (n, m) = (columns.nrows(), columns.ncols());
    if m == 0 || m >= n {
        return Err(Error::NotProjection(format!(
            "rank must satisfy 1 <= m <= n-1, got m={m}, n={n}"
        )));
    }
    let gram = columns.adjoint() * columns;
    let defect = (gram - DMatrix::<C64>::identity(m, m)).norm();
    if defect > 1e-8 * (m as f64).sqrt() {
        return Err(Error::NotOrthonormal { defect });
    }
    Projection::new(columns * columns.adjoint())
}

/// A Hermitian involutive unitary `S = S* = S^{-1}` (the image of a
/// projection under `P -> 2P - I`).
#[derive(Clone, Debug)]
pub struct Symmetry {
    unitary: UnitaryMatrix,
}

impl Symmetry {
    /// The symmetry as a unitary matrix.
    pub fn unitary(&self) -> &UnitaryMatrix {
        &self.unitary
    }

    /// Borrows the underlying dense storage.
    pub fn as_matrix(&self) -> &DMatrix<C64> {
        self.unitary.as_matrix()
    }
}

/// Principal angles between two equal-rank subspaces, in `[0, pi/2]`,
/// reported non-increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalAngles {
    theta: Vec<f64>,
}

impl PrincipalAngles {
    /// The angles, largest first.
    pub fn angles(&self) -> &[f64] {
        &self.theta
    }

    /// The angles padded with zeros to length `n` (the shape gauge
    /// functions evaluate on).
    pub fn padded(&self, n: usize) -> Vec<f64> {
        let mut out = self.theta.clone();
        out.resize(n, 0.0);
        out
    }
}

/// A direct rotation between equal-rank projections: the exponent `X` and
/// a flag marking the non-uniqueness boundary.
#[derive(Clone, Debug)]
pub struct DirectRotation {
    /// `P`-codiagonal Hermitian exponent with `||X|| <= pi/2` and
    /// `Q = exp(iX) P exp(-iX)` away from the boundary.
    pub exponent: HermitianMatrix,
    /// Set when `||P - Q|| >= 1 - 1e-9` (some principal angle reaches
    /// `pi/2`); a valid exponent is still returned but it is no longer
    /// unique, and the conjugation identity may fail on the critical
    /// eigenspace.
    pub boundary_non_unique: bool,
}

fn check_same_shape(p: &Projection, q: &Projection) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    if p.rank() != q.rank() {
        return Err(Error::RankMismatch {
            left: p.rank(),
            right: q.rank(),
        });
    }
    Ok(())
}

/// Computes the direct rotation from `P` to `Q` as
/// `X = principal_log(S_Q S_P) / 2`.
pub fn direct_rotation(p: &Projection, q: &Projection) -> Result<DirectRotation> {
    check_same_shape(p, q)?;
    let w = q.to_symmetry().unitary().compose(p.to_symmetry().unitary());
    let exponent = principal_log(&w)?.scale(0.5);
    let diff = ComplexMatrix::new(p.as_matrix() - q.as_matrix())?;
    let separation = singular_values(&diff)?.max();
    Ok(DirectRotation {
        exponent,
        boundary_non_unique: separation >= 1.0 - tol::BRANCH_BOUNDARY,
    })
}

/// Principal angles `theta_i = arccos(s_i(P Q))` for the `m` greatest
/// singular values, clamped into `[0, 1]` before the arccosine, reported
/// non-increasing.
pub fn principal_angles(p: &Projection, q: &Projection) -> Result<PrincipalAngles> {
    check_same_shape(p, q)?;
    let prod = ComplexMatrix::new(p.as_matrix() * q.as_matrix())?;
    let s = singular_values(&prod)?;
    let mut theta: Vec<f64> = s.values()[..p.rank()]
        .iter()
        .map(|v| v.clamp(0.0, 1.0).acos())
        .collect();
    theta.reverse(); // arccos of non-increasing cosines is non-decreasing
    Ok(PrincipalAngles { theta })
}

/// Angular metric `rho_phi(P, Q) = phi(theta_1, ..., theta_m, 0, ..., 0)`.
pub fn angular_metric(phi: &GaugeFunction, p: &Projection, q: &Projection) -> Result<f64> {
    let theta = principal_angles(p, q)?;
    phi.eval(&theta.padded(p.dim()))
}

/// The geodesic through `P` with `P`-codiagonal direction `X`, at time
/// `t`: the conjugation `exp(itX) P exp(-itX)`.
pub fn grassmann_geodesic(p: &Projection, x: &HermitianMatrix, t: f64) -> Result<Projection> {
    if p.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: x.dim(),
        });
    }
    let residual = codiagonal_residual(p, x);
    if residual > tol::CODIAGONAL_RESIDUAL * (1.0 + x.frobenius_norm()) {
        return Err(Error::NotCodiagonal { residual });
    }
    let u = exp_i(&x.scale(t))?;
    let moved = u.as_matrix() * p.as_matrix() * u.adjoint().as_matrix();
    Projection::new(moved)
}

/// Frobenius mass of the two diagonal blocks of `X` with respect to `P`:
/// zero exactly when `X` is `P`-codiagonal.
pub fn codiagonal_residual(p: &Projection, x: &HermitianMatrix) -> f64 {
    let n = p.dim();
    let id = DMatrix::<C64>::identity(n, n);
    let pm = p.as_matrix();
    let compl = &id - pm;
    let block_p = pm * x.as_matrix() * pm;
    let block_c = &compl * x.as_matrix() * &compl;
    block_p.norm() + block_c.norm()
}

/// Geodesic distance on the Grassmannian for the norm of `phi`:
/// `||direct_rotation(P, Q)||_phi`.
pub fn grassmann_distance(phi: &GaugeFunction, p: &Projection, q: &Projection) -> Result<f64> {
    let rotation = direct_rotation(p, q)?;
    phi.eval(rotation.exponent.singular_spectrum()?.values())
}

/// The two sides of the distance equivalence on the Grassmannian, and
/// their gap.
#[derive(Clone, Debug)]
pub struct PsiEquivalence {
    /// Geodesic distance of the pair-averaging gauge `psi` induced by
    /// `phi`: `psi(s(direct_rotation(P, Q)))`.
    pub d_psi: f64,
    /// Angle metric `rho_phi(P, Q)`.
    pub rho_phi: f64,
    /// `|d_psi - rho_phi|`; zero in exact arithmetic.
    pub gap: f64,
}

/// Evaluates both sides of the identity `d_psi = rho_phi` for a pair of
/// rank-`m` projections with `2m <= n`.  For `m > n/2`, pass the
/// complementary projections instead (see [`Projection::complement`]);
/// silent complementation is not performed because it would change which
/// subspaces the angles refer to.
pub fn psi_distance_equivalence(
    phi: &GaugeFunction,
    p: &Projection,
    q: &Projection,
) -> Result<PsiEquivalence> {
    check_same_shape(p, q)?;
    let (n, m) = (p.dim(), p.rank());
    if 2 * m > n {
        return Err(Error::RankTooLarge { m, n });
    }
    let rotation = direct_rotation(p, q)?;
    let psi = phi.induced_psi(m)?;
    let d_psi = psi.eval(rotation.exponent.singular_spectrum()?.values())?;
    let rho_phi = angular_metric(phi, p, q)?;
    Ok(PsiEquivalence {
        d_psi,
        rho_phi,
        gap: (d_psi - rho_phi).abs(),
    })
}

/// Eigenvalue multiset predicted for a direct rotation: the principal
/// angles with both signs, padded by `n - 2m` zeros, sorted non-increasing.
pub fn davis_kahan_spectrum(theta: &PrincipalAngles, n: usize) -> Vec<f64> {
    let m = theta.angles().len();
    let mut expected = Vec::with_capacity(n);
    expected.extend_from_slice(theta.angles());
    expected.resize(n - m, 0.0);
    for &t in theta.angles().iter().rev() {
        expected.push(-t);
    }
    expected
}

/// Largest absolute difference between the eigenvalues of the direct
/// rotation and the Davis-Kahan prediction `{+-theta_i} U {0}`.
pub fn davis_kahan_mismatch(
    rotation: &DirectRotation,
    theta: &PrincipalAngles,
    n: usize,
) -> Result<f64> {
    let eig = hermitian_eig(&rotation.exponent)?;
    let expected = davis_kahan_spectrum(theta, n);
    Ok(eig
        .values
        .iter()
        .zip(expected.iter())
        .fold(0.0f64, |worst, (a, b)| worst.max((a - b).abs())))
}
