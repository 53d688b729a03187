//! Dense complex matrix kernels.
//!
//! Thin validated wrappers around `nalgebra`'s dense decompositions plus the
//! handful of structured operations the rest of the crate is built on:
//! Hermitian eigendecompositions with a deterministic ordering convention,
//! singular values, the operator modulus `|T|`, the unitary exponential
//! `X -> exp(iX)` and its principal inverse.
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! * eigenvalues and singular values are reported in non-increasing order;
//! * eigenvector columns are phase-fixed (first significant entry made real
//!   and positive) so equal inputs produce bit-equal factorizations;
//! * the principal logarithm takes eigenvalue phases in `(-pi, pi]`, with
//!   a phase of exactly `-pi` mapped to `+pi`.

use nalgebra::{Complex, DMatrix, Matrix3};

use crate::error::{Error, Result};
use crate::tol;

/// Complex double-precision scalar.
pub type C64 = Complex<f64>;

pub(crate) type CMat = DMatrix<C64>;

const PI: f64 = std::f64::consts::PI;

fn is_finite_matrix(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn check_square(m: &CMat) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if !is_finite_matrix(m) {
        return Err(Error::NonFinite);
    }
    Ok(m.nrows())
}

/// A general square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    mat: CMat,
}

impl ComplexMatrix {
    /// Wraps a square matrix, rejecting non-square shapes and non-finite
    /// entries.
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        check_square(&mat)?;
        Ok(Self { mat })
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Borrows the underlying dense storage.
    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }
}

/// A Hermitian matrix, stored in exactly symmetrized form (`A == A*` holds
/// bit-for-bit, diagonal imaginary parts are zero).
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    mat: CMat,
}

fn symmetrize(mat: &CMat) -> CMat {
    let n = mat.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(mat[(i, i)].re, 0.0)
        } else if i < j {
            (mat[(i, j)] + mat[(j, i)].conj()) * 0.5
        } else {
            (mat[(j, i)] + mat[(i, j)].conj()).conj() * 0.5
        }
    })
}

impl HermitianMatrix {
    /// Wraps a matrix that is Hermitian up to the crate-wide asymmetry
    /// tolerance, then symmetrizes it exactly.
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        check_square(&mat)?;
        let defect = (&mat - mat.adjoint()).norm();
        if defect > tol::HERMITIAN_ASYMMETRY * (1.0 + mat.norm()) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self {
            mat: symmetrize(&mat),
        })
    }

    /// The zero matrix of dimension `n`.
    pub fn zeros(n: usize) -> Self {
        Self {
            mat: DMatrix::zeros(n, n),
        }
    }

    /// Diagonal matrix with the given real entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            mat: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(diag[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// Wraps a matrix already known to be exactly symmetrized.
    pub(crate) fn from_symmetrized(mat: CMat) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat }
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Borrows the underlying dense storage.
    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// View as an unstructured complex matrix.
    pub fn as_complex(&self) -> ComplexMatrix {
        ComplexMatrix {
            mat: self.mat.clone(),
        }
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    /// Eigenvalues in non-increasing order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eig(self)?.values)
    }

    /// Largest absolute eigenvalue (the operator norm).
    pub fn spectral_norm(&self) -> Result<f64> {
        let values = self.eigenvalues()?;
        Ok(values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    }

    /// Singular values (absolute eigenvalues) in non-increasing order.
    pub fn singular_spectrum(&self) -> Result<SingularSpectrum> {
        let mut s: Vec<f64> = self.eigenvalues()?.iter().map(|v| v.abs()).collect();
        s.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
        Ok(SingularSpectrum { values: s })
    }

    /// Scales by a real factor (preserves Hermitian structure exactly).
    pub fn scale(&self, factor: f64) -> Self {
        Self {
            mat: self.mat.map(|z| z * factor),
        }
    }

    /// Sum of two Hermitian matrices.  Panics on dimension mismatch; public
    /// entry points validate dimensions before arithmetic.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "Hermitian sum dimension mismatch");
        Self {
            mat: &self.mat + &other.mat,
        }
    }

    /// Difference of two Hermitian matrices.  Panics on dimension mismatch.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            self.dim(),
            other.dim(),
            "Hermitian difference dimension mismatch"
        );
        Self {
            mat: &self.mat - &other.mat,
        }
    }
}

/// A unitary matrix, validated as `||U*U - I||_F <= n * EPS_UNITARY`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    mat: CMat,
}

impl UnitaryMatrix {
    /// Wraps a matrix that is unitary to the crate-wide tolerance.
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        let n = check_square(&mat)?;
        let defect = (mat.adjoint() * &mat - DMatrix::<C64>::identity(n, n)).norm();
        if defect > n as f64 * tol::EPS_UNITARY {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Self { mat })
    }

    /// The identity of dimension `n`.
    pub fn identity(n: usize) -> Self {
        Self {
            mat: DMatrix::identity(n, n),
        }
    }

    /// Wraps a matrix already known to be unitary (products and adjoints of
    /// validated unitaries).
    pub(crate) fn from_unitary(mat: CMat) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat }
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Borrows the underlying dense storage.
    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// View as an unstructured complex matrix.
    pub fn as_complex(&self) -> ComplexMatrix {
        ComplexMatrix {
            mat: self.mat.clone(),
        }
    }

    /// Conjugate transpose, which is also the inverse.
    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    /// Product of two unitaries.  Panics on dimension mismatch; public
    /// entry points validate dimensions before composing.
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "unitary product dimension mismatch");
        Self {
            mat: &self.mat * &rhs.mat,
        }
    }

    /// Frobenius distance to another unitary of the same dimension.
    pub fn frobenius_distance(&self, rhs: &Self) -> f64 {
        (&self.mat - &rhs.mat).norm()
    }
}

/// Singular values in non-increasing order, all non-negative.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    /// The values, largest first.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest singular value (0 for an empty spectrum).
    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// Result of a Hermitian eigendecomposition `A = V diag(values) V*`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in non-increasing order.
    pub values: Vec<f64>,
    /// Matching eigenvector columns, phase-fixed.
    pub vectors: UnitaryMatrix,
}

/// Multiplies each column by a unit scalar so that its first entry of
/// modulus above `1e-9` becomes real and positive.  Makes factorizations
/// deterministic functions of the input matrix.
fn phase_fix_columns(v: &mut CMat) {
    for j in 0..v.ncols() {
        let mut anchor = None;
        for i in 0..v.nrows() {
            if v[(i, j)].norm() > 1e-9 {
                anchor = Some(v[(i, j)]);
                break;
            }
        }
        if let Some(z) = anchor {
            let phase = z.conj() / z.norm();
            for i in 0..v.nrows() {
                v[(i, j)] *= phase;
            }
        }
    }
}

/// Sorts eigenpairs by eigenvalue, non-increasing, applying the permutation
/// to the eigenvector columns.
fn sort_eigen_desc(values: &mut Vec<f64>, vectors: &mut CMat) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).expect("finite eigenvalues"));
    let sorted_values: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let mut sorted_vectors = vectors.clone();
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.set_column(dst, &vectors.column(src));
    }
    *values = sorted_values;
    *vectors = sorted_vectors;
}

/// Hermitian eigendecomposition with non-increasing eigenvalues and
/// phase-fixed eigenvectors.
pub fn hermitian_eig(a: &HermitianMatrix) -> Result<HermitianEigen> {
    let se = a
        .mat
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 50_000)
        .ok_or_else(|| Error::ConvergenceFailure("Hermitian eigensolver".into()))?;
    let mut values: Vec<f64> = se.eigenvalues.iter().copied().collect();
    let mut vectors = se.eigenvectors;
    sort_eigen_desc(&mut values, &mut vectors);
    phase_fix_columns(&mut vectors);
    Ok(HermitianEigen {
        values,
        vectors: UnitaryMatrix::from_unitary(vectors),
    })
}

/// Singular values of a square complex matrix, non-increasing.
pub fn singular_values(t: &ComplexMatrix) -> Result<SingularSpectrum> {
    let svd = t
        .mat
        .clone()
        .try_svd(false, false, f64::EPSILON, 50_000)
        .ok_or_else(|| Error::ConvergenceFailure("singular value decomposition".into()))?;
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    // Defensive: nalgebra returns them sorted, but the ordering is part of
    // this crate's contract, so enforce it.
    values.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    Ok(SingularSpectrum { values })
}

/// Operator modulus `|T| = (T* T)^{1/2}`, computed from the SVD
/// `T = W S V*` as `|T| = V S V*` so that its eigenvalues coincide exactly
/// with the reported singular values.
pub fn modulus(t: &ComplexMatrix) -> Result<HermitianMatrix> {
    let svd = t
        .mat
        .clone()
        .try_svd(true, true, f64::EPSILON, 50_000)
        .ok_or_else(|| Error::ConvergenceFailure("singular value decomposition".into()))?;
    let v_t = svd.v_t.expect("requested V from SVD");
    let v = v_t.adjoint();
    let n = t.dim();
    let mut scaled = v.clone();
    for j in 0..n {
        let s = C64::new(svd.singular_values[j], 0.0);
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    let m = scaled * v.adjoint();
    Ok(HermitianMatrix::from_symmetrized(symmetrize(&m)))
}

/// Unitary exponential `exp(iX)` of a Hermitian matrix.
pub fn exp_i(x: &HermitianMatrix) -> Result<UnitaryMatrix> {
    Ok(exp_i_with_norm(x)?.0)
}

/// Unitary exponential together with the spectral norm of the exponent,
/// from a single eigendecomposition (used by path validation, which needs
/// both).
pub(crate) fn exp_i_with_norm(x: &HermitianMatrix) -> Result<(UnitaryMatrix, f64)> {
    let eig = hermitian_eig(x)?;
    let norm = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let v = eig.vectors.as_matrix();
    let n = x.dim();
    let mut scaled = v.clone();
    for j in 0..n {
        let phase = C64::new(0.0, eig.values[j]).exp();
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    Ok((UnitaryMatrix::from_unitary(scaled * v.adjoint()), norm))
}

/// Principal logarithm of a unitary: the Hermitian `Z` with `exp(iZ) = U`
/// and eigenvalues in `(-pi, pi]` (a phase of exactly `-pi` is reported as
/// `+pi`).  `||Z||` (spectral) is at most `pi`.
pub fn principal_log(u: &UnitaryMatrix) -> Result<HermitianMatrix> {
    let eig = unitary_eig(u)?;
    let n = u.dim();
    let mut scaled = eig.vectors.clone();
    for j in 0..n {
        let p = C64::new(eig.phases[j], 0.0);
        for i in 0..n {
            scaled[(i, j)] *= p;
        }
    }
    let z = scaled * eig.vectors.adjoint();
    Ok(HermitianMatrix::from_symmetrized(symmetrize(&z)))
}

/// Spectral factorization of a unitary matrix: `U = V diag(exp(i phase)) V*`
/// with phases in `(-pi, pi]`, sorted non-increasing.
pub(crate) struct UnitaryEigen {
    pub phases: Vec<f64>,
    pub vectors: CMat,
}

/// Eigendecomposition of a unitary via joint diagonalization of its
/// commuting Hermitian parts `C = (U + U*)/2` and `S = (U - U*)/(2i)`.
///
/// A single Hermitian eigendecomposition of `C` already diagonalizes `S`
/// except inside eigenspaces of `C` shared by several eigenvalues of `S`
/// (for example the pair `exp(+-i theta)`).  Rather than splitting those
/// clusters with a fragile threshold, we run cyclic complex Jacobi sweeps
/// that minimize the joint off-diagonal energy of `(C, S)`; for commuting
/// Hermitian pairs this converges to a simultaneous diagonalization at
/// machine precision.
pub(crate) fn unitary_eig(u: &UnitaryMatrix) -> Result<UnitaryEigen> {
    let n = u.dim();
    let c_part = symmetrize(&((&u.mat + u.mat.adjoint()).map(|z| z * 0.5)));
    let minus_i = C64::new(0.0, -0.5);
    let s_part = symmetrize(&((&u.mat - u.mat.adjoint()).map(|z| z * minus_i)));

    // Warm start: diagonalize C alone.
    let se = c_part
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 50_000)
        .ok_or_else(|| Error::ConvergenceFailure("Hermitian eigensolver".into()))?;
    let mut vectors = se.eigenvectors;
    let mut a = vectors.adjoint() * &c_part * &vectors;
    let mut b = vectors.adjoint() * &s_part * &vectors;

    let scale = (a.norm().powi(2) + b.norm().powi(2)).sqrt().max(1.0);
    let off_energy = |a: &CMat, b: &CMat| -> f64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[(i, j)].norm_sqr() + b[(i, j)].norm_sqr();
                }
            }
        }
        off.sqrt()
    };

    let target = tol::JOINT_DIAG_OFF * scale * n as f64;
    let mut prev_off = f64::INFINITY;
    for _sweep in 0..tol::JOINT_DIAG_MAX_SWEEPS {
        let off = off_energy(&a, &b);
        if off <= target || off >= prev_off * 0.999 {
            break;
        }
        prev_off = off;
        for i in 0..n {
            for j in (i + 1)..n {
                if a[(i, j)].norm_sqr() + b[(i, j)].norm_sqr() <= 1e-32 {
                    continue;
                }
                let (c, s) = jacobi_rotation(&a, &b, i, j);
                if s.norm() < 1e-18 {
                    continue;
                }
                apply_similarity(&mut a, i, j, c, s);
                apply_similarity(&mut b, i, j, c, s);
                apply_right_rotation(&mut vectors, i, j, c, s);
            }
        }
    }

    // Recover eigenvalue phases from the joint diagonal; the eigenvalue of
    // U at column k is a_kk + i b_kk, which lies on the unit circle.  atan2
    // only uses its direction, so no modulus clamp is needed.
    let mut phases: Vec<f64> = (0..n)
        .map(|k| {
            let theta = f64::atan2(b[(k, k)].re, a[(k, k)].re);
            if theta == -PI {
                PI
            } else {
                theta
            }
        })
        .collect();
    sort_eigen_desc(&mut phases, &mut vectors);
    phase_fix_columns(&mut vectors);

    // Residual gate: legitimate inputs are unitary to ~1e-8, so demand the
    // reconstruction match at that scale; anything worse is a failure of
    // the iteration, not of the input.
    let mut recon = vectors.clone();
    for j in 0..n {
        let lambda = C64::new(0.0, phases[j]).exp();
        for i in 0..n {
            recon[(i, j)] *= lambda;
        }
    }
    let residual = (recon * vectors.adjoint() - &u.mat).norm();
    if residual > 1e-6 * n as f64 {
        return Err(Error::ConvergenceFailure(format!(
            "joint diagonalization residual {residual:e}"
        )));
    }

    Ok(UnitaryEigen { phases, vectors })
}

/// Optimal complex Jacobi rotation for jointly shrinking the `(i, j)`
/// off-diagonal entries of two Hermitian matrices.  Returns `(c, s)` with
/// `c` real, `c^2 + |s|^2 = 1`, for the plane rotation with entries
/// `G_ii = c`, `G_ij = -conj(s)`, `G_ji = s`, `G_jj = c`.
///
/// The rotation is read off the principal eigenvector of the 3x3 Gram
/// matrix of the vectors `h(M) = [M_ii - M_jj, 2 Re M_ij, 2 Im M_ij]`
/// (Cardoso-Soloumiac angle computation).  For a single matrix this
/// reduces to the classical Jacobi rotation that zeroes the entry exactly.
fn jacobi_rotation(a: &CMat, b: &CMat, i: usize, j: usize) -> (f64, C64) {
    let h = |m: &CMat| -> [f64; 3] {
        [
            m[(i, i)].re - m[(j, j)].re,
            2.0 * m[(i, j)].re,
            2.0 * m[(i, j)].im,
        ]
    };
    let ha = h(a);
    let hb = h(b);
    let mut g = Matrix3::<f64>::zeros();
    for v in [ha, hb] {
        for p in 0..3 {
            for q in 0..3 {
                g[(p, q)] += v[p] * v[q];
            }
        }
    }
    let eig = g.symmetric_eigen();
    let mut top = 0;
    for k in 1..3 {
        if eig.eigenvalues[k] > eig.eigenvalues[top] {
            top = k;
        }
    }
    let mut x = eig.eigenvectors[(0, top)];
    let mut y = eig.eigenvectors[(1, top)];
    let mut z = eig.eigenvectors[(2, top)];
    if x < 0.0 {
        x = -x;
        y = -y;
        z = -z;
    }
    let r = (x * x + y * y + z * z).sqrt();
    if r < 1e-300 {
        return (1.0, C64::new(0.0, 0.0));
    }
    let c = ((x + r) / (2.0 * r)).sqrt();
    let denom = (2.0 * r * (x + r)).sqrt();
    let s = C64::new(y / denom, -z / denom);
    (c, s)
}

/// In-place similarity update `M <- G* M G` for the plane rotation used by
/// [`jacobi_rotation`].
fn apply_similarity(m: &mut CMat, i: usize, j: usize, c: f64, s: C64) {
    let n = m.nrows();
    // Columns: col_i <- c col_i + s col_j ; col_j <- -conj(s) col_i + c col_j.
    for r in 0..n {
        let mi = m[(r, i)];
        let mj = m[(r, j)];
        m[(r, i)] = mi * c + mj * s;
        m[(r, j)] = mi * (-s.conj()) + mj * c;
    }
    // Rows: row_i <- c row_i + conj(s) row_j ; row_j <- -s row_i + c row_j.
    for q in 0..n {
        let mi = m[(i, q)];
        let mj = m[(j, q)];
        m[(i, q)] = mi * c + mj * s.conj();
        m[(j, q)] = mi * (-s) + mj * c;
    }
}

/// In-place column update `V <- V G` for the same plane rotation.
fn apply_right_rotation(v: &mut CMat, i: usize, j: usize, c: f64, s: C64) {
    let n = v.nrows();
    for r in 0..n {
        let vi = v[(r, i)];
        let vj = v[(r, j)];
        v[(r, i)] = vi * c + vj * s;
        v[(r, j)] = vi * (-s.conj()) + vj * c;
    }
}
