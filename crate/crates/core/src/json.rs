//! JSON interchange for matrices, paths, and projections.
//!
//! Complex matrices are stored as separate real and imaginary row-major
//! arrays (`{"re": [[...]], "im": [[...]]}`) so files stay human-diffable.
//! Paths carry a redundant horizon `b` that must equal the final
//! breakpoint; projections may be given either as a full matrix or as an
//! orthonormal basis of their range (`{"basis": ...}`).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{projection_from_basis, Projection};
use crate::matcore::{C64, HermitianMatrix, UnitaryMatrix};
use crate::unitary_paths::PolygonalPath;

/// A dense complex matrix as parallel real/imaginary row-major arrays.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    /// Real parts, one inner array per row.
    pub re: Vec<Vec<f64>>,
    /// Imaginary parts, same shape as `re`.
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    /// Serializes a dense complex matrix.
    pub fn from_complex(mat: &DMatrix<C64>) -> Self {
        let rows = mat.nrows();
        let cols = mat.ncols();
        let mut re = vec![vec![0.0; cols]; rows];
        let mut im = vec![vec![0.0; cols]; rows];
        for i in 0..rows {
            for j in 0..cols {
                re[i][j] = mat[(i, j)].re;
                im[i][j] = mat[(i, j)].im;
            }
        }
        Self { re, im }
    }

    /// Rebuilds the dense matrix, checking that both component arrays are
    /// rectangular and congruent.
    pub fn to_complex(&self) -> Result<DMatrix<C64>> {
        let rows = self.re.len();
        if rows == 0 {
            return Err(Error::Malformed("matrix has no rows".into()));
        }
        let cols = self.re[0].len();
        if self.im.len() != rows {
            return Err(Error::Malformed(format!(
                "re has {rows} rows but im has {}",
                self.im.len()
            )));
        }
        for i in 0..rows {
            if self.re[i].len() != cols || self.im[i].len() != cols {
                return Err(Error::Malformed(format!(
                    "ragged matrix: row {i} does not have {cols} columns"
                )));
            }
        }
        Ok(DMatrix::from_fn(rows, cols, |i, j| {
            C64::new(self.re[i][j], self.im[i][j])
        }))
    }

    /// Parses and validates as a unitary matrix.
    pub fn to_unitary(&self) -> Result<UnitaryMatrix> {
        UnitaryMatrix::new(self.to_complex()?)
    }

    /// Parses and validates as a Hermitian matrix.
    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.to_complex()?)
    }

    /// Parses and validates as a projection.
    pub fn to_projection(&self) -> Result<Projection> {
        Projection::new(self.to_complex()?)
    }
}

/// A polygonal path: start node, breakpoints (including 0), and one
/// Hermitian exponent per segment.  `b` duplicates the last breakpoint
/// as a consistency check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathJson {
    /// Matrix dimension.
    pub n: usize,
    /// Horizon; must equal the last breakpoint.
    pub b: f64,
    /// Start unitary.
    pub start: MatrixJson,
    /// Segment boundaries `0 = t_0 < t_1 < ... < t_k = b`.
    pub breakpoints: Vec<f64>,
    /// Hermitian displacement of each segment.
    pub exponents: Vec<MatrixJson>,
}

impl PathJson {
    /// Serializes a path.
    pub fn from_path(path: &PolygonalPath) -> Self {
        Self {
            n: path.dim(),
            b: path.horizon(),
            start: MatrixJson::from_complex(path.start().as_matrix()),
            breakpoints: path.breakpoints().to_vec(),
            exponents: path
                .exponents()
                .iter()
                .map(|x| MatrixJson::from_complex(x.as_matrix()))
                .collect(),
        }
    }

    /// Rebuilds and revalidates the path.
    pub fn to_path(&self) -> Result<PolygonalPath> {
        let start = self.start.to_unitary()?;
        if start.dim() != self.n {
            return Err(Error::Malformed(format!(
                "declared n={} but start matrix is {}x{}",
                self.n,
                start.dim(),
                start.dim()
            )));
        }
        match self.breakpoints.last() {
            Some(&last) if (last - self.b).abs() <= 1e-12 * self.b.abs().max(1.0) => {}
            Some(&last) => {
                return Err(Error::Malformed(format!(
                    "horizon b={} disagrees with final breakpoint {last}",
                    self.b
                )))
            }
            None => return Err(Error::Malformed("empty breakpoint list".into())),
        }
        let exponents = self
            .exponents
            .iter()
            .map(|m| m.to_hermitian())
            .collect::<Result<Vec<_>>>()?;
        PolygonalPath::new(start, self.breakpoints.clone(), exponents)
    }
}

/// A projection given either by an orthonormal basis of its range or as
/// a full matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProjectionJson {
    /// `{"basis": n x m matrix}` with orthonormal columns.
    Basis {
        /// Orthonormal columns spanning the range.
        basis: MatrixJson,
    },
    /// Full `n x n` projection matrix.
    Full(MatrixJson),
}

impl ProjectionJson {
    /// Serializes a projection as a full matrix.
    pub fn from_projection(p: &Projection) -> Self {
        Self::Full(MatrixJson::from_complex(p.as_matrix()))
    }

    /// Parses and validates the projection.
    pub fn to_projection(&self) -> Result<Projection> {
        match self {
            Self::Basis { basis } => projection_from_basis(&basis.to_complex()?),
            Self::Full(mat) => mat.to_projection(),
        }
    }
}
