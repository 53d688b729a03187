//! Seeded random samplers for verification trials.
//!
//! All randomness flows through [`substream`], which derives an
//! independent ChaCha8 stream from `(seed, suite, trial)`.  ChaCha is a
//! counter-based generator, so every trial owns its own stream and the
//! resulting data is identical whether trials run sequentially or on a
//! thread pool.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::grassmann::{projection_from_basis, Projection};
use crate::matcore::{C64, HermitianMatrix, UnitaryMatrix};

/// Deterministic RNG for one trial: seeds ChaCha8 with `seed` and selects
/// the stream `(suite << 32) + trial`.  Distinct `(suite, trial)` pairs
/// get non-overlapping streams for any `trial < 2^32`.
pub fn substream(seed: u64, suite: u32, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((suite as u64) << 32).wrapping_add(trial));
    rng
}

fn gaussian_complex(n: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Draws a Haar-distributed `n x n` unitary: QR of a complex Gaussian
/// matrix with the diagonal of `R` rotated to be real positive (without
/// the phase correction the QR convention would bias the distribution).
pub fn sample_haar_unitary(n: usize, rng: &mut impl Rng) -> Result<UnitaryMatrix> {
    let g = gaussian_complex(n, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let modulus = d.norm();
        let phase = if modulus > 0.0 {
            d / modulus
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::new(q)
}

/// Draws a Hermitian matrix with spectral norm at most `radius`: a
/// symmetrized Gaussian rescaled so its norm is uniform on `(0, radius)`.
pub fn sample_hermitian_ball(n: usize, radius: f64, rng: &mut impl Rng) -> Result<HermitianMatrix> {
    let g = gaussian_complex(n, rng);
    let sym = HermitianMatrix::new((&g + g.adjoint()).map(|z| z * 0.5))?;
    let norm = sym.spectral_norm()?;
    if norm == 0.0 {
        return Ok(HermitianMatrix::zeros(n));
    }
    let target = radius * rng.random::<f64>();
    Ok(sym.scale(target / norm))
}

/// Draws a rank-`m` projection: the span of the first `m` columns of a
/// Haar unitary (a uniformly distributed point of the Grassmannian).
pub fn sample_projection(n: usize, m: usize, rng: &mut impl Rng) -> Result<Projection> {
    let u = sample_haar_unitary(n, rng)?;
    let basis = u.as_matrix().columns(0, m).into_owned();
    projection_from_basis(&basis)
}
