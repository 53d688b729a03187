//! Symmetric gauge functions and the Lagrangian densities they induce.
//!
//! A *gauge* here is a symmetric, absolute norm on real vectors: invariant
//! under permutations and sign changes of the coordinates.  Applied to the
//! singular values of a matrix it induces a unitarily invariant norm.  The
//! built-in families are the Schatten `p`-norms (`p = inf` gives the
//! operator norm) and the Ky Fan `k`-norms (sum of the `k` largest values);
//! user-supplied gauges are accepted after a randomized audit of the norm
//! axioms.
//!
//! A *Lagrangian* is a density evaluated on path derivatives.  The crate
//! ships the kinetic energy `A -> ||A||_F^2`, gauge norms, and audited
//! custom symmetric densities.  Each Lagrangian carries two declared flags
//! used by the path machinery:
//!
//! * `strictly_convex` — convex-combination equality forces `A = B`;
//! * `nondegenerate` — convex-combination equality forces `A` and `B` to be
//!   parallel with a non-negative ratio.
//!
//! The flags are metadata (they select which uniqueness theorems apply);
//! [`check_nondegenerate_witness`] measures the actual equality gap on
//! concrete inputs so callers can probe the declarations.

use std::fmt;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matcore::{singular_values, ComplexMatrix, HermitianMatrix};
use crate::tol;

/// Shared callback type for user-supplied gauges and densities: maps a
/// vector of (not necessarily sorted) values to a scalar.
pub type VectorFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Fixed seed for the randomized axiom audit of custom callbacks, so that
/// acceptance of a callback is deterministic.
const AUDIT_SEED: u64 = 0x6175_6469;

#[derive(Clone)]
enum GaugeKind {
    /// `(sum |x_i|^p)^(1/p)`, with `p = inf` meaning `max |x_i|`.
    Schatten(f64),
    /// Sum of the `k` largest absolute values.
    KyFan(usize),
    /// Pair-averaging gauge induced on `2m`-dimensional spectra: sorts the
    /// absolute values, averages consecutive pairs among the top `2m`, pads
    /// with zeros and applies the base gauge.
    Induced {
        base: Box<GaugeFunction>,
        pairs: usize,
    },
    /// Audited user callback.
    Custom(VectorFn),
}

/// A symmetric gauge function (permutation- and sign-invariant norm).
#[derive(Clone)]
pub struct GaugeFunction {
    kind: GaugeKind,
    label: String,
}

impl fmt::Debug for GaugeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaugeFunction({})", self.label)
    }
}

impl GaugeFunction {
    /// Schatten `p`-gauge; `p` must be at least 1 (use `f64::INFINITY` for
    /// the sup gauge).
    pub fn schatten(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidGauge(format!(
                "schatten exponent must satisfy p >= 1, got {p}"
            )));
        }
        let label = if p.is_infinite() {
            "schatten:inf".to_string()
        } else {
            format!("schatten:{p}")
        };
        Ok(Self {
            kind: GaugeKind::Schatten(p),
            label,
        })
    }

    /// Ky Fan `k`-gauge (sum of the `k` largest absolute values); `k >= 1`.
    pub fn ky_fan(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidGauge("ky_fan order must be at least 1".into()));
        }
        Ok(Self {
            kind: GaugeKind::KyFan(k),
            label: format!("kyfan:{k}"),
        })
    }

    /// Wraps a user callback after auditing the gauge axioms (vanishing at
    /// zero, positivity, absolute homogeneity, permutation and sign
    /// invariance, triangle inequality) on a fixed randomized sample.
    pub fn custom(label: &str, f: VectorFn) -> Result<Self> {
        audit_gauge(label, &f)?;
        Ok(Self {
            kind: GaugeKind::Custom(f),
            label: label.to_string(),
        })
    }

    /// The gauge `psi` induced on ambient spectra by restriction to rank-`m`
    /// angle data: sorts absolute values, replaces the top `2m` by the `m`
    /// averages of consecutive pairs, pads with zeros and applies `self`.
    ///
    /// Evaluation fails with [`Error::RankTooLarge`] on vectors shorter
    /// than `2m`.
    pub fn induced_psi(&self, pairs: usize) -> Result<Self> {
        if pairs == 0 {
            return Err(Error::InvalidGauge(
                "induced gauge needs at least one pair".into(),
            ));
        }
        Ok(Self {
            kind: GaugeKind::Induced {
                base: Box::new(self.clone()),
                pairs,
            },
            label: format!("psi({}, m={pairs})", self.label),
        })
    }

    /// Human-readable specifier (`schatten:2`, `kyfan:3`, ...).
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Whether norm additivity `phi(x + y) = phi(x) + phi(y)` forces `x`
    /// and `y` to be parallel with non-negative ratio.  True exactly for
    /// the Schatten gauges with `1 < p < inf`; declared false for every
    /// other kind (including custom callbacks, whose flat directions we
    /// cannot rule out by sampling).
    pub fn is_nondegenerate(&self) -> bool {
        matches!(self.kind, GaugeKind::Schatten(p) if p > 1.0 && p.is_finite())
    }

    /// Evaluates the gauge on a vector of values (any order, any signs).
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        match &self.kind {
            GaugeKind::Schatten(p) => Ok(schatten_eval(*p, x)),
            GaugeKind::KyFan(k) => {
                if *k > x.len() {
                    return Err(Error::InvalidGauge(format!(
                        "kyfan:{k} needs at least {k} values, got {}",
                        x.len()
                    )));
                }
                let mut abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
                abs.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
                Ok(abs[..*k].iter().sum())
            }
            GaugeKind::Induced { base, pairs } => {
                if 2 * pairs > x.len() {
                    return Err(Error::RankTooLarge {
                        m: *pairs,
                        n: x.len(),
                    });
                }
                let mut abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
                abs.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
                let mut averaged = vec![0.0; x.len()];
                for i in 0..*pairs {
                    averaged[i] = 0.5 * (abs[2 * i] + abs[2 * i + 1]);
                }
                base.eval(&averaged)
            }
            GaugeKind::Custom(f) => {
                let v = f(x);
                if !v.is_finite() {
                    return Err(Error::InvalidGauge(format!(
                        "custom gauge '{}' returned a non-finite value",
                        self.label
                    )));
                }
                Ok(v)
            }
        }
    }
}

fn schatten_eval(p: f64, x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    if p.is_infinite() {
        return x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    }
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    if p == 2.0 {
        return x.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    // Scale out the largest value so large exponents stay in range.
    let top = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if top == 0.0 {
        return 0.0;
    }
    let sum: f64 = x.iter().map(|v| (v.abs() / top).powf(p)).sum();
    top * sum.powf(1.0 / p)
}

/// Parses a gauge specifier: `schatten:<p>` with `p >= 1` or `inf`, or
/// `kyfan:<k>` with integer `k >= 1`.
pub fn parse_gauge(spec: &str) -> Result<GaugeFunction> {
    let bad = |msg: &str| Error::InvalidGauge(format!("'{spec}': {msg}"));
    match spec.split_once(':') {
        Some(("schatten", rest)) => {
            let p = if rest.eq_ignore_ascii_case("inf") {
                f64::INFINITY
            } else {
                rest.parse::<f64>()
                    .map_err(|_| bad("exponent is not a number"))?
            };
            GaugeFunction::schatten(p)
        }
        Some(("kyfan", rest)) => {
            let k = rest
                .parse::<usize>()
                .map_err(|_| bad("order is not a positive integer"))?;
            GaugeFunction::ky_fan(k)
        }
        _ => Err(bad(
            "expected 'schatten:<p>' (p >= 1 or 'inf') or 'kyfan:<k>'",
        )),
    }
}

fn audit_gauge(label: &str, f: &VectorFn) -> Result<()> {
    let fail = |msg: String| Error::InvalidGauge(format!("custom gauge '{label}': {msg}"));
    let mut rng = ChaCha8Rng::seed_from_u64(AUDIT_SEED);
    let tol = tol::CUSTOM_AXIOM;
    for trial in 0..200 {
        let n = rng.random_range(1..=8usize);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let fx = f(&x);
        if !fx.is_finite() {
            return Err(fail(format!("non-finite value at trial {trial}")));
        }
        if f(&vec![0.0; n]).abs() > tol {
            return Err(fail("does not vanish at zero".into()));
        }
        if fx < 0.0 {
            return Err(fail("negative value".into()));
        }
        if x.iter().any(|v| v.abs() > 0.1) && fx <= 0.0 {
            return Err(fail("vanishes on a nonzero vector".into()));
        }
        // Absolute homogeneity.
        for t in [-1.5, -0.3, 0.5, 2.0] {
            let scaled: Vec<f64> = x.iter().map(|v| v * t).collect();
            let expect = t.abs() * fx;
            if (f(&scaled) - expect).abs() > tol * (1.0 + expect.abs()) {
                return Err(fail(format!("not absolutely homogeneous (t = {t})")));
            }
        }
        // Permutation and sign invariance.
        let mut permuted = x.clone();
        permuted.shuffle(&mut rng);
        for v in permuted.iter_mut() {
            if rng.random::<bool>() {
                *v = -*v;
            }
        }
        if (f(&permuted) - fx).abs() > tol * (1.0 + fx) {
            return Err(fail("not invariant under permutations and sign flips".into()));
        }
        // Triangle inequality.
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let fy = f(&y);
        if f(&sum) > fx + fy + tol * (1.0 + fx + fy) {
            return Err(fail("violates the triangle inequality".into()));
        }
    }
    Ok(())
}

#[derive(Clone)]
enum LagrangianKind {
    /// Kinetic energy: the squared Frobenius norm of the argument.
    Energy,
    /// The unitarily invariant norm induced by a gauge.
    Norm(GaugeFunction),
    /// Audited custom symmetric density on singular values.
    Custom(VectorFn),
}

/// A symmetric Lagrangian density: a convex, unitarily invariant function
/// of a matrix evaluated through its singular values.
#[derive(Clone)]
pub struct Lagrangian {
    kind: LagrangianKind,
    label: String,
    strictly_convex: bool,
    nondegenerate: bool,
}

impl fmt::Debug for Lagrangian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lagrangian({})", self.label)
    }
}

impl Lagrangian {
    /// Kinetic energy `A -> ||A||_F^2` (strictly convex and nondegenerate).
    pub fn energy() -> Self {
        Self {
            kind: LagrangianKind::Energy,
            label: "energy".to_string(),
            strictly_convex: true,
            nondegenerate: true,
        }
    }

    /// The norm density induced by a gauge.  Never strictly convex (it is
    /// positively homogeneous); nondegenerate exactly when the gauge is.
    pub fn norm(gauge: GaugeFunction) -> Self {
        let nondegenerate = gauge.is_nondegenerate();
        let label = gauge.label().to_string();
        Self {
            kind: LagrangianKind::Norm(gauge),
            label,
            strictly_convex: false,
            nondegenerate,
        }
    }

    /// Wraps a user density on singular-value vectors after auditing the
    /// symmetric-density axioms (vanishing at zero, non-negativity,
    /// permutation invariance, monotonicity, convexity, and sublinearity
    /// of `t -> L(t x)` on `[0, 1]`) on a fixed randomized sample.
    ///
    /// The convexity flags are declared by the caller; they cannot be
    /// certified by sampling and only select which uniqueness statements
    /// the path machinery is allowed to invoke.
    pub fn custom_symmetric(
        label: &str,
        f: VectorFn,
        strictly_convex: bool,
        nondegenerate: bool,
    ) -> Result<Self> {
        audit_density(label, &f)?;
        Ok(Self {
            kind: LagrangianKind::Custom(f),
            label: label.to_string(),
            strictly_convex,
            nondegenerate,
        })
    }

    /// Human-readable label used in reports.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Declared strict convexity.
    pub fn is_strictly_convex(&self) -> bool {
        self.strictly_convex
    }

    /// Declared nondegeneracy (convex-combination equality forces parallel
    /// arguments with non-negative ratio).
    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    /// Evaluates the density on a singular-value vector.
    pub fn eval_singular(&self, s: &[f64]) -> Result<f64> {
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        match &self.kind {
            LagrangianKind::Energy => Ok(s.iter().map(|v| v * v).sum()),
            LagrangianKind::Norm(g) => g.eval(s),
            LagrangianKind::Custom(f) => {
                let v = f(s);
                if !v.is_finite() {
                    return Err(Error::InvalidGauge(format!(
                        "custom density '{}' returned a non-finite value",
                        self.label
                    )));
                }
                Ok(v)
            }
        }
    }

    /// Evaluates the density on a general square matrix through its
    /// singular values.
    pub fn eval(&self, a: &ComplexMatrix) -> Result<f64> {
        let s = singular_values(a)?;
        self.eval_singular(s.values())
    }

    /// Evaluates the density on a Hermitian matrix (singular values are the
    /// absolute eigenvalues, computed by a single eigendecomposition).
    pub fn eval_hermitian(&self, x: &HermitianMatrix) -> Result<f64> {
        let s = x.singular_spectrum()?;
        self.eval_singular(s.values())
    }
}

/// Parses a Lagrangian specifier: `energy` or any gauge specifier (which
/// denotes the induced norm density).
pub fn parse_lagrangian(spec: &str) -> Result<Lagrangian> {
    if spec == "energy" {
        Ok(Lagrangian::energy())
    } else {
        Ok(Lagrangian::norm(parse_gauge(spec)?))
    }
}

fn audit_density(label: &str, f: &VectorFn) -> Result<()> {
    let fail = |msg: String| Error::InvalidGauge(format!("custom density '{label}': {msg}"));
    let mut rng = ChaCha8Rng::seed_from_u64(AUDIT_SEED ^ 0xDE05);
    let tol = tol::CUSTOM_AXIOM;
    for trial in 0..200 {
        let n = rng.random_range(1..=8usize);
        // Densities are probed on non-negative vectors, the shape of
        // singular spectra.
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
        let fx = f(&x);
        let fy = f(&y);
        if !fx.is_finite() || !fy.is_finite() {
            return Err(fail(format!("non-finite value at trial {trial}")));
        }
        if f(&vec![0.0; n]).abs() > tol {
            return Err(fail("does not vanish at zero".into()));
        }
        if fx < -tol {
            return Err(fail("negative value".into()));
        }
        let mut permuted = x.clone();
        permuted.shuffle(&mut rng);
        if (f(&permuted) - fx).abs() > tol * (1.0 + fx.abs()) {
            return Err(fail("not permutation invariant".into()));
        }
        // Monotonicity: enlarging every coordinate cannot shrink the value.
        let larger: Vec<f64> = x.iter().map(|v| v + rng.random_range(0.0..1.0)).collect();
        if f(&larger) < fx - tol * (1.0 + fx.abs()) {
            return Err(fail("not monotone in the singular values".into()));
        }
        // Convexity along a random chord.
        let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
        if f(&mid) > 0.5 * fx + 0.5 * fy + tol * (1.0 + fx + fy) {
            return Err(fail("not convex".into()));
        }
        // Sublinearity of t -> L(t x) on [0, 1] (together with L(0) = 0
        // this is convexity through the origin).
        for t in [0.25, 0.5, 0.75] {
            let scaled: Vec<f64> = x.iter().map(|v| v * t).collect();
            if f(&scaled) > t * fx + tol * (1.0 + fx) {
                return Err(fail(format!("L(t x) > t L(x) at t = {t}")));
            }
        }
    }
    Ok(())
}

/// Outcome of a convexity-equality probe: the gap
/// `lambda L(A) + (1 - lambda) L(B) - L(lambda A + (1 - lambda) B)`
/// (non-negative for convex densities) and whether `A` and `B` are
/// parallel with non-negative ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    /// Convex-combination equality gap; `0` means the combination is
    /// additive for this pair.
    pub equality_gap: f64,
    /// True when `A == s B` (or `B == 0` and `A == 0`) for some `s >= 0`,
    /// within a relative tolerance of `1e-8`.
    pub parallel: bool,
}

/// Probes the convexity equality case of a Lagrangian on a concrete pair:
/// for nondegenerate densities a (near-)zero gap should only occur for
/// (near-)parallel arguments, so a zero gap on a non-parallel pair is a
/// counterexample to the declared flag.
pub fn check_nondegenerate_witness(
    lagrangian: &Lagrangian,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
) -> Result<WitnessReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "lambda must lie strictly inside (0, 1), got {lambda}"
        )));
    }
    let combo = a.scale(lambda).add(&b.scale(1.0 - lambda));
    let equality_gap = lambda * lagrangian.eval_hermitian(a)?
        + (1.0 - lambda) * lagrangian.eval_hermitian(b)?
        - lagrangian.eval_hermitian(&combo)?;

    let a_norm = a.frobenius_norm();
    let b_norm = b.frobenius_norm();
    let rel = 1e-8 * (1.0 + a_norm.max(b_norm));
    let parallel = if b_norm <= rel {
        a_norm <= rel
    } else {
        // Best non-negative multiple of B approximating A in Frobenius
        // inner product; for Hermitian pairs the inner product is real.
        let mut inner = 0.0;
        for (x, y) in a.as_matrix().iter().zip(b.as_matrix().iter()) {
            inner += (y.conj() * x).re;
        }
        let s = (inner / (b_norm * b_norm)).max(0.0);
        a.sub(&b.scale(s)).frobenius_norm() <= rel
    };

    Ok(WitnessReport {
        equality_gap,
        parallel,
    })
}
