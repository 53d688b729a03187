//! Curves in the unitary group: geodesic segments, polygonal (broken
//! geodesic) paths, the action functional, rectifiable length and distance,
//! and additive-alignment detection.
//!
//! A geodesic segment is `t -> U exp(i (t/b) Z)` on `[0, b]` with `Z`
//! Hermitian and spectral norm at most `pi`.  A polygonal path glues such
//! segments over a partition `0 = t_0 < t_1 < ... < t_k = b`; its action
//! under a Lagrangian `L` has the closed form
//! `sum_j (t_j - t_{j-1}) L(X_j / (t_j - t_{j-1}))`, and its length under a
//! gauge `phi` is `sum_j ||X_j||_phi`.  The geodesic between two unitaries
//! carries the exponent `Z = principal_log(U* V)`, which realizes the
//! distance `d_phi(U, V) = ||Z||_phi` for every gauge simultaneously.

use crate::error::{Error, Result};
use crate::lagrangian::{GaugeFunction, Lagrangian};
use crate::matcore::{exp_i, principal_log, HermitianMatrix, UnitaryMatrix};
use crate::optim::golden_section_min;
use crate::tol;

const PI: f64 = std::f64::consts::PI;

/// One geodesic arc `t -> start * exp(i (t/horizon) exponent)` on
/// `[0, horizon]`.
#[derive(Clone, Debug)]
pub struct GeodesicSegment {
    start: UnitaryMatrix,
    exponent: HermitianMatrix,
    horizon: f64,
    exponent_norm: f64,
}

impl GeodesicSegment {
    /// Builds a segment; the exponent spectral norm must not exceed `pi`
    /// (up to a round-off slack) and the horizon must be positive.
    pub fn new(start: UnitaryMatrix, exponent: HermitianMatrix, horizon: f64) -> Result<Self> {
        if start.dim() != exponent.dim() {
            return Err(Error::DimensionMismatch {
                left: start.dim(),
                right: exponent.dim(),
            });
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidPath(format!(
                "horizon must be positive and finite, got {horizon}"
            )));
        }
        let exponent_norm = exponent.spectral_norm()?;
        if exponent_norm > PI + tol::SPECTRAL_SLACK {
            return Err(Error::InvalidPath(format!(
                "exponent spectral norm {exponent_norm} exceeds pi"
            )));
        }
        Ok(Self {
            start,
            exponent,
            horizon,
            exponent_norm,
        })
    }

    /// Left endpoint.
    pub fn start(&self) -> &UnitaryMatrix {
        &self.start
    }

    /// Total displacement exponent `Z`.
    pub fn exponent(&self) -> &HermitianMatrix {
        &self.exponent
    }

    /// Time horizon `b`.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Spectral norm of the exponent (cached at construction).
    pub fn exponent_norm(&self) -> f64 {
        self.exponent_norm
    }

    /// True when the exponent norm sits at the branch boundary `pi`, where
    /// a second distinct geodesic with the same endpoints exists.
    pub fn non_unique(&self) -> bool {
        self.exponent_norm >= PI - tol::BRANCH_BOUNDARY
    }

    /// Evaluates the segment at `t` in `[0, horizon]`.
    pub fn eval(&self, t: f64) -> Result<UnitaryMatrix> {
        if !(t >= 0.0 && t <= self.horizon) {
            return Err(Error::OutOfDomain {
                t,
                b: self.horizon,
            });
        }
        let step = exp_i(&self.exponent.scale(t / self.horizon))?;
        Ok(self.start.compose(&step))
    }

    /// Right endpoint `start * exp(i Z)`.
    pub fn endpoint(&self) -> Result<UnitaryMatrix> {
        Ok(self.start.compose(&exp_i(&self.exponent)?))
    }

    /// Action under a Lagrangian: `horizon * L(Z / horizon)` (the
    /// single-segment closed form).
    pub fn action(&self, lagrangian: &Lagrangian) -> Result<f64> {
        Ok(self.horizon * lagrangian.eval_hermitian(&self.exponent.scale(1.0 / self.horizon))?)
    }

    /// Splits the segment into `segments` equal sub-arcs with collinear
    /// exponents, as a polygonal path.
    pub fn to_polygonal(&self, segments: usize) -> Result<PolygonalPath> {
        if segments == 0 {
            return Err(Error::InvalidConfig(
                "a polygonal path needs at least one segment".into(),
            ));
        }
        let k = segments as f64;
        let mut breakpoints = Vec::with_capacity(segments + 1);
        for j in 0..=segments {
            // Hit the endpoints exactly regardless of rounding.
            breakpoints.push(if j == segments {
                self.horizon
            } else {
                self.horizon * j as f64 / k
            });
        }
        let piece = self.exponent.scale(1.0 / k);
        let exponents = vec![piece; segments];
        PolygonalPath::new(self.start.clone(), breakpoints, exponents)
    }
}

/// A broken geodesic over a partition `0 = t_0 < t_1 < ... < t_k = b`,
/// with one Hermitian exponent per segment (`||X_j|| <= pi`).
///
/// Node values `start * exp(iX_1) * ... * exp(iX_j)` are cached at
/// construction so evaluation costs one exponential.
#[derive(Clone, Debug)]
pub struct PolygonalPath {
    start: UnitaryMatrix,
    breakpoints: Vec<f64>,
    exponents: Vec<HermitianMatrix>,
    nodes: Vec<UnitaryMatrix>,
}

impl PolygonalPath {
    /// Builds and validates a path.  Requirements: `breakpoints` starts at
    /// exactly `0`, is strictly increasing and finite, has one more entry
    /// than `exponents`; every exponent matches the start dimension and has
    /// spectral norm at most `pi` (round-off slack included).
    pub fn new(
        start: UnitaryMatrix,
        breakpoints: Vec<f64>,
        exponents: Vec<HermitianMatrix>,
    ) -> Result<Self> {
        if breakpoints.len() != exponents.len() + 1 {
            return Err(Error::InvalidPath(format!(
                "{} breakpoints do not delimit {} segments",
                breakpoints.len(),
                exponents.len()
            )));
        }
        if exponents.is_empty() {
            return Err(Error::InvalidPath("path has no segments".into()));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::InvalidPath(format!(
                "first breakpoint must be 0, got {}",
                breakpoints[0]
            )));
        }
        for w in breakpoints.windows(2) {
            if !(w[1].is_finite() && w[1] > w[0]) {
                return Err(Error::InvalidPath(format!(
                    "breakpoints must increase strictly, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let n = start.dim();
        let mut nodes = Vec::with_capacity(exponents.len() + 1);
        nodes.push(start.clone());
        for x in &exponents {
            if x.dim() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: x.dim(),
                });
            }
            let (step, norm) = crate::matcore::exp_i_with_norm(x)?;
            if norm > PI + tol::SPECTRAL_SLACK {
                return Err(Error::InvalidPath(format!(
                    "segment exponent spectral norm {norm} exceeds pi"
                )));
            }
            let prev = nodes.last().expect("nodes is never empty");
            nodes.push(prev.compose(&step));
        }
        Ok(Self {
            start,
            breakpoints,
            exponents,
            nodes,
        })
    }

    /// Start point.
    pub fn start(&self) -> &UnitaryMatrix {
        &self.start
    }

    /// The partition `0 = t_0 < ... < t_k = b`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Per-segment exponents `X_1, ..., X_k`.
    pub fn exponents(&self) -> &[HermitianMatrix] {
        &self.exponents
    }

    /// Number of segments `k`.
    pub fn segment_count(&self) -> usize {
        self.exponents.len()
    }

    /// Total horizon `b`.
    pub fn horizon(&self) -> f64 {
        *self.breakpoints.last().expect("validated non-empty")
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.start.dim()
    }

    /// The path value at node `j` (after `j` segments).
    pub fn node(&self, j: usize) -> &UnitaryMatrix {
        &self.nodes[j]
    }

    /// Right endpoint.
    pub fn endpoint(&self) -> &UnitaryMatrix {
        self.nodes.last().expect("validated non-empty")
    }

    /// Evaluates the path at `t` in `[0, b]`.
    pub fn eval(&self, t: f64) -> Result<UnitaryMatrix> {
        let b = self.horizon();
        if !(t >= 0.0 && t <= b) {
            return Err(Error::OutOfDomain { t, b });
        }
        // Largest j with t_j <= t, clipped so t = b lands in the last
        // segment.
        let j = match self
            .breakpoints
            .binary_search_by(|probe| probe.partial_cmp(&t).expect("finite breakpoints"))
        {
            Ok(exact) => exact.min(self.exponents.len() - 1),
            Err(insert) => insert - 1,
        };
        let span = self.breakpoints[j + 1] - self.breakpoints[j];
        let frac = (t - self.breakpoints[j]) / span;
        let step = exp_i(&self.exponents[j].scale(frac))?;
        Ok(self.nodes[j].compose(&step))
    }
}

/// The geodesic segment from `u` to `v` over horizon `b`, with exponent
/// `Z = principal_log(u* v)`.  When `||Z||` reaches the branch boundary
/// `pi` the segment's `non_unique` flag is set (a second geodesic of equal
/// length exists).
pub fn geodesic_between(u: &UnitaryMatrix, v: &UnitaryMatrix, b: f64) -> Result<GeodesicSegment> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let z = principal_log(&u.adjoint().compose(v))?;
    GeodesicSegment::new(u.clone(), z, b)
}

/// Action of a polygonal path under a Lagrangian: the closed form
/// `sum_j (t_j - t_{j-1}) L(X_j / (t_j - t_{j-1}))`.
pub fn action(lagrangian: &Lagrangian, path: &PolygonalPath) -> Result<f64> {
    let mut total = 0.0;
    for (j, x) in path.exponents().iter().enumerate() {
        let span = path.breakpoints()[j + 1] - path.breakpoints()[j];
        total += span * lagrangian.eval_hermitian(&x.scale(1.0 / span))?;
    }
    Ok(total)
}

/// Length of a polygonal path under a gauge: `sum_j ||X_j||_phi`.
/// Invariant under refinements that split segments into collinear pieces.
pub fn length_phi(phi: &GaugeFunction, path: &PolygonalPath) -> Result<f64> {
    let mut total = 0.0;
    for x in path.exponents() {
        total += phi.eval(x.singular_spectrum()?.values())?;
    }
    Ok(total)
}

/// Geodesic distance for the unitarily invariant norm of `phi`:
/// `d_phi(u, v) = ||principal_log(u* v)||_phi`.  Well defined (and still
/// the infimum of lengths) at the branch boundary, where only the
/// minimizing curve is non-unique.
pub fn distance_phi(phi: &GaugeFunction, u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let z = principal_log(&u.adjoint().compose(v))?;
    phi.eval(z.singular_spectrum()?.values())
}

/// A curve known only through samples `points[i] = alpha(times[i])`.
///
/// Consecutive samples must stay close enough that their relative
/// logarithm is unambiguous (`||points[i] - points[i+1]|| < 2` in operator
/// norm); this is enforced when the curve is converted to a polygonal
/// path, where the relative phases are computed anyway.
#[derive(Clone, Debug)]
pub struct SampledCurve {
    times: Vec<f64>,
    points: Vec<UnitaryMatrix>,
}

impl SampledCurve {
    /// Wraps sample times and points.  Times must start at exactly `0`,
    /// increase strictly, and match the number of points (at least two);
    /// points must share one dimension.
    pub fn new(times: Vec<f64>, points: Vec<UnitaryMatrix>) -> Result<Self> {
        if times.len() != points.len() {
            return Err(Error::InvalidPath(format!(
                "{} sample times for {} points",
                times.len(),
                points.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::InvalidPath("need at least two samples".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidPath(format!(
                "first sample time must be 0, got {}",
                times[0]
            )));
        }
        for w in times.windows(2) {
            if !(w[1].is_finite() && w[1] > w[0]) {
                return Err(Error::InvalidPath(format!(
                    "sample times must increase strictly, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let n = points[0].dim();
        if let Some(p) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: p.dim(),
            });
        }
        Ok(Self { times, points })
    }

    /// Sample times.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Sample points.
    pub fn points(&self) -> &[UnitaryMatrix] {
        &self.points
    }
}

/// Interpolates a sampled curve by the polygonal path through its samples:
/// breakpoints are the sample times and `X_j = principal_log(P_{j-1}* P_j)`.
///
/// Fails with [`Error::GapTooLarge`] when a consecutive pair is separated
/// by a relative phase at the branch boundary (within `1e-9` of `pi`),
/// where the connecting geodesic is ambiguous.
pub fn polygonal_from_samples(curve: &SampledCurve) -> Result<PolygonalPath> {
    let points = curve.points();
    let mut exponents = Vec::with_capacity(points.len() - 1);
    for pair in points.windows(2) {
        let x = principal_log(&pair[0].adjoint().compose(&pair[1]))?;
        let phase = x.spectral_norm()?;
        if phase >= PI - tol::BRANCH_BOUNDARY {
            return Err(Error::GapTooLarge { phase });
        }
        exponents.push(x);
    }
    PolygonalPath::new(
        points[0].clone(),
        curve.times().to_vec(),
        exponents,
    )
}

/// Outcome of additive-alignment detection for a triple `(U, W, V)`.
#[derive(Clone, Debug)]
pub struct AlignmentReport {
    /// Whether `d(U, V)` equals `d(U, W) + d(W, V)` within the requested
    /// tolerance.
    pub additive: bool,
    /// Signed additivity excess `d(U, W) + d(W, V) - d(U, V)`
    /// (non-negative up to round-off by the triangle inequality).
    pub gap: f64,
    /// Recovered geodesic parameter with `W ~ U exp(i t0 X0)`, when
    /// additive and away from the branch boundary.
    pub t0: Option<f64>,
    /// The geodesic exponent `principal_log(U* V)`, under the same
    /// conditions as `t0`.
    pub x0: Option<HermitianMatrix>,
    /// Frobenius reconstruction error `||W - U exp(i t0 X0)||_F` at the
    /// recovered parameter.
    pub residual: Option<f64>,
}

/// Detects whether `W` lies on a minimizing geodesic from `U` to `V` by
/// testing additivity of the distance `d_phi`.
///
/// For a nondegenerate gauge, additivity forces alignment, so when the
/// distances are additive (within `tol`) and `||log(U* V)|| < pi` the
/// parameter `t0` is recovered by a golden-section search of
/// `t -> ||W - U exp(i t X0)||_F` over `[0, 1]`.  Degenerate gauges are
/// rejected: additivity would prove nothing for them.
pub fn check_alignment(
    phi: &GaugeFunction,
    u: &UnitaryMatrix,
    w: &UnitaryMatrix,
    v: &UnitaryMatrix,
    tol_additive: f64,
) -> Result<AlignmentReport> {
    if !phi.is_nondegenerate() {
        return Err(Error::NondegeneracyRequired(phi.label().to_string()));
    }
    for other in [w.dim(), v.dim()] {
        if other != u.dim() {
            return Err(Error::DimensionMismatch {
                left: u.dim(),
                right: other,
            });
        }
    }
    let d_uv = distance_phi(phi, u, v)?;
    let d_uw = distance_phi(phi, u, w)?;
    let d_wv = distance_phi(phi, w, v)?;
    let gap = d_uw + d_wv - d_uv;
    let additive = gap.abs() <= tol_additive;
    if !additive {
        return Ok(AlignmentReport {
            additive,
            gap,
            t0: None,
            x0: None,
            residual: None,
        });
    }
    let x0 = principal_log(&u.adjoint().compose(v))?;
    if x0.spectral_norm()? >= PI - tol::BRANCH_BOUNDARY {
        // At the boundary the geodesic is not unique; report additivity
        // without picking a branch.
        return Ok(AlignmentReport {
            additive,
            gap,
            t0: None,
            x0: None,
            residual: None,
        });
    }
    let objective = |t: f64| -> f64 {
        match exp_i(&x0.scale(t)) {
            Ok(step) => u.compose(&step).frobenius_distance(w),
            Err(_) => f64::INFINITY,
        }
    };
    let (t0, residual) = golden_section_min(objective, 0.0, 1.0, tol::ALIGNMENT_T, 400);
    Ok(AlignmentReport {
        additive,
        gap,
        t0: Some(t0),
        x0: Some(x0),
        residual: Some(residual),
    })
}
