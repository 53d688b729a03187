//! Release gate: nine end-to-end checks covering the library's central
//! guarantees, from the multiplicative triangle inequality to bitwise
//! reproducibility of the `verify` command.  Each check prints a single
//! PASS/FAIL line (visible with `--nocapture`); every check runs even if
//! an earlier one fails, and the test asserts at the end.
//!
//! Tolerances are pinned here, not read from configuration, so loosening
//! one is an auditable diff.

use std::f64::consts::PI;
use std::fmt::Display;
use std::process::Command;

use rand::Rng;
use unigeo_core::lagrangian::{parse_gauge, parse_lagrangian, GaugeFunction, Lagrangian};
use unigeo_core::matcore::{
    exp_i, hermitian_eig, principal_log, singular_values, ComplexMatrix, C64,
};
use unigeo_core::unitary_paths::{check_alignment, distance_phi, GeodesicSegment};
use unigeo_core::verify::{
    sample_haar_unitary, sample_hermitian_ball, substream, suite_grassmann, suite_minimality,
    suite_thompson, suite_uniqueness_descent, TrialConfig,
};

type Check = fn() -> Result<String, String>;

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Check); 9] = [
        (
            "multiplicative triangle inequality, 1000 trials per n in 2..=8",
            triangle_inequality_suite,
        ),
        (
            "geodesic minimality against polygonal competitors, 200 trials per n in 2..=4",
            minimality_suite,
        ),
        (
            "distance symmetry, bi-invariance and triangle law on 500 random triples",
            distance_law,
        ),
        (
            "principal log inverts exp(iX) for 1000 draws with ||X|| <= 0.9 pi",
            log_exp_round_trip,
        ),
        (
            "midpoint uniqueness by descent (50 trials, n = 3) with trace-norm control",
            uniqueness_descent_suite,
        ),
        (
            "alignment detection: 100 constructed and 100 generic triples",
            alignment_detection,
        ),
        (
            "Grassmann identities, 200 trials per (n, m) in {(4,1),(4,2),(6,2),(8,3)}",
            grassmann_suite,
        ),
        (
            "closed-form action vs 10^4-point finite-difference quadrature, 100 geodesics",
            action_quadrature,
        ),
        (
            "byte-identical verify reports across two runs with one seed",
            verify_determinism,
        ),
    ];

    let mut failures = Vec::new();
    for (index, (title, check)) in criteria.iter().enumerate() {
        let number = index + 1;
        match check() {
            Ok(detail) => println!("criterion {number} [{title}]: PASS — {detail}"),
            Err(detail) => {
                println!("criterion {number} [{title}]: FAIL — {detail}");
                failures.push(format!("criterion {number} [{title}]: {detail}"));
            }
        }
    }
    assert!(
        failures.is_empty(),
        "{} of 9 acceptance criteria failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}

fn err(e: impl Display) -> String {
    e.to_string()
}

fn gauge_specs(specs: &[&str]) -> Vec<String> {
    specs.iter().map(|s| s.to_string()).collect()
}

fn parse_gauges(specs: &[&str]) -> Result<Vec<GaugeFunction>, String> {
    specs.iter().map(|s| parse_gauge(s).map_err(err)).collect()
}

fn parse_lagrangians(specs: &[&str]) -> Result<Vec<Lagrangian>, String> {
    specs
        .iter()
        .map(|s| parse_lagrangian(s).map_err(err))
        .collect()
}

/// For every n in 2..=8, 1000 trials of 2-4 random unitary factors:
/// the principal log Z of the product satisfies
/// ||Z||_phi <= sum_j ||X_j||_phi for Schatten p in {1, 2, 3, inf} and
/// Ky Fan 2, with no excess above 1e-9.
fn triangle_inequality_suite() -> Result<String, String> {
    let gauges = gauge_specs(&[
        "schatten:1",
        "schatten:2",
        "schatten:3",
        "schatten:inf",
        "kyfan:2",
    ]);
    let mut worst = f64::NEG_INFINITY;
    for n in 2..=8usize {
        let cfg = TrialConfig {
            n,
            trials: 1000,
            seed: 1_000 + n as u64,
            tolerance: 1e-9,
            gauges: gauges.clone(),
            ..TrialConfig::default()
        };
        let report = suite_thompson(&cfg).map_err(err)?;
        worst = worst.max(report.worst_violation);
        if report.failed != 0 {
            return Err(format!(
                "n = {n}: {} of {} trials exceeded 1e-9 (worst excess {:.3e})",
                report.failed,
                cfg.trials,
                report.worst_violation
            ));
        }
    }
    Ok(format!("7000 trials, worst excess {worst:.3e}"))
}

/// For n in 2..=4 and Lagrangians {energy, Schatten 2, Schatten 1,
/// Ky Fan 1}, 200 trials of polygonal competitors through 1-4 random
/// intermediate points never undercut the geodesic action by more
/// than 1e-9.
fn minimality_suite() -> Result<String, String> {
    let lagrangians: Vec<String> = ["energy", "schatten:2", "schatten:1", "kyfan:1"]
        .map(String::from)
        .to_vec();
    let mut worst = f64::NEG_INFINITY;
    for n in 2..=4usize {
        let cfg = TrialConfig {
            n,
            trials: 200,
            seed: 2_000 + n as u64,
            tolerance: 1e-9,
            lagrangians: lagrangians.clone(),
            ..TrialConfig::default()
        };
        let report = suite_minimality(&cfg).map_err(err)?;
        worst = worst.max(report.worst_violation);
        if report.failed != 0 {
            return Err(format!(
                "n = {n}: {} of {} competitors beat the geodesic by more than 1e-9 \
                 (worst shortfall {:.3e})",
                report.failed,
                cfg.trials,
                report.worst_violation
            ));
        }
    }
    Ok(format!(
        "600 trials x 4 Lagrangians, worst shortfall {worst:.3e}"
    ))
}

/// 500 random triples (U, V, W) with a random conjugator G, n = 5:
/// d(U,V) = d(V,U) = d(GU,GV) = d(UG,VG) and
/// d(U,V) <= d(U,W) + d(W,V), all within 1e-9, for the four default
/// gauges.
fn distance_law() -> Result<String, String> {
    const TOL: f64 = 1e-9;
    let gauges = parse_gauges(&["schatten:1", "schatten:2", "schatten:inf", "kyfan:2"])?;
    let n = 5;
    let mut worst = f64::NEG_INFINITY;
    for trial in 0..500u64 {
        let mut rng = substream(33, 30, trial);
        let u = sample_haar_unitary(n, &mut rng).map_err(err)?;
        let v = sample_haar_unitary(n, &mut rng).map_err(err)?;
        let w = sample_haar_unitary(n, &mut rng).map_err(err)?;
        let g = sample_haar_unitary(n, &mut rng).map_err(err)?;
        for phi in &gauges {
            let d_uv = distance_phi(phi, &u, &v).map_err(err)?;
            let symmetry = (distance_phi(phi, &v, &u).map_err(err)? - d_uv).abs();
            let left = (distance_phi(phi, &g.compose(&u), &g.compose(&v)).map_err(err)? - d_uv)
                .abs();
            let right = (distance_phi(phi, &u.compose(&g), &v.compose(&g)).map_err(err)? - d_uv)
                .abs();
            let triangle = d_uv
                - distance_phi(phi, &u, &w).map_err(err)?
                - distance_phi(phi, &w, &v).map_err(err)?;
            for (law, violation) in [
                ("symmetry", symmetry),
                ("left invariance", left),
                ("right invariance", right),
                ("triangle inequality", triangle),
            ] {
                worst = worst.max(violation);
                if violation > TOL {
                    return Err(format!(
                        "trial {trial}, gauge {}: {law} violated by {violation:.3e}",
                        phi.label()
                    ));
                }
            }
        }
    }
    Ok(format!(
        "500 triples x 4 gauges, worst violation {worst:.3e}"
    ))
}

/// 1000 random Hermitian X with ||X|| <= 0.9 pi, n = 6:
/// ||principal_log(exp(iX)) - X||_F <= 1e-9.
fn log_exp_round_trip() -> Result<String, String> {
    const TOL: f64 = 1e-9;
    let n = 6;
    let mut worst = 0.0f64;
    for trial in 0..1000u64 {
        let mut rng = substream(44, 40, trial);
        let x = sample_hermitian_ball(n, 0.9 * PI, &mut rng).map_err(err)?;
        let back = principal_log(&exp_i(&x).map_err(err)?).map_err(err)?;
        let residual = back.sub(&x).frobenius_norm();
        worst = worst.max(residual);
        if residual > TOL {
            return Err(format!(
                "trial {trial}: round-trip residual {residual:.3e} exceeds {TOL:.0e}"
            ));
        }
    }
    Ok(format!("1000 round trips, worst residual {worst:.3e}"))
}

/// 50 descent trials at n = 3 under the energy Lagrangian: the perturbed
/// midpoint returns to the geodesic midpoint (within 1e-5) in at least
/// 48 trials, the rest may stall, and none may settle on a different
/// minimizer of equal action.  Every trial also requires the trace-norm
/// negative control to exhibit two distinct midpoints whose actions agree
/// within 1e-9.
fn uniqueness_descent_suite() -> Result<String, String> {
    let cfg = TrialConfig {
        n: 3,
        trials: 50,
        seed: 5_000,
        lagrangians: vec!["energy".into(), "schatten:1".into()],
        ..TrialConfig::default()
    };
    let report = suite_uniqueness_descent(&cfg).map_err(err)?;
    if report.failed != 0 {
        return Err(format!(
            "{} of {} trials failed (distinct minimizer or missing control pair); \
             first witness: {}",
            report.failed,
            cfg.trials,
            report
                .witnesses
                .first()
                .map(|w| w.to_string())
                .unwrap_or_default()
        ));
    }
    if report.stalled > 2 {
        return Err(format!(
            "{} stalls exceed the allowance of 2 (recovered only {} of {})",
            report.stalled,
            report.passed - report.stalled,
            cfg.trials
        ));
    }
    Ok(format!(
        "{} recovered, {} stalled, 0 distinct minimizers; control produced an \
         equal-action midpoint pair in all {} trials",
        report.passed - report.stalled,
        report.stalled,
        cfg.trials
    ))
}

/// 100 triples built as W = U exp(i t0 Z), V = U exp(iZ) recover t0
/// within 1e-8; 100 triples with an unrelated random W are reported
/// non-additive with a gap of at least 1e-6.
fn alignment_detection() -> Result<String, String> {
    let phi = parse_gauge("schatten:2").map_err(err)?;
    let n = 4;

    let mut worst_t0 = 0.0f64;
    for trial in 0..100u64 {
        let mut rng = substream(66, 60, trial);
        let u = sample_haar_unitary(n, &mut rng).map_err(err)?;
        let raw = sample_hermitian_ball(n, 1.0, &mut rng).map_err(err)?;
        // Keep ||Z|| well inside (0, pi) so t0 is identifiable and the
        // branch never flips.
        let target = (0.3 + 0.55 * rng.random::<f64>()) * PI;
        let z = raw.scale(target / raw.spectral_norm().map_err(err)?);
        let t0 = 0.1 + 0.8 * rng.random::<f64>();
        let w = u.compose(&exp_i(&z.scale(t0)).map_err(err)?);
        let v = u.compose(&exp_i(&z).map_err(err)?);
        let found = check_alignment(&phi, &u, &w, &v, 1e-8).map_err(err)?;
        if !found.additive {
            return Err(format!(
                "constructed trial {trial}: reported non-additive (gap {:.3e})",
                found.gap
            ));
        }
        let recovered = found
            .t0
            .ok_or_else(|| format!("constructed trial {trial}: no t0 recovered"))?;
        let error = (recovered - t0).abs();
        worst_t0 = worst_t0.max(error);
        if error > 1e-8 {
            return Err(format!(
                "constructed trial {trial}: t0 error {error:.3e} exceeds 1e-8"
            ));
        }
    }

    let mut min_gap = f64::INFINITY;
    for trial in 0..100u64 {
        let mut rng = substream(66, 61, trial);
        let u = sample_haar_unitary(n, &mut rng).map_err(err)?;
        let w = sample_haar_unitary(n, &mut rng).map_err(err)?;
        let v = sample_haar_unitary(n, &mut rng).map_err(err)?;
        let found = check_alignment(&phi, &u, &w, &v, 1e-8).map_err(err)?;
        if found.additive {
            return Err(format!(
                "generic trial {trial}: spuriously reported additive (gap {:.3e})",
                found.gap
            ));
        }
        min_gap = min_gap.min(found.gap);
        if found.gap < 1e-6 {
            return Err(format!(
                "generic trial {trial}: gap {:.3e} below 1e-6",
                found.gap
            ));
        }
    }
    Ok(format!(
        "worst t0 error {worst_t0:.3e}; smallest generic gap {min_gap:.3e}"
    ))
}

/// 200 random projection pairs per (n, m) in {(4,1), (4,2), (6,2), (8,3)}:
/// the rectifiable/angular distance identity, the rotation-spectrum
/// comparison, the factor-2 symmetry embedding and the conjugation
/// residual all hold (1e-8 overall, 1e-9 for the latter two).
fn grassmann_suite() -> Result<String, String> {
    let gauges = gauge_specs(&[
        "schatten:1",
        "schatten:2",
        "schatten:3",
        "schatten:inf",
        "kyfan:2",
    ]);
    let mut worst = f64::NEG_INFINITY;
    for (n, m) in [(4usize, 1usize), (4, 2), (6, 2), (8, 3)] {
        let cfg = TrialConfig {
            n,
            m,
            trials: 200,
            seed: 7_000 + (10 * n + m) as u64,
            tolerance: 1e-8,
            gauges: gauges.clone(),
            ..TrialConfig::default()
        };
        let report = suite_grassmann(&cfg).map_err(err)?;
        worst = worst.max(report.worst_violation);
        if report.failed != 0 {
            return Err(format!(
                "(n, m) = ({n}, {m}): {} of {} trials failed; first witness: {}",
                report.failed,
                cfg.trials,
                report
                    .witnesses
                    .first()
                    .map(|w| w.to_string())
                    .unwrap_or_default()
            ));
        }
    }
    Ok(format!(
        "800 pairs x 5 gauges, worst identity gap {worst:.3e}"
    ))
}

/// 100 random geodesic segments (n cycling through 2, 3, 4): the
/// closed-form action b * L(Z/b) matches a 10^4-point finite-difference
/// quadrature of L(velocity) to a relative error of 1e-4, for the energy
/// and four norm Lagrangians.
///
/// The quadrature never uses the closed form: each sample evaluates the
/// curve through the cached eigenbasis of Z, forms the forward difference
/// quotient and takes its singular values numerically.
fn action_quadrature() -> Result<String, String> {
    const TOL: f64 = 1e-4;
    const STEPS: usize = 10_000;
    let lagrangians = parse_lagrangians(&[
        "energy",
        "schatten:1",
        "schatten:2",
        "schatten:inf",
        "kyfan:2",
    ])?;
    let mut worst = 0.0f64;
    for trial in 0..100u64 {
        let mut rng = substream(88, 80, trial);
        let n = 2 + (trial as usize % 3);
        let u = sample_haar_unitary(n, &mut rng).map_err(err)?;
        let raw = sample_hermitian_ball(n, 1.0, &mut rng).map_err(err)?;
        // Bounded away from zero so relative error is well defined.
        let target = (0.2 + 0.7 * rng.random::<f64>()) * 0.9 * PI;
        let z = raw.scale(target / raw.spectral_norm().map_err(err)?);
        let b = 0.5 + 1.5 * rng.random::<f64>();
        let segment = GeodesicSegment::new(u.clone(), z.clone(), b).map_err(err)?;

        // curve(t) = U V diag(exp(i values t / b)) V*, via the
        // eigendecomposition Z = V diag(values) V* computed once.
        let eigen = hermitian_eig(&z).map_err(err)?;
        let left = u.as_matrix() * eigen.vectors.as_matrix();
        let right = eigen.vectors.as_matrix().adjoint();
        let curve = |t: f64| {
            let mut scaled = left.clone();
            for (k, lambda) in eigen.values.iter().enumerate() {
                let phase = C64::new(0.0, lambda * t / b).exp();
                for i in 0..n {
                    scaled[(i, k)] *= phase;
                }
            }
            &scaled * &right
        };

        let h = b / STEPS as f64;
        let mut prev = curve(0.0);
        let mut quadrature = vec![0.0f64; lagrangians.len()];
        for j in 1..=STEPS {
            let t = if j == STEPS { b } else { h * j as f64 };
            let next = curve(t);
            let velocity =
                ComplexMatrix::new((&next - &prev).map(|entry| entry / h)).map_err(err)?;
            let spectrum = singular_values(&velocity).map_err(err)?;
            for (sum, lagrangian) in quadrature.iter_mut().zip(&lagrangians) {
                *sum += h * lagrangian.eval_singular(spectrum.values()).map_err(err)?;
            }
            prev = next;
        }

        for (sum, lagrangian) in quadrature.iter().zip(&lagrangians) {
            let closed = segment.action(lagrangian).map_err(err)?;
            let relative = (sum - closed).abs() / closed;
            worst = worst.max(relative);
            if relative > TOL {
                return Err(format!(
                    "trial {trial} (n = {n}), {}: closed form {closed:.12e} vs quadrature \
                     {sum:.12e}, relative error {relative:.3e}",
                    lagrangian.label()
                ));
            }
        }
    }
    Ok(format!(
        "100 geodesics x 5 Lagrangians, worst relative error {worst:.3e}"
    ))
}

/// Two `verify --suite all` runs with one seed must exit 0 and produce
/// byte-identical report files and byte-identical stdout.
fn verify_determinism() -> Result<String, String> {
    let exe = env!("CARGO_BIN_EXE_unigeo");
    let dir = tempfile::tempdir().map_err(err)?;
    let mut stdouts = Vec::new();
    let mut reports = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("report-{run}.json"));
        let output = Command::new(exe)
            .args([
                "verify", "--suite", "all", "--seed", "91", "--trials", "3", "--n", "3", "--m",
                "1", "--report",
            ])
            .arg(&path)
            .env_remove("UNIGEO_SEED")
            .output()
            .map_err(err)?;
        if !output.status.success() {
            return Err(format!(
                "run {run} exited with {:?}: {}",
                output.status.code(),
                String::from_utf8_lossy(&output.stderr)
            ));
        }
        stdouts.push(output.stdout);
        reports.push(std::fs::read(&path).map_err(err)?);
    }
    if reports[0] != reports[1] {
        return Err("report files differ between identically seeded runs".into());
    }
    if stdouts[0] != stdouts[1] {
        return Err("stdout differs between identically seeded runs".into());
    }
    Ok(format!(
        "two runs, {}-byte reports identical, stdout identical",
        reports[0].len()
    ))
}
