//! `unigeo` — geodesic distances, direct rotations, principal angles and
//! randomized verification for the unitary group and the Grassmannian.
//!
//! Exit codes: 0 on success, 1 on usage or input errors (with a one-line
//! diagnostic on stderr), 2 when `verify` finds a property violation.
//! All numeric output is printed with `{}` formatting, i.e. the shortest
//! decimal that parses back to the same double, locale-independent.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use unigeo_core::grassmann::{angular_metric, direct_rotation, grassmann_distance, principal_angles};
use unigeo_core::json::{MatrixJson, PathJson, ProjectionJson};
use unigeo_core::lagrangian::{parse_gauge, parse_lagrangian};
use unigeo_core::matcore::principal_log;
use unigeo_core::unitary_paths::{action, geodesic_between};
use unigeo_core::verify::{
    run_all, suite_grassmann, suite_minimality, suite_thompson, suite_uniqueness_descent,
    SuiteReport, TrialConfig,
};
use unigeo_core::{grassmann::Projection, UnitaryMatrix};

const PI: f64 = std::f64::consts::PI;

#[derive(Parser)]
#[command(
    name = "unigeo",
    version,
    about = "Geodesics, invariant norms and angle metrics on U(n) and the Grassmannian"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geodesic distance between two unitaries; prints the distance and
    /// the spectral norm of the relative principal log, one per line
    Dist {
        /// JSON file with the first unitary ({"re": [[..]], "im": [[..]]})
        u: PathBuf,
        /// JSON file with the second unitary
        v: PathBuf,
        /// Gauge specifier: schatten:<p>, schatten:inf, or kyfan:<k>
        #[arg(long, default_value = "schatten:2")]
        norm: String,
    },
    /// Sample the geodesic between two unitaries as a polygonal path
    Geodesic {
        /// JSON file with the start unitary
        u: PathBuf,
        /// JSON file with the end unitary
        v: PathBuf,
        /// Horizon (parameter length) of the path
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Number of segments (the path samples K+1 uniform times)
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Output path for the polygonal-path JSON
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Action of a polygonal path under a symmetric Lagrangian
    Action {
        /// JSON file with the polygonal path
        path: PathBuf,
        /// Lagrangian specifier: energy, schatten:<p>, schatten:inf, kyfan:<k>
        #[arg(long, default_value = "energy")]
        lagrangian: String,
    },
    /// Principal angles between two equal-rank subspaces, and the angle
    /// metric for each requested norm
    Angles {
        /// JSON file with the first projection (full matrix or {"basis": ..})
        p: PathBuf,
        /// JSON file with the second projection
        q: PathBuf,
        /// Gauge specifier for an angle metric line (repeatable)
        #[arg(long = "norm")]
        norms: Vec<String>,
        /// Print angles and angle metrics in degrees instead of radians
        #[arg(long)]
        degrees: bool,
    },
    /// Hermitian exponent of the direct rotation carrying P onto Q
    Rotation {
        /// JSON file with the first projection
        p: PathBuf,
        /// JSON file with the second projection
        q: PathBuf,
        /// Output file for the exponent JSON (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Geodesic distance on the Grassmannian between two subspaces
    Grassdist {
        /// JSON file with the first projection
        p: PathBuf,
        /// JSON file with the second projection
        q: PathBuf,
        /// Gauge specifier
        #[arg(long, default_value = "schatten:2")]
        norm: String,
    },
    /// Run randomized verification suites and write a JSON report
    Verify {
        /// Suite to run: thompson, minimality, uniqueness, grassmann, or all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Matrix dimension
        #[arg(long)]
        n: Option<usize>,
        /// Projection rank for the Grassmann suite
        #[arg(long)]
        m: Option<usize>,
        /// Trials per suite
        #[arg(long)]
        trials: Option<usize>,
        /// Root seed (default: the UNIGEO_SEED environment variable, else 42)
        #[arg(long)]
        seed: Option<u64>,
        /// Violation tolerance
        #[arg(long)]
        tol: Option<f64>,
        /// Report file; written atomically (temp file + rename)
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (e.g. `unigeo rotation .. | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(violation_found) => {
            if violation_found {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// Executes one subcommand; `Ok(true)` means a verification suite found a
/// property violation (exit code 2).
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Dist { u, v, norm } => {
            let phi = parse_gauge(&norm)?;
            let u = read_unitary(&u)?;
            let v = read_unitary(&v)?;
            let z = principal_log(&u.adjoint().compose(&v))?;
            let distance = phi.eval(z.singular_spectrum()?.values())?;
            let z_norm = z.spectral_norm()?;
            if z_norm >= PI - 1e-9 {
                eprintln!(
                    "warning: the relative principal log has norm within 1e-9 of pi; \
                     the endpoints are antipodal and the minimizing geodesic is not unique"
                );
            }
            println!("{distance}");
            println!("{z_norm}");
            Ok(false)
        }
        Command::Geodesic {
            u,
            v,
            b,
            samples,
            output,
        } => {
            if samples < 1 {
                bail!("--samples must be at least 1");
            }
            let u = read_unitary(&u)?;
            let v = read_unitary(&v)?;
            let segment = geodesic_between(&u, &v, b)?;
            let path = segment.to_polygonal(samples)?;
            write_json_atomic(&output, &PathJson::from_path(&path))?;
            Ok(false)
        }
        Command::Action { path, lagrangian } => {
            let density = parse_lagrangian(&lagrangian)?;
            let path = read_json::<PathJson>(&path)?.to_path()?;
            println!("{}", action(&density, &path)?);
            Ok(false)
        }
        Command::Angles {
            p,
            q,
            norms,
            degrees,
        } => {
            let p = read_projection(&p)?;
            let q = read_projection(&q)?;
            let theta = principal_angles(&p, &q)?;
            let unit = if degrees { 180.0 / PI } else { 1.0 };
            let line: Vec<String> = theta
                .angles()
                .iter()
                .map(|t| format!("{}", t * unit))
                .collect();
            println!("{}", line.join(" "));
            for spec in &norms {
                let phi = parse_gauge(spec)?;
                let rho = angular_metric(&phi, &p, &q)?;
                println!("{spec} {}", rho * unit);
            }
            Ok(false)
        }
        Command::Rotation { p, q, output } => {
            let p = read_projection(&p)?;
            let q = read_projection(&q)?;
            let rotation = direct_rotation(&p, &q)?;
            if rotation.boundary_non_unique {
                eprintln!(
                    "warning: the subspaces are at maximal separation; \
                     the direct rotation is not unique"
                );
            }
            let json = MatrixJson::from_complex(rotation.exponent.as_matrix());
            match output {
                Some(path) => write_json_atomic(&path, &json)?,
                None => println!("{}", serde_json::to_string_pretty(&json)?),
            }
            Ok(false)
        }
        Command::Grassdist { p, q, norm } => {
            let phi = parse_gauge(&norm)?;
            let p = read_projection(&p)?;
            let q = read_projection(&q)?;
            println!("{}", grassmann_distance(&phi, &p, &q)?);
            Ok(false)
        }
        Command::Verify {
            suite,
            n,
            m,
            trials,
            seed,
            tol,
            report,
        } => {
            let mut cfg = TrialConfig::default();
            if let Some(n) = n {
                cfg.n = n;
            }
            if let Some(m) = m {
                cfg.m = m;
            }
            if let Some(trials) = trials {
                cfg.trials = trials;
            }
            if let Some(tol) = tol {
                cfg.tolerance = tol;
            }
            cfg.seed = match seed {
                Some(seed) => seed,
                None => seed_from_env()?.unwrap_or(cfg.seed),
            };

            let reports: Vec<SuiteReport> = match suite.as_str() {
                "all" => run_all(&cfg)?,
                "thompson" => vec![suite_thompson(&cfg)?],
                "minimality" => vec![suite_minimality(&cfg)?],
                "uniqueness" => vec![suite_uniqueness_descent(&cfg)?],
                "grassmann" => vec![suite_grassmann(&cfg)?],
                other => bail!(
                    "unknown suite '{other}' (expected thompson, minimality, \
                     uniqueness, grassmann, or all)"
                ),
            };
            for r in &reports {
                let stalls = if r.stalled > 0 {
                    format!(" stalled={}", r.stalled)
                } else {
                    String::new()
                };
                println!(
                    "{}: passed={} failed={} worst_violation={}{}",
                    r.suite, r.passed, r.failed, r.worst_violation, stalls
                );
            }
            if let Some(path) = report {
                // A single named suite writes one report object; `all`
                // writes the array.
                let body = if suite == "all" {
                    serde_json::to_string_pretty(&reports)?
                } else {
                    serde_json::to_string_pretty(&reports[0])?
                };
                write_atomic(&path, body.as_bytes())?;
            }
            Ok(reports.iter().any(|r| r.failed > 0))
        }
    }
}

fn seed_from_env() -> Result<Option<u64>> {
    match std::env::var("UNIGEO_SEED") {
        Ok(text) => {
            let seed = text
                .trim()
                .parse::<u64>()
                .with_context(|| format!("UNIGEO_SEED must be a 64-bit integer, got '{text}'"))?;
            Ok(Some(seed))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(std::env::VarError::NotUnicode(_)) => bail!("UNIGEO_SEED is not valid UTF-8"),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_unitary(path: &Path) -> Result<UnitaryMatrix> {
    read_json::<MatrixJson>(path)?
        .to_unitary()
        .with_context(|| format!("validating {}", path.display()))
}

fn read_projection(path: &Path) -> Result<Projection> {
    read_json::<ProjectionJson>(path)?
        .to_projection()
        .with_context(|| format!("validating {}", path.display()))
}

fn write_json_atomic<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, serde_json::to_string_pretty(value)?.as_bytes())
}

/// Writes via a temp file in the destination directory plus rename, so a
/// partially written file is never observable at `path`.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temp file next to {}", path.display()))?;
    tmp.write_all(bytes)
        .and_then(|_| tmp.write_all(b"\n"))
        .with_context(|| format!("writing {}", path.display()))?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}
