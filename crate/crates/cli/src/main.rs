//! `ginv`: compute constrained generalized inverses, verify their identity
//! suites, and solve restricted/constrained linear systems over JSON matrix
//! files.
//!
//! Exit codes: 0 success, 1 property failure in a verification suite,
//! 2 inconsistent system, 3 precondition or input error, 4 float rank
//! ambiguity or internal verification fault.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ginv_core::bdd::{self, BddContext};
use ginv_core::error::Error;
use ginv_core::geninv;
use ginv_core::io::{self, DynMatrix};
use ginv_core::matrix::Matrix;
use ginv_core::report::VerificationReport;
use ginv_core::samples;
use ginv_core::scalar::{self, Scalar, C64, GaussQ};
use ginv_core::solver;
use ginv_core::subspace::Subspace;
use ginv_core::suites::{self, CorpusBackend, SuiteConfig, SuiteKind};

#[derive(Parser)]
#[command(
    name = "ginv",
    about = "Generalized inverses constrained to a subspace: compute, verify, solve",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendOpt {
    Exact,
    F64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComputeKind {
    /// Moore-Penrose inverse
    Mp,
    /// Drazin inverse (with index and eigenprojection)
    Drazin,
    /// Classical constrained inverse P_L (A P_L + P_Lperp)^{-1}
    Bd,
    /// Drazin-based constrained inverse P_L (A P_L + P_Lperp)^D
    Bdd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMode {
    /// A x + y = b with x in L, y in Lperp
    Restricted,
    /// P_L A x = b, returning the minimum P-norm solution and its family
    Constrained,
    /// The same minimum-norm solution through bordered determinant ratios
    Cramer,
}

#[derive(Args)]
struct CommonIo {
    /// Matrix file (JSON)
    #[arg(long)]
    matrix: PathBuf,
    /// Subspace file: a matrix whose columns span L
    #[arg(long)]
    subspace: Option<PathBuf>,
    /// Force a backend (defaults to the matrix file's tag)
    #[arg(long, value_enum)]
    backend: Option<BackendOpt>,
    /// Float equality tolerance (relative)
    #[arg(long)]
    tol: Option<f64>,
    /// Float pivot/rank threshold (relative)
    #[arg(long)]
    pivot_tol: Option<f64>,
    /// Write the result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a generalized inverse and write it as a matrix file
    Compute {
        #[arg(value_enum)]
        kind: ComputeKind,
        #[command(flatten)]
        io: CommonIo,
    },
    /// Run identity/characterization suites on a fixed instance or a seeded
    /// random corpus, reporting JSON
    Verify {
        /// thm31 | thm32 | thm4 | thm5 | lemmas | solver | all
        suite: String,
        /// Optional fixed instance (otherwise a seeded corpus is used)
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        subspace: Option<PathBuf>,
        /// Probe this candidate against the thm4 characterizations
        #[arg(long)]
        candidate: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Number of random instances
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Norm-certificate samples per instance
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Rank-equation falsification attempts per instance
        #[arg(long, default_value_t = 50)]
        perturbations: usize,
        #[arg(long, value_enum, default_value = "exact")]
        backend: BackendOpt,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        pivot_tol: Option<f64>,
        /// Evaluate corpus instances on multiple threads
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a restricted or constrained system
    Solve {
        #[arg(value_enum)]
        mode: SolveMode,
        #[command(flatten)]
        io: CommonIo,
        /// Right-hand side: an n x 1 matrix file
        #[arg(long)]
        rhs: PathBuf,
        /// Norm basis P (matrix file); default is a core/null split basis
        #[arg(long)]
        pnorm: Option<PathBuf>,
        /// Certificate samples (constrained mode)
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Return the unique solution with x + y in the core range
        #[arg(long)]
        enforce_core: bool,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Inconsistent(_) => 2,
        Error::RankAmbiguity { .. } | Error::Verification(_) => 4,
        _ => 3,
    }
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code_for(&err))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn apply_tols(tol: Option<f64>, pivot_tol: Option<f64>) {
    if let Some(t) = tol {
        scalar::set_float_tolerance(t);
    }
    if let Some(t) = pivot_tol {
        scalar::set_float_pivot_tolerance(t);
    }
}

/// Matrix + optional subspace coerced onto one backend.
enum Instance {
    Exact(Matrix<GaussQ>, Option<Subspace<GaussQ>>),
    Float(Matrix<C64>, Option<Subspace<C64>>),
}

fn load_instance(
    matrix: &Path,
    subspace: Option<&Path>,
    backend: Option<BackendOpt>,
) -> Result<Instance, Error> {
    let m = io::parse_matrix_file(matrix)?;
    let span = subspace.map(io::parse_subspace_file).transpose()?;
    let target = backend.unwrap_or(match m {
        DynMatrix::Exact(_) => BackendOpt::Exact,
        DynMatrix::Float(_) => BackendOpt::F64,
    });
    match target {
        BackendOpt::Exact => {
            let m = m.as_exact()?.clone();
            let l = match span {
                None => None,
                Some(s) => Some(s.as_exact()?.clone()),
            };
            Ok(Instance::Exact(m, l))
        }
        BackendOpt::F64 => {
            let m = m.into_float();
            let l = span.map(io::DynSubspace::into_float).transpose()?;
            Ok(Instance::Float(m, l))
        }
    }
}

fn require_subspace<S: Scalar>(l: Option<Subspace<S>>) -> Result<Subspace<S>, Error> {
    l.ok_or_else(|| Error::shape("this command needs --subspace"))
}

fn compute_generic<S: Scalar>(
    kind: ComputeKind,
    a: Matrix<S>,
    l: Option<Subspace<S>>,
) -> Result<Matrix<S>, Error> {
    match kind {
        ComputeKind::Mp => geninv::moore_penrose(&a),
        ComputeKind::Drazin => Ok(geninv::drazin(&a)?.d_inverse),
        ComputeKind::Bd => bdd::bott_duffin(&a, &require_subspace(l)?),
        ComputeKind::Bdd => bdd::bdd_inverse(&a, &require_subspace(l)?),
    }
}

fn run_compute(kind: ComputeKind, io_args: CommonIo) -> Result<(), Error> {
    apply_tols(io_args.tol, io_args.pivot_tol);
    let text = match load_instance(
        &io_args.matrix,
        io_args.subspace.as_deref(),
        io_args.backend,
    )? {
        Instance::Exact(a, l) => io::exact_matrix_to_json(&compute_generic(kind, a, l)?),
        Instance::Float(a, l) => io::float_matrix_to_json(&compute_generic(kind, a, l)?),
    };
    emit(&io_args.out, &text)
}

fn suite_kinds(name: &str) -> Result<Vec<SuiteKind>, Error> {
    if name == "all" {
        Ok(SuiteKind::ALL.to_vec())
    } else {
        Ok(vec![name.parse()?])
    }
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    suite: String,
    matrix: Option<PathBuf>,
    subspace: Option<PathBuf>,
    candidate: Option<PathBuf>,
    cfg: SuiteConfig,
    count: usize,
    backend: BackendOpt,
    parallel: bool,
    out: Option<PathBuf>,
) -> Result<bool, Error> {
    let kinds = suite_kinds(&suite)?;
    let report: VerificationReport = match (&matrix, &candidate) {
        (Some(mpath), None) => {
            let inst = load_instance(mpath, subspace.as_deref(), Some(backend))?;
            match inst {
                Instance::Exact(a, l) => {
                    suites::run_fixed(&suite, &kinds, &a, &require_subspace(l)?, &cfg)
                }
                Instance::Float(a, l) => {
                    suites::run_fixed(&suite, &kinds, &a, &require_subspace(l)?, &cfg)
                }
            }
        }
        (Some(mpath), Some(cpath)) => {
            let inst = load_instance(mpath, subspace.as_deref(), Some(backend))?;
            let cand = io::parse_matrix_file(cpath)?;
            match inst {
                Instance::Exact(a, l) => {
                    let ctx = BddContext::new(a, require_subspace(l)?)
                        .map_err(candidate_context_error)?;
                    let entries = suites::thm4_candidate_suite(&ctx, cand.as_exact()?)?;
                    candidate_report(&suite, "exact", ctx.a(), entries)
                }
                Instance::Float(a, l) => {
                    let ctx = BddContext::new(a, require_subspace(l)?)
                        .map_err(candidate_context_error)?;
                    let entries = suites::thm4_candidate_suite(&ctx, &cand.into_float())?;
                    candidate_report(&suite, "f64", ctx.a(), entries)
                }
            }
        }
        (None, Some(_)) => {
            return Err(Error::shape("--candidate needs --matrix and --subspace"));
        }
        (None, None) => {
            // seeded corpus, with the two known worked instances prepended
            let corpus_backend = match backend {
                BackendOpt::Exact => CorpusBackend::Exact,
                BackendOpt::F64 => CorpusBackend::Float,
            };
            let mut instances = Vec::new();
            for sample in [sample_instance_a(), sample_instance_b()] {
                let (a, l) = sample;
                let rep = match corpus_backend {
                    CorpusBackend::Exact => suites::run_fixed(&suite, &kinds, &a, &l, &cfg),
                    CorpusBackend::Float => {
                        let fa = io::to_float(&a);
                        let fl = Subspace::from_span(&io::to_float(l.basis()))?;
                        suites::run_fixed(&suite, &kinds, &fa, &fl, &cfg)
                    }
                };
                instances.extend(rep.instances);
            }
            let mut report =
                suites::run_corpus(&suite, &kinds, corpus_backend, &cfg, count, parallel);
            let mut all = instances;
            all.append(&mut report.instances);
            VerificationReport::new(
                suite.clone(),
                report.backend.clone(),
                Some(cfg.seed),
                all,
            )
        }
    };
    let failed = report.has_failures();
    let text = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Io(format!("report serialization: {e}")))?;
    emit(&out, &text)?;
    Ok(failed)
}

fn candidate_context_error(e: Error) -> Error {
    Error::shape(format!("candidate probe needs a valid instance: {e}"))
}

fn candidate_report<S: Scalar>(
    suite: &str,
    backend: &str,
    a: &Matrix<S>,
    entries: Vec<ginv_core::report::PropertyEntry>,
) -> VerificationReport {
    let descriptor = ginv_core::report::InstanceDescriptor {
        backend: backend.into(),
        n: a.rows(),
        matrix_hash: a.content_hash(),
        subspace_hash: String::new(),
        seed: None,
        instance: None,
    };
    VerificationReport::new(
        suite,
        backend,
        None,
        vec![ginv_core::report::InstanceReport::new(descriptor, entries)],
    )
}

fn sample_instance_a() -> (Matrix<GaussQ>, Subspace<GaussQ>) {
    let s = samples::sample_a();
    (s.a, s.l)
}

fn sample_instance_b() -> (Matrix<GaussQ>, Subspace<GaussQ>) {
    let s = samples::sample_b();
    (s.a, s.l)
}

#[allow(clippy::too_many_arguments)]
fn solve_generic<S: Scalar>(
    mode: SolveMode,
    a: Matrix<S>,
    l: Subspace<S>,
    rhs: Matrix<S>,
    pnorm: Option<Matrix<S>>,
    samples: usize,
    seed: u64,
    enforce_core: bool,
    render: impl Fn(&Matrix<S>) -> serde_json::Value,
) -> Result<serde_json::Value, Error> {
    let ctx = BddContext::new(a, l)?;
    match mode {
        SolveMode::Restricted => {
            let sol = solver::solve_restricted(&ctx, &rhs, enforce_core)?;
            Ok(serde_json::json!({
                "mode": "restricted",
                "x": render(&sol.x),
                "y": render(&sol.y),
                "unique": sol.unique,
                "family_generator": render(&sol.family_generator),
            }))
        }
        SolveMode::Constrained => {
            let sol = solver::solve_constrained(&ctx, &rhs)?;
            let pnorm = match pnorm {
                Some(p) => solver::PNorm::new(p)
                    .map_err(|e| Error::shape(format!("bad pnorm basis: {e}")))?,
                None => solver::PNorm::split_basis(&ctx)?,
            };
            let cert = solver::min_p_norm_certify(&ctx, &rhs, &pnorm, samples, seed)?;
            Ok(serde_json::json!({
                "mode": "constrained",
                "x_min": render(&sol.x_min),
                "family_generator": render(&sol.family_generator),
                "certificate": {
                    "samples": cert.samples,
                    "norm_violations": cert.norm_violations,
                    "residual_violations": cert.residual_violations,
                },
            }))
        }
        SolveMode::Cramer => {
            let x = solver::cramer_min_p_norm(&ctx, &rhs)?;
            Ok(serde_json::json!({
                "mode": "cramer",
                "x": render(&x),
            }))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_solve(
    mode: SolveMode,
    io_args: CommonIo,
    rhs: PathBuf,
    pnorm: Option<PathBuf>,
    samples: usize,
    seed: u64,
    enforce_core: bool,
) -> Result<(), Error> {
    apply_tols(io_args.tol, io_args.pivot_tol);
    let inst = load_instance(
        &io_args.matrix,
        io_args.subspace.as_deref(),
        io_args.backend,
    )?;
    let rhs_m = io::parse_matrix_file(&rhs)?;
    let pnorm_m = pnorm.as_deref().map(io::parse_matrix_file).transpose()?;
    let value = match inst {
        Instance::Exact(a, l) => {
            let rhs = rhs_m.as_exact()?.clone();
            let pn = match pnorm_m {
                None => None,
                Some(p) => Some(p.as_exact()?.clone()),
            };
            solve_generic(
                mode,
                a,
                require_subspace(l)?,
                rhs,
                pn,
                samples,
                seed,
                enforce_core,
                |m| {
                    serde_json::from_str(&io::exact_matrix_to_json(m))
                        .expect("matrix json is valid")
                },
            )?
        }
        Instance::Float(a, l) => {
            let rhs = rhs_m.into_float();
            let pn = pnorm_m.map(DynMatrix::into_float);
            solve_generic(
                mode,
                a,
                require_subspace(l)?,
                rhs,
                pn,
                samples,
                seed,
                enforce_core,
                |m| {
                    serde_json::from_str(&io::float_matrix_to_json(m))
                        .expect("matrix json is valid")
                },
            )?
        }
    };
    let text = serde_json::to_string_pretty(&value)
        .map_err(|e| Error::Io(format!("solution serialization: {e}")))?;
    emit(&io_args.out, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Compute { kind, io } => match run_compute(kind, io) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        },
        Command::Verify {
            suite,
            matrix,
            subspace,
            candidate,
            seed,
            count,
            samples,
            perturbations,
            backend,
            tol,
            pivot_tol,
            parallel,
            out,
        } => {
            apply_tols(tol, pivot_tol);
            let cfg = SuiteConfig {
                seed,
                perturbations,
                samples,
            };
            match run_verify(
                suite, matrix, subspace, candidate, cfg, count, backend, parallel, out,
            ) {
                Ok(false) => ExitCode::SUCCESS,
                Ok(true) => ExitCode::from(1),
                Err(e) => fail(e),
            }
        }
        Command::Solve {
            mode,
            io,
            rhs,
            pnorm,
            samples,
            seed,
            enforce_core,
        } => match run_solve(mode, io, rhs, pnorm, samples, seed, enforce_core) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        },
    }
}
