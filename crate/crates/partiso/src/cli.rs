//! Command-line front end.
//!
//! Exit codes: 0 true or pass, 1 false or fail, 2 unreadable or invalid
//! input, 3 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use partiso_core::construct::{construct_similar_partial_isometry, synthesize_partial_isometry};
use partiso_core::decide::{decide_partial_isometry, decide_projection_product, Decision};
use partiso_core::jordan::{jordan_structure, JordanSpec};
use partiso_core::projections::{construct_projection_pair, construct_similar_projection_product};
use partiso_core::{CMat, Error, Tolerances};
use serde::de::DeserializeOwned;

use crate::format::{
    to_json, AnyCertificate, CertificateJson, DecisionJson, Input, MatrixJson, PairCertificateJson, SpecJson,
};
use crate::suite::{self, CaseFailure};
use crate::verify::verify;

#[derive(Debug, Parser)]
#[command(name = "partiso", version, about = "Similarity to partial isometries and to products of two projections")]
pub struct Cli {
    /// Relative singular value threshold for rank decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_rank: f64,
    /// Absolute eigenvalue clustering radius.
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub tol_cluster: f64,
    /// Absolute residual bound for certificates.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_residual: f64,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Jordan structure of a matrix.
    Analyze { matrix: PathBuf },
    /// Decide similarity to a partial isometry (or with --pp, to a product
    /// of two orthogonal projections).
    Decide {
        input: PathBuf,
        #[arg(long)]
        pp: bool,
    },
    /// Build a similar partial isometry (or projection pair) with certificate.
    Construct {
        input: PathBuf,
        #[arg(long)]
        pp: bool,
    },
    /// Recompute every residual of a certificate against the original input.
    Verify { certificate: PathBuf, original: PathBuf },
    /// Run the randomized property suites.
    Suite {
        #[arg(long, default_value_t = 8)]
        size_max: usize,
        #[arg(long, default_value_t = 25)]
        cases: usize,
        /// Rerun one recorded failing case.
        #[arg(long)]
        replay: Option<PathBuf>,
        /// Save the first failing case here for later replay.
        #[arg(long)]
        save_failure: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NumericalFailure { .. } | Error::ClusterAmbiguity { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Command output: exit code, text for standard output, diagnostics for
/// standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

enum Loaded {
    Spec(JordanSpec),
    Matrix(CMat),
}

fn load(path: &Path, tol: &Tolerances) -> Result<Loaded, Failure> {
    Ok(match read_json::<Input>(path)? {
        Input::Spec(s) => Loaded::Spec(s.to_spec(tol)?),
        Input::Matrix(m) => Loaded::Matrix(square(m.to_mat()?)?),
    })
}

fn square(m: CMat) -> Result<CMat, Failure> {
    if m.is_square() {
        Ok(m)
    } else {
        Err(Failure::Input(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())))
    }
}

fn decide(spec: &JordanSpec, pp: bool, tol: &Tolerances) -> Decision {
    if pp {
        decide_projection_product(spec, tol)
    } else {
        decide_partial_isometry(spec)
    }
}

fn verdict(d: &Decision) -> Outcome {
    Outcome::ok(if d.verdict { 0 } else { 1 }, to_json(&DecisionJson::from_decision(d)))
}

fn construct(loaded: Loaded, pp: bool, tol: &Tolerances) -> Result<Outcome, Failure> {
    let result = match (&loaded, pp) {
        (Loaded::Spec(s), false) => synthesize_partial_isometry(s, tol).map(|c| to_json(&CertificateJson::from_certificate(&c))),
        (Loaded::Matrix(a), false) => {
            construct_similar_partial_isometry(a, tol).map(|c| to_json(&CertificateJson::from_certificate(&c)))
        }
        (Loaded::Spec(s), true) => construct_projection_pair(s, tol).map(|c| to_json(&PairCertificateJson::from_certificate(&c))),
        (Loaded::Matrix(a), true) => {
            construct_similar_projection_product(a, tol).map(|c| to_json(&PairCertificateJson::from_certificate(&c)))
        }
    };
    match result {
        Ok(text) => Ok(Outcome::ok(0, text)),
        Err(Error::NotAdmissible(d)) => {
            let mut out = verdict(&d);
            out.stderr = "input is not admissible\n".into();
            Ok(out)
        }
        Err(e) => Err(e.into()),
    }
}

fn run_suite(
    seed: u64,
    size_max: usize,
    cases: usize,
    replay: Option<&Path>,
    save_failure: Option<&Path>,
    tol: &Tolerances,
) -> Result<Outcome, Failure> {
    let (first, text) = match replay {
        Some(path) => {
            let case: CaseFailure = read_json(path)?;
            match suite::replay(&case)? {
                Ok(()) => (None, format!("replay {} seed {}: passed\n", case.suite, case.seed)),
                Err(f) => {
                    let text = format!("replay {} seed {}: failed\n{}", f.suite, f.seed, to_json(&f));
                    (Some(f), text)
                }
            }
        }
        None => {
            let report = suite::run(seed, size_max, cases, tol);
            (report.first_failure.clone(), report.render())
        }
    };
    if let (Some(f), Some(path)) = (&first, save_failure) {
        fs::write(path, to_json(f)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome::ok(if first.is_some() { 1 } else { 0 }, text))
}

pub fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let tol = Tolerances::new(cli.tol_rank, cli.tol_cluster, cli.tol_residual)?;
    match &cli.command {
        Command::Analyze { matrix } => {
            let m: MatrixJson = read_json(matrix)?;
            let a = square(m.to_mat()?)?;
            let spec = jordan_structure(&a, &tol)?;
            Ok(Outcome::ok(0, to_json(&SpecJson::from_spec(&spec))))
        }
        Command::Decide { input, pp } => {
            let spec = match load(input, &tol)? {
                Loaded::Spec(s) => s,
                Loaded::Matrix(a) => jordan_structure(&a, &tol)?,
            };
            Ok(verdict(&decide(&spec, *pp, &tol)))
        }
        Command::Construct { input, pp } => construct(load(input, &tol)?, *pp, &tol),
        Command::Verify { certificate, original } => {
            let cert: AnyCertificate = read_json(certificate)?;
            let a = match load(original, &tol)? {
                Loaded::Spec(s) => s.jordan_matrix(),
                Loaded::Matrix(a) => a,
            };
            let report = verify(&cert, &a, &tol)?;
            let mut out = Outcome::ok(if report.pass { 0 } else { 1 }, to_json(&report));
            for c in report.failed() {
                out.stderr.push_str(&format!("violated: {} = {:e} > {:e}\n", c.name, c.value, c.bound));
            }
            Ok(out)
        }
        Command::Suite { size_max, cases, replay, save_failure } => {
            run_suite(cli.seed, *size_max, *cases, replay.as_deref(), save_failure.as_deref(), &tol)
        }
    }
}

/// Runs a parsed command, writing output where requested; returns the
/// process exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = match execute(cli) {
        Ok(o) => o,
        Err(f) => Outcome { code: f.code(), stdout: String::new(), stderr: format!("error: {}\n", f.message()) },
    };
    eprint!("{}", outcome.stderr);
    if !outcome.stdout.is_empty() {
        match &cli.out {
            Some(path) => {
                if let Err(e) = fs::write(path, &outcome.stdout) {
                    eprintln!("error: {}: {e}", path.display());
                    return 2;
                }
            }
            None => print!("{}", outcome.stdout),
        }
    }
    outcome.code
}
