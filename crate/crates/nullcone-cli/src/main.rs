//! `nullcone`: classify linear Hamiltonian systems from files, count the
//! Lagrangian planes in their null-cones, decompose higher-dimensional
//! systems into blocks, and generate the reference corpus.
//!
//! Exit codes: 0 success, 1 parse/usage errors, 2 degenerate system,
//! 3 wrong dimension for the command, 4 decomposition hypothesis
//! failures.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use nullcone::census::{census, CensusError};
use nullcone::decompose::{decompose_system, DecomposeError};
use nullcone::files::{self, Metadata};
use nullcone::generate::{conjugated, CaseName};
use nullcone::oracle::oracle_census;
use nullcone::report::{
    oracle_agreement, CensusSection, DecomposeSection, OracleSection, ReportFile, SpectrumSection,
};
use nullcone::spectrum::{build_system, classify, SpectrumError};
use nullcone::DEFAULT_TOL;

#[derive(Parser)]
#[command(name = "nullcone", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the spectrum of a system file (any even dimension).
    Classify {
        path: PathBuf,
        /// Relative tolerance (overrides LC_TOL; default 1e-9).
        #[arg(long)]
        tol: Option<f64>,
        /// Write the report here instead of stdout (atomic).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count and construct all Lagrangian planes in the null-cone of a
    /// 4-dimensional system.
    Census {
        path: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        /// Also run the brute-force chart oracle and report agreement.
        #[arg(long)]
        with_oracle: bool,
        /// Chart-scan bound on the graph matrix entries.
        #[arg(long, default_value_t = 10.0)]
        oracle_bound: f64,
        /// Grid points per axis for the chart scan.
        #[arg(long, default_value_t = 21)]
        oracle_resolution: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split a system (even dimension ≥ 4) into symplectic eigenspace
    /// blocks and multiply the per-block plane counts.
    Decompose {
        path: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit a corpus system file.
    Generate {
        /// Case name, e.g. hyperbolic-quadruplet (see --case help).
        #[arg(long)]
        case: String,
        /// Comma-separated overrides, e.g. "kappa=2.0,lambda=0.5".
        #[arg(long)]
        params: Option<String>,
        /// Seed for the random symplectic conjugation.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Conjugate the form by a random symplectic matrix.
        #[arg(long)]
        conjugate: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { path, tol, output } => {
            let tol = resolve_tol(tol)?;
            let parsed = load(&path)?;
            let sys = build_system(parsed.q, parsed.w).map_err(spectrum_failure)?;
            let report = classify(&sys, tol).map_err(spectrum_failure)?;
            let mut out = ReportFile::new(tol, parsed.metadata.name.clone(), sys.dim());
            out.spectrum = Some(SpectrumSection::from_report(&report));
            emit(&out.to_json_string(), output.as_deref())
        }
        Command::Census { path, tol, with_oracle, oracle_bound, oracle_resolution, output } => {
            let tol = resolve_tol(tol)?;
            let parsed = load(&path)?;
            if parsed.q.dim() != 4 {
                return Err(Failure::new(
                    3,
                    format!(
                        "census requires dimension 4, found {}; use `decompose` for higher dimensions",
                        parsed.q.dim()
                    ),
                ));
            }
            let result = census(&parsed.q, &parsed.w, tol).map_err(census_failure)?;
            let mut out = ReportFile::new(tol, parsed.metadata.name.clone(), 4);
            let sys = build_system(parsed.q.clone(), parsed.w.clone())
                .map_err(spectrum_failure)?;
            if let Ok(spec) = classify(&sys, tol) {
                out.spectrum = Some(SpectrumSection::from_report(&spec));
            }
            out.census = Some(CensusSection::from_result(&result));
            if with_oracle {
                let oracle = oracle_census(&parsed.q, &parsed.w, oracle_bound, oracle_resolution)
                    .map_err(|e| Failure::new(1, e.to_string()))?;
                let agreement = oracle_agreement(&result, &oracle);
                out.oracle = Some(OracleSection::from_report(&oracle, Some(agreement)));
            }
            emit(&out.to_json_string(), output.as_deref())
        }
        Command::Decompose { path, tol, output } => {
            let tol = resolve_tol(tol)?;
            let parsed = load(&path)?;
            if parsed.q.dim() < 4 {
                return Err(Failure::new(
                    3,
                    format!("decompose requires dimension ≥ 4, found {}", parsed.q.dim()),
                ));
            }
            let sys = build_system(parsed.q, parsed.w).map_err(spectrum_failure)?;
            let result = decompose_system(&sys, tol).map_err(decompose_failure)?;
            if result.has_semisimple_double_block {
                return Err(Failure::new(
                    4,
                    format!(
                        "a semisimple double block shares its eigenvalues between two \
                         2-dimensional subsystems, so direct-sum enumeration does not \
                         apply (the block carries an infinite family; product count {})",
                        result.count
                    ),
                ));
            }
            let mut out = ReportFile::new(tol, parsed.metadata.name.clone(), sys.dim());
            if let Ok(spec) = classify(&sys, tol) {
                out.spectrum = Some(SpectrumSection::from_report(&spec));
            }
            out.decompose = Some(DecomposeSection::from_decomposition(&result, tol));
            emit(&out.to_json_string(), output.as_deref())
        }
        Command::Generate { case, params, seed, conjugate, output } => {
            let case = CaseName::from_str(&case).map_err(|e| Failure::new(1, e))?;
            let overrides = parse_params(params.as_deref())?;
            let mut q = case.build(&overrides).map_err(|e| Failure::new(1, e))?;
            if conjugate {
                q = conjugated(&q, seed, 1.0);
            }
            let mut description = format!("case={case}");
            for (k, v) in &overrides {
                description.push_str(&format!(" {k}={v}"));
            }
            if conjugate {
                description.push_str(&format!(" conjugated seed={seed}"));
            }
            let file = files::system_file(
                &q,
                Some(Metadata {
                    name: Some(case.as_str().to_string()),
                    description: Some(description),
                }),
            );
            emit(&files::to_json_string(&file), output.as_deref())
        }
    }
}

fn resolve_tol(flag: Option<f64>) -> Result<f64, Failure> {
    let value = match flag {
        Some(v) => v,
        None => match std::env::var("LC_TOL") {
            Ok(text) => text.trim().parse::<f64>().map_err(|_| {
                Failure::new(1, format!("LC_TOL is not a valid number: `{text}`"))
            })?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(value.is_finite() && value > 0.0) {
        return Err(Failure::new(1, format!("tolerance must be positive and finite, got {value}")));
    }
    Ok(value)
}

fn load(path: &Path) -> Result<files::ParsedSystem, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))?;
    files::parse_system_file(&text)
        .map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn parse_params(text: Option<&str>) -> Result<BTreeMap<String, f64>, Failure> {
    let mut map = BTreeMap::new();
    let Some(text) = text else { return Ok(map) };
    for piece in text.split(',').filter(|p| !p.trim().is_empty()) {
        let Some((key, value)) = piece.split_once('=') else {
            return Err(Failure::new(1, format!("parameter `{piece}` is not of the form k=v")));
        };
        let value: f64 = value.trim().parse().map_err(|_| {
            Failure::new(1, format!("parameter `{}` has a non-numeric value `{}`", key.trim(), value.trim()))
        })?;
        map.insert(key.trim().to_string(), value);
    }
    Ok(map)
}

/// Print to stdout, or write atomically (temp file + rename) next to the
/// destination.
fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let mut tmp = match dir {
                Some(dir) => tempfile::NamedTempFile::new_in(dir),
                None => tempfile::NamedTempFile::new_in("."),
            }
            .map_err(|e| Failure::new(1, format!("cannot create temporary file: {e}")))?;
            tmp.write_all(text.as_bytes())
                .map_err(|e| Failure::new(1, format!("cannot write report: {e}")))?;
            tmp.persist(path)
                .map_err(|e| Failure::new(1, format!("cannot persist {}: {e}", path.display())))?;
            Ok(())
        }
    }
}

fn spectrum_failure(e: SpectrumError) -> Failure {
    let code = match e {
        SpectrumError::DegenerateSystem { .. } => 2,
        _ => 1,
    };
    Failure::new(code, e.to_string())
}

fn census_failure(e: CensusError) -> Failure {
    let code = match e {
        CensusError::DegenerateSystem { .. } => 2,
        CensusError::WrongDimension { .. } => 3,
        _ => 1,
    };
    Failure::new(code, e.to_string())
}

fn decompose_failure(e: DecomposeError) -> Failure {
    let code = match e {
        DecomposeError::DegenerateSystem { .. } => 2,
        DecomposeError::IllSeparated { .. }
        | DecomposeError::HypothesisViolated { .. }
        | DecomposeError::SharedEigenvalues => 4,
        DecomposeError::Census(CensusError::DegenerateSystem { .. }) => 2,
        _ => 1,
    };
    Failure::new(code, e.to_string())
}
