//! Command-line driver: every subcommand loads files, calls the library and
//! prints a deterministic JSON report on standard output.
//!
//! Exit codes: `0` all checks pass, `1` validation or identity failure,
//! `2` parse / input error, `3` mode or precondition violation.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::calculus::{marginal, meet_joint, sum_observables};
use crate::error::{Error, Result};
use crate::extend::{
    check_decomposition, check_extension, component_sum, decompose_perfect, decompose_staircase,
    extend_observable, observable_eval, oracle_observable, require_uniqueness, ExtensionMode,
    Observable,
};
use crate::gen::{random_resolution, rng, seed_from_env, GenParams};
use crate::io::{
    parse_region, read_instance, read_observable, report_to_string, write_instance,
    write_observable, ObservableFile,
};
use crate::spectral::{characteristic_points, ordering_property, SpectralResolution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "lexspec",
    version,
    about = "Spectral resolutions and observables on lexicographic MV-algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check conditions (i)–(v) and report witnesses for failures.
    Validate { instance: PathBuf },
    /// List characteristic points and the ordering-property flag.
    Charpoints { instance: PathBuf },
    /// Decompose into pseudo spectral resolutions and verify their sum.
    Decompose {
        instance: PathBuf,
        /// Directory receiving one instance file per component.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Extend to an observable; `all` runs every applicable mode.
    Extend {
        instance: PathBuf,
        #[arg(long, default_value = "all")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an observable on a region expression.
    Query {
        observable: PathBuf,
        #[arg(long)]
        region: String,
    },
    /// Meet joint observable of one-dimensional instances.
    Joint {
        #[arg(required = true, num_args = 1..)]
        instances: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sum of two observables.
    Sum {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inclusion–exclusion extension.
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run all checks on random instances (seed from LEXSPEC_SEED).
    Fuzz {
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Overrides LEXSPEC_SEED.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_)
        | Error::Io(_)
        | Error::DimensionMismatch { .. }
        | Error::OutOfInterval { .. }
        | Error::InvalidGrid(_)
        | Error::RegionNotAligned(_)
        | Error::UndefinedSymbol(_) => EXIT_PARSE,
        Error::Precondition(_) | Error::CharacteristicPoint(_) | Error::ReversedInterval { .. } => {
            EXIT_PRECONDITION
        }
        Error::InvalidResolution(_)
        | Error::IdentityViolation(_)
        | Error::UndefinedPartialOp(_) => EXIT_FAIL,
    }
}

/// Parse `args` (including the program name) and run; reports go to `out`,
/// diagnostics to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    out.write_all(report_to_string(v)?.as_bytes())?;
    Ok(())
}

fn verdict(ok: bool) -> (&'static str, i32) {
    if ok {
        ("pass", EXIT_OK)
    } else {
        ("fail", EXIT_FAIL)
    }
}

fn obs_json(x: &Observable) -> Result<Value> {
    Ok(serde_json::to_value(ObservableFile::from_observable(x))?)
}

fn maybe_write(path: &Option<PathBuf>, x: &Observable) -> Result<()> {
    match path {
        Some(p) => write_observable(p, x),
        None => Ok(()),
    }
}

fn execute(cmd: &Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Validate { instance } => {
            let sr = read_instance(instance)?;
            let report = sr.report();
            let (v, code) = verdict(report.is_valid());
            let summary = format!("conditions (i)-(v): {v}");
            emit(
                out,
                &json!({ "records": report, "summary": summary, "verdict": v }),
            )?;
            Ok(code)
        }
        Command::Charpoints { instance } => {
            let sr = read_instance(instance)?;
            let pts = characteristic_points(&sr);
            emit(
                out,
                &json!({ "ordering_property": ordering_property(&pts), "points": pts }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Decompose { instance, out_dir } => {
            let sr = valid_instance(instance)?;
            let comps = if sr.ctx().is_perfect() && characteristic_points(&sr).len() == 1 {
                decompose_perfect(&sr)?
            } else {
                decompose_staircase(&sr)?
            };
            let identity = check_decomposition(&sr, &comps).is_ok();
            let agrees = component_sum(&sr)?.same_masses(&oracle_observable(&sr)?);
            let mut listed = Vec::new();
            for c in &comps {
                let name = format!(
                    "component_{}.json",
                    c.label
                        .iter()
                        .map(i64::to_string)
                        .collect::<Vec<_>>()
                        .join("_")
                );
                if let Some(dir) = out_dir {
                    std::fs::create_dir_all(dir)?;
                    write_instance(dir.join(&name), &c.sr)?;
                }
                listed.push(
                    json!({ "label": c.label, "top": c.sr.top(), "point": c.point, "file": name }),
                );
            }
            let (v, code) = verdict(identity && agrees);
            emit(
                out,
                &json!({
                    "components": listed,
                    "extension_matches_oracle": agrees,
                    "sum_identity": identity,
                    "verdict": v,
                }),
            )?;
            Ok(code)
        }
        Command::Extend {
            instance,
            mode,
            out: path,
        } => {
            let sr = valid_instance(instance)?;
            let modes: Vec<ExtensionMode> = if mode == "all" {
                ExtensionMode::ALL
                    .into_iter()
                    .filter(|m| m.applies_to(sr.ctx()))
                    .collect()
            } else {
                let m: ExtensionMode = mode.parse()?;
                if !m.applies_to(sr.ctx()) {
                    return Err(Error::Precondition(format!(
                        "mode {m} needs a perfect algebra (k = 1), got k = {}",
                        sr.ctx().k
                    )));
                }
                vec![m, ExtensionMode::Oracle]
            };
            let mut tables = serde_json::Map::new();
            let mut results = Vec::new();
            for m in &modes {
                let x = extend_observable(&sr, *m)?;
                check_extension(&sr, &x)?;
                tables.insert(m.name().to_string(), obs_json(&x)?);
                results.push(x);
            }
            let agree = results.windows(2).all(|w| w[0].same_masses(&w[1]));
            maybe_write(path, &results[0])?;
            let (v, code) = verdict(agree);
            emit(
                out,
                &json!({ "modes": tables, "modes_agree": agree, "verdict": v }),
            )?;
            Ok(code)
        }
        Command::Query { observable, region } => {
            let x = read_observable(observable)?;
            let r = parse_region(x.atoms(), region)?;
            writeln!(out, "{}", observable_eval(&x, &r)?.value())?;
            Ok(EXIT_OK)
        }
        Command::Joint {
            instances,
            out: path,
        } => {
            let srs = instances
                .iter()
                .map(read_instance)
                .collect::<Result<Vec<_>>>()?;
            let (_, z) = meet_joint(&srs)?;
            maybe_write(path, &z)?;
            emit(
                out,
                &json!({ "marginals_reproduce_inputs": true, "observable": obs_json(&z)?, "verdict": "pass" }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Sum {
            left,
            right,
            out: path,
        } => {
            let x = read_observable(left)?;
            let y = read_observable(right)?;
            let s = sum_observables(&x, &y)?;
            let commutes = sum_observables(&y, &x)?.same_masses(&s);
            let mut homomorphic = true;
            for i in 0..s.n() {
                let lhs = marginal(&s, i)?;
                let rhs = sum_observables(&marginal(&x, i)?, &marginal(&y, i)?)?;
                homomorphic &= lhs.same_masses(&rhs);
            }
            maybe_write(path, &s)?;
            let (v, code) = verdict(commutes && homomorphic);
            emit(
                out,
                &json!({
                    "commutative": commutes,
                    "marginal_homomorphism": homomorphic,
                    "observable": obs_json(&s)?,
                    "verdict": v,
                }),
            )?;
            Ok(code)
        }
        Command::Oracle {
            instance,
            out: path,
        } => {
            let sr = read_instance(instance)?;
            let x = oracle_observable(&sr)?;
            maybe_write(path, &x)?;
            emit(out, &json!({ "observable": obs_json(&x)? }))?;
            Ok(EXIT_OK)
        }
        Command::Fuzz { count, seed } => {
            let seed = seed.unwrap_or_else(|| seed_from_env(0));
            let mut r = rng(seed);
            let params = GenParams::default();
            let mut failures = Vec::new();
            for i in 0..*count {
                let sr = random_resolution(&mut r, &params);
                if let Err(e) = check_all(&sr) {
                    failures.push(json!({ "index": i, "error": e.to_string() }));
                }
            }
            let (v, code) = verdict(failures.is_empty());
            emit(
                out,
                &json!({ "count": count, "failures": failures, "seed": seed, "verdict": v }),
            )?;
            Ok(code)
        }
    }
}

fn valid_instance(path: &Path) -> Result<SpectralResolution> {
    let sr = read_instance(path)?;
    let report = sr.report();
    if !report.is_valid() {
        return Err(Error::InvalidResolution(report.to_string()));
    }
    Ok(sr)
}

/// Every applicable construction agrees with the oracle, satisfies the
/// extension property and is the unique solution.
pub fn check_all(sr: &SpectralResolution) -> Result<()> {
    let report = sr.report();
    if !report.is_valid() {
        return Err(Error::InvalidResolution(report.to_string()));
    }
    let oracle = oracle_observable(sr)?;
    check_extension(sr, &oracle)?;
    require_uniqueness(sr)?;
    for mode in ExtensionMode::ALL
        .into_iter()
        .filter(|m| m.applies_to(sr.ctx()))
    {
        let x = extend_observable(sr, mode)?;
        if !x.same_masses(&oracle) {
            return Err(Error::IdentityViolation(format!(
                "mode {mode} disagrees with the oracle"
            )));
        }
    }
    let comps = if sr.ctx().is_perfect() && characteristic_points(sr).len() == 1 {
        decompose_perfect(sr)?
    } else {
        decompose_staircase(sr)?
    };
    check_decomposition(sr, &comps)
}
