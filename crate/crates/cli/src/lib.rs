//! `ulab`: batch runner for the ultrapower checks.
//!
//! Exit codes: 0 when every check passed, 1 when a check failed (the
//! failure is in the report), 2 for configuration or usage errors.

pub mod config;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use ulab_core::germs::{Germ, GermError};

use config::{ConfigError, ExperimentConfig};
use report::Report;

const DEFAULT_OUT: &str = "ulab-reports";

#[derive(Parser, Debug)]
#[command(name = "ulab", version, about = "Checks for finite-support ultrapowers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Experiment config (TOML, schema_version = 1).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Report directory; overrides `out` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Base/ultrapower agreement on every enumerated sentence.
    TransferCheck(Common),
    /// Ultrafilter axioms of the Fubini product on random sets.
    FubiniCheck(Common),
    /// Collapse of all-principal ultrapowers onto the base.
    CollapseCheck(Common),
    /// Projection on a free coordinate is nonstandard and infinite.
    Properness(Common),
    /// Evaluate germ expressions, or run the germ field suite with --config.
    Germ(GermArgs),
    /// Superstructure levels: sizes, bounded transfer, extensionality.
    SuperstructureCheck(Common),
    /// Dump the definable array given by [array.definable].
    ArrayBuild(Common),
    /// Every suite with a section in the config.
    All(Common),
}

#[derive(Args, Debug)]
struct GermArgs {
    #[command(subcommand)]
    op: Option<GermOp>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GermOp {
    /// Infinitesimal, Appreciable(c) or Infinite.
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Prints `<`, `=` or `>`.
    Compare {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Value at an integer point.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(allow_hyphen_values = true)]
        n: String,
    },
    /// The standard part of a finite germ.
    StandardPart {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

enum Failure {
    Config(ConfigError),
    Io(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Failure {
        Failure::Config(e)
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e}");
            2
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<i32, Failure> {
    type Suite = fn(&ExperimentConfig, &str) -> Result<Report, ConfigError>;
    let single = |common: Common, suite: Suite| -> Result<i32, Failure> {
        let (config, origin, out) = load(&common.config, common.seed, common.out)?;
        let report = suite(&config, &origin)?;
        emit(&[report], &out, None)
    };
    match command {
        Command::TransferCheck(c) => single(c, suites::transfer),
        Command::FubiniCheck(c) => single(c, suites::fubini),
        Command::CollapseCheck(c) => single(c, suites::collapse),
        Command::Properness(c) => single(c, suites::properness),
        Command::SuperstructureCheck(c) => single(c, suites::superstructure),
        Command::ArrayBuild(c) => single(c, suites::array_build),
        Command::All(c) => {
            let (config, origin, out) = load(&c.config, c.seed, c.out)?;
            let reports = suites::all(&config, &origin)?;
            emit(&reports, &out, Some("all"))
        }
        Command::Germ(g) => match (g.op, g.config) {
            (Some(op), _) => germ_op(op),
            (None, Some(path)) => single(
                Common {
                    config: path,
                    seed: g.seed,
                    out: g.out,
                },
                suites::germ,
            ),
            (None, None) => Err(Failure::Config(ConfigError {
                path: "<arguments>".into(),
                field: "germ".into(),
                reason: "give an operation (classify, compare, eval, standard-part) or --config".into(),
            })),
        },
    }
}

fn load(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<(ExperimentConfig, String, PathBuf), Failure> {
    let mut config = ExperimentConfig::load(path)?;
    if seed.is_some() {
        config.seed = seed;
    }
    let out = out
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    Ok((config, path.display().to_string(), out))
}

fn emit(reports: &[Report], out: &Path, summary: Option<&str>) -> Result<i32, Failure> {
    for r in reports {
        let (text, jsonl) = r.write(out).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
        println!("{}", r.headline());
        for n in r.notes.iter().filter(|n| n.ends_with("undecidable") && n.contains("sentences")) {
            println!("  {n}");
        }
        println!("  wrote {} and {}", text.display(), jsonl.display());
    }
    if let Some(name) = summary {
        let mut text = String::new();
        for r in reports {
            text.push_str(&r.headline());
            text.push('\n');
        }
        let path = out.join(format!("{name}.txt"));
        std::fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(if reports.iter().all(Report::passed) { 0 } else { 1 })
}

fn parse_germ(expr: &str) -> Result<Germ, Failure> {
    Germ::parse(expr).map_err(|e| {
        Failure::Config(ConfigError {
            path: "<arguments>".into(),
            field: format!("expression `{expr}`"),
            reason: e.to_string(),
        })
    })
}

fn germ_op(op: GermOp) -> Result<i32, Failure> {
    match op {
        GermOp::Classify { expr } => println!("{}", parse_germ(&expr)?.classify()),
        GermOp::Compare { left, right } => {
            let symbol = match parse_germ(&left)?.compare(&parse_germ(&right)?) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            println!("{symbol}");
        }
        GermOp::Eval { expr, n } => {
            let point: BigInt = n.parse().map_err(|_| {
                Failure::Config(ConfigError {
                    path: "<arguments>".into(),
                    field: "n".into(),
                    reason: format!("`{n}` is not an integer"),
                })
            })?;
            match parse_germ(&expr)?.eval(&point) {
                Some(v) => println!("{v}"),
                None => println!("undefined"),
            }
        }
        GermOp::StandardPart { expr } => match parse_germ(&expr)?.standard_part() {
            Ok(v) => println!("{v}"),
            Err(GermError::InfiniteGerm) => println!("none (Infinite)"),
            Err(e) => return Err(Failure::Io(e.to_string())),
        },
    }
    Ok(0)
}
