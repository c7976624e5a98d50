//! `kmgc`: gradings, graded contractions and graded modules of affine
//! Kac-Moody algebras from the command line.
//!
//! Exit codes: 0 success, 1 validation error, 2 computation error or failed
//! check, 3 inconclusive (window too small).

mod commands;
mod job;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kacmoody::grading::{GradingSpec, LayerSpec, RelevanceMode};
use kacmoody::solve::TauVariant;
use kacmoody::Error;
use serde_json::Value;

use crate::job::{read_job, JobSpec};

#[derive(Debug, Parser)]
#[command(
    name = "kmgc",
    version,
    about = "Gradings and graded contractions of affine Kac-Moody algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Class assignment of the basis and the grading check.
    Grade(Args),
    /// All ε solutions for a group and mask, optionally with ψ, τ and γ.
    Solve(Args),
    /// Brackets, structure, center and Jacobi check of one contraction.
    Contract(Args),
    /// Generating set of the positive root vectors of a contraction.
    Generators(Args),
    /// Weight system of a highest-weight module with module classes.
    Repgrade(Args),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Relevance {
    Full,
    LoopOnly,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TauArg {
    PatternConsistent,
    Literal,
}

#[derive(Debug, Default, clap::Args)]
struct Args {
    /// JSON job file; flags given on the command line take precedence.
    #[arg(long, value_name = "FILE")]
    job: Option<PathBuf>,
    /// Finite algebra, e.g. A2 (default A2).
    #[arg(long)]
    algebra: Option<String>,
    /// EFO [s0,..,sr] of a horizontal layer.
    #[arg(long, value_delimiter = ',', value_name = "S0,..,SR")]
    efo: Option<Vec<u32>>,
    /// Modulus of a vertical layer (after the horizontal one).
    #[arg(long, value_name = "N")]
    vertical: Option<u64>,
    /// Grading group for `solve` without an algebra, e.g. Z2 or Z2xZ2.
    #[arg(long)]
    group: Option<String>,
    /// Treat every pair of classes as relevant.
    #[arg(long)]
    generic: bool,
    /// Irrelevant pair, `00=irrelevant` or `(01,10)=irrelevant`; repeatable.
    #[arg(long, value_name = "PAIR=irrelevant")]
    mask: Vec<String>,
    /// Whether central terms count toward relevance.
    #[arg(long, value_enum)]
    relevance: Option<Relevance>,
    /// ε over the relevant pairs, upper triangle, e.g. 1,1,0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    epsilon: Option<Vec<String>>,
    /// Solution file written by `solve --out`.
    #[arg(long, value_name = "FILE")]
    solutions: Option<String>,
    /// Table index within `--solutions` (default 0).
    #[arg(long)]
    index: Option<usize>,
    /// κ over all pairs, upper triangle (default κ = ε).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    kappa: Option<Vec<String>>,
    #[arg(long)]
    check_jacobi: bool,
    /// Laurent-degree window.
    #[arg(short = 'W', long = "window")]
    window: Option<i64>,
    /// Highest weight (Λ0,..,Λr).
    #[arg(long, value_delimiter = ',')]
    hw: Option<Vec<i64>>,
    /// Maximal null depth (default 10).
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    psi: bool,
    #[arg(long)]
    tau: bool,
    #[arg(long, value_enum)]
    tau_variant: Option<TauArg>,
    #[arg(long)]
    gamma: bool,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
    /// Also write the JSON output to this file.
    #[arg(short, long, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl Args {
    fn to_job(&self) -> Result<JobSpec, Error> {
        let mut layers = Vec::new();
        if let Some(s) = &self.efo {
            layers.push(LayerSpec::Horizontal { s: s.clone() });
        }
        if let Some(n) = self.vertical {
            layers.push(LayerSpec::Vertical { n });
        }
        let mask = self
            .mask
            .iter()
            .map(|m| match m.split_once('=') {
                None | Some((_, "irrelevant")) => {
                    Ok(m.split('=').next().unwrap_or_default().to_string())
                }
                Some((_, other)) => Err(Error::Invalid(format!(
                    "mask entries read PAIR=irrelevant, got {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let strings = |v: &Option<Vec<String>>| {
            v.as_ref().map(|v| {
                v.iter()
                    .map(|s| Value::String(s.clone()))
                    .collect::<Vec<_>>()
            })
        };
        Ok(JobSpec {
            command: None,
            algebra: self.algebra.clone(),
            grading: (!layers.is_empty()).then_some(GradingSpec { layers }),
            group: self.group.clone(),
            generic: self.generic.then_some(true),
            mask: (!mask.is_empty()).then_some(mask),
            relevance: self.relevance.map(|r| match r {
                Relevance::Full => RelevanceMode::Full,
                Relevance::LoopOnly => RelevanceMode::LoopOnly,
            }),
            epsilon: strings(&self.epsilon).map(Value::Array),
            solutions: self.solutions.clone(),
            index: self.index,
            kappa: strings(&self.kappa),
            check_jacobi: self.check_jacobi.then_some(true),
            window: self.window,
            hw: self.hw.clone(),
            depth: self.depth,
            psi: self.psi.then_some(true),
            tau: self.tau.then_some(true),
            tau_variant: self.tau_variant.map(|t| match t {
                TauArg::PatternConsistent => TauVariant::PatternConsistent,
                TauArg::Literal => TauVariant::Literal,
            }),
            gamma: self.gamma.then_some(true),
        })
    }
}

/// Fields each command reads; anything else set in a job is a validation error.
fn allowed(cmd: &str) -> &'static [&'static str] {
    match cmd {
        "grade" => &["command", "algebra", "grading", "window"],
        "solve" => &[
            "command",
            "algebra",
            "grading",
            "group",
            "generic",
            "mask",
            "relevance",
            "psi",
            "tau",
            "tau_variant",
            "gamma",
        ],
        "contract" => &[
            "command",
            "algebra",
            "grading",
            "generic",
            "mask",
            "relevance",
            "epsilon",
            "solutions",
            "index",
            "kappa",
            "check_jacobi",
            "window",
        ],
        "generators" => &[
            "command",
            "algebra",
            "grading",
            "generic",
            "mask",
            "relevance",
            "epsilon",
            "solutions",
            "index",
            "kappa",
            "window",
        ],
        "repgrade" => &["command", "algebra", "grading", "hw", "depth"],
        _ => &[],
    }
}

fn validate(cmd: &str, job: &JobSpec) -> Result<(), Error> {
    if let Some(c) = &job.command {
        if c != cmd {
            return Err(Error::Invalid(format!(
                "job file is for {c:?}, not {cmd:?}"
            )));
        }
    }
    let v = serde_json::to_value(job).expect("job serializes");
    let ok = allowed(cmd);
    let extra: Vec<&String> = v
        .as_object()
        .into_iter()
        .flat_map(|m| m.keys())
        .filter(|k| !ok.contains(&k.as_str()))
        .collect();
    if !extra.is_empty() {
        return Err(Error::Invalid(format!("{cmd} does not use {extra:?}")));
    }
    if job.window.is_some_and(|w| w < 2) {
        return Err(Error::Invalid("the window must be at least 2".into()));
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Inconclusive(_) => 3,
        Error::AlgebraMismatch | Error::WindowOverflow { .. } | Error::GroupTooLarge { .. } => 2,
        _ => 1,
    }
}

fn run(cmd: &str, args: &Args) -> Result<commands::Output, Error> {
    let flags = args.to_job()?;
    let job = match &args.job {
        Some(path) => read_job(path)?.merged(flags),
        None => flags,
    };
    validate(cmd, &job)?;
    match cmd {
        "grade" => commands::grade(&job),
        "solve" => commands::solve(&job),
        "contract" => commands::contract_cmd(&job),
        "generators" => commands::generators(&job),
        "repgrade" => commands::repgrade(&job),
        _ => unreachable!("clap only yields known subcommands"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (name, args) = match &cli.command {
        Command::Grade(a) => ("grade", a),
        Command::Solve(a) => ("solve", a),
        Command::Contract(a) => ("contract", a),
        Command::Generators(a) => ("generators", a),
        Command::Repgrade(a) => ("repgrade", a),
    };
    match run(name, args) {
        Ok(out) => {
            let json = serde_json::to_string_pretty(&out.json).expect("json output");
            if let Some(path) = &args.out {
                if let Err(e) = std::fs::write(path, format!("{json}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            let body = if args.json {
                format!("{json}\n")
            } else {
                out.text
            };
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(if out.ok { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
