//! `kpgive`: command-line driver for the tau-function, Frobenius and
//! loop-group computations.
//!
//! Exit codes: 0 verified, 1 a residual is nonzero, 2 invalid input.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use kpgive::givental::{LoopSign, Side};
use kpgive::sample::{SampleShape, Sampler};
use kpgive::{Cutoffs, Error};
use serde_json::{json, Value};

use commands::{CheckTarget, Outcome, StabilizeTarget};
use config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "kpgive", version, about = "Exact KP tau functions, Frobenius potentials and the twisted loop group action")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for `sample`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Replace the configured cutoffs: E,W,Z,T,D.
    #[arg(long, global = true, value_name = "E,W,Z,T,D")]
    override_cutoffs: Option<String>,
    /// Lift the n <= 6 guard.
    #[arg(long, global = true)]
    allow_large_n: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    LeeTheta,
    LeePsi,
    Kp,
    Dual,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::LeeTheta => Side::LeeTheta,
            SideArg::LeePsi => Side::LeePsi,
            SideArg::Kp => Side::KpFlat,
            SideArg::Dual => Side::DualOracle,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One tau component (charge from `options.charge`, default 0).
    Tau,
    /// The wave matrix Ψ⁺ (or Ψ⁻ with --minus).
    Psi {
        #[arg(long)]
        minus: bool,
    },
    /// θ-vectors and the flat coordinate map.
    Theta,
    /// The potential in x and in flat coordinates t.
    Potential,
    /// Run one identity check.
    Check {
        #[arg(value_enum)]
        target: CheckTarget,
    },
    /// ∂F/∂ε from one side (needs `algebra`).
    Derive {
        #[arg(long, value_enum)]
        side: SideArg,
    },
    /// All four sides and their residuals.
    VerifyMainTheorem,
    /// Recompute at E+4 and diff every retained coefficient.
    Stabilize {
        #[arg(long, value_enum, default_value = "psi")]
        target: StabilizeTarget,
        #[arg(long)]
        minus: bool,
        #[arg(long, value_enum, default_value = "kp")]
        side: SideArg,
    },
    /// A deterministic pseudo-random twisted element.
    Sample {
        /// Matrix size (defaults to `n` from --config, else 2).
        #[arg(long)]
        n: Option<usize>,
        /// `+` or `-`; for a group, a comma list such as `+,-`.
        #[arg(long, default_value = "-", allow_hyphen_values = true)]
        sign: String,
        #[arg(long, default_value_t = 1)]
        max_level: u32,
        /// Emit a group element (one exponential per sign) instead of an algebra element.
        #[arg(long)]
        group: bool,
    },
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Tau => "tau".into(),
            Command::Psi { minus } => format!("psi{}", if *minus { "-" } else { "+" }),
            Command::Theta => "theta".into(),
            Command::Potential => "potential".into(),
            Command::Check { target } => format!("check {}", target.to_possible_value().expect("no skipped variants").get_name()),
            Command::Derive { side } => format!("derive {}", Side::from(*side)),
            Command::VerifyMainTheorem => "verify-main-theorem".into(),
            Command::Stabilize { .. } => "stabilize".into(),
            Command::Sample { .. } => "sample".into(),
        }
    }
}

/// What the run produced: an error before any payload, or an outcome.
enum Failure {
    Invalid(Error),
    Falsified(String, String),
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("KPGIVE_THREADS") else {
        return Ok(());
    };
    let k: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| Error::Parse(format!("KPGIVE_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| Error::Parse(format!("thread pool: {e}")))
}

fn load_config(cli: &Cli) -> Result<RunConfig, Error> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Parse("this command needs --config PATH".into()))?;
    let raw = RunConfig::load(path)?;
    let cutoffs = cli.override_cutoffs.as_deref().map(Cutoffs::parse).transpose()?;
    RunConfig::from_value(raw, cutoffs, cli.allow_large_n)
}

fn parse_sign(s: &str) -> Result<LoopSign, Error> {
    match s.trim() {
        "+" => Ok(LoopSign::Plus),
        "-" => Ok(LoopSign::Minus),
        other => Err(Error::Parse(format!("sign {other:?}: expected + or -"))),
    }
}

fn sample(cli: &Cli, n: Option<usize>, sign: &str, max_level: u32, group: bool) -> Result<Outcome, Error> {
    let n = match (n, &cli.config) {
        (Some(n), _) => n,
        (None, Some(_)) => load_config(cli)?.n,
        (None, None) => 2,
    };
    if n == 0 || (n > config::MAX_N && !cli.allow_large_n) {
        return Err(Error::Parse(format!("n = {n} outside 1..={} (see --allow-large-n)", config::MAX_N)));
    }
    let signs = sign.split(',').map(parse_sign).collect::<Result<Vec<_>, _>>()?;
    let draw = |seed: u64| -> Result<Value, Error> {
        let mut s = Sampler::new(seed);
        if group {
            let shapes: Vec<SampleShape> = signs.iter().map(|&g| SampleShape::new(n, g, max_level)).collect();
            Ok(s.group(&shapes).to_json())
        } else {
            if signs.len() != 1 {
                return Err(Error::Parse("an algebra element has a single sign".into()));
            }
            Ok(s.algebra(&SampleShape::new(n, signs[0], max_level)).to_json())
        }
    };
    let element = draw(cli.seed)?;
    let neighbour = draw(cli.seed.wrapping_add(1))?;
    Ok(Outcome {
        payload: json!({
            "seed": cli.seed,
            "kind": if group { "group" } else { "algebra" },
            "element": element,
            "collides_with_next_seed": element == neighbour,
        }),
        failure: None,
        stabilization: None,
    })
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    if let Command::Sample {
        n,
        sign,
        max_level,
        group,
    } = &cli.command
    {
        return sample(cli, *n, sign, *max_level, *group);
    }
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Tau => commands::run_tau(&cfg),
        Command::Psi { minus } => commands::run_psi(&cfg, *minus),
        Command::Theta => commands::run_theta(&cfg),
        Command::Potential => commands::run_potential(&cfg),
        Command::Check { target } => commands::run_check(&cfg, *target),
        Command::Derive { side } => commands::run_derive(&cfg, (*side).into()),
        Command::VerifyMainTheorem => commands::run_verify(&cfg),
        Command::Stabilize { target, minus, side } => commands::run_stabilize(&cfg, *target, *minus, (*side).into()),
        Command::Sample { .. } => unreachable!("handled above"),
    }
}

fn config_echo(cli: &Cli) -> Value {
    if cli.config.is_none() {
        return Value::Null;
    }
    load_config(cli).map_or(Value::Null, |c| c.echo())
}

fn emit(cli: &Cli, report: &Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(report).expect("JSON values always serialize") + "\n";
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Parse(format!("stdout: {e}"))),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    configure_threads().map_err(Failure::Invalid)?;
    let start = Instant::now();
    let outcome = execute(cli).map_err(|e| match e {
        Error::VerificationFailed { check, monomial } => Failure::Falsified(check, monomial),
        other => Failure::Invalid(other),
    })?;
    let report = json!({
        "command": cli.command.name(),
        "config": config_echo(cli),
        "payload": outcome.payload,
        "timing_ms": start.elapsed().as_millis() as u64,
        "stabilization": outcome.stabilization,
        "verified": outcome.failure.is_none(),
    });
    emit(cli, &report).map_err(Failure::Invalid)?;
    match outcome.failure {
        Some((check, first)) => Err(Failure::Falsified(check, first)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Falsified(check, first)) => {
            eprintln!("kpgive: verification failed in {check}: first offending monomial {first}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(e)) => {
            eprintln!("kpgive: {e}");
            ExitCode::from(2)
        }
    }
}
