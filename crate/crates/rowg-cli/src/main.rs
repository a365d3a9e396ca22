//! `rowg`: check, translate and run gradual row-polymorphic programs.
//!
//! Exit codes: 0 ok, 1 type error, 2 blame, 3 parse error, 4 fuel exhausted.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use rowg::core::translate;
use rowg::eval::{eval_static, evaluate, fuel_from_env, EvalOptions, Outcome, StaticOutcome};
use rowg::oracle::{run_all, PropsConfig};
use rowg::statics::{elaborate, Ctx, Mode, TypeError};
use rowg::syntax::{line_col, parse_program, ParseError};
use rowg::Term;

const EXIT_TYPE: u8 = 1;
const EXIT_BLAME: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_FUEL: u8 = 4;

#[derive(Parser)]
#[command(name = "rowg", version, about = "Gradual row polymorphism interpreter")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck a program and print its type.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Gradual)]
        mode: ModeArg,
    },
    /// Print the cast-calculus translation of a program.
    Translate { file: PathBuf },
    /// Typecheck and evaluate a program.
    Run(RunArgs),
    /// Same as `run --trace`.
    Trace(RunArgs),
    /// Run the property suites.
    Props(PropsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Static,
    Gradual,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Static => Mode::Static,
            ModeArg::Gradual => Mode::Gradual,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Gradual)]
    mode: ModeArg,
    /// Step limit; defaults to ROWG_FUEL or 100000.
    #[arg(long)]
    fuel: Option<u64>,
    /// Print every reduction step.
    #[arg(long)]
    trace: bool,
    /// Re-typecheck after every step.
    #[arg(long)]
    check_steps: bool,
    /// Use the simplified variant-concealment rule.
    #[arg(long)]
    primed_conlift: bool,
    /// Emit the trace as JSON lines.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PropsArgs {
    /// Enumeration depth for the relation suites.
    #[arg(long, default_value_t = 2)]
    depth: u32,
    /// Programs per fuzzing suite.
    #[arg(long, default_value_t = 10_000)]
    programs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check a deliberately broken relation instead of the real one.
    #[arg(long, value_enum)]
    mutant: Option<Mutant>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutant {
    /// Equivalence that also swaps fields with equal labels.
    EqSwap,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Type(String),
    #[error("{0}")]
    Eval(#[from] rowg::eval::EvalError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) => EXIT_PARSE,
            CliError::Type(_) | CliError::Eval(_) => EXIT_TYPE,
        }
    }
}

struct Source {
    path: String,
    text: String,
}

impl Source {
    fn load(path: &Path) -> Result<Source, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Source {
            path: path.display().to_string(),
            text,
        })
    }

    fn parse(&self) -> Result<Term, CliError> {
        parse_program(&self.text).map_err(|e: ParseError| {
            let (line, col) = e.line_col(&self.text);
            CliError::Parse(format!("{}:{line}:{col}: parse error: {}", self.path, e.message))
        })
    }

    fn type_error(&self, e: TypeError) -> CliError {
        let (line, col) = line_col(&self.text, e.span.start);
        CliError::Type(format!(
            "{}:{line}:{col}: type error ({}): {}",
            self.path, e.rule, e.message
        ))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let result = match cli.command {
        Command::Check { file, mode } => cmd_check(&file, mode.into(), &mut out),
        Command::Translate { file } => cmd_translate(&file, &mut out),
        Command::Run(args) => cmd_run(&args, args.trace, &mut out),
        Command::Trace(args) => cmd_run(&args, true, &mut out),
        Command::Props(args) => cmd_props(&args, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn cmd_check(file: &Path, mode: Mode, out: &mut impl Write) -> Result<u8, CliError> {
    let src = Source::load(file)?;
    let m = src.parse()?;
    let (_, ty) = elaborate(mode, &Ctx::new(), &m).map_err(|e| src.type_error(e))?;
    let _ = writeln!(out, "{ty}");
    Ok(0)
}

fn cmd_translate(file: &Path, out: &mut impl Write) -> Result<u8, CliError> {
    let src = Source::load(file)?;
    let m = src.parse()?;
    let (e, _) = translate(&Ctx::new(), &m).map_err(|e| src.type_error(e))?;
    let _ = writeln!(out, "{e}");
    Ok(0)
}

fn cmd_run(args: &RunArgs, trace: bool, out: &mut impl Write) -> Result<u8, CliError> {
    let src = Source::load(&args.file)?;
    let m = src.parse()?;
    let fuel = args.fuel.unwrap_or_else(fuel_from_env);
    let mode: Mode = args.mode.into();
    if mode == Mode::Static {
        elaborate(Mode::Static, &Ctx::new(), &m).map_err(|e| src.type_error(e))?;
        if trace {
            eprintln!("note: traces are only recorded for gradual runs");
        }
        return match eval_static(&m, fuel)? {
            StaticOutcome::Value(v) => {
                let _ = writeln!(out, "{v}");
                Ok(0)
            }
            StaticOutcome::FuelExhausted(_) => {
                let _ = writeln!(out, "fuel exhausted after {fuel} steps");
                Ok(EXIT_FUEL)
            }
        };
    }

    let (e, _) = translate(&Ctx::new(), &m).map_err(|e| src.type_error(e))?;
    let opts = EvalOptions {
        fuel,
        check_steps: args.check_steps,
        primed_conlift: args.primed_conlift,
        trace,
    };
    let run = evaluate(&e, &opts)?;
    let mut prev = 0;
    for entry in &run.trace {
        if args.json {
            let line = serde_json::to_string(&entry.record(prev)).expect("trace records serialize");
            let _ = writeln!(out, "{line}");
        } else {
            let delta: Vec<String> = entry.record(prev).store;
            let delta = if delta.is_empty() { "-".to_string() } else { delta.join(", ") };
            let _ = writeln!(out, "{}\t{}\t{}\t{}", entry.step, entry.rule, delta, entry.term);
        }
        prev = entry.store.len();
    }
    let (code, text, json) = match &run.outcome {
        Outcome::Value(v) => (
            0,
            v.to_string(),
            serde_json::json!({"outcome": "value", "steps": run.steps, "term": v.to_string()}),
        ),
        Outcome::Blamed(p) => (
            EXIT_BLAME,
            format!("blame {p}"),
            serde_json::json!({"outcome": "blame", "steps": run.steps, "label": p.to_string()}),
        ),
        Outcome::FuelExhausted(_) => (
            EXIT_FUEL,
            format!("fuel exhausted after {} steps", run.steps),
            serde_json::json!({"outcome": "fuel", "steps": run.steps}),
        ),
    };
    if args.json {
        let _ = writeln!(out, "{json}");
    } else {
        let _ = writeln!(out, "{text}");
    }
    Ok(code)
}

fn cmd_props(args: &PropsArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let cfg = PropsConfig {
        depth: args.depth,
        programs: args.programs,
        seed: args.seed,
        mutant: matches!(args.mutant, Some(Mutant::EqSwap)),
    };
    let reports = run_all(&cfg);
    for r in &reports {
        let _ = writeln!(out, "{r}");
    }
    Ok(if reports.iter().all(|r| r.passed()) { 0 } else { 1 })
}
