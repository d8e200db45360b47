mod args;
mod constants;
mod output;
mod runners;
mod sweep;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use args::{
    Cli, Command, ForallAction, ForeachAction, ForeachMode, Globals, MincutAction, PresetChoice,
    TwosumAction,
};
use constants::Constants;

/// Usage exits with 1, infeasible or out-of-range parameters with 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Params(String),
}

impl From<cutlab_core::Error> for CliError {
    fn from(e: cutlab_core::Error) -> Self {
        match e {
            cutlab_core::Error::Parse(_) => CliError::Usage(e.to_string()),
            other => CliError::Params(other.to_string()),
        }
    }
}

/// Resolved run context shared by every subcommand.
pub struct Ctx {
    pub seed: u64,
    pub constants: Constants,
    pub timings: bool,
    pub jobs: usize,
}

enum Payload {
    Records(Vec<Value>),
    Csv(String),
}

fn build_ctx(g: &Globals) -> Result<Ctx, CliError> {
    let mut constants = match g.preset {
        PresetChoice::Desk => Constants::desk(),
        PresetChoice::Paper => Constants::paper(),
    };
    if let Some(path) = &g.constants {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        constants.apply_overrides(&text)?;
    }
    Ok(Ctx { seed: g.seed, constants, timings: g.timings, jobs: g.jobs })
}

/// Commands whose output is a record stream; the sweep driver nests these.
pub(crate) fn run_records(cmd: &Command, ctx: &Ctx) -> Result<Vec<Value>, CliError> {
    match cmd {
        Command::Foreach { action } => {
            let (mode, a) = match action {
                ForeachAction::Encode(a) => (ForeachMode::Encode, a),
                ForeachAction::Decode(a) => (ForeachMode::Decode, a),
                ForeachAction::Roundtrip(a) => (ForeachMode::Roundtrip, a),
            };
            runners::foreach(mode, a, ctx)
        }
        Command::Forall { action: ForallAction::Roundtrip(a) } => runners::forall(a, ctx),
        Command::Mincut { action: MincutAction::Estimate(a) } => runners::mincut_estimate(a, ctx),
        Command::Twosum { action: TwosumAction::LemmaCheck(a) } => runners::twosum_lemma(a, ctx),
        Command::Twosum { action: TwosumAction::Reduce(a) } => runners::twosum_reduce(a, ctx),
        _ => Err(CliError::Usage("not a record-producing command".into())),
    }
}

fn run_command(cmd: &Command, ctx: &Ctx) -> Result<(Payload, usize), CliError> {
    match cmd {
        Command::Mincut { action: MincutAction::Sweep(a) } => {
            Ok((Payload::Csv(runners::mincut_sweep(a, ctx)?), 0))
        }
        Command::Sweep(a) => Ok((Payload::Csv(sweep::run(a, ctx)?), 0)),
        Command::Selftest { quick } => {
            let (records, failures) = runners::selftest(*quick, ctx);
            Ok((Payload::Records(records), failures))
        }
        other => Ok((Payload::Records(run_records(other, ctx)?), 0)),
    }
}

fn emit(payload: &Payload, out: Option<&Path>) -> Result<(), CliError> {
    let text = match payload {
        Payload::Records(records) => output::to_jsonl(records),
        Payload::Csv(csv) => csv.clone(),
    };
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version land here too; those exit 0.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = build_ctx(&cli.globals).and_then(|ctx| {
        let (payload, selftest_failures) = run_command(&cli.command, &ctx)?;
        emit(&payload, cli.globals.out.as_deref())?;
        Ok(selftest_failures)
    });
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(3),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Params(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
