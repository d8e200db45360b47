//! Generic grid driver: substitute axis values into a command template,
//! run each cell with a derived seed, and pool the records into CSV.

use clap::Parser;
use cutlab_core::oracle::mix_stream;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Cli, Command, MincutAction, SweepArgs};
use crate::output::to_csv;
use crate::{CliError, Ctx};

pub const CELL_CAP: usize = 100_000;

/// Flags resolved once on the sweep invocation itself; a template that
/// sets them would silently fork the configuration.
const RESERVED: &[&str] = &["--seed", "--preset", "--constants", "--out", "--jobs", "--timings"];

pub fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("--jobs: {e}")))
}

struct Axis {
    name: String,
    values: Vec<String>,
}

fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let (name, rest) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--grid {spec:?}: expected name=v1,v2,...")))?;
    let valid = !name.is_empty()
        && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !valid {
        return Err(CliError::Usage(format!("--grid: bad axis name {name:?}")));
    }
    let values: Vec<String> = rest.split(',').map(str::to_owned).collect();
    if values.iter().any(String::is_empty) {
        return Err(CliError::Usage(format!("--grid {name}: empty value in {rest:?}")));
    }
    Ok(Axis { name: name.to_owned(), values })
}

/// Axis values become typed JSON where they parse as numbers, so CSV
/// consumers see 2 rather than "2".
fn typed(raw: &str) -> Value {
    if let Ok(i) = raw.parse::<i64>() {
        return json!(i);
    }
    if let Ok(f) = raw.parse::<f64>() {
        return json!(f);
    }
    json!(raw)
}

pub fn run(a: &SweepArgs, ctx: &Ctx) -> Result<String, CliError> {
    let axes: Vec<Axis> = a.grids.iter().map(|s| parse_axis(s)).collect::<Result<_, _>>()?;
    for axis in &axes {
        let hole = format!("{{{}}}", axis.name);
        if !a.template.iter().any(|tok| tok.contains(&hole)) {
            return Err(CliError::Usage(format!(
                "axis {} never appears as {hole} in the template",
                axis.name
            )));
        }
    }
    for tok in &a.template {
        if RESERVED.contains(&tok.as_str()) {
            return Err(CliError::Usage(format!(
                "{tok} belongs on the sweep invocation, not in the template"
            )));
        }
    }

    let cells: usize = axes.iter().map(|ax| ax.values.len()).product();
    if cells == 0 {
        return Err(CliError::Usage("empty grid".into()));
    }
    if cells > CELL_CAP {
        return Err(CliError::Params(format!("grid has {cells} cells; cap {CELL_CAP}")));
    }

    // Odometer order: last axis varies fastest.
    let assignments: Vec<Vec<&str>> = (0..cells)
        .map(|idx| {
            let mut rem = idx;
            let mut row = vec![""; axes.len()];
            for (slot, axis) in axes.iter().enumerate().rev() {
                row[slot] = &axis.values[rem % axis.values.len()];
                rem /= axis.values.len();
            }
            row
        })
        .collect();

    let cell_records: Result<Vec<Vec<Value>>, CliError> = pool(ctx.jobs)?.install(|| {
        assignments
            .par_iter()
            .enumerate()
            .map(|(idx, row)| {
                let mut argv: Vec<String> = vec!["cutlab".into()];
                argv.extend(a.template.iter().map(|tok| {
                    let mut out = tok.clone();
                    for (axis, value) in axes.iter().zip(row) {
                        out = out.replace(&format!("{{{}}}", axis.name), value);
                    }
                    out
                }));
                let cell = Cli::try_parse_from(&argv)
                    .map_err(|e| CliError::Usage(format!("cell {idx}: {e}")))?;
                match &cell.command {
                    Command::Sweep(_)
                    | Command::Selftest { .. }
                    | Command::Mincut { action: MincutAction::Sweep(_) } => {
                        return Err(CliError::Usage(
                            "sweep template must be a record-producing command".into(),
                        ));
                    }
                    _ => {}
                }
                let cell_ctx = Ctx {
                    seed: mix_stream(ctx.seed, [idx as u64]),
                    constants: ctx.constants.clone(),
                    timings: ctx.timings,
                    jobs: 1,
                };
                let mut records = crate::run_records(&cell.command, &cell_ctx)?;
                for rec in &mut records {
                    let mut tag = serde_json::Map::new();
                    tag.insert("index".into(), json!(idx));
                    for (axis, value) in axes.iter().zip(row) {
                        tag.insert(axis.name.clone(), typed(value));
                    }
                    rec.as_object_mut()
                        .expect("records are objects")
                        .insert("cell".into(), Value::Object(tag));
                }
                Ok(records)
            })
            .collect()
    });

    let flat: Vec<Value> = cell_records?.into_iter().flatten().collect();
    Ok(to_csv(&flat))
}
