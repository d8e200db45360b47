//! One function per subcommand, each returning the records it produced.

use std::time::Instant;

use cutlab_core::families::{clique_bridge, cycle_with_chords};
use cutlab_core::forall::{self, BobInput, ForAllParams, Side};
use cutlab_core::foreach::{build_graph, decode_bit, random_string, ForEachParams};
use cutlab_core::graph::parse_undirected;
use cutlab_core::local::{estimate_min_cut, AdjacencyOracle};
use cutlab_core::mincut::global_min_cut;
use cutlab_core::oracle::{mix_stream, OracleSpec};
use cutlab_core::twosum::{
    check_gadget_mincut, random_pair_with_int, reduce_two_sum, sample_two_sum, PairedStrings,
};
use cutlab_core::{Error, UndirectedGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{
    ForallArgs, ForeachArgs, ForeachMode, MincutEstimateArgs, MincutSweepArgs, SweepFamily,
    TwosumLemmaArgs, TwosumReduceArgs,
};
use crate::constants::Constants;
use crate::output::{record, stamp};
use crate::{CliError, Ctx};

fn parse_oracle(text: &str) -> Result<OracleSpec, CliError> {
    OracleSpec::parse(text).map_err(|e| CliError::Usage(format!("--oracle: {e}")))
}

/// Block-geometry preflight producing a usable suggestion; the core
/// constructor still has the final word.
fn foreach_geometry(k: u32, beta: u64, n: usize) -> Result<(), CliError> {
    let root = (beta as f64).sqrt().round() as u64;
    if beta == 0 || root * root != beta {
        let down = root.saturating_sub(1).max(1);
        return Err(CliError::Params(format!(
            "beta = {beta} must be a positive perfect square; nearest are {} and {}",
            down * down,
            (root + 1) * (root + 1)
        )));
    }
    let block = root as usize * (1usize << k);
    if n % block != 0 || n / block < 2 {
        let suggestion = ((n / block).max(2)) * block;
        let suggestion = if suggestion == n { suggestion + block } else { suggestion };
        return Err(CliError::Params(format!(
            "n = {n} must be a multiple of the block size {block} with at least two blocks; \
             try --n {suggestion}"
        )));
    }
    Ok(())
}

fn forall_geometry(d: usize, beta: usize, n: usize) -> Result<(), CliError> {
    if d == 0 || d % 2 != 0 {
        return Err(CliError::Params(format!(
            "d = {d} must be positive and even; try --d {}",
            d.max(1) + d % 2
        )));
    }
    let block = beta * d;
    if beta == 0 || n % block != 0 || n / block < 2 {
        let suggestion = ((n / block.max(1)).max(2)) * block.max(1);
        let suggestion = if suggestion == n { suggestion + block } else { suggestion };
        return Err(CliError::Params(format!(
            "n = {n} must be a multiple of the block size {block} with at least two blocks; \
             try --n {suggestion}"
        )));
    }
    Ok(())
}

pub fn foreach(mode: ForeachMode, a: &ForeachArgs, ctx: &Ctx) -> Result<Vec<Value>, CliError> {
    foreach_geometry(a.k, a.beta, a.n)?;
    let p = ForEachParams::new(a.k, a.beta, a.n, a.c1.unwrap_or(ctx.constants.c1))?;
    let spec = parse_oracle(&a.oracle)?;
    let command = match mode {
        ForeachMode::Encode => "foreach.encode",
        ForeachMode::Decode => "foreach.decode",
        ForeachMode::Roundtrip => "foreach.roundtrip",
    };
    let params = json!({
        "k": a.k, "beta": a.beta, "n": a.n,
        "c1": a.c1.unwrap_or(ctx.constants.c1), "oracle": a.oracle, "trials": a.trials,
    });

    let mut records = Vec::with_capacity(a.trials as usize);
    for trial in 0..a.trials {
        let started = Instant::now();
        let tseed = mix_stream(ctx.seed, [1, trial as u64]);
        let s = random_string(&p, mix_stream(tseed, [1]));
        let enc = build_graph(&s, &p)?;
        let erased_bits = enc.block_success.iter().filter(|ok| !**ok).count() * p.bits_per_cluster();

        let body = if matches!(mode, ForeachMode::Encode) {
            json!({
                "trial": trial,
                "bit_count": p.capacity(),
                "failures": erased_bits,
                "correct": Value::Null,
                "queries": 0,
            })
        } else {
            let oracle = spec.build(&enc.graph, mix_stream(tseed, [2]))?;
            let mut failures = 0usize;
            let mut correct = 0usize;
            for (q, truth) in s.iter().enumerate() {
                match decode_bit(oracle.as_ref(), q, &p, &enc.block_success) {
                    Ok(bit) => correct += (bit == *truth) as usize,
                    Err(Error::EncodingFailed) => failures += 1,
                    Err(e) => return Err(e.into()),
                }
            }
            json!({
                "trial": trial,
                "bit_count": p.capacity(),
                "failures": failures,
                "correct": correct,
                "queries": oracle.query_count(),
            })
        };
        let mut rec = record(ctx, command, params.clone(), body);
        stamp(ctx, &mut rec, started);
        records.push(rec);
    }
    Ok(records)
}

fn side_name(side: &Side) -> &'static str {
    match side {
        Side::High => "high",
        Side::Low => "low",
    }
}

pub fn forall(a: &ForallArgs, ctx: &Ctx) -> Result<Vec<Value>, CliError> {
    forall_geometry(a.d, a.beta, a.n)?;
    let c = a.c.unwrap_or(ctx.constants.c);
    let p = ForAllParams::new(a.d, a.beta, a.n, c, ctx.constants.enum_cap)?;
    let spec = parse_oracle(&a.oracle)?;
    let params = json!({
        "d": a.d, "beta": a.beta, "n": a.n, "c": c, "oracle": a.oracle, "trials": a.trials,
    });

    let mut records = Vec::with_capacity(a.trials as usize);
    for trial in 0..a.trials {
        let started = Instant::now();
        let tseed = mix_stream(ctx.seed, [2, trial as u64]);
        let inst = forall::sample_gap_hamming(&p, mix_stream(tseed, [1]))?;
        let enc = forall::encode(&inst.strings, &p)?;
        let oracle = spec.build(&enc.graph, mix_stream(tseed, [2]))?;
        let bob = BobInput {
            pair: inst.bob_pair,
            i: inst.bob_i,
            j: inst.bob_j,
            t: inst.bob_string.clone(),
        };
        let outcome = forall::decode(oracle.as_ref(), &bob, &p)?;
        let truth = side_name(&inst.promise_side);
        let decided = side_name(&outcome.side);
        let mut rec = record(
            ctx,
            "forall.roundtrip",
            params.clone(),
            json!({
                "trial": trial,
                "side_truth": truth,
                "side_decided": decided,
                "correct": truth == decided,
                "subsets_enumerated": outcome.subsets_enumerated,
                "queries": oracle.query_count(),
            }),
        );
        stamp(ctx, &mut rec, started);
        records.push(rec);
    }
    Ok(records)
}

pub fn mincut_estimate(a: &MincutEstimateArgs, ctx: &Ctx) -> Result<Vec<Value>, CliError> {
    let started = Instant::now();
    let text = std::fs::read_to_string(&a.graph)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", a.graph.display())))?;
    let g = parse_undirected(&text)?;
    let oracle = AdjacencyOracle::from_graph(&g);
    let cfg = ctx.constants.estimator(a.eps, ctx.seed);
    let report = estimate_min_cut(&oracle, &cfg)?;
    let mut rec = record(
        ctx,
        "mincut.estimate",
        json!({"graph": a.graph.display().to_string(), "eps": a.eps}),
        json!({
            "n": g.n(),
            "m": g.edge_count(),
            "k_hat": report.k_hat,
            "t_accepted": report.t_accepted,
            "t_final": report.t_final,
            "verify_calls": report.calls.len(),
            "queries": {
                "degree": report.queries.degree,
                "neighbor": report.queries.neighbor,
                "adjacency": report.queries.adjacency,
            },
        }),
    );
    stamp(ctx, &mut rec, started);
    Ok(vec![rec])
}

/// Fixed-column CSV over (n, k, eps) cells; each cell gets its own
/// derived seed so rows reproduce independently of the grid shape.
pub fn mincut_sweep(a: &MincutSweepArgs, ctx: &Ctx) -> Result<String, CliError> {
    if a.n.is_empty() || a.eps.is_empty() || (a.k.is_empty() && a.family == SweepFamily::CycleChords)
    {
        return Err(CliError::Usage("sweep needs at least one value per axis".into()));
    }
    let ks: Vec<usize> = match a.family {
        SweepFamily::CycleChords => a.k.clone(),
        // The bridge pins the cut at 1; the k axis would only relabel it.
        SweepFamily::CliqueBridge => vec![1],
    };
    let mut cells = Vec::new();
    for &n in &a.n {
        for &k in &ks {
            for &eps in &a.eps {
                cells.push((n, k, eps));
            }
        }
    }
    if cells.len() * a.runs as usize > crate::sweep::CELL_CAP {
        return Err(CliError::Params(format!(
            "grid has {} rows; cap {}",
            cells.len() * a.runs as usize,
            crate::sweep::CELL_CAP
        )));
    }

    let rows: Result<Vec<Vec<Vec<String>>>, CliError> = crate::sweep::pool(ctx.jobs)?.install(|| {
        use rayon::prelude::*;
        cells
            .par_iter()
            .enumerate()
            .map(|(idx, &(n, k, eps))| {
                let cell_seed = mix_stream(ctx.seed, [idx as u64]);
                let g = match a.family {
                    SweepFamily::CycleChords => {
                        cycle_with_chords(n, k, Some(a.density * n), mix_stream(cell_seed, [0]))?
                    }
                    SweepFamily::CliqueBridge => clique_bridge(n / 2, n - n / 2)?,
                };
                let truth = global_min_cut(&g)?.value;
                let mut out = Vec::with_capacity(a.runs as usize);
                for run in 0..a.runs {
                    let oracle = AdjacencyOracle::from_graph(&g);
                    let cfg = ctx
                        .constants
                        .estimator(eps, mix_stream(cell_seed, [1 + run as u64]));
                    let rep = estimate_min_cut(&oracle, &cfg)?;
                    let correct = (rep.k_hat - truth).abs() <= eps * truth;
                    out.push(vec![
                        n.to_string(),
                        g.edge_count().to_string(),
                        k.to_string(),
                        eps.to_string(),
                        rep.k_hat.to_string(),
                        rep.queries.degree.to_string(),
                        rep.queries.neighbor.to_string(),
                        rep.queries.adjacency.to_string(),
                        (correct as u8).to_string(),
                    ]);
                }
                Ok(out)
            })
            .collect()
    });

    let mut csv = String::from("n,m,k,eps,k_hat,degree_q,neighbor_q,adjacency_q,correct\n");
    for cell_rows in rows? {
        for row in cell_rows {
            csv.push_str(&row.join(","));
            csv.push('\n');
        }
    }
    Ok(csv)
}

pub fn twosum_lemma(a: &TwosumLemmaArgs, ctx: &Ctx) -> Result<Vec<Value>, CliError> {
    let side = (a.n as f64).sqrt().round() as usize;
    if side * side != a.n {
        return Err(CliError::Params(format!(
            "N = {} must be a perfect square; nearest are {} and {}",
            a.n,
            side.saturating_sub(1).pow(2).max(1),
            (side + 1) * (side + 1)
        )));
    }
    if a.exhaustive {
        // 4^N string pairs; past N = 9 this stops being a desk job.
        if a.n > 9 {
            return Err(CliError::Params(format!(
                "exhaustive mode enumerates 4^N pairs; N = {} is past the cap of 9",
                a.n
            )));
        }
        let started = Instant::now();
        let mut checked = 0u64;
        let mut violations = 0u64;
        for x_mask in 0u32..1 << a.n {
            for y_mask in 0u32..1 << a.n {
                if (x_mask & y_mask).count_ones() > 1 {
                    continue;
                }
                let bit = |m: u32, i: usize| m >> i & 1 == 1;
                let x: Vec<bool> = (0..a.n).map(|i| bit(x_mask, i)).collect();
                let y: Vec<bool> = (0..a.n).map(|i| bit(y_mask, i)).collect();
                let rec = check_gadget_mincut(&PairedStrings::new(x, y)?)?;
                checked += 1;
                violations += (rec.condition_met && !rec.holds) as u64;
            }
        }
        let mut rec = record(
            ctx,
            "twosum.lemma-check",
            json!({"N": a.n, "mode": "exhaustive"}),
            json!({"checked": checked, "violations": violations}),
        );
        stamp(ctx, &mut rec, started);
        return Ok(vec![rec]);
    }

    let trials = a.trials.expect("clap enforces the group");
    let gamma_max = side / 3;
    let params = json!({"N": a.n, "mode": "trials", "trials": trials});
    let mut rng = ChaCha8Rng::seed_from_u64(mix_stream(ctx.seed, [3]));
    let mut records = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let started = Instant::now();
        let gamma = if gamma_max == 0 { 0 } else { trial as usize % (gamma_max + 1) };
        let pair = random_pair_with_int(a.n, gamma, &mut rng)?;
        let check = check_gadget_mincut(&pair)?;
        let mut rec = record(
            ctx,
            "twosum.lemma-check",
            params.clone(),
            json!({
                "trial": trial,
                "gamma": gamma,
                "mincut": check.mincut,
                "condition_met": check.condition_met,
                "holds": check.holds,
            }),
        );
        stamp(ctx, &mut rec, started);
        records.push(rec);
    }
    Ok(records)
}

pub fn twosum_reduce(a: &TwosumReduceArgs, ctx: &Ctx) -> Result<Vec<Value>, CliError> {
    let started = Instant::now();
    if (1.0 / (a.eps * a.eps) - a.t as f64).abs() > 1e-6 {
        return Err(CliError::Params(format!(
            "eps = {} demands {:.3} pairs but --t is {}; try --eps {}",
            a.eps,
            1.0 / (a.eps * a.eps),
            a.t,
            1.0 / (a.t as f64).sqrt()
        )));
    }
    let inst = sample_two_sum(a.t, a.len, a.alpha, a.r, mix_stream(ctx.seed, [4]))?;
    // alpha = max(eps^2 * lambda, 1) inverts to lambda = alpha * t.
    let lambda = a.alpha as f64 * a.t as f64;
    let reps = a.reps.unwrap_or(ctx.constants.reps).max(1);

    let (algo_constants, estimator_constants): (Value, Option<Constants>) =
        match a.algo.as_str() {
            "exact" => (Value::Null, None),
            "local" => (ctx.constants.as_json(), Some(ctx.constants.clone())),
            "local:desk" => (Constants::desk().as_json(), Some(Constants::desk())),
            "local:paper" => (Constants::paper().as_json(), Some(Constants::paper())),
            other => {
                return Err(CliError::Usage(format!(
                    "--algo must be exact, local, local:desk, or local:paper; got {other:?}"
                )))
            }
        };

    let mut run_values: Vec<f64> = Vec::new();
    let answer = {
        let runs = &mut run_values;
        let estimate = |g: &UndirectedGraph| -> cutlab_core::Result<f64> {
            match &estimator_constants {
                None => {
                    let v = global_min_cut(g)?.value;
                    runs.push(v);
                    Ok(v)
                }
                Some(consts) => {
                    let mut vals = Vec::with_capacity(reps as usize);
                    for rep in 0..reps {
                        let cfg = consts.estimator(a.eps, mix_stream(ctx.seed, [41, rep as u64]));
                        vals.push(estimate_min_cut(&AdjacencyOracle::from_graph(g), &cfg)?.k_hat);
                    }
                    runs.extend_from_slice(&vals);
                    vals.sort_by(f64::total_cmp);
                    Ok(vals[vals.len() / 2])
                }
            }
        };
        reduce_two_sum(&inst, a.eps, lambda, estimate)?
    };

    let params = json!({
        "t": a.t, "L": a.len, "alpha": a.alpha, "r": a.r, "eps": a.eps,
        "algo": a.algo, "reps": reps,
    });
    let mut records: Vec<Value> = run_values
        .iter()
        .enumerate()
        .map(|(run, est)| {
            record(
                ctx,
                "twosum.reduce",
                params.clone(),
                json!({"run": run, "estimate": est}),
            )
        })
        .collect();
    let truth = inst.disjoint_count();
    let mut summary = record(
        ctx,
        "twosum.reduce",
        params,
        json!({
            "answer": answer,
            "true_disjoint": truth,
            "additive_error": answer - truth as f64,
            "algo_constants": algo_constants,
        }),
    );
    stamp(ctx, &mut summary, started);
    records.push(summary);
    Ok(records)
}

pub fn selftest(quick: bool, ctx: &Ctx) -> (Vec<Value>, usize) {
    let outcomes = cutlab_core::checks::run_all(quick, ctx.seed);
    let failures = outcomes.iter().filter(|o| !o.pass).count();
    let records = outcomes
        .iter()
        .map(|o| {
            // Human-readable progress goes to stderr; stdout stays JSONL.
            eprintln!("{}", o.line());
            record(
                ctx,
                "selftest",
                json!({"quick": quick}),
                json!({
                    "check": o.name,
                    "pass": o.pass,
                    "seconds": o.seconds,
                    "details": o.details,
                }),
            )
        })
        .collect();
    (records, failures)
}
