//! Local query model: degree / i-th-neighbor / adjacency access to a
//! hidden graph, plus the sampling-based min-cut estimator built on it.
//!
//! The estimator guesses the min cut by halving from t = n/2. Each guess
//! is checked by sampling edge slots at a rate tied to the guess, taking
//! the exact min cut of the sample, and comparing the rescaled value to
//! the guess. The coarse search runs at constant accuracy; only one final
//! call runs at the requested accuracy, on a guess shrunk enough that its
//! sample is dense where it matters.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::mincut::global_min_cut_weighted;
use crate::oracle::mix64;

/// Snapshot of per-type query totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QueryCounts {
    pub degree: u64,
    pub neighbor: u64,
    pub adjacency: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.degree + self.neighbor + self.adjacency
    }
}

/// Shared counter block for oracle implementations.
#[derive(Debug, Default)]
pub struct QueryCounters {
    degree: AtomicU64,
    neighbor: AtomicU64,
    adjacency: AtomicU64,
}

impl QueryCounters {
    pub fn bump_degree(&self) {
        self.degree.fetch_add(1, Ordering::Relaxed);
    }
    pub fn bump_neighbor(&self) {
        self.neighbor.fetch_add(1, Ordering::Relaxed);
    }
    pub fn bump_adjacency(&self) {
        self.adjacency.fetch_add(1, Ordering::Relaxed);
    }
    pub fn snapshot(&self) -> QueryCounts {
        QueryCounts {
            degree: self.degree.load(Ordering::Relaxed),
            neighbor: self.neighbor.load(Ordering::Relaxed),
            adjacency: self.adjacency.load(Ordering::Relaxed),
        }
    }
}

/// Query access to a hidden simple graph. The vertex count is public
/// knowledge; everything else costs a counted query.
pub trait LocalGraphOracle: Sync {
    fn vertex_count(&self) -> usize;
    /// Number of neighbors of `v`.
    fn degree(&self, v: usize) -> usize;
    /// The i-th neighbor of `v` for 1 <= i <= degree(v), else None.
    fn neighbor(&self, v: usize, i: usize) -> Option<usize>;
    fn adjacent(&self, u: usize, v: usize) -> bool;
    fn counts(&self) -> QueryCounts;
}

/// Oracle backed by an in-memory graph; neighbor lists ascend by vertex id.
pub struct AdjacencyOracle {
    adj: Vec<Vec<usize>>,
    counters: QueryCounters,
}

impl AdjacencyOracle {
    pub fn from_graph(g: &UndirectedGraph) -> Self {
        AdjacencyOracle { adj: g.adjacency(), counters: QueryCounters::default() }
    }
}

impl LocalGraphOracle for AdjacencyOracle {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn degree(&self, v: usize) -> usize {
        self.counters.bump_degree();
        self.adj[v].len()
    }

    fn neighbor(&self, v: usize, i: usize) -> Option<usize> {
        self.counters.bump_neighbor();
        if i == 0 {
            return None;
        }
        self.adj[v].get(i - 1).copied()
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.counters.bump_adjacency();
        self.adj[u].binary_search(&v).is_ok()
    }

    fn counts(&self) -> QueryCounts {
        self.counters.snapshot()
    }
}

/// Which guess the single accuracy-eps call uses after the coarse search
/// accepts at t: t / (C_final * ln n), or t / kappa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinalRule {
    CLogN,
    Kappa,
}

#[derive(Debug, Clone)]
pub struct EstimatorConfig {
    pub eps: f64,
    /// Coarse-phase accuracy.
    pub beta0: f64,
    /// Slot-sampling rate constant: p = min(1, c_sample * ln n / (acc^2 t)).
    pub c_sample: f64,
    /// Final-guess divisor constant for FinalRule::CLogN.
    pub c_final: f64,
    /// Reject-region constant; see `kappa`.
    pub c_kappa: f64,
    /// Flat kappa = c_kappa (calibration scale) instead of
    /// c_kappa * ln n / eps^2 (which is vacuous at small n).
    pub kappa_flat: bool,
    pub final_rule: FinalRule,
    /// Accept when rescaled sample cut >= accept_factor * t.
    pub accept_factor: f64,
    pub seed: u64,
}

impl EstimatorConfig {
    /// Constants sized for graphs of a few hundred to a few thousand nodes.
    pub fn desk(eps: f64, seed: u64) -> Self {
        EstimatorConfig {
            eps,
            beta0: 0.35,
            c_sample: 0.3,
            c_final: 2.0,
            c_kappa: 8.0,
            kappa_flat: true,
            final_rule: FinalRule::CLogN,
            accept_factor: 0.4,
            seed,
        }
    }

    /// Constants as stated for the asymptotic analysis. The reject region
    /// t >= kappa * k is unreachable until n is astronomically large.
    pub fn paper(eps: f64, seed: u64) -> Self {
        EstimatorConfig {
            eps,
            beta0: 0.25,
            c_sample: 12.0,
            c_final: 2.0,
            c_kappa: 2000.0,
            kappa_flat: false,
            final_rule: FinalRule::CLogN,
            accept_factor: 0.5,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |x: f64| x > 0.0 && x < 1.0;
        if !in_unit(self.eps) || !in_unit(self.beta0) || !in_unit(self.accept_factor) {
            return Err(Error::InvalidInput(
                "eps, beta0, accept_factor must lie in (0, 1)".into(),
            ));
        }
        if self.c_sample <= 0.0 || self.c_final <= 0.0 || self.c_kappa < 1.0 {
            return Err(Error::InvalidInput(
                "c_sample, c_final must be positive and c_kappa >= 1".into(),
            ));
        }
        Ok(())
    }

    pub fn kappa(&self, n: usize) -> f64 {
        if self.kappa_flat {
            self.c_kappa
        } else {
            self.c_kappa * (n as f64).ln() / (self.eps * self.eps)
        }
    }
}

/// One guess verification, fully instrumented.
#[derive(Debug, Clone)]
pub struct VerifyCall {
    pub t: f64,
    pub accuracy: f64,
    pub p_hat: f64,
    pub slot_rate: f64,
    pub sampled_slots: u64,
    pub kept_edges: usize,
    pub c_hat: f64,
    pub k_hat: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct EstimateReport {
    pub k_hat: f64,
    pub t_accepted: f64,
    pub t_final: f64,
    pub calls: Vec<VerifyCall>,
    pub queries: QueryCounts,
}

struct Session<'a, O: LocalGraphOracle + ?Sized> {
    oracle: &'a O,
    degrees: Vec<usize>,
    rng: ChaCha8Rng,
    /// Exact min cut of the full graph, filled on the first rate-1 call.
    full_cut: Option<f64>,
}

impl<'a, O: LocalGraphOracle + ?Sized> Session<'a, O> {
    fn new(oracle: &'a O, seed: u64) -> Self {
        let n = oracle.vertex_count();
        let degrees = (0..n).map(|v| oracle.degree(v)).collect();
        Session {
            oracle,
            degrees,
            rng: ChaCha8Rng::seed_from_u64(mix64(seed ^ 0x10ca1)),
            full_cut: None,
        }
    }

    fn verify(&mut self, t: f64, accuracy: f64, cfg: &EstimatorConfig) -> Result<VerifyCall> {
        if t < 1.0 {
            return Err(Error::InvalidInput(format!("guess t = {t} below 1")));
        }
        let n = self.degrees.len();
        let ln_n = (n as f64).ln();
        let p_hat = (cfg.c_sample * ln_n / (accuracy * accuracy * t)).min(1.0);
        // Sampling each ordered slot with rate q keeps an edge with
        // probability exactly 1 - (1-q)^2 = p_hat (two slots per edge).
        let q = 1.0 - (1.0 - p_hat).sqrt();
        let p_eff = 1.0 - (1.0 - q) * (1.0 - q);

        let mut sampled_slots = 0u64;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        if p_hat >= 1.0 {
            for (v, &deg) in self.degrees.iter().enumerate() {
                for i in 1..=deg {
                    sampled_slots += 1;
                    let u = self
                        .oracle
                        .neighbor(v, i)
                        .ok_or(Error::InconsistentOracle)?;
                    if v < u {
                        edges.push((v, u));
                    }
                }
            }
        } else {
            for (v, &deg) in self.degrees.iter().enumerate() {
                for i in 1..=deg {
                    if self.rng.gen::<f64>() < q {
                        sampled_slots += 1;
                        let u = self
                            .oracle
                            .neighbor(v, i)
                            .ok_or(Error::InconsistentOracle)?;
                        edges.push((v.min(u), v.max(u)));
                    }
                }
            }
            edges.sort_unstable();
            edges.dedup();
        }
        let kept = edges.len();

        let c_hat = if p_hat >= 1.0 {
            if let Some(c) = self.full_cut {
                c
            } else {
                let c = sampled_min_cut(n, &edges)?;
                self.full_cut = Some(c);
                c
            }
        } else {
            sampled_min_cut(n, &edges)?
        };

        let k_hat = c_hat / p_eff;
        Ok(VerifyCall {
            t,
            accuracy,
            p_hat,
            slot_rate: q,
            sampled_slots,
            kept_edges: kept,
            c_hat,
            k_hat,
            accepted: k_hat >= cfg.accept_factor * t,
        })
    }
}

/// Min cut of the sampled subgraph over all n vertices. A quick
/// union-find pass skips the full computation whenever the sample is
/// disconnected, which is the common case for sparse samples.
fn sampled_min_cut(n: usize, edges: &[(usize, usize)]) -> Result<f64> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            components -= 1;
        }
    }
    if components > 1 {
        return Ok(0.0);
    }
    let weighted: Vec<(usize, usize, f64)> =
        edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
    Ok(global_min_cut_weighted(n, &weighted)?.value)
}

/// Standalone guess verification with its own derived randomness.
pub fn verify_guess<O: LocalGraphOracle + ?Sized>(
    oracle: &O,
    t: f64,
    accuracy: f64,
    cfg: &EstimatorConfig,
) -> Result<VerifyCall> {
    cfg.validate()?;
    let mut s = Session::new(oracle, cfg.seed);
    s.verify(t, accuracy, cfg)
}

/// Full estimation: n degree queries, coarse halving search at accuracy
/// beta0, then one refinement call at accuracy eps. On the normal path
/// exactly one call runs at accuracy eps; if that call rejects (possible,
/// the guess contract says nothing between the accept and reject regions)
/// the guess halves and the refinement retries.
pub fn estimate_min_cut<O: LocalGraphOracle + ?Sized>(
    oracle: &O,
    cfg: &EstimatorConfig,
) -> Result<EstimateReport> {
    cfg.validate()?;
    let n = oracle.vertex_count();
    if n < 2 {
        return Err(Error::InvalidInput(format!("{n} vertices leave nothing to cut")));
    }
    let mut session = Session::new(oracle, cfg.seed);
    let mut calls = Vec::new();

    let finish = |k_hat: f64, t_acc: f64, t_fin: f64, calls: Vec<VerifyCall>| EstimateReport {
        k_hat,
        t_accepted: t_acc,
        t_final: t_fin,
        calls,
        queries: oracle.counts(),
    };

    let mut t = n as f64 / 2.0;
    let t_accepted = loop {
        let call = session.verify(t, cfg.beta0, cfg)?;
        let (accepted, exact_zero) =
            (call.accepted, call.p_hat >= 1.0 && call.c_hat == 0.0);
        calls.push(call);
        if accepted {
            break t;
        }
        if exact_zero {
            // The whole graph was scanned and came back disconnected.
            return Ok(finish(0.0, t, t, calls));
        }
        if t <= 1.0 {
            return Err(Error::InconsistentOracle);
        }
        t = (t / 2.0).max(1.0);
    };

    let ln_n = (n as f64).ln();
    let mut t_final = match cfg.final_rule {
        FinalRule::CLogN => t_accepted / (cfg.c_final * ln_n),
        FinalRule::Kappa => t_accepted / cfg.kappa(n),
    }
    .max(1.0);
    for _ in 0..64 {
        let call = session.verify(t_final, cfg.eps, cfg)?;
        let (accepted, k_hat, exact_zero) =
            (call.accepted, call.k_hat, call.p_hat >= 1.0 && call.c_hat == 0.0);
        calls.push(call);
        if accepted {
            return Ok(finish(k_hat, t_accepted, t_final, calls));
        }
        if exact_zero {
            return Ok(finish(0.0, t_accepted, t_final, calls));
        }
        t_final = (t_final / 2.0).max(1.0);
    }
    Err(Error::InconsistentOracle)
}

/// Bernoulli check that slot sampling retains each edge with probability
/// 1 - (1-q)^2; exposed for calibration tooling and tests.
pub fn edge_retention_trials(
    g: &UndirectedGraph,
    p_hat: f64,
    trials: u32,
    seed: u64,
) -> Vec<u32> {
    let adj = g.adjacency();
    let q = 1.0 - (1.0 - p_hat).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_edge: std::collections::HashMap<(usize, usize), u32> =
        g.edges().iter().map(|&(u, v)| ((u, v), 0)).collect();
    for _ in 0..trials {
        let mut kept: HashSet<(usize, usize)> = HashSet::new();
        for (v, nbrs) in adj.iter().enumerate() {
            for &u in nbrs {
                if rng.gen::<f64>() < q {
                    kept.insert((v.min(u), v.max(u)));
                }
            }
        }
        for e in kept {
            *per_edge.get_mut(&e).unwrap() += 1;
        }
    }
    let mut counts: Vec<((usize, usize), u32)> = per_edge.into_iter().collect();
    counts.sort_unstable_by_key(|&(e, _)| e);
    counts.into_iter().map(|(_, c)| c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{clique_bridge, complete_graph, cycle};

    #[test]
    fn adjacency_oracle_basics() {
        let g = UndirectedGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let o = AdjacencyOracle::from_graph(&g);
        assert_eq!(o.vertex_count(), 3);
        assert_eq!(o.degree(1), 2);
        assert_eq!(o.neighbor(1, 1), Some(0));
        assert_eq!(o.neighbor(1, 2), Some(2));
        assert_eq!(o.neighbor(0, 2), None);
        assert_eq!(o.neighbor(0, 0), None);
        assert!(!o.adjacent(0, 2));
        assert!(o.adjacent(2, 1));
        let c = o.counts();
        assert_eq!((c.degree, c.neighbor, c.adjacency), (1, 4, 2));
    }

    #[test]
    fn rate_one_call_is_exact() {
        let g = complete_graph(6).unwrap();
        let o = AdjacencyOracle::from_graph(&g);
        let cfg = EstimatorConfig::desk(0.3, 1);
        let call = verify_guess(&o, 1.0, 0.3, &cfg).unwrap();
        assert_eq!(call.p_hat, 1.0);
        assert_eq!(call.c_hat, 5.0);
        assert_eq!(call.k_hat, 5.0);
        assert!(call.accepted);
        assert_eq!(call.sampled_slots, 30);
    }

    #[test]
    fn estimates_clique_and_bridge() {
        let cfg = EstimatorConfig::desk(0.2, 42);
        let k6 = complete_graph(6).unwrap();
        let r = estimate_min_cut(&AdjacencyOracle::from_graph(&k6), &cfg).unwrap();
        assert!(r.k_hat >= 0.8 * 5.0 && r.k_hat <= 1.2 * 5.0, "{}", r.k_hat);

        let bridged = clique_bridge(8, 8).unwrap();
        let r = estimate_min_cut(&AdjacencyOracle::from_graph(&bridged), &cfg).unwrap();
        assert!(r.k_hat >= 0.8 && r.k_hat <= 1.2, "{}", r.k_hat);
        assert_eq!(r.queries.degree, 16);
    }

    #[test]
    fn disconnected_graph_reports_zero() {
        let g = UndirectedGraph::new(8, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
            .unwrap();
        let cfg = EstimatorConfig::desk(0.2, 9);
        let r = estimate_min_cut(&AdjacencyOracle::from_graph(&g), &cfg).unwrap();
        assert_eq!(r.k_hat, 0.0);
    }

    #[test]
    fn exactly_one_final_accuracy_call_on_normal_path() {
        let g = cycle(64).unwrap();
        let cfg = EstimatorConfig::desk(0.2, 5);
        let r = estimate_min_cut(&AdjacencyOracle::from_graph(&g), &cfg).unwrap();
        let fine: Vec<_> = r.calls.iter().filter(|c| c.accuracy == 0.2).collect();
        assert_eq!(fine.len(), 1);
        assert!(fine[0].accepted);
        assert!(r.calls.iter().rev().skip(1).all(|c| c.accuracy == cfg.beta0));
        assert!((r.k_hat - 2.0).abs() <= 0.2 * 2.0);
    }

    #[test]
    fn coarse_rejections_precede_the_accept() {
        let g = cycle(200).unwrap();
        let cfg = EstimatorConfig::desk(0.2, 11);
        let r = estimate_min_cut(&AdjacencyOracle::from_graph(&g), &cfg).unwrap();
        let coarse: Vec<_> = r.calls.iter().filter(|c| c.accuracy == cfg.beta0).collect();
        assert!(coarse.len() > 1);
        assert!(coarse.iter().rev().skip(1).all(|c| !c.accepted));
        assert!(coarse.last().unwrap().accepted);
        // Guesses halve.
        for w in coarse.windows(2) {
            assert!((w[1].t - w[0].t / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let g = cycle_chords_for_test();
        let cfg = EstimatorConfig::desk(0.2, 77);
        let o1 = AdjacencyOracle::from_graph(&g);
        let o2 = AdjacencyOracle::from_graph(&g);
        let r1 = estimate_min_cut(&o1, &cfg).unwrap();
        let r2 = estimate_min_cut(&o2, &cfg).unwrap();
        assert_eq!(r1.k_hat, r2.k_hat);
        assert_eq!(r1.queries, r2.queries);
        assert_eq!(r1.calls.len(), r2.calls.len());
    }

    fn cycle_chords_for_test() -> UndirectedGraph {
        crate::families::cycle_with_chords(120, 4, Some(480), 3).unwrap()
    }

    #[test]
    fn retention_matches_analytic_probability() {
        let g = cycle_with_fixed_edges();
        let p_hat = 0.6;
        let trials = 4000u32;
        let counts = edge_retention_trials(&g, p_hat, trials, 123);
        assert_eq!(counts.len(), 100);
        let sigma = (trials as f64 * p_hat * (1.0 - p_hat)).sqrt();
        for &c in &counts {
            let dev = (c as f64 - trials as f64 * p_hat).abs();
            assert!(dev <= 4.5 * sigma, "count {c} deviates {dev}");
        }
        // Aggregate over all edges is a much tighter check.
        let total: u64 = counts.iter().map(|&c| c as u64).sum();
        let mean = total as f64 / counts.len() as f64 / trials as f64;
        assert!((mean - p_hat).abs() < 0.01, "mean retention {mean}");
    }

    fn cycle_with_fixed_edges() -> UndirectedGraph {
        cycle(100).unwrap()
    }

    #[test]
    fn config_validation() {
        let mut cfg = EstimatorConfig::desk(0.2, 0);
        assert!(cfg.validate().is_ok());
        cfg.eps = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = EstimatorConfig::paper(0.2, 0);
        assert!(cfg.validate().is_ok());
        assert!(cfg.kappa(100) > 100.0);
        cfg.c_kappa = 0.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn guess_below_one_is_rejected() {
        let g = cycle(10).unwrap();
        let o = AdjacencyOracle::from_graph(&g);
        let cfg = EstimatorConfig::desk(0.2, 0);
        assert!(verify_guess(&o, 0.5, 0.2, &cfg).is_err());
    }
}
