//! Disjointness-counting instances and the four-part gadget graph that
//! ties them to min-cut estimation.
//!
//! An instance holds t string pairs of length len with the promise that
//! each pair intersects in exactly 0 or alpha positions and at least
//! t/1000 pairs (at least one) intersect. The task is the number of
//! disjoint pairs, up to additive sqrt(t).
//!
//! Concatenating all pairs into one long pair (x, y) of length M and
//! building the gadget graph turns the count into a min cut: whenever
//! sqrt(M) >= 3 INT(x, y), the gadget's min cut is exactly 2 INT(x, y).
//! A min-cut estimate A then answers the count as t - A / (2 alpha).

use crate::connectivity::edge_connectivity;
use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::local::{LocalGraphOracle, QueryCounters, QueryCounts};
use crate::mincut::global_min_cut;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::oracle::mix64;

/// Two equal-length bit strings whose length is a perfect square, the
/// input shape the gadget graph needs.
#[derive(Debug, Clone)]
pub struct PairedStrings {
    ell: usize,
    x: Vec<bool>,
    y: Vec<bool>,
}

impl PairedStrings {
    pub fn new(x: Vec<bool>, y: Vec<bool>) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::InvalidInput(
                "paired strings must be nonempty and of equal length".into(),
            ));
        }
        let ell = (x.len() as f64).sqrt().round() as usize;
        if ell * ell != x.len() {
            return Err(Error::InvalidInput(format!(
                "string length {} is not a perfect square",
                x.len()
            )));
        }
        Ok(PairedStrings { ell, x, y })
    }

    /// Parse from 0/1 text, e.g. ("000000100", "100010100").
    pub fn from_bits(x: &str, y: &str) -> Result<Self> {
        let conv = |s: &str| -> Result<Vec<bool>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::Parse(format!("bit char {other:?}"))),
                })
                .collect()
        };
        PairedStrings::new(conv(x)?, conv(y)?)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn side(&self) -> usize {
        self.ell
    }

    /// Number of positions where both strings are 1.
    pub fn int_count(&self) -> usize {
        self.x.iter().zip(&self.y).filter(|&(&a, &b)| a && b).count()
    }

    fn both(&self, i: usize, j: usize) -> bool {
        let idx = i * self.ell + j;
        self.x[idx] && self.y[idx]
    }
}

/// Gadget graph on 4 ell vertices: parts A, A', B, B' laid out as
/// id = part * ell + index. Bit (i, j) routes the pair of edges from
/// row i to column j straight (A-A', B-B') on a miss and crossed
/// (A-B', B-A') on a shared 1, so every vertex has degree ell and each
/// shared 1 contributes exactly two A/A'-to-B/B' crossing edges.
#[derive(Debug, Clone)]
pub struct GxyGraph {
    pub graph: UndirectedGraph,
    pub side: usize,
    pub gamma: usize,
}

pub const PART_A: usize = 0;
pub const PART_A_PRIME: usize = 1;
pub const PART_B: usize = 2;
pub const PART_B_PRIME: usize = 3;

pub fn build_gxy(pair: &PairedStrings) -> Result<GxyGraph> {
    let ell = pair.side();
    let v = |part: usize, idx: usize| part * ell + idx;
    let mut edges = Vec::with_capacity(2 * ell * ell);
    for i in 0..ell {
        for j in 0..ell {
            if pair.both(i, j) {
                edges.push((v(PART_A, i), v(PART_B_PRIME, j)));
                edges.push((v(PART_B, i), v(PART_A_PRIME, j)));
            } else {
                edges.push((v(PART_A, i), v(PART_A_PRIME, j)));
                edges.push((v(PART_B, i), v(PART_B_PRIME, j)));
            }
        }
    }
    Ok(GxyGraph {
        graph: UndirectedGraph::new(4 * ell, edges)?,
        side: ell,
        gamma: pair.int_count(),
    })
}

/// One exact min-cut check of the gadget identity.
#[derive(Debug, Clone, Copy)]
pub struct GadgetCutRecord {
    pub len: usize,
    pub gamma: usize,
    /// Whether sqrt(len) >= 3 gamma, the identity's precondition.
    pub condition_met: bool,
    pub mincut: f64,
    /// mincut == 2 gamma; meaningful when condition_met.
    pub holds: bool,
}

const GADGET_CHECK_CAP: usize = 400;

/// Exact min cut of the gadget vs 2 INT(x, y), for strings up to length 400.
pub fn check_gadget_mincut(pair: &PairedStrings) -> Result<GadgetCutRecord> {
    if pair.len() > GADGET_CHECK_CAP {
        return Err(Error::SizeCap {
            what: "gadget min-cut check string length",
            cap: GADGET_CHECK_CAP,
            got: pair.len(),
        });
    }
    let gxy = build_gxy(pair)?;
    let mincut = global_min_cut(&gxy.graph)?.value;
    let gamma = gxy.gamma;
    Ok(GadgetCutRecord {
        len: pair.len(),
        gamma,
        condition_met: pair.side() >= 3 * gamma,
        mincut,
        holds: (mincut - 2.0 * gamma as f64).abs() < 0.5,
    })
}

const CONNECTIVITY_CHECK_CAP: usize = 64;

/// Minimum pairwise edge connectivity of the gadget, by max-flow over all
/// vertex pairs. An independent witness for the min-cut identity on
/// strings up to length 64.
pub fn gadget_all_pairs_connectivity(pair: &PairedStrings) -> Result<usize> {
    if pair.len() > CONNECTIVITY_CHECK_CAP {
        return Err(Error::SizeCap {
            what: "all-pairs connectivity string length",
            cap: CONNECTIVITY_CHECK_CAP,
            got: pair.len(),
        });
    }
    let gxy = build_gxy(pair)?;
    let n = gxy.graph.n();
    let mut best = usize::MAX;
    for s in 0..n {
        for t in (s + 1)..n {
            best = best.min(edge_connectivity(&gxy.graph, s, t)?);
            if best == 0 {
                return Ok(0);
            }
        }
    }
    Ok(best)
}

/// t string pairs with the exact-intersection promise.
#[derive(Debug, Clone)]
pub struct TwoSumInstance {
    pairs: usize,
    len: usize,
    alpha: usize,
    xs: Vec<Vec<bool>>,
    ys: Vec<Vec<bool>>,
    r_true: usize,
}

fn min_intersecting(pairs: usize) -> usize {
    pairs.div_ceil(1000).max(1)
}

impl TwoSumInstance {
    pub fn new(xs: Vec<Vec<bool>>, ys: Vec<Vec<bool>>, alpha: usize) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(Error::InvalidInput(
                "need equally many nonzero x and y strings".into(),
            ));
        }
        if alpha == 0 {
            return Err(Error::InvalidInput("alpha must be at least 1".into()));
        }
        let len = xs[0].len();
        if len == 0 || xs.iter().chain(&ys).any(|s| s.len() != len) {
            return Err(Error::InvalidInput(
                "all strings must share one nonzero length".into(),
            ));
        }
        let mut r_true = 0;
        for (i, (x, y)) in xs.iter().zip(&ys).enumerate() {
            let int = x.iter().zip(y).filter(|&(&a, &b)| a && b).count();
            if int == alpha {
                r_true += 1;
            } else if int != 0 {
                return Err(Error::InvalidInput(format!(
                    "pair {i} intersects {int} times, promise allows 0 or {alpha}"
                )));
            }
        }
        let floor = min_intersecting(xs.len());
        if r_true < floor {
            return Err(Error::InvalidInput(format!(
                "{r_true} intersecting pairs, promise requires at least {floor}"
            )));
        }
        Ok(TwoSumInstance { pairs: xs.len(), len, alpha, xs, ys, r_true })
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// Number of intersecting pairs.
    pub fn r_true(&self) -> usize {
        self.r_true
    }

    /// The task answer: number of disjoint pairs.
    pub fn disjoint_count(&self) -> usize {
        self.pairs - self.r_true
    }

    /// Lift an alpha = 1 instance to alpha = copies by concatenating
    /// copies of every string, which multiplies each intersection count.
    pub fn amplify(&self, copies: usize) -> Result<TwoSumInstance> {
        if self.alpha != 1 {
            return Err(Error::InvalidInput(format!(
                "amplification starts from alpha = 1, got {}",
                self.alpha
            )));
        }
        if copies == 0 {
            return Err(Error::InvalidInput("need at least one copy".into()));
        }
        let rep = |s: &Vec<bool>| -> Vec<bool> {
            let mut out = Vec::with_capacity(s.len() * copies);
            for _ in 0..copies {
                out.extend_from_slice(s);
            }
            out
        };
        TwoSumInstance::new(
            self.xs.iter().map(rep).collect(),
            self.ys.iter().map(rep).collect(),
            copies,
        )
    }

    /// Concatenate all pairs into the single long pair the gadget eats.
    pub fn concat(&self) -> Result<PairedStrings> {
        let flat = |v: &Vec<Vec<bool>>| v.iter().flatten().copied().collect::<Vec<bool>>();
        PairedStrings::new(flat(&self.xs), flat(&self.ys))
    }
}

/// Random string pair of the given length with exactly `gamma` shared 1s;
/// every other position draws uniformly from the three non-shared
/// combinations.
pub fn random_pair_with_int(
    len: usize,
    gamma: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PairedStrings> {
    if gamma > len {
        return Err(Error::InvalidInput(format!(
            "cannot intersect {gamma} times in {len} positions"
        )));
    }
    let mut x = vec![false; len];
    let mut y = vec![false; len];
    let mut is_shared = vec![false; len];
    for p in rand::seq::index::sample(rng, len, gamma) {
        is_shared[p] = true;
        x[p] = true;
        y[p] = true;
    }
    for p in 0..len {
        if !is_shared[p] {
            match rng.gen_range(0..3u8) {
                0 => {}
                1 => x[p] = true,
                _ => y[p] = true,
            }
        }
    }
    PairedStrings::new(x, y)
}

/// Random instance with exactly `r` intersecting pairs. Non-forced
/// positions draw uniformly from the three non-shared bit combinations.
pub fn sample_two_sum(
    pairs: usize,
    len: usize,
    alpha: usize,
    r: usize,
    seed: u64,
) -> Result<TwoSumInstance> {
    if pairs == 0 || len == 0 {
        return Err(Error::InvalidInput("pairs and len must be positive".into()));
    }
    if alpha == 0 || alpha > len {
        return Err(Error::InvalidInput(format!(
            "alpha = {alpha} must lie in 1..={len}"
        )));
    }
    if r < min_intersecting(pairs) || r > pairs {
        return Err(Error::InvalidInput(format!(
            "r = {r} outside promised range {}..={pairs}",
            min_intersecting(pairs)
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed ^ 0x25d0));
    let hot: Vec<usize> = rand::seq::index::sample(&mut rng, pairs, r).into_vec();
    let mut intersecting = vec![false; pairs];
    for i in hot {
        intersecting[i] = true;
    }
    let mut xs = Vec::with_capacity(pairs);
    let mut ys = Vec::with_capacity(pairs);
    for &hit in &intersecting {
        let mut x = vec![false; len];
        let mut y = vec![false; len];
        let shared: Vec<usize> = if hit {
            rand::seq::index::sample(&mut rng, len, alpha).into_vec()
        } else {
            Vec::new()
        };
        let mut is_shared = vec![false; len];
        for p in shared {
            is_shared[p] = true;
            x[p] = true;
            y[p] = true;
        }
        for p in 0..len {
            if !is_shared[p] {
                match rng.gen_range(0..3u8) {
                    0 => {}
                    1 => x[p] = true,
                    _ => y[p] = true,
                }
            }
        }
        xs.push(x);
        ys.push(y);
    }
    TwoSumInstance::new(xs, ys, alpha)
}

/// Answer the disjointness count through a min-cut estimator.
///
/// Checks pairs == eps^-2 and alpha == max(eps^2 lambda, 1), then the
/// per-instance identity precondition sqrt(M) >= 3 r alpha (the blanket
/// form 3 max(lambda, eps^-2) is unsatisfiable at desk sizes; the
/// identity only ever needs the instance's own intersection count).
pub fn reduce_two_sum<F>(
    inst: &TwoSumInstance,
    eps: f64,
    lambda: f64,
    mut estimator: F,
) -> Result<f64>
where
    F: FnMut(&UndirectedGraph) -> Result<f64>,
{
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps = {eps} outside (0, 1)")));
    }
    let t = 1.0 / (eps * eps);
    if (t - inst.pairs() as f64).abs() > 1e-6 {
        return Err(Error::InvalidInput(format!(
            "instance has {} pairs but eps = {eps} demands {t:.3}",
            inst.pairs()
        )));
    }
    let alpha = (eps * eps * lambda).max(1.0);
    if (alpha - inst.alpha() as f64).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "instance alpha {} but lambda = {lambda} demands {alpha:.3}",
            inst.alpha()
        )));
    }
    let m = inst.pairs() * inst.len();
    let int_total = inst.r_true() * inst.alpha();
    if ((m as f64).sqrt()) < 3.0 * int_total as f64 {
        return Err(Error::Infeasible(format!(
            "sqrt({m}) < 3 * {int_total}: gadget identity precondition fails"
        )));
    }
    let gxy = build_gxy(&inst.concat()?)?;
    let estimate = estimator(&gxy.graph)?;
    Ok(t - estimate / (2.0 * alpha))
}

/// Local query access to the gadget graph of a split string pair, with
/// one side holding x and the other holding y. Answering a neighbor or
/// adjacency query reveals one bit from each side; degree is the public
/// constant ell and costs nothing to communicate.
pub struct SplitGxyOracle {
    pair: PairedStrings,
    counters: QueryCounters,
}

impl SplitGxyOracle {
    pub fn new(pair: PairedStrings) -> Self {
        SplitGxyOracle { pair, counters: QueryCounters::default() }
    }

    fn part(&self, v: usize) -> (usize, usize) {
        (v / self.pair.side(), v % self.pair.side())
    }

    /// Bits exchanged so far: two per neighbor or adjacency answer.
    pub fn communication_bits(&self) -> u64 {
        communication_account(&self.counts())
    }
}

pub fn communication_account(counts: &QueryCounts) -> u64 {
    2 * (counts.neighbor + counts.adjacency)
}

impl LocalGraphOracle for SplitGxyOracle {
    fn vertex_count(&self) -> usize {
        4 * self.pair.side()
    }

    fn degree(&self, v: usize) -> usize {
        self.counters.bump_degree();
        debug_assert!(v < self.vertex_count());
        self.pair.side()
    }

    /// Neighbors are indexed by the opposite coordinate: the i-th
    /// neighbor of a row vertex lives in column i - 1 and vice versa,
    /// landing in the straight or crossed part by the bit at that cell.
    fn neighbor(&self, v: usize, i: usize) -> Option<usize> {
        self.counters.bump_neighbor();
        let ell = self.pair.side();
        if i == 0 || i > ell || v >= 4 * ell {
            return None;
        }
        let (part, idx) = self.part(v);
        let o = i - 1;
        let target = match part {
            PART_A => {
                if self.pair.both(idx, o) {
                    (PART_B_PRIME, o)
                } else {
                    (PART_A_PRIME, o)
                }
            }
            PART_A_PRIME => {
                if self.pair.both(o, idx) {
                    (PART_B, o)
                } else {
                    (PART_A, o)
                }
            }
            PART_B => {
                if self.pair.both(idx, o) {
                    (PART_A_PRIME, o)
                } else {
                    (PART_B_PRIME, o)
                }
            }
            _ => {
                if self.pair.both(o, idx) {
                    (PART_A, o)
                } else {
                    (PART_B, o)
                }
            }
        };
        Some(target.0 * ell + target.1)
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.counters.bump_adjacency();
        let n = self.vertex_count();
        if u >= n || v >= n || u == v {
            return false;
        }
        let (pu, iu) = self.part(u);
        let (pv, iv) = self.part(v);
        let (pu, iu, pv, iv) = if pu <= pv { (pu, iu, pv, iv) } else { (pv, iv, pu, iu) };
        match (pu, pv) {
            (PART_A, PART_A_PRIME) => !self.pair.both(iu, iv),
            (PART_A, PART_B_PRIME) => self.pair.both(iu, iv),
            (PART_A_PRIME, PART_B) => self.pair.both(iv, iu),
            (PART_B, PART_B_PRIME) => !self.pair.both(iu, iv),
            _ => false,
        }
    }

    fn counts(&self) -> QueryCounts {
        self.counters.snapshot()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mincut::brute_force_min_cut;

    #[test]
    fn worked_example_pair() {
        // x has one 1 at cell (3, 1); y shares it, so gamma = 1 and the
        // 12-vertex gadget is 3-regular with min cut 2.
        let pair = PairedStrings::from_bits("000000100", "100010100").unwrap();
        assert_eq!(pair.int_count(), 1);
        let gxy = build_gxy(&pair).unwrap();
        assert_eq!(gxy.graph.n(), 12);
        assert!(gxy.graph.degrees().iter().all(|&d| d == 3));
        let rec = check_gadget_mincut(&pair).unwrap();
        assert!(rec.condition_met);
        assert!(rec.holds);
        assert_eq!(rec.mincut, 2.0);
        assert_eq!(gadget_all_pairs_connectivity(&pair).unwrap(), 2);
    }

    #[test]
    fn disjoint_pair_splits_the_gadget() {
        let pair = PairedStrings::from_bits("110000000", "001100000").unwrap();
        assert_eq!(pair.int_count(), 0);
        let rec = check_gadget_mincut(&pair).unwrap();
        assert_eq!(rec.mincut, 0.0);
        assert!(rec.holds);
        assert_eq!(gadget_all_pairs_connectivity(&pair).unwrap(), 0);
    }

    #[test]
    fn gadget_matches_brute_force_on_tiny_strings() {
        // Every 4-bit pair: gadget on 8 vertices, check min cut against
        // brute force regardless of whether the identity precondition holds.
        for xm in 0u32..16 {
            for ym in 0u32..16 {
                let bits = |m: u32| (0..4).map(|b| m >> b & 1 == 1).collect::<Vec<_>>();
                let pair = PairedStrings::new(bits(xm), bits(ym)).unwrap();
                let gxy = build_gxy(&pair).unwrap();
                let sw = global_min_cut(&gxy.graph).unwrap().value;
                let bf = brute_force_min_cut(&gxy.graph).unwrap().value;
                assert_eq!(sw, bf, "x={xm:04b} y={ym:04b}");
                if pair.side() >= 3 * pair.int_count() {
                    assert_eq!(sw, 2.0 * pair.int_count() as f64);
                }
            }
        }
    }

    #[test]
    fn sampling_honors_promise_and_count() {
        let inst = sample_two_sum(16, 16, 2, 2, 7).unwrap();
        assert_eq!(inst.pairs(), 16);
        assert_eq!(inst.len(), 16);
        assert_eq!(inst.r_true(), 2);
        assert_eq!(inst.disjoint_count(), 14);
        let concat = inst.concat().unwrap();
        assert_eq!(concat.len(), 256);
        assert_eq!(concat.int_count(), 4);
        assert!(sample_two_sum(16, 16, 0, 2, 7).is_err());
        assert!(sample_two_sum(16, 16, 1, 0, 7).is_err());
        assert!(sample_two_sum(16, 16, 1, 17, 7).is_err());
    }

    #[test]
    fn promise_validation_rejects_off_promise_pairs() {
        let x = vec![vec![true, true, false, false]];
        let y = vec![vec![true, true, true, false]];
        // INT = 2 with alpha = 1 breaks the promise.
        assert!(TwoSumInstance::new(x.clone(), y.clone(), 1).is_err());
        assert!(TwoSumInstance::new(x.clone(), y.clone(), 2).is_ok());
        // All-disjoint instances violate the intersection floor.
        let x = vec![vec![true, false]];
        let y = vec![vec![false, true]];
        assert!(TwoSumInstance::new(x, y, 1).is_err());
    }

    #[test]
    fn amplification_scales_intersections() {
        let inst = sample_two_sum(4, 4, 1, 2, 3).unwrap();
        let big = inst.amplify(3).unwrap();
        assert_eq!(big.alpha(), 3);
        assert_eq!(big.len(), 12);
        assert_eq!(big.r_true(), inst.r_true());
        assert!(big.amplify(2).is_err());
    }

    #[test]
    fn reduction_with_exact_cuts_counts_disjoint_pairs() {
        let eps = 0.25;
        for (alpha, r, seed) in [(1usize, 3usize, 11u64), (2, 2, 12)] {
            let lambda = (alpha * 16) as f64;
            let inst = sample_two_sum(16, 16, alpha, r, seed).unwrap();
            let out = reduce_two_sum(&inst, eps, lambda, |g| {
                Ok(global_min_cut(g)?.value)
            })
            .unwrap();
            assert_eq!(out, inst.disjoint_count() as f64);
        }
    }

    #[test]
    fn reduction_validates_its_contract() {
        let inst = sample_two_sum(16, 16, 1, 3, 1).unwrap();
        let exact = |g: &UndirectedGraph| Ok(global_min_cut(g)?.value);
        // Wrong pair count for eps.
        assert!(reduce_two_sum(&inst, 0.5, 16.0, exact).is_err());
        // Wrong alpha for lambda.
        assert!(reduce_two_sum(&inst, 0.25, 32.0, exact).is_err());
        // Too many intersections for the gadget identity: r alpha = 6,
        // 3 * 6 > sqrt(256).
        let heavy = sample_two_sum(16, 16, 1, 6, 2).unwrap();
        assert!(matches!(
            reduce_two_sum(&heavy, 0.25, 16.0, exact),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn split_oracle_agrees_with_built_graph() {
        let inst = sample_two_sum(4, 4, 1, 1, 21).unwrap();
        let pair = inst.concat().unwrap();
        let gxy = build_gxy(&pair).unwrap();
        let adj = gxy.graph.adjacency();
        let oracle = SplitGxyOracle::new(pair);
        let n = oracle.vertex_count();
        assert_eq!(n, gxy.graph.n());
        for (v, expected) in adj.iter().enumerate() {
            assert_eq!(oracle.degree(v), expected.len());
            let mut nbrs: Vec<usize> =
                (1..=expected.len()).map(|i| oracle.neighbor(v, i).unwrap()).collect();
            nbrs.sort_unstable();
            assert_eq!(&nbrs, expected);
            assert_eq!(oracle.neighbor(v, 0), None);
            assert_eq!(oracle.neighbor(v, expected.len() + 1), None);
            for u in 0..n {
                assert_eq!(
                    oracle.adjacent(v, u),
                    expected.binary_search(&u).is_ok(),
                    "adjacent({v}, {u})"
                );
            }
        }
        let counts = oracle.counts();
        assert_eq!(counts.degree, n as u64);
        assert_eq!(counts.neighbor, (n * (4 + 2)) as u64);
        assert_eq!(counts.adjacency, (n * n) as u64);
        assert_eq!(
            oracle.communication_bits(),
            2 * (counts.neighbor + counts.adjacency)
        );
    }
}
