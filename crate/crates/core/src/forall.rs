//! Distance-gap instances encoded as balanced directed graphs, decoded by
//! subset enumeration.
//!
//! Each left node of a block pair carries one 0/1 string of length d and
//! weight d/2 on its forward edges (weight = bit + 1). Whether a target
//! string sits close to or far from a planted left node shows up in how
//! often that node lands in the argmax half-subset: summing over k/2 left
//! nodes amplifies a per-node bias that a single noisy cut query would
//! drown. The decoder enumerates all half-subsets, estimates each cut,
//! and answers by membership of the planted node in the winner.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{DirectedWeightedGraph, Edge, NodeSet};
use crate::oracle::CutOracle;

const REJECTION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct ForAllParams {
    /// String length d = 1/eps^2; must be even.
    pub d: usize,
    pub beta: usize,
    /// Total vertex count; multiple of the block size k = beta * d.
    pub n: usize,
    /// Distance-gap constant: the promise margin is c * sqrt(d).
    pub c: f64,
    /// Enumeration budget for C(k, k/2).
    pub enum_cap: u64,
}

pub const DEFAULT_GAP_C: f64 = 0.05;
pub const DEFAULT_ENUM_CAP: u64 = 20_000;
/// Relative oracle-noise scale the enumerating decoder tolerates at a
/// 2/3 success target: eps' = DEFAULT_NOISE_C2 * sqrt(1/d). Calibrated
/// against the (beta, d) in {(1,16), (2,8), (4,4)} grid: success stays
/// above 95/100 through 0.05, dips to ~89/100 at 0.2, then saturates
/// near the exact-decode ceiling; 0.2 keeps a wide margin over 2/3
/// while leaving noise visible in sweep curves.
pub const DEFAULT_NOISE_C2: f64 = 0.2;

impl ForAllParams {
    pub fn new(d: usize, beta: usize, n: usize, c: f64, enum_cap: u64) -> Result<Self> {
        if d == 0 || d % 2 != 0 {
            return Err(Error::InvalidInput(format!("d = {d} must be positive and even")));
        }
        if beta == 0 {
            return Err(Error::InvalidInput("beta must be positive".into()));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidInput(format!("gap constant c = {c} must be positive")));
        }
        let p = ForAllParams { d, beta, n, c, enum_cap };
        if p.gap() > d as f64 / 2.0 {
            return Err(Error::Infeasible(format!(
                "gap {} exceeds d/2 = {}; no string pair can satisfy the promise",
                p.gap(),
                d / 2
            )));
        }
        let k = p.block_size();
        if n == 0 || n % k != 0 {
            return Err(Error::InvalidInput(format!(
                "n = {n} is not a multiple of the block size {k}"
            )));
        }
        if p.blocks() < 2 {
            return Err(Error::InvalidInput(format!(
                "n = {n} gives {} block(s); at least 2 needed",
                p.blocks()
            )));
        }
        let subsets = binomial(k as u64, k as u64 / 2);
        if subsets > enum_cap {
            return Err(Error::EnumerationCap { cap: enum_cap, needed: subsets });
        }
        Ok(p)
    }

    pub fn block_size(&self) -> usize {
        self.beta * self.d
    }

    pub fn blocks(&self) -> usize {
        self.n / self.block_size()
    }

    /// Promise margin on the Hamming distance: c / eps = c * sqrt(d).
    pub fn gap(&self) -> f64 {
        self.c * (self.d as f64).sqrt()
    }

    /// Strings the encoder consumes: one per (pair, left node, cluster).
    pub fn string_count(&self) -> usize {
        (self.blocks() - 1) * self.block_size() * self.beta
    }

    pub fn string_index(&self, pair: usize, i: usize, j: usize) -> usize {
        pair * self.block_size() * self.beta + i * self.beta + j
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for s in 0..k {
        acc = acc.saturating_mul(n - s) / (s + 1);
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Distance at least d/2 + gap.
    High,
    /// Distance at most d/2 - gap.
    Low,
}

#[derive(Debug, Clone)]
pub struct GapHammingInstance {
    /// All encoder strings, indexed by `string_index`; each has weight d/2.
    pub strings: Vec<Vec<u8>>,
    pub bob_pair: usize,
    pub bob_i: usize,
    pub bob_j: usize,
    pub bob_string: Vec<u8>,
    pub promise_side: Side,
}

fn random_half_weight_string(rng: &mut ChaCha8Rng, d: usize) -> Vec<u8> {
    let mut s = vec![0u8; d];
    for idx in rand::seq::index::sample(rng, d, d / 2) {
        s[idx] = 1;
    }
    s
}

/// Hamming distance and support intersection of two weight-d/2 strings.
/// The identity distance = d - 2 * intersection is asserted on the way out.
pub fn hamming_intersection_identity(s: &[u8], t: &[u8]) -> Result<(usize, usize)> {
    if s.len() != t.len() {
        return Err(Error::InvalidInput("string length mismatch".into()));
    }
    let d = s.len();
    let wt = |v: &[u8]| v.iter().filter(|&&b| b == 1).count();
    if wt(s) != d / 2 || wt(t) != d / 2 {
        return Err(Error::InvalidInput(format!("strings must have weight {}", d / 2)));
    }
    let delta = s.iter().zip(t).filter(|(a, b)| a != b).count();
    let inter = s.iter().zip(t).filter(|(a, b)| **a == 1 && **b == 1).count();
    assert_eq!(delta, d - 2 * inter);
    Ok((delta, inter))
}

/// Draw a full instance: uniform weight-d/2 strings everywhere, then
/// resample Bob's target pair until the promised gap holds on the side
/// picked by a fair coin.
pub fn sample_gap_hamming(p: &ForAllParams, seed: u64) -> Result<GapHammingInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut strings: Vec<Vec<u8>> = (0..p.string_count())
        .map(|_| random_half_weight_string(&mut rng, p.d))
        .collect();
    let bob_pair = rng.gen_range(0..p.blocks() - 1);
    let bob_i = rng.gen_range(0..p.block_size());
    let bob_j = rng.gen_range(0..p.beta);
    let side = if rng.gen::<bool>() { Side::High } else { Side::Low };
    let d = p.d as f64;
    for _ in 0..REJECTION_CAP {
        let s = random_half_weight_string(&mut rng, p.d);
        let t = random_half_weight_string(&mut rng, p.d);
        let (delta, _) = hamming_intersection_identity(&s, &t)?;
        let ok = match side {
            Side::High => delta as f64 >= d / 2.0 + p.gap(),
            Side::Low => delta as f64 <= d / 2.0 - p.gap(),
        };
        if ok {
            strings[p.string_index(bob_pair, bob_i, bob_j)] = s;
            return Ok(GapHammingInstance {
                strings,
                bob_pair,
                bob_i,
                bob_j,
                bob_string: t,
                promise_side: side,
            });
        }
    }
    Err(Error::Infeasible(format!(
        "no string pair hit the promised gap within {REJECTION_CAP} draws"
    )))
}

pub struct ForAllEncoding {
    pub graph: DirectedWeightedGraph,
}

/// Chain encoding: per block pair, forward edge (left node i, v-th node of
/// cluster j) has weight string(v) + 1; every backward edge weighs 1/beta.
pub fn encode(strings: &[Vec<u8>], p: &ForAllParams) -> Result<ForAllEncoding> {
    if strings.len() != p.string_count() {
        return Err(Error::InvalidInput(format!(
            "expected {} strings, got {}",
            p.string_count(),
            strings.len()
        )));
    }
    if strings.iter().any(|s| s.len() != p.d) {
        return Err(Error::InvalidInput(format!("every string must have length {}", p.d)));
    }
    let k = p.block_size();
    let back_w = 1.0 / p.beta as f64;
    let mut edges = Vec::with_capacity(2 * (p.blocks() - 1) * k * k);
    for pair in 0..p.blocks() - 1 {
        for i in 0..k {
            let u = pair * k + i;
            for j in 0..p.beta {
                let s = &strings[p.string_index(pair, i, j)];
                for (v, &bit) in s.iter().enumerate() {
                    let vtx = (pair + 1) * k + j * p.d + v;
                    edges.push(Edge { u, v: vtx, w: bit as f64 + 1.0 });
                    edges.push(Edge { u: vtx, v: u, w: back_w });
                }
            }
        }
    }
    Ok(ForAllEncoding { graph: DirectedWeightedGraph::new(p.n, edges)? })
}

/// Exact backward weight crossing the decoder's cut for any half subset.
pub fn decoder_subtraction(p: &ForAllParams, pair: usize) -> f64 {
    let k = p.block_size() as f64;
    let half_k = k / 2.0;
    let half_d = p.d as f64 / 2.0;
    let inv_beta = 1.0 / p.beta as f64;
    let mut sub = (k - half_d) * half_k * inv_beta;
    if pair >= 1 {
        sub += k * half_k * inv_beta;
    }
    if pair + 2 < p.blocks() {
        sub += k * half_d * inv_beta;
    }
    sub
}

/// All size-(k/2) subsets of 0..k as bitmasks, in lexicographic order of
/// their sorted index tuples.
pub fn half_subsets(k: usize) -> Vec<u32> {
    assert!(k <= 30 && k % 2 == 0);
    let h = k / 2;
    let mut idx: Vec<usize> = (0..h).collect();
    let mut out = Vec::new();
    loop {
        out.push(idx.iter().fold(0u32, |m, &i| m | (1 << i)));
        // Advance to the next combination.
        let mut pos = h;
        while pos > 0 && idx[pos - 1] == k - (h - pos) - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
        idx[pos - 1] += 1;
        for q in pos..h {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

#[derive(Debug, Clone)]
pub struct BobInput {
    pub pair: usize,
    pub i: usize,
    pub j: usize,
    pub t: Vec<u8>,
}

pub struct DecodeOutcome {
    pub side: Side,
    pub subsets_enumerated: usize,
    /// Winning subset as a bitmask over the block's left nodes.
    pub winner: u32,
}

/// Enumerate half subsets of the block's left side, estimate each cut
/// through the oracle, and answer Low exactly when Bob's node is in the
/// first-maximum subset.
pub fn decode(oracle: &dyn CutOracle, bob: &BobInput, p: &ForAllParams) -> Result<DecodeOutcome> {
    let k = p.block_size();
    if bob.pair + 1 >= p.blocks() || bob.i >= k || bob.j >= p.beta {
        return Err(Error::InvalidInput("target index out of range".into()));
    }
    if bob.t.len() != p.d || bob.t.iter().filter(|&&b| b == 1).count() != p.d / 2 {
        return Err(Error::InvalidInput(format!(
            "target string must have length {} and weight {}",
            p.d,
            p.d / 2
        )));
    }
    let t_verts: Vec<usize> = bob
        .t
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(v, _)| (bob.pair + 1) * k + bob.j * p.d + v)
        .collect();
    // Right block minus T, then every trailing block; sorted by layout.
    let mut base: Vec<usize> = ((bob.pair + 1) * k..(bob.pair + 2) * k)
        .filter(|v| !t_verts.contains(v))
        .collect();
    base.extend((bob.pair + 2) * k..p.blocks() * k);

    let sub = decoder_subtraction(p, bob.pair);
    let masks = half_subsets(k);
    let left_base = bob.pair * k;
    let estimates: Vec<f64> = masks
        .par_iter()
        .map(|&mask| {
            let mut members: Vec<usize> =
                (0..k).filter(|i| mask >> i & 1 == 1).map(|i| left_base + i).collect();
            members.extend(base.iter().copied());
            oracle.query(&NodeSet::new(members)) - sub
        })
        .collect();
    // First maximum wins: strictly-greater updates over the lex order.
    let mut best = 0usize;
    for (idx, &est) in estimates.iter().enumerate() {
        if est > estimates[best] {
            best = idx;
        }
    }
    let winner = masks[best];
    let side = if winner >> bob.i & 1 == 1 { Side::Low } else { Side::High };
    Ok(DecodeOutcome { side, subsets_enumerated: masks.len(), winner })
}

/// Ground-truth forward weight w({left i}, T) per left node, computable
/// only with Alice's strings; used by tests to validate estimates.
pub fn true_left_values(inst: &GapHammingInstance, p: &ForAllParams) -> Vec<f64> {
    let t = &inst.bob_string;
    (0..p.block_size())
        .map(|i| {
            let s = &inst.strings[p.string_index(inst.bob_pair, i, inst.bob_j)];
            let inter = s.iter().zip(t).filter(|(a, b)| **a == 1 && **b == 1).count();
            p.d as f64 / 2.0 + inter as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::REL_TOL;
    use crate::oracle::ExactOracle;

    #[test]
    fn identity_examples() {
        assert_eq!(hamming_intersection_identity(&[1, 1, 0, 0], &[1, 1, 0, 0]).unwrap(), (0, 2));
        assert_eq!(hamming_intersection_identity(&[1, 1, 0, 0], &[0, 0, 1, 1]).unwrap(), (4, 0));
        assert_eq!(hamming_intersection_identity(&[1, 1, 0, 0], &[1, 0, 1, 0]).unwrap(), (2, 1));
        assert!(hamming_intersection_identity(&[1, 0, 0, 0], &[1, 1, 0, 0]).is_err());
        assert!(hamming_intersection_identity(&[1, 0], &[1, 1, 0, 0]).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ForAllParams::new(4, 1, 8, 0.05, DEFAULT_ENUM_CAP).is_ok());
        assert!(ForAllParams::new(3, 1, 6, 0.05, DEFAULT_ENUM_CAP).is_err()); // odd d
        assert!(ForAllParams::new(4, 1, 6, 0.05, DEFAULT_ENUM_CAP).is_err()); // block mismatch
        assert!(ForAllParams::new(4, 1, 4, 0.05, DEFAULT_ENUM_CAP).is_err()); // one block
        assert!(ForAllParams::new(4, 1, 8, 3.0, DEFAULT_ENUM_CAP).is_err()); // gap > d/2
        // C(18, 9) = 48620 blows the default budget.
        assert!(matches!(
            ForAllParams::new(18, 1, 36, 0.05, DEFAULT_ENUM_CAP),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(16, 8), 12870);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(5, 0), 1);
    }

    #[test]
    fn sampler_respects_weights_and_gap() {
        let p = ForAllParams::new(8, 1, 16, 0.2, DEFAULT_ENUM_CAP).unwrap();
        for seed in 0..30 {
            let inst = sample_gap_hamming(&p, seed).unwrap();
            for s in &inst.strings {
                assert_eq!(s.iter().filter(|&&b| b == 1).count(), 4);
            }
            let s = &inst.strings[p.string_index(inst.bob_pair, inst.bob_i, inst.bob_j)];
            let (delta, _) = hamming_intersection_identity(s, &inst.bob_string).unwrap();
            match inst.promise_side {
                Side::High => assert!(delta as f64 >= 4.0 + p.gap()),
                Side::Low => assert!(delta as f64 <= 4.0 - p.gap()),
            }
        }
    }

    #[test]
    fn sampler_sides_are_balanced() {
        // d=4 with gap 0.1 forces delta in {0} or {4}; both accept at rate
        // 1/6, so the coin dominates the side split.
        let p = ForAllParams::new(4, 1, 8, 0.05, DEFAULT_ENUM_CAP).unwrap();
        let runs = 10_000;
        let high = (0..runs)
            .filter(|&seed| {
                matches!(sample_gap_hamming(&p, seed).unwrap().promise_side, Side::High)
            })
            .count();
        let frac = high as f64 / runs as f64;
        assert!((0.47..=0.53).contains(&frac), "high fraction {frac}");
    }

    #[test]
    fn encoding_shape_weights_and_ratio() {
        let p = ForAllParams::new(4, 1, 8, 0.05, DEFAULT_ENUM_CAP).unwrap();
        let inst = sample_gap_hamming(&p, 3).unwrap();
        let enc = encode(&inst.strings, &p).unwrap();
        assert_eq!(enc.graph.edges().len(), 32); // 16 forward + 16 backward
        // Forward weight multiset per (left node, cluster): half 1s, half 2s.
        for i in 0..4 {
            let mut ones = 0;
            let mut twos = 0;
            for e in enc.graph.edges().iter().filter(|e| e.u == i) {
                match e.w as u64 {
                    1 => ones += 1,
                    2 => twos += 1,
                    _ => panic!("forward weight {}", e.w),
                }
            }
            assert_eq!((ones, twos), (2, 2));
        }
        assert!((enc.graph.edge_reverse_ratio() - 2.0).abs() <= REL_TOL);

        let p2 = ForAllParams::new(4, 2, 16, 0.05, DEFAULT_ENUM_CAP).unwrap();
        let inst2 = sample_gap_hamming(&p2, 4).unwrap();
        let enc2 = encode(&inst2.strings, &p2).unwrap();
        assert!((enc2.graph.edge_reverse_ratio() - 4.0).abs() <= REL_TOL);
    }

    #[test]
    fn subtraction_closed_form_smallest_case() {
        let p = ForAllParams::new(4, 1, 8, 0.05, DEFAULT_ENUM_CAP).unwrap();
        assert!((decoder_subtraction(&p, 0) - 4.0).abs() < 1e-12);
        // Three blocks: middle pair gains the previous-block term, first
        // pair gains the trailing-block term.
        let p3 = ForAllParams::new(4, 1, 12, 0.05, DEFAULT_ENUM_CAP).unwrap();
        assert!((decoder_subtraction(&p3, 1) - (4.0 + 8.0)).abs() < 1e-12);
        assert!((decoder_subtraction(&p3, 0) - (4.0 + 8.0)).abs() < 1e-12);
    }

    #[test]
    fn half_subsets_lex_order() {
        let m = half_subsets(4);
        assert_eq!(m.len(), 6);
        // Tuples (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
        assert_eq!(m, vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
        assert_eq!(half_subsets(16).len(), 12870);
    }

    #[test]
    fn exact_estimates_match_ground_truth() {
        // Every enumerated subset's estimate must equal the true forward
        // weight, for a first-pair and a middle-pair target alike.
        let p = ForAllParams::new(4, 1, 12, 0.05, DEFAULT_ENUM_CAP).unwrap();
        for seed in [11u64, 12, 13] {
            let inst = sample_gap_hamming(&p, seed).unwrap();
            let enc = encode(&inst.strings, &p).unwrap();
            let oracle = ExactOracle::new(&enc.graph);
            let vals = true_left_values(&inst, &p);
            let bob = BobInput {
                pair: inst.bob_pair,
                i: inst.bob_i,
                j: inst.bob_j,
                t: inst.bob_string.clone(),
            };
            let sub = decoder_subtraction(&p, bob.pair);
            let k = p.block_size();
            let t_verts: Vec<usize> = bob
                .t
                .iter()
                .enumerate()
                .filter(|(_, &b)| b == 1)
                .map(|(v, _)| (bob.pair + 1) * k + bob.j * p.d + v)
                .collect();
            let mut base: Vec<usize> = ((bob.pair + 1) * k..(bob.pair + 2) * k)
                .filter(|v| !t_verts.contains(v))
                .collect();
            base.extend((bob.pair + 2) * k..p.blocks() * k);
            for mask in half_subsets(k) {
                let mut members: Vec<usize> =
                    (0..k).filter(|i| mask >> i & 1 == 1).map(|i| bob.pair * k + i).collect();
                members.extend(base.iter().copied());
                let got = oracle.query(&NodeSet::new(members)) - sub;
                let want: f64 = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| vals[i]).sum();
                assert!((got - want).abs() <= 1e-9 * want.max(1.0), "{got} vs {want}");
            }
        }
    }

    #[test]
    fn decode_handcrafted_instance() {
        // Distinct per-node values force a unique winner: nodes 2 and 3
        // match T exactly (value 4), nodes 0 and 1 avoid it (value 2).
        let p = ForAllParams::new(4, 1, 8, 0.05, DEFAULT_ENUM_CAP).unwrap();
        let t = vec![1, 1, 0, 0];
        let near = vec![1, 1, 0, 0];
        let far = vec![0, 0, 1, 1];
        let strings = vec![far.clone(), far, near.clone(), near];
        let enc = encode(&strings, &p).unwrap();
        let oracle = ExactOracle::new(&enc.graph);
        let low = decode(
            &oracle,
            &BobInput { pair: 0, i: 2, j: 0, t: t.clone() },
            &p,
        )
        .unwrap();
        assert_eq!(low.side, Side::Low);
        assert_eq!(low.winner, 0b1100);
        assert_eq!(low.subsets_enumerated, 6);
        let high = decode(&oracle, &BobInput { pair: 0, i: 0, j: 0, t }, &p).unwrap();
        assert_eq!(high.side, Side::High);
    }

    #[test]
    fn decode_validates_target() {
        let p = ForAllParams::new(4, 1, 8, 0.05, DEFAULT_ENUM_CAP).unwrap();
        let inst = sample_gap_hamming(&p, 0).unwrap();
        let enc = encode(&inst.strings, &p).unwrap();
        let oracle = ExactOracle::new(&enc.graph);
        let bad_weight = BobInput { pair: 0, i: 0, j: 0, t: vec![1, 1, 1, 0] };
        assert!(decode(&oracle, &bad_weight, &p).is_err());
        let bad_pair = BobInput { pair: 1, i: 0, j: 0, t: vec![1, 1, 0, 0] };
        assert!(decode(&oracle, &bad_pair, &p).is_err());
    }
}
