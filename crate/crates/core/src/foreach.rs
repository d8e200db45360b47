//! Sign-string encoder and 4-query decoder over a chain of bipartite blocks.
//!
//! A string of ±1 bits is packed into edge weights of a directed graph
//! built from a chain of vertex blocks. Each consecutive block pair holds
//! a grid of cluster pairs; each cluster pair carries one weight vector
//! obtained by superposing orthogonal tensor rows. Any single bit can be
//! read back through 4 cut queries: the four quadrant cuts of its cluster
//! pair, combined with signs (+,-,-,+), collapse to the bit's coefficient
//! by orthogonality. Backward edges of weight 1/beta keep every cut's
//! reverse weight within a known factor, which is the whole point of the
//! construction: the graph stays balanced while still carrying the bits.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DirectedWeightedGraph, Edge, NodeSet};
use crate::hadamard::EncodingMatrix;
use crate::oracle::CutOracle;

#[derive(Debug, Clone)]
pub struct ForEachParams {
    /// Resolution exponent: the cluster side is 2^k.
    pub k: u32,
    /// Balance parameter; must be a perfect square.
    pub beta: u64,
    /// Total vertex count; must be a multiple of the block size.
    pub n: usize,
    /// Weight-envelope constant (default 2.0).
    pub c1: f64,
}

impl ForEachParams {
    pub fn new(k: u32, beta: u64, n: usize, c1: f64) -> Result<Self> {
        if k == 0 || k > 10 {
            return Err(Error::InvalidInput(format!("k = {k} outside 1..=10")));
        }
        if beta == 0 || !is_perfect_square(beta) {
            return Err(Error::InvalidInput(format!(
                "beta = {beta} is not a positive perfect square"
            )));
        }
        if !(c1 > 0.0 && c1.is_finite()) {
            return Err(Error::InvalidInput(format!("c1 = {c1} must be positive")));
        }
        let p = ForEachParams { k, beta, n, c1 };
        let kb = p.block_size();
        if n == 0 || n % kb != 0 {
            return Err(Error::InvalidInput(format!(
                "n = {n} is not a multiple of the block size {kb}"
            )));
        }
        if p.blocks() < 2 {
            return Err(Error::InvalidInput(format!(
                "n = {n} gives {} block(s); at least 2 needed",
                p.blocks()
            )));
        }
        Ok(p)
    }

    /// Cluster side 1/eps = 2^k.
    pub fn inv_eps(&self) -> usize {
        1usize << self.k
    }

    pub fn eps(&self) -> f64 {
        1.0 / self.inv_eps() as f64
    }

    pub fn sqrt_beta(&self) -> usize {
        isqrt(self.beta) as usize
    }

    /// Vertices per chain block: sqrt(beta) clusters of side 2^k.
    pub fn block_size(&self) -> usize {
        self.sqrt_beta() * self.inv_eps()
    }

    pub fn blocks(&self) -> usize {
        self.n / self.block_size()
    }

    /// Bits carried by one cluster pair.
    pub fn bits_per_cluster(&self) -> usize {
        let side = self.inv_eps() - 1;
        side * side
    }

    /// Bits carried by one consecutive block pair (beta cluster pairs).
    pub fn bits_per_pair(&self) -> usize {
        self.beta as usize * self.bits_per_cluster()
    }

    /// Total bit capacity: beta * (1/eps - 1)^2 * (blocks - 1).
    pub fn capacity(&self) -> usize {
        self.bits_per_pair() * (self.blocks() - 1)
    }

    pub fn ln_inv_eps(&self) -> f64 {
        self.k as f64 * std::f64::consts::LN_2
    }

    /// Superposition magnitude cap: c1 * ln(1/eps) / eps.
    pub fn x_bound(&self) -> f64 {
        self.c1 * self.ln_inv_eps() * self.inv_eps() as f64
    }

    /// Upper bound on the balance ratio: 3 * c1 * beta * ln(1/eps).
    pub fn balance_bound(&self) -> f64 {
        3.0 * self.c1 * self.beta as f64 * self.ln_inv_eps()
    }
}

fn is_perfect_square(x: u64) -> bool {
    let r = isqrt(x);
    r * r == x
}

fn isqrt(x: u64) -> u64 {
    let r = (x as f64).sqrt().round() as u64;
    // round() can land one off for large x; nudge back.
    if r > 0 && r * r > x {
        r - 1
    } else if (r + 1) * (r + 1) <= x {
        r + 1
    } else {
        r
    }
}

/// Which cluster pair a bit lives in, and its row within that cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitLocation {
    /// Block pair index, 0-based: the bit sits between blocks `pair` and `pair + 1`.
    pub pair: usize,
    /// Cluster row within the left block.
    pub ci: usize,
    /// Cluster row within the right block.
    pub cj: usize,
    /// 1-based tensor row index within the cluster pair.
    pub t: usize,
}

impl ForEachParams {
    pub fn bit_location(&self, q: usize) -> Result<BitLocation> {
        if q >= self.capacity() {
            return Err(Error::InvalidInput(format!(
                "bit index {q} out of range (capacity {})",
                self.capacity()
            )));
        }
        let pair = q / self.bits_per_pair();
        let rem = q % self.bits_per_pair();
        let cluster = rem / self.bits_per_cluster();
        let t = rem % self.bits_per_cluster() + 1;
        Ok(BitLocation {
            pair,
            ci: cluster / self.sqrt_beta(),
            cj: cluster % self.sqrt_beta(),
            t,
        })
    }
}

/// One cluster pair's weight vector plus whether the superposition fit
/// inside the envelope. Failed clusters carry the flat fallback vector.
pub struct ForEachEncoding {
    pub graph: DirectedWeightedGraph,
    /// Indexed by pair * beta + (ci * sqrt_beta + cj).
    pub block_success: Vec<bool>,
    /// Same indexing; each vector has 2^(2k) entries in column order.
    pub weight_vectors: Vec<Vec<f64>>,
}

/// Superpose the cluster's rows with the given signs. Returns the weight
/// vector and whether the max-magnitude test passed; on failure the
/// weights fall back to the flat midpoint so the graph is still balanced.
pub fn encode_block(z: &[i8], p: &ForEachParams) -> Result<(Vec<f64>, bool)> {
    if z.len() != p.bits_per_cluster() {
        return Err(Error::InvalidInput(format!(
            "sign string length {} != {}",
            z.len(),
            p.bits_per_cluster()
        )));
    }
    if z.iter().any(|&b| b != 1 && b != -1) {
        return Err(Error::InvalidInput("signs must be +1 or -1".into()));
    }
    let m = EncodingMatrix::new(p.k)?;
    let dim = m.columns();
    let mut x = vec![0i64; dim];
    for (t0, &zt) in z.iter().enumerate() {
        let row = m.row(t0 + 1)?;
        for (xc, &e) in x.iter_mut().zip(row.entries.iter()) {
            *xc += zt as i64 * e as i64;
        }
    }
    let peak = x.iter().map(|v| v.abs()).max().unwrap_or(0) as f64;
    let base = 2.0 * p.c1 * p.ln_inv_eps();
    if peak <= p.x_bound() {
        let eps = p.eps();
        let w = x.iter().map(|&xi| eps * xi as f64 + base).collect();
        Ok((w, true))
    } else {
        Ok((vec![base; dim], false))
    }
}

/// Build the full chain graph carrying the sign string `s`.
pub fn build_graph(s: &[i8], p: &ForEachParams) -> Result<ForEachEncoding> {
    if s.len() != p.capacity() {
        return Err(Error::InvalidInput(format!(
            "string length {} != capacity {}",
            s.len(),
            p.capacity()
        )));
    }
    let side = p.inv_eps();
    let kb = p.block_size();
    let sb = p.sqrt_beta();
    let back_w = 1.0 / p.beta as f64;
    let mut edges = Vec::with_capacity(2 * (p.blocks() - 1) * kb * kb);
    let mut success = Vec::new();
    let mut vectors = Vec::new();
    for pair in 0..p.blocks() - 1 {
        for ci in 0..sb {
            for cj in 0..sb {
                let cluster = ci * sb + cj;
                let start = pair * p.bits_per_pair() + cluster * p.bits_per_cluster();
                let z = &s[start..start + p.bits_per_cluster()];
                let (w, ok) = encode_block(z, p)?;
                for a in 0..side {
                    let u = pair * kb + ci * side + a;
                    for b in 0..side {
                        let v = (pair + 1) * kb + cj * side + b;
                        let fw = w[a * side + b];
                        edges.push(Edge { u, v, w: fw });
                        edges.push(Edge { u: v, v: u, w: back_w });
                    }
                }
                success.push(ok);
                vectors.push(w);
            }
        }
    }
    Ok(ForEachEncoding {
        graph: DirectedWeightedGraph::new(p.n, edges)?,
        block_success: success,
        weight_vectors: vectors,
    })
}

/// The four decoder cut sides for a bit, in the fixed combination order
/// (A,B), (A',B), (A,B'), (A',B') with signs (+,-,-,+), plus the exact
/// weight of backward edges crossing each of them. All four subtractions
/// are equal because |A| = |A'| and |B| = |B'|.
pub struct DecoderQueries {
    pub sets: [NodeSet; 4],
    pub subtraction: f64,
}

pub fn decoder_cut_set(p: &ForEachParams, q: usize) -> Result<DecoderQueries> {
    let loc = p.bit_location(q)?;
    let m = EncodingMatrix::new(p.k)?;
    let row = m.row(loc.t)?;
    let side = p.inv_eps();
    let kb = p.block_size();
    let ell = p.blocks();

    // Positions inside the left/right clusters keyed by factor sign.
    let left_base = loc.pair * kb + loc.ci * side;
    let right_base = (loc.pair + 1) * kb + loc.cj * side;
    let a_pos: Vec<usize> = (0..side).filter(|&a| row.h_a[a] == 1).map(|a| left_base + a).collect();
    let a_neg: Vec<usize> = (0..side).filter(|&a| row.h_a[a] == -1).map(|a| left_base + a).collect();
    let b_pos: Vec<usize> = (0..side).filter(|&b| row.h_b[b] == 1).map(|b| right_base + b).collect();
    let b_neg: Vec<usize> = (0..side).filter(|&b| row.h_b[b] == -1).map(|b| right_base + b).collect();

    let right_block = (loc.pair + 1) * kb..(loc.pair + 2) * kb;
    let tail = ((loc.pair + 2) * kb..ell * kb).collect::<Vec<_>>();
    let make = |x: &[usize], y: &[usize]| {
        let mut members = x.to_vec();
        members.extend(right_block.clone().filter(|v| !y.contains(v)));
        members.extend(tail.iter().copied());
        NodeSet::new(members)
    };
    let sets = [
        make(&a_pos, &b_pos),
        make(&a_neg, &b_pos),
        make(&a_pos, &b_neg),
        make(&a_neg, &b_neg),
    ];

    let half = (side / 2) as f64;
    let kbf = kb as f64;
    let inv_beta = 1.0 / p.beta as f64;
    let mut sub = (kbf - half) * (kbf - half) * inv_beta;
    if loc.pair >= 1 {
        sub += kbf * half * inv_beta;
    }
    if loc.pair + 2 < ell {
        sub += kbf * half * inv_beta;
    }
    Ok(DecoderQueries { sets, subtraction: sub })
}

/// Largest possible true value among the four decoder cuts for bit `q`:
/// forward part at most (1/(2 eps))^2 * 3 c1 ln(1/eps), plus the exact
/// backward weight. Used to budget multiplicative oracle error.
pub fn analytic_v_max(p: &ForEachParams, q: usize) -> Result<f64> {
    let dq = decoder_cut_set(p, q)?;
    let half = p.inv_eps() as f64 / 2.0;
    Ok(half * half * 3.0 * p.c1 * p.ln_inv_eps() + dq.subtraction)
}

/// A noise level guaranteed safe for bit `q`: 4 * eps' * V_max stays
/// strictly below the decoded magnitude 1/eps (with a 1% margin).
pub fn guaranteed_noise_budget(p: &ForEachParams, q: usize) -> Result<f64> {
    Ok(0.99 * p.inv_eps() as f64 / (4.0 * analytic_v_max(p, q)?))
}

/// Read bit `q` back through 4 cut queries. `block_success` comes from
/// the encoder out-of-band; a failed cluster is reported as an erasure.
pub fn decode_bit(
    oracle: &dyn CutOracle,
    q: usize,
    p: &ForEachParams,
    block_success: &[bool],
) -> Result<i8> {
    let loc = p.bit_location(q)?;
    let cluster = loc.pair * p.beta as usize + loc.ci * p.sqrt_beta() + loc.cj;
    if !block_success.get(cluster).copied().unwrap_or(false) {
        return Err(Error::EncodingFailed);
    }
    let dq = decoder_cut_set(p, q)?;
    let vals: Vec<f64> = dq.sets.iter().map(|s| oracle.query(s) - dq.subtraction).collect();
    let est = vals[0] - vals[1] - vals[2] + vals[3];
    Ok(if est >= 0.0 { 1 } else { -1 })
}

/// Uniform ±1 string of the instance's full capacity.
pub fn random_string(p: &ForEachParams, seed: u64) -> Vec<i8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..p.capacity()).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect()
}
