//! Cut-value oracles: exact, multiplicatively noisy, and sparsifier-backed.
//!
//! Decoders only ever see cut values through the [`CutOracle`] trait, so
//! swapping the exact oracle for a perturbed one exercises their noise
//! tolerance without touching decoder code. Every oracle counts its
//! queries through an atomic counter, safe to share across worker threads.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DirectedWeightedGraph, Edge, NodeSet};

/// Answering machine for directed cut queries `w(S, V \ S)`.
pub trait CutOracle: Sync {
    /// Cut value for a proper subset; implementations may perturb it.
    fn query(&self, s: &NodeSet) -> f64;

    /// Number of queries answered so far.
    fn query_count(&self) -> u64;
}

// ─── Seeded 64-bit mixing ────────────────────────────────────────────────

/// splitmix64 finalizer; the workhorse for hashed noise and derived seeds.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Combine a seed with a stream of words, order-sensitively.
pub fn mix_stream(seed: u64, words: impl IntoIterator<Item = u64>) -> u64 {
    let mut h = mix64(seed ^ 0x633ab5f6302d71cb);
    for w in words {
        h = mix64(h ^ mix64(w));
    }
    h
}

/// Uniform value in `[0, 1)` from a hash.
fn unit_from_hash(h: u64) -> f64 {
    (h >> 11) as f64 / (1u64 << 53) as f64
}

/// Hash of a node set's canonical form. Two sets with the same members
/// hash identically regardless of how callers assembled them.
pub fn hash_node_set(seed: u64, s: &NodeSet) -> u64 {
    mix_stream(seed, s.members().iter().map(|&v| v as u64))
}

// ─── Exact oracle ────────────────────────────────────────────────────────

pub struct ExactOracle<'a> {
    g: &'a DirectedWeightedGraph,
    count: AtomicU64,
}

impl<'a> ExactOracle<'a> {
    pub fn new(g: &'a DirectedWeightedGraph) -> Self {
        ExactOracle { g, count: AtomicU64::new(0) }
    }
}

impl CutOracle for ExactOracle<'_> {
    fn query(&self, s: &NodeSet) -> f64 {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.g.cut_weight(s).expect("proper cut side")
    }

    fn query_count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

// ─── Noisy oracle ────────────────────────────────────────────────────────

/// How the multiplicative factor `1 + delta`, `|delta| <= eps'`, is drawn.
#[derive(Debug, Clone)]
pub enum NoiseMode {
    /// New uniform draw per query. Not reproducible under concurrent
    /// querying: the draw order depends on thread interleaving.
    FreshRandom,
    /// Factor is a pure function of (seed, set members): repeating a query
    /// repeats its perturbation, so the oracle behaves like a fixed
    /// function of the cut.
    HashedPerSet,
    /// Factor is `1 + eps' * sign[i]` for the i-th query, cycling through
    /// a caller-chosen sign sequence. The adversarial instrument.
    AdversarialSigns(Vec<i8>),
}

pub struct NoisyOracle<'a> {
    g: &'a DirectedWeightedGraph,
    eps_prime: f64,
    mode: NoiseMode,
    seed: u64,
    count: AtomicU64,
    fresh: Mutex<ChaCha8Rng>,
}

impl<'a> NoisyOracle<'a> {
    pub fn new(
        g: &'a DirectedWeightedGraph,
        eps_prime: f64,
        mode: NoiseMode,
        seed: u64,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&eps_prime) {
            return Err(Error::InvalidInput(format!(
                "noise level {eps_prime} outside [0, 1)"
            )));
        }
        if let NoiseMode::AdversarialSigns(signs) = &mode {
            if signs.is_empty() || signs.iter().any(|&s| s != 1 && s != -1) {
                return Err(Error::InvalidInput(
                    "sign sequence must be nonempty over {-1, +1}".into(),
                ));
            }
        }
        Ok(NoisyOracle {
            g,
            eps_prime,
            mode,
            seed,
            count: AtomicU64::new(0),
            fresh: Mutex::new(ChaCha8Rng::seed_from_u64(mix64(seed))),
        })
    }

    fn factor(&self, s: &NodeSet, index: u64) -> f64 {
        match &self.mode {
            NoiseMode::FreshRandom => {
                let u: f64 = self.fresh.lock().unwrap().gen();
                1.0 + self.eps_prime * (2.0 * u - 1.0)
            }
            NoiseMode::HashedPerSet => {
                let u = unit_from_hash(hash_node_set(self.seed, s));
                1.0 + self.eps_prime * (2.0 * u - 1.0)
            }
            NoiseMode::AdversarialSigns(signs) => {
                let sign = signs[(index as usize) % signs.len()] as f64;
                1.0 + self.eps_prime * sign
            }
        }
    }
}

impl CutOracle for NoisyOracle<'_> {
    fn query(&self, s: &NodeSet) -> f64 {
        let index = self.count.fetch_add(1, Ordering::Relaxed);
        let exact = self.g.cut_weight(s).expect("proper cut side");
        exact * self.factor(s, index)
    }

    fn query_count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

// ─── Sparsifier oracle ───────────────────────────────────────────────────

/// Keeps each edge independently with probability `p` at weight `w / p`,
/// then answers cut queries on the sampled graph. Unbiased per cut.
pub struct SparsifierOracle {
    sampled: DirectedWeightedGraph,
    kept: usize,
    count: AtomicU64,
}

impl SparsifierOracle {
    pub fn new(g: &DirectedWeightedGraph, p: f64, seed: u64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "keep probability {p} outside (0, 1]"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed ^ 0x5ca1ab1e));
        let mut edges = Vec::new();
        for e in g.edges() {
            if rng.gen_bool(p) {
                edges.push(Edge { u: e.u, v: e.v, w: e.w / p });
            }
        }
        let kept = edges.len();
        Ok(SparsifierOracle {
            sampled: DirectedWeightedGraph::new(g.n(), edges)?,
            kept,
            count: AtomicU64::new(0),
        })
    }

    pub fn kept_edges(&self) -> usize {
        self.kept
    }
}

impl CutOracle for SparsifierOracle {
    fn query(&self, s: &NodeSet) -> f64 {
        self.count.fetch_add(1, Ordering::Relaxed);
        // Empty sampled cuts are fine; validate against the full vertex set.
        s.validate_proper(self.sampled.n()).expect("proper cut side");
        let inside = s.bitmap(self.sampled.n());
        self.sampled
            .edges()
            .iter()
            .filter(|e| inside[e.u] && !inside[e.v])
            .map(|e| e.w)
            .sum()
    }

    fn query_count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

// ─── Selection strings ───────────────────────────────────────────────────

/// Parsed form of the oracle selection string shared by the command-line
/// tools: `exact`, `noise:<eps'>[:fresh|hashed|signs=<+-...>]`, or
/// `sparsifier:<p>`. The noise mode defaults to `hashed`.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleSpec {
    Exact,
    Noise { eps_prime: f64, mode: NoiseModeSpec },
    Sparsifier { p: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModeSpec {
    Fresh,
    Hashed,
    Signs(Vec<i8>),
}

impl OracleSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.split(':');
        match parts.next() {
            Some("exact") => {
                if parts.next().is_some() {
                    return Err(Error::Parse("`exact` takes no arguments".into()));
                }
                Ok(OracleSpec::Exact)
            }
            Some("noise") => {
                let eps: f64 = parts
                    .next()
                    .ok_or_else(|| Error::Parse("noise needs `noise:<eps'>`".into()))?
                    .parse()
                    .map_err(|_| Error::Parse("bad noise level".into()))?;
                let mode = match parts.next() {
                    None | Some("hashed") => NoiseModeSpec::Hashed,
                    Some("fresh") => NoiseModeSpec::Fresh,
                    Some(m) if m.starts_with("signs=") => {
                        let signs: Result<Vec<i8>> = m["signs=".len()..]
                            .chars()
                            .map(|c| match c {
                                '+' => Ok(1),
                                '-' => Ok(-1),
                                other => Err(Error::Parse(format!(
                                    "sign characters are + and -, got {other:?}"
                                ))),
                            })
                            .collect();
                        NoiseModeSpec::Signs(signs?)
                    }
                    Some(other) => {
                        return Err(Error::Parse(format!("unknown noise mode {other:?}")))
                    }
                };
                if parts.next().is_some() {
                    return Err(Error::Parse("trailing oracle arguments".into()));
                }
                Ok(OracleSpec::Noise { eps_prime: eps, mode })
            }
            Some("sparsifier") => {
                let p: f64 = parts
                    .next()
                    .ok_or_else(|| Error::Parse("sparsifier needs `sparsifier:<p>`".into()))?
                    .parse()
                    .map_err(|_| Error::Parse("bad keep probability".into()))?;
                if parts.next().is_some() {
                    return Err(Error::Parse("trailing oracle arguments".into()));
                }
                Ok(OracleSpec::Sparsifier { p })
            }
            _ => Err(Error::Parse(format!("unknown oracle kind {text:?}"))),
        }
    }

    /// Instantiate over a graph. The same seed always yields the same
    /// oracle in the hashed, signs, and sparsifier modes.
    pub fn build<'a>(
        &self,
        g: &'a DirectedWeightedGraph,
        seed: u64,
    ) -> Result<Box<dyn CutOracle + 'a>> {
        Ok(match self {
            OracleSpec::Exact => Box::new(ExactOracle::new(g)),
            OracleSpec::Noise { eps_prime, mode } => {
                let mode = match mode {
                    NoiseModeSpec::Fresh => NoiseMode::FreshRandom,
                    NoiseModeSpec::Hashed => NoiseMode::HashedPerSet,
                    NoiseModeSpec::Signs(s) => NoiseMode::AdversarialSigns(s.clone()),
                };
                Box::new(NoisyOracle::new(g, *eps_prime, mode, seed)?)
            }
            OracleSpec::Sparsifier { p } => Box::new(SparsifierOracle::new(g, *p, seed)?),
        })
    }
}
