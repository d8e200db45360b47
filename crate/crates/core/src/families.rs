//! Generator families for estimator experiments and calibration.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;

pub fn cycle(n: usize) -> Result<UndirectedGraph> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("cycle needs n >= 3, got {n}")));
    }
    UndirectedGraph::new(n, (0..n).map(|v| (v, (v + 1) % n)).collect())
}

pub fn complete_graph(n: usize) -> Result<UndirectedGraph> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("complete graph needs n >= 2, got {n}")));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    UndirectedGraph::new(n, edges)
}

/// Two cliques K_a and K_b joined by the single edge (0, a). Global
/// min cut 1 with the bridge as witness.
pub fn clique_bridge(a: usize, b: usize) -> Result<UndirectedGraph> {
    if a < 2 || b < 2 {
        return Err(Error::InvalidInput("each clique needs at least 2 vertices".into()));
    }
    let mut edges = Vec::new();
    for u in 0..a {
        for v in u + 1..a {
            edges.push((u, v));
        }
    }
    for u in 0..b {
        for v in u + 1..b {
            edges.push((a + u, a + v));
        }
    }
    edges.push((0, a));
    UndirectedGraph::new(a + b, edges)
}

/// Circulant ring with consecutive offsets 1..=k/2, so the graph is
/// k-regular with edge connectivity exactly k, optionally padded with
/// random chords up to `target_m` edges. Vertex 0 receives no chords:
/// its degree stays k, pinning the global min cut at k (witness {0})
/// no matter how dense the padding gets.
///
/// `k` must be even, at least 2, and less than n - 1.
pub fn cycle_with_chords(
    n: usize,
    k: usize,
    target_m: Option<usize>,
    seed: u64,
) -> Result<UndirectedGraph> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::InvalidInput(format!("planted cut {k} must be even and >= 2")));
    }
    if n < k + 2 {
        return Err(Error::InvalidInput(format!("n = {n} too small for planted cut {k}")));
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut present: HashSet<(usize, usize)> = HashSet::new();
    for off in 1..=k / 2 {
        for v in 0..n {
            let u = v;
            let w = (v + off) % n;
            let key = (u.min(w), u.max(w));
            if present.insert(key) {
                edges.push(key);
            }
        }
    }
    let base_m = edges.len();
    if let Some(m) = target_m {
        if m < base_m {
            return Err(Error::InvalidInput(format!(
                "target_m = {m} below the {base_m} ring edges"
            )));
        }
        // Chords live among vertices 1..n; base_m - k ring edges are
        // already there, k of the ring edges touch vertex 0.
        let max_m = base_m + (n - 1) * (n - 2) / 2 - (base_m - k);
        if m > max_m {
            return Err(Error::InvalidInput(format!("target_m = {m} exceeds capacity {max_m}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while edges.len() < m {
            let u = rng.gen_range(1..n);
            let v = rng.gen_range(1..n);
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if present.insert(key) {
                edges.push(key);
            }
        }
    }
    UndirectedGraph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mincut::global_min_cut;

    #[test]
    fn cycle_and_clique_min_cuts() {
        assert_eq!(global_min_cut(&cycle(10).unwrap()).unwrap().value, 2.0);
        assert_eq!(global_min_cut(&complete_graph(6).unwrap()).unwrap().value, 5.0);
        let g = clique_bridge(8, 8).unwrap();
        let mc = global_min_cut(&g).unwrap();
        assert_eq!(mc.value, 1.0);
    }

    #[test]
    fn planted_cut_survives_padding() {
        for (n, k) in [(40, 2), (40, 4), (60, 8)] {
            let g = cycle_with_chords(n, k, Some(4 * n), 7).unwrap();
            assert_eq!(g.edges().len(), 4 * n);
            assert_eq!(g.degrees()[0], k);
            let mc = global_min_cut(&g).unwrap();
            assert_eq!(mc.value, k as f64, "n={n} k={k}");
        }
    }

    #[test]
    fn unpadded_ring_is_k_regular() {
        let g = cycle_with_chords(30, 6, None, 0).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 6));
        assert_eq!(global_min_cut(&g).unwrap().value, 6.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(cycle_with_chords(10, 3, None, 0).is_err());
        assert!(cycle_with_chords(5, 4, None, 0).is_err());
        assert!(cycle_with_chords(10, 4, Some(10), 0).is_err());
        assert!(cycle(2).is_err());
        assert!(clique_bridge(1, 5).is_err());
    }
}
