//! Pairwise edge connectivity via augmenting paths (Menger's theorem).
//!
//! Each undirected edge becomes a pair of opposite unit-capacity arcs; the
//! max-flow value between two vertices is then the number of edge-disjoint
//! paths, equal to the minimum number of edges separating them.

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;

/// Number of edge-disjoint paths between `s` and `t`.
pub fn edge_connectivity(g: &UndirectedGraph, s: usize, t: usize) -> Result<usize> {
    let n = g.n();
    if s >= n || t >= n {
        return Err(Error::InvalidInput(format!(
            "vertex out of range: ({s}, {t}) with n = {n}"
        )));
    }
    if s == t {
        return Err(Error::InvalidInput(
            "edge connectivity needs two distinct vertices".into(),
        ));
    }

    // Arc arrays: arcs 2i and 2i+1 are the two directions of edge i, and
    // each arc's reverse is `arc ^ 1`.
    let m = g.edge_count();
    let mut head = vec![0usize; 2 * m];
    let mut cap = vec![1i8; 2 * m];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        head[2 * i] = b;
        head[2 * i + 1] = a;
        out[a].push(2 * i);
        out[b].push(2 * i + 1);
    }

    let mut flow = 0usize;
    let mut parent_arc = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    loop {
        parent_arc.iter_mut().for_each(|p| *p = usize::MAX);
        queue.clear();
        queue.push_back(s);
        let mut reached = false;
        'bfs: while let Some(v) = queue.pop_front() {
            for &a in &out[v] {
                let u = head[a];
                if cap[a] > 0 && parent_arc[u] == usize::MAX && u != s {
                    parent_arc[u] = a;
                    if u == t {
                        reached = true;
                        break 'bfs;
                    }
                    queue.push_back(u);
                }
            }
        }
        if !reached {
            return Ok(flow);
        }
        let mut v = t;
        while v != s {
            let a = parent_arc[v];
            cap[a] -= 1;
            cap[a ^ 1] += 1;
            v = head[a ^ 1];
        }
        flow += 1;
    }
}

/// Reference: minimum edge cut separating `s` from `t` by subset walk.
pub fn brute_force_edge_connectivity(
    g: &UndirectedGraph,
    s: usize,
    t: usize,
) -> Result<usize> {
    const CAP: usize = 16;
    let n = g.n();
    if n > CAP {
        return Err(Error::SizeCap {
            what: "brute-force edge connectivity",
            cap: CAP,
            got: n,
        });
    }
    if s == t || s >= n || t >= n {
        return Err(Error::InvalidInput("bad vertex pair".into()));
    }
    let mut best = usize::MAX;
    for mask in 0u64..1 << n {
        if mask >> s & 1 == 1 && mask >> t & 1 == 0 {
            let cut = g
                .edges()
                .iter()
                .filter(|&&(a, b)| (mask >> a & 1) != (mask >> b & 1))
                .count();
            best = best.min(cut);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cycle_has_two_disjoint_paths() {
        let g = UndirectedGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6)).collect())
            .unwrap();
        assert_eq!(edge_connectivity(&g, 0, 3).unwrap(), 2);
    }

    #[test]
    fn disconnected_pair_has_zero() {
        let g = UndirectedGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(edge_connectivity(&g, 0, 2).unwrap(), 0);
    }

    #[test]
    fn complete_graph_connectivity() {
        let mut e = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                e.push((a, b));
            }
        }
        let g = UndirectedGraph::new(5, e).unwrap();
        assert_eq!(edge_connectivity(&g, 1, 4).unwrap(), 4);
    }

    #[test]
    fn identical_endpoints_rejected() {
        let g = UndirectedGraph::new(3, vec![(0, 1)]).unwrap();
        assert!(edge_connectivity(&g, 1, 1).is_err());
        assert!(edge_connectivity(&g, 0, 9).is_err());
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..40 {
            let n = 4 + round % 5;
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((a, b));
                    }
                }
            }
            let g = UndirectedGraph::new(n, edges).unwrap();
            let fast = edge_connectivity(&g, 0, n - 1).unwrap();
            let slow = brute_force_edge_connectivity(&g, 0, n - 1).unwrap();
            assert_eq!(fast, slow, "round {round}");
        }
    }
}
