//! Global minimum cut via Stoer-Wagner, plus a brute-force reference.
//!
//! The search is deterministic: maximum-adjacency phases start from the
//! lowest-numbered alive vertex, heap ties prefer smaller vertex ids, and
//! among equal-weight phase cuts the lexicographically smallest witness
//! wins. Weighted adjacency is kept in `BTreeMap`s rather than hash maps
//! so merge and relaxation sums always run in the same order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use crate::error::{Error, Result};
use crate::graph::{DirectedWeightedGraph, NodeSet, UndirectedGraph, REL_TOL};

/// Value of a global minimum cut together with one side achieving it.
#[derive(Debug, Clone, PartialEq)]
pub struct MinCut {
    pub value: f64,
    pub witness: NodeSet,
}

struct HeapEntry {
    w: f64,
    v: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on weight; on ties the smaller vertex id pops first.
        self.w
            .total_cmp(&other.w)
            .then_with(|| other.v.cmp(&self.v))
    }
}

/// Stoer-Wagner on symmetric weights given as `(u, v, w)` with `u != v`.
/// Parallel inputs are summed. Disconnected inputs yield a zero cut.
fn stoer_wagner(n: usize, sym_edges: &[(usize, usize, f64)]) -> Result<MinCut> {
    if n < 2 {
        return Err(Error::InvalidInput(
            "minimum cut needs at least two vertices".into(),
        ));
    }
    let mut adj: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
    for &(u, v, w) in sym_edges {
        *adj[u].entry(v).or_insert(0.0) += w;
        *adj[v].entry(u).or_insert(0.0) += w;
    }

    let mut alive: Vec<usize> = (0..n).collect();
    let mut group: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();

    let mut best: Option<MinCut> = None;
    let mut conn = vec![0.0f64; n];
    let mut in_order = vec![false; n];

    while alive.len() > 1 {
        // Maximum-adjacency ordering for this phase.
        for &v in &alive {
            conn[v] = 0.0;
            in_order[v] = false;
        }
        // Seed every vertex so isolated components still enter the
        // order (their phase cut comes out zero, the right answer).
        let mut heap = BinaryHeap::with_capacity(alive.len());
        for &v in &alive {
            heap.push(HeapEntry { w: 0.0, v });
        }
        let mut order = Vec::with_capacity(alive.len());
        while let Some(HeapEntry { w, v }) = heap.pop() {
            if in_order[v] || w != conn[v] {
                continue; // stale entry
            }
            in_order[v] = true;
            order.push(v);
            for (&u, &wt) in &adj[v] {
                if !in_order[u] {
                    conn[u] += wt;
                    heap.push(HeapEntry { w: conn[u], v: u });
                }
            }
        }
        debug_assert_eq!(order.len(), alive.len());

        let t = *order.last().unwrap();
        let s = order[order.len() - 2];
        let cut_of_phase = conn[t];
        let witness = NodeSet::new(group[t].iter().copied());

        let better = match &best {
            None => true,
            Some(b) => {
                let tol = REL_TOL * b.value.abs().max(cut_of_phase.abs());
                if cut_of_phase < b.value - tol {
                    true
                } else if (cut_of_phase - b.value).abs() <= tol {
                    witness < b.witness
                } else {
                    false
                }
            }
        };
        if better {
            best = Some(MinCut {
                value: cut_of_phase,
                witness,
            });
        }

        // Merge t into s.
        let t_adj = std::mem::take(&mut adj[t]);
        for (u, wt) in t_adj {
            adj[u].remove(&t);
            if u == s {
                continue;
            }
            *adj[s].entry(u).or_insert(0.0) += wt;
            *adj[u].entry(s).or_insert(0.0) += wt;
        }
        let moved = std::mem::take(&mut group[t]);
        group[s].extend(moved);
        alive.retain(|&v| v != t);
    }

    Ok(best.unwrap())
}

/// Global minimum cut of an undirected graph with unit edge weights.
pub fn global_min_cut(g: &UndirectedGraph) -> Result<MinCut> {
    let edges: Vec<(usize, usize, f64)> =
        g.edges().iter().map(|&(a, b)| (a, b, 1.0)).collect();
    stoer_wagner(g.n(), &edges)
}

/// Same, for an explicit weighted edge list (used on sampled subgraphs).
pub fn global_min_cut_weighted(n: usize, edges: &[(usize, usize, f64)]) -> Result<MinCut> {
    stoer_wagner(n, edges)
}

/// Global minimum cut of a directed graph whose weights are symmetric:
/// every edge must have a reverse partner of equal weight (relative
/// tolerance [`REL_TOL`]), which makes cut values direction-free.
pub fn global_min_cut_symmetric(g: &DirectedWeightedGraph) -> Result<MinCut> {
    let mut weights = std::collections::HashMap::new();
    for e in g.edges() {
        weights.insert((e.u, e.v), e.w);
    }
    let mut sym = Vec::with_capacity(g.edge_count() / 2);
    for e in g.edges() {
        let back = weights.get(&(e.v, e.u)).copied().ok_or_else(|| {
            Error::InvalidInput(format!("edge ({}, {}) has no reverse partner", e.u, e.v))
        })?;
        if (e.w - back).abs() > REL_TOL * e.w.abs().max(back.abs()) {
            return Err(Error::InvalidInput(format!(
                "asymmetric weights on ({}, {}): {} vs {}",
                e.u, e.v, e.w, back
            )));
        }
        if e.u < e.v {
            sym.push((e.u, e.v, e.w));
        }
    }
    stoer_wagner(g.n(), &sym)
}

/// Reference implementation: minimum over all 2^(n-1) - 1 proper cuts.
/// Exponential; meant for cross-checking the search on small graphs.
pub fn brute_force_min_cut(g: &UndirectedGraph) -> Result<MinCut> {
    const CAP: usize = 24;
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidInput(
            "minimum cut needs at least two vertices".into(),
        ));
    }
    if n > CAP {
        return Err(Error::SizeCap {
            what: "brute-force min cut",
            cap: CAP,
            got: n,
        });
    }
    let mut best_val = usize::MAX;
    let mut best_mask = 0u64;
    // Fix vertex 0 on one side to halve the enumeration.
    for mask in (0u64..1 << (n - 1)).map(|m| m << 1 | 1) {
        if mask == (1 << n) - 1 {
            continue;
        }
        let mut cut = 0usize;
        for &(a, b) in g.edges() {
            if (mask >> a & 1) != (mask >> b & 1) {
                cut += 1;
            }
        }
        if cut < best_val {
            best_val = cut;
            best_mask = mask;
        }
    }
    Ok(MinCut {
        value: best_val as f64,
        witness: NodeSet::new((0..n).filter(|&v| best_mask >> v & 1 == 1)),
    })
}
