//! Weighted directed graphs, plain undirected graphs, and cut bookkeeping.
//!
//! Everything downstream (gadget encoders, cut oracles, min-cut search)
//! speaks in terms of these three types. Vertex ids are dense `0..n`.
//! Weights are `f64`, strictly positive and finite; cut sums always run in
//! ascending edge-index order so repeated runs agree bit for bit.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Relative tolerance for weight comparisons (balance checks, tie detection).
pub const REL_TOL: f64 = 1e-9;

/// Exhaustive balance checking walks all 2^n subsets; refuse beyond this.
pub const BALANCE_EXHAUSTIVE_CAP: usize = 20;

// ─── Node sets ───────────────────────────────────────────────────────────

/// A set of vertex ids in canonical form: sorted, deduplicated.
///
/// Canonical form is what makes hashed noise reproducible: two callers
/// naming the same cut get the same bytes, hence the same perturbation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet {
    members: Vec<usize>,
}

impl NodeSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        NodeSet { members: v }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// All vertices of `0..n` not in this set.
    pub fn complement(&self, n: usize) -> NodeSet {
        let mut out = Vec::with_capacity(n - self.members.len());
        let mut it = self.members.iter().peekable();
        for v in 0..n {
            if it.peek() == Some(&&v) {
                it.next();
            } else {
                out.push(v);
            }
        }
        NodeSet { members: out }
    }

    /// Proper cut side: nonempty and not all of `0..n`, ids in range.
    pub fn validate_proper(&self, n: usize) -> Result<()> {
        if self.members.is_empty() {
            return Err(Error::InvalidInput("cut side is empty".into()));
        }
        if self.members.len() >= n {
            return Err(Error::InvalidInput("cut side covers every vertex".into()));
        }
        if *self.members.last().unwrap() >= n {
            return Err(Error::InvalidInput(format!(
                "vertex id {} out of range for n = {n}",
                self.members.last().unwrap()
            )));
        }
        Ok(())
    }

    /// Membership bitmap over `0..n`, the fast path for cut sums.
    pub fn bitmap(&self, n: usize) -> Vec<bool> {
        let mut b = vec![false; n];
        for &v in &self.members {
            b[v] = true;
        }
        b
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

// ─── Directed weighted graphs ────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Simple directed graph with positive finite weights.
///
/// At most one edge per ordered pair and no self-loops; the constructor
/// enforces both. Edge order is whatever the caller supplied and is the
/// order every cut sum uses.
#[derive(Debug, Clone)]
pub struct DirectedWeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl DirectedWeightedGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({}, {}) out of range for n = {n}",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidInput(format!("self-loop at {}", e.u)));
            }
            if !(e.w.is_finite() && e.w > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "edge ({}, {}) has weight {}, need finite > 0",
                    e.u, e.v, e.w
                )));
            }
            if !seen.insert((e.u, e.v)) {
                return Err(Error::InvalidInput(format!(
                    "duplicate edge ({}, {})",
                    e.u, e.v
                )));
            }
        }
        Ok(DirectedWeightedGraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Weight of the directed cut `w(S, V \ S)`, summed in edge order.
    pub fn cut_weight(&self, s: &NodeSet) -> Result<f64> {
        s.validate_proper(self.n)?;
        let inside = s.bitmap(self.n);
        let mut total = 0.0;
        for e in &self.edges {
            if inside[e.u] && !inside[e.v] {
                total += e.w;
            }
        }
        Ok(total)
    }

    /// Largest ratio `w(u,v) / w(v,u)` over all edges; +inf when some edge
    /// has no reverse partner.
    pub fn edge_reverse_ratio(&self) -> f64 {
        let mut reverse = std::collections::HashMap::with_capacity(self.edges.len());
        for e in &self.edges {
            reverse.insert((e.u, e.v), e.w);
        }
        let mut worst = 0.0f64;
        for e in &self.edges {
            match reverse.get(&(e.v, e.u)) {
                Some(back) => worst = worst.max(e.w / back),
                None => return f64::INFINITY,
            }
        }
        worst
    }

    /// True when every cut satisfies `w(S, V\S) <= beta * w(V\S, S)`, up to
    /// a relative tolerance of [`REL_TOL`] per comparison. Walks all
    /// 2^n - 2 proper subsets, so `n` is capped at
    /// [`BALANCE_EXHAUSTIVE_CAP`].
    pub fn is_beta_balanced_exhaustive(&self, beta: f64) -> Result<bool> {
        if self.n > BALANCE_EXHAUSTIVE_CAP {
            return Err(Error::SizeCap {
                what: "exhaustive balance check",
                cap: BALANCE_EXHAUSTIVE_CAP,
                got: self.n,
            });
        }
        if self.n < 2 {
            return Ok(true);
        }
        // Forward/backward sums per subset mask, edges in index order.
        let masks: u64 = 1u64 << self.n;
        for mask in 1..masks - 1 {
            let mut fwd = 0.0;
            let mut back = 0.0;
            for e in &self.edges {
                let u_in = mask >> e.u & 1 == 1;
                let v_in = mask >> e.v & 1 == 1;
                if u_in && !v_in {
                    fwd += e.w;
                } else if v_in && !u_in {
                    back += e.w;
                }
            }
            if fwd > beta * back * (1.0 + REL_TOL) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

// ─── Undirected graphs ───────────────────────────────────────────────────

/// Simple undirected graph, unit edges stored as normalized `(min, max)`.
#[derive(Debug, Clone)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(n: usize, raw: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(raw.len());
        let mut edges = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            if a >= n || b >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop at {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidInput(format!(
                    "duplicate edge ({}, {})",
                    e.0, e.1
                )));
            }
            edges.push(e);
        }
        Ok(UndirectedGraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbor lists in ascending vertex order, the indexing the local
    /// query oracles expose.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Number of edges with exactly one endpoint in `s`.
    pub fn cut_size(&self, s: &NodeSet) -> Result<usize> {
        s.validate_proper(self.n)?;
        let inside = s.bitmap(self.n);
        Ok(self
            .edges
            .iter()
            .filter(|&&(a, b)| inside[a] != inside[b])
            .count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }
}

// ─── Edge-list text format ───────────────────────────────────────────────
//
// Header: `n <vertex-count> <directed|undirected>`, then one edge per line,
// `u v w` for directed and `u v` for undirected.

pub fn write_directed(g: &DirectedWeightedGraph) -> String {
    let mut out = format!("n {} directed\n", g.n());
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, e.w));
    }
    out
}

pub fn write_undirected(g: &UndirectedGraph) -> String {
    let mut out = format!("n {} undirected\n", g.n());
    for &(a, b) in g.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

enum Header {
    Directed(usize),
    Undirected(usize),
}

fn parse_header(line: &str) -> Result<Header> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != "n" {
        return Err(Error::Parse(format!(
            "bad header {line:?}, want `n <count> directed|undirected`"
        )));
    }
    let n: usize = parts[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad vertex count {:?}", parts[1])))?;
    match parts[2] {
        "directed" => Ok(Header::Directed(n)),
        "undirected" => Ok(Header::Undirected(n)),
        other => Err(Error::Parse(format!("unknown graph kind {other:?}"))),
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_directed(text: &str) -> Result<DirectedWeightedGraph> {
    let mut lines = data_lines(text);
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let n = match parse_header(header)? {
        Header::Directed(n) => n,
        Header::Undirected(_) => {
            return Err(Error::Parse("expected a directed graph".into()))
        }
    };
    let mut edges = Vec::new();
    for (lineno, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::Parse(format!("line {lineno}: want `u v w`")));
        }
        let parse = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::Parse(format!("line {lineno}: bad vertex {s:?}")))
        };
        let w: f64 = f[2]
            .parse()
            .map_err(|_| Error::Parse(format!("line {lineno}: bad weight {:?}", f[2])))?;
        edges.push(Edge {
            u: parse(f[0])?,
            v: parse(f[1])?,
            w,
        });
    }
    DirectedWeightedGraph::new(n, edges)
}

pub fn parse_undirected(text: &str) -> Result<UndirectedGraph> {
    let mut lines = data_lines(text);
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let n = match parse_header(header)? {
        Header::Undirected(n) => n,
        Header::Directed(_) => {
            return Err(Error::Parse("expected an undirected graph".into()))
        }
    };
    let mut edges = Vec::new();
    for (lineno, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(Error::Parse(format!("line {lineno}: want `u v`")));
        }
        let parse = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::Parse(format!("line {lineno}: bad vertex {s:?}")))
        };
        edges.push((parse(f[0])?, parse(f[1])?));
    }
    UndirectedGraph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycle(w_fwd: f64, w_back: f64) -> DirectedWeightedGraph {
        DirectedWeightedGraph::new(
            2,
            vec![
                Edge { u: 0, v: 1, w: w_fwd },
                Edge { u: 1, v: 0, w: w_back },
            ],
        )
        .unwrap()
    }

    #[test]
    fn node_set_canonical_form() {
        let s = NodeSet::new(vec![3, 1, 3, 0]);
        assert_eq!(s.members(), &[0, 1, 3]);
        assert_eq!(s.complement(5).members(), &[2, 4]);
        assert!(s.contains(3));
        assert!(!s.contains(2));
    }

    #[test]
    fn cut_weight_rejects_improper_sides() {
        let g = two_cycle(1.0, 1.0);
        assert!(g.cut_weight(&NodeSet::new(vec![])).is_err());
        assert!(g.cut_weight(&NodeSet::new(vec![0, 1])).is_err());
        assert!(g.cut_weight(&NodeSet::new(vec![5])).is_err());
    }

    #[test]
    fn cut_weight_directional() {
        let g = two_cycle(2.0, 3.0);
        let s = NodeSet::new(vec![0]);
        assert_eq!(g.cut_weight(&s).unwrap(), 2.0);
        assert_eq!(g.cut_weight(&s.complement(2)).unwrap(), 3.0);
    }

    #[test]
    fn constructor_rejects_bad_edges() {
        let mk = |edges| DirectedWeightedGraph::new(3, edges);
        assert!(mk(vec![Edge { u: 0, v: 0, w: 1.0 }]).is_err());
        assert!(mk(vec![Edge { u: 0, v: 1, w: -1.0 }]).is_err());
        assert!(mk(vec![Edge { u: 0, v: 1, w: f64::NAN }]).is_err());
        assert!(mk(vec![
            Edge { u: 0, v: 1, w: 1.0 },
            Edge { u: 0, v: 1, w: 2.0 }
        ])
        .is_err());
        assert!(mk(vec![Edge { u: 0, v: 3, w: 1.0 }]).is_err());
    }

    #[test]
    fn single_directed_edge_is_never_balanced() {
        let g =
            DirectedWeightedGraph::new(2, vec![Edge { u: 0, v: 1, w: 1.0 }]).unwrap();
        assert!(!g.is_beta_balanced_exhaustive(1e12).unwrap());
        assert_eq!(g.edge_reverse_ratio(), f64::INFINITY);
    }

    #[test]
    fn symmetric_pair_is_one_balanced() {
        let g = two_cycle(1.0, 1.0);
        assert!(g.is_beta_balanced_exhaustive(1.0).unwrap());
        assert_eq!(g.edge_reverse_ratio(), 1.0);
    }

    #[test]
    fn lopsided_pair_balance_threshold() {
        let g = two_cycle(3.0, 1.0);
        assert_eq!(g.edge_reverse_ratio(), 3.0);
        assert!(g.is_beta_balanced_exhaustive(3.0).unwrap());
        assert!(!g.is_beta_balanced_exhaustive(2.9).unwrap());
    }

    #[test]
    fn balance_check_size_cap() {
        let n = BALANCE_EXHAUSTIVE_CAP + 1;
        let edges = (0..n - 1)
            .flat_map(|i| {
                [
                    Edge { u: i, v: i + 1, w: 1.0 },
                    Edge { u: i + 1, v: i, w: 1.0 },
                ]
            })
            .collect();
        let g = DirectedWeightedGraph::new(n, edges).unwrap();
        assert!(matches!(
            g.is_beta_balanced_exhaustive(1.0),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn ratio_bounds_every_cut_imbalance() {
        // With a finite reverse ratio r, every cut is r-balanced: the check
        // at beta = r must pass no matter the weights.
        let g = DirectedWeightedGraph::new(
            4,
            vec![
                Edge { u: 0, v: 1, w: 2.5 },
                Edge { u: 1, v: 0, w: 1.0 },
                Edge { u: 1, v: 2, w: 0.25 },
                Edge { u: 2, v: 1, w: 1.5 },
                Edge { u: 2, v: 3, w: 4.0 },
                Edge { u: 3, v: 2, w: 1.0 },
                Edge { u: 3, v: 0, w: 1.0 },
                Edge { u: 0, v: 3, w: 1.0 },
            ],
        )
        .unwrap();
        let r = g.edge_reverse_ratio();
        assert!(r.is_finite());
        assert!(g.is_beta_balanced_exhaustive(r).unwrap());
    }

    #[test]
    fn undirected_normalizes_and_rejects_duplicates() {
        let g = UndirectedGraph::new(3, vec![(2, 0), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (0, 1)]);
        assert!(UndirectedGraph::new(3, vec![(0, 1), (1, 0)]).is_err());
        let s = NodeSet::new(vec![0]);
        assert_eq!(g.cut_size(&s).unwrap(), 2);
    }

    #[test]
    fn edge_list_roundtrip_directed() {
        let g = two_cycle(1.5, 0.25);
        let text = write_directed(&g);
        let back = parse_directed(&text).unwrap();
        assert_eq!(back.n(), 2);
        assert_eq!(back.edges()[0].w, 1.5);
        assert_eq!(back.edges()[1].w, 0.25);
    }

    #[test]
    fn edge_list_roundtrip_undirected() {
        let g = UndirectedGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let back = parse_undirected(&write_undirected(&g)).unwrap();
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn edge_list_parse_errors() {
        assert!(parse_directed("").is_err());
        assert!(parse_directed("m 3 directed\n").is_err());
        assert!(parse_directed("n 3 sideways\n").is_err());
        assert!(parse_directed("n 3 directed\n0 1\n").is_err());
        assert!(parse_undirected("n 3 directed\n").is_err());
        assert!(parse_undirected("n 3 undirected\n0 x\n").is_err());
    }
}
