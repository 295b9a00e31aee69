//! Simple undirected graphs on `0..n` and the random-graph generators.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Error, Result};
use crate::rng::{self, bounded_index, mix64, rng_from_seed, unit_f64};

/// An unordered pair `{lo, hi}` with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: usize,
    hi: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Result<Edge> {
        match a.cmp(&b) {
            core::cmp::Ordering::Less => Ok(Edge { lo: a, hi: b }),
            core::cmp::Ordering::Greater => Ok(Edge { lo: b, hi: a }),
            core::cmp::Ordering::Equal => Err(invalid("self-loop")),
        }
    }

    #[inline]
    pub fn lo(self) -> usize {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> usize {
        self.hi
    }

    /// The endpoint opposite `v`, if `v` is an endpoint.
    pub fn other(self, v: usize) -> Option<usize> {
        if v == self.lo {
            Some(self.hi)
        } else if v == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }

    pub fn touches(self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// Number of unordered pairs over `n` vertices.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Index of the pair `lo < hi` in lexicographic order over `0..n`.
#[inline]
fn pair_index(n: usize, lo: usize, hi: usize) -> usize {
    lo * (2 * n - lo - 1) / 2 + (hi - lo - 1)
}

/// A set of edges, kept sorted and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    edges: Vec<Edge>,
}

impl EdgeSet {
    pub fn new() -> EdgeSet {
        EdgeSet::default()
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(edges: I) -> EdgeSet {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        EdgeSet { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn as_slice(&self) -> &[Edge] {
        &self.edges
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet::from_edges(self.iter().chain(other.iter()))
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        !self.iter().any(|e| other.contains(e))
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet::from_edges(iter)
    }
}

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are stored sorted, alongside per-vertex neighbor lists and a
/// pair-indexed bitset for constant-time adjacency queries.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    bits: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Graph {
        Graph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
            bits: vec![0; pair_count(n).div_ceil(64)],
        }
    }

    /// Builds a graph from an edge list. Duplicates and out-of-range
    /// endpoints are rejected.
    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Result<Graph> {
        let mut g = Graph::empty(n);
        for e in edges {
            if e.hi >= n {
                return Err(invalid("edge endpoint out of range"));
            }
            let idx = pair_index(n, e.lo, e.hi);
            if g.bits[idx / 64] >> (idx % 64) & 1 == 1 {
                return Err(invalid("duplicate edge"));
            }
            g.bits[idx / 64] |= 1 << (idx % 64);
            g.edges.push(e);
        }
        g.finish();
        Ok(g)
    }

    /// Builds a graph from `(a, b)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Graph> {
        let edges = pairs
            .iter()
            .map(|&(a, b)| Edge::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Graph::from_edges(n, edges)
    }

    fn from_pair_predicate(n: usize, mut keep: impl FnMut(usize, usize) -> bool) -> Graph {
        let mut g = Graph::empty(n);
        for lo in 0..n {
            for hi in lo + 1..n {
                if keep(lo, hi) {
                    let idx = pair_index(n, lo, hi);
                    g.bits[idx / 64] |= 1 << (idx % 64);
                    g.edges.push(Edge { lo, hi });
                }
            }
        }
        g.finish();
        g
    }

    fn finish(&mut self) {
        self.edges.sort_unstable();
        for list in &mut self.adjacency {
            list.clear();
        }
        for e in &self.edges {
            self.adjacency[e.lo].push(e.hi);
            self.adjacency[e.hi].push(e.lo);
        }
        for list in &mut self.adjacency {
            list.sort_unstable();
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a == b || a >= self.n || b >= self.n {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let idx = pair_index(self.n, lo, hi);
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.has_edge(e.lo, e.hi)
    }

    pub fn edge_set(&self) -> EdgeSet {
        EdgeSet {
            edges: self.edges.clone(),
        }
    }

    /// Position of `e` in [`Graph::edges`].
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// Component label per vertex (labels are `0..components`, in order of
    /// smallest member).
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        (label, next)
    }

    /// True for the empty graph on one vertex; false for `n = 0`.
    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.component_labels().1 == 1
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        let (labels, _) = self.component_labels();
        labels[a] == labels[b]
    }

    /// Induced subgraph on `0..m`.
    pub fn restrict(&self, m: usize) -> Graph {
        let m = m.min(self.n);
        let edges = self.edges.iter().copied().filter(|e| e.hi < m);
        Graph::from_edges(m, edges).expect("subgraph of a valid graph")
    }

    pub fn without_edge(&self, e: Edge) -> Result<Graph> {
        if !self.contains_edge(e) {
            return Err(invalid("edge not in graph"));
        }
        Graph::from_edges(self.n, self.edges.iter().copied().filter(|&f| f != e))
    }

    pub fn with_edge(&self, e: Edge) -> Result<Graph> {
        Graph::from_edges(self.n, self.edges.iter().copied().chain(core::iter::once(e)))
    }

    /// Number of common neighbors of `a` and `b`.
    pub fn common_neighbors(&self, a: usize, b: usize) -> usize {
        let (x, y) = (&self.adjacency[a], &self.adjacency[b]);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }
}

/// The complete graph `K_n`.
pub fn make_complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    Ok(Graph::from_pair_predicate(n, |_, _| true))
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid("probability outside [0, 1]"))
    }
}

/// `G(n, p)`: every pair present independently with probability `p`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    check_probability(p)?;
    let mut rng = rng_from_seed(seed);
    Ok(Graph::from_pair_predicate(n, |_, _| rng::bernoulli(&mut rng, p)))
}

/// `G(n, m)`: a uniformly random `m`-subset of the pairs.
///
/// Uses Floyd's subset algorithm over pair indices, so every `m`-subset is
/// exactly equally likely.
pub fn gen_gnm(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let total = pair_count(n);
    if m > total {
        return Err(invalid("m exceeds n(n-1)/2"));
    }
    let mut rng = rng_from_seed(seed);
    let mut chosen = vec![false; total];
    for j in total - m..total {
        let t = bounded_index(&mut rng, j + 1);
        if chosen[t] {
            chosen[j] = true;
        } else {
            chosen[t] = true;
        }
    }
    let mut idx = 0;
    Ok(Graph::from_pair_predicate(n, |_, _| {
        let keep = chosen[idx];
        idx += 1;
        keep
    }))
}

/// The infinite random graph `G(N, p)`, realized lazily.
///
/// Edge `{i, j}` is present iff a hash of `(seed, min, max)` mapped to
/// `[0, 1)` falls below `p`, so restrictions to `0..n` are nested in `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoupledGraphSource {
    seed: u64,
    p: f64,
}

impl CoupledGraphSource {
    pub fn new(seed: u64, p: f64) -> Result<CoupledGraphSource> {
        check_probability(p)?;
        Ok(CoupledGraphSource { seed, p })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Whether `{i, j}` is an edge of the infinite graph.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let h = mix64(mix64(self.seed ^ 0x5851_f42d_4c95_7f2d) ^ mix64(lo as u64).rotate_left(17) ^ hi as u64);
        let h = mix64(h.wrapping_add(hi as u64).wrapping_mul(0x2545_f491_4f6c_dd1d));
        unit_f64(h) < self.p
    }

    /// Induced subgraph on `0..n`.
    pub fn restrict(&self, n: usize) -> Result<Graph> {
        if n == 0 {
            return Err(invalid("n must be positive"));
        }
        Ok(Graph::from_pair_predicate(n, |i, j| self.has_edge(i, j)))
    }
}

/// Restriction of the coupled infinite graph to `0..n`.
pub fn coupled_restrict(source: &CoupledGraphSource, n: usize) -> Result<Graph> {
    source.restrict(n)
}

/// Cardinality of the union of edge sets.
pub fn union_size(sets: &[EdgeSet]) -> usize {
    let mut all: Vec<Edge> = sets.iter().flat_map(|s| s.iter()).collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

/// `(min degree, max degree)`.
pub fn degree_stats(g: &Graph) -> Result<(usize, usize)> {
    if g.n == 0 {
        return Err(invalid("graph has no vertices"));
    }
    let degrees = (0..g.n).map(|v| g.degree(v));
    let min = degrees.clone().min().unwrap_or(0);
    let max = degrees.max().unwrap_or(0);
    Ok((min, max))
}

/// Error for operations that need a connected graph.
pub(crate) fn require_connected(g: &Graph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}
