//! Spanning-tree counts, always in the log domain.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::graph::{Edge, EdgeSet, Graph};
use crate::linalg::{laplacian_minor, Cholesky};
use crate::logvalue::LogValue;
use crate::math;

/// Largest graph accepted by the enumeration oracle.
pub const ENUMERATION_LIMIT: usize = 9;

/// `ln(n^(n-2))`, the number of spanning trees of `K_n`.
pub fn cayley_log_count(n: usize) -> Result<LogValue> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let n = n as f64;
    Ok(LogValue::Ln((n - 2.0) * math::ln(n)))
}

/// Log of the number of spanning trees via the matrix-tree theorem
/// (log-determinant of the Laplacian with vertex 0 grounded).
/// Disconnected graphs give [`LogValue::Zero`].
pub fn matrix_tree_log_count(g: &Graph) -> LogValue {
    let n = g.n();
    if !g.is_connected() {
        return LogValue::Zero;
    }
    if n == 1 {
        return LogValue::ONE;
    }
    let vertices: Vec<usize> = (1..n).collect();
    match Cholesky::factor(laplacian_minor(g, &vertices), n - 1) {
        Ok(c) => LogValue::Ln(c.log_det()),
        Err(_) => LogValue::Zero,
    }
}

/// `ln Σ_T Π_{e ∈ T} w(e)`, the weighted matrix-tree determinant.
/// Weights must be positive and finite.
pub fn weighted_log_count<W: Fn(Edge) -> f64>(g: &Graph, weight: W) -> Result<LogValue> {
    let n = g.n();
    if !g.is_connected() {
        return Ok(LogValue::Zero);
    }
    if n == 1 {
        return Ok(LogValue::ONE);
    }
    let m = n - 1;
    let mut a = vec![0.0; m * m];
    for &e in g.edges() {
        let w = weight(e);
        if !(w > 0.0 && w.is_finite()) {
            return Err(invalid("edge weights must be positive and finite"));
        }
        let (lo, hi) = (e.lo(), e.hi());
        // row/column i holds vertex i + 1; vertex 0 is grounded
        if lo > 0 {
            a[(lo - 1) * m + lo - 1] += w;
            a[(lo - 1) * m + hi - 1] -= w;
            a[(hi - 1) * m + lo - 1] -= w;
        }
        a[(hi - 1) * m + hi - 1] += w;
    }
    Ok(LogValue::Ln(Cholesky::factor(a, m)?.log_det()))
}

#[derive(Clone, Copy)]
struct SmallDsu {
    parent: [u8; ENUMERATION_LIMIT],
}

impl SmallDsu {
    fn new(n: usize) -> SmallDsu {
        let mut parent = [0u8; ENUMERATION_LIMIT];
        for (i, p) in parent.iter_mut().enumerate().take(n) {
            *p = i as u8;
        }
        SmallDsu { parent }
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            v = self.parent[v] as usize;
        }
        v
    }

    /// False if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb) as u8;
        true
    }
}

/// Calls `visit` with the edge list of every spanning tree of `g`.
///
/// Branches on each edge in order: include it when it joins two components,
/// exclude it when the remaining edges can still span. Every leaf is a
/// spanning tree, so the cost is proportional to the number of trees.
pub fn for_each_spanning_tree<F: FnMut(&[Edge])>(g: &Graph, mut visit: F) -> Result<()> {
    let n = g.n();
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    if n == 0 {
        return Err(invalid("graph has no vertices"));
    }
    let mut chosen = Vec::with_capacity(n - 1);
    let dsu = SmallDsu::new(n);
    if spans(n, dsu, 0, g.edges()) {
        recurse(g.edges(), 0, n, &mut chosen, dsu, 0, &mut visit);
    }
    Ok(())
}

fn spans(n: usize, mut dsu: SmallDsu, joined: usize, rest: &[Edge]) -> bool {
    let mut joined = joined;
    for e in rest {
        if dsu.union(e.lo(), e.hi()) {
            joined += 1;
        }
    }
    joined + 1 == n
}

fn recurse<F: FnMut(&[Edge])>(
    edges: &[Edge],
    i: usize,
    n: usize,
    chosen: &mut Vec<Edge>,
    dsu: SmallDsu,
    joined: usize,
    visit: &mut F,
) {
    if chosen.len() + 1 == n {
        visit(chosen);
        return;
    }
    if i == edges.len() {
        return;
    }
    let e = edges[i];
    let mut with = dsu;
    if with.union(e.lo(), e.hi()) {
        chosen.push(e);
        recurse(edges, i + 1, n, chosen, with, joined + 1, visit);
        chosen.pop();
    }
    if spans(n, dsu, joined, &edges[i + 1..]) {
        recurse(edges, i + 1, n, chosen, dsu, joined, visit);
    }
}

/// All spanning trees of `g` (at most [`ENUMERATION_LIMIT`] vertices).
pub fn enumerate_spanning_trees(g: &Graph) -> Result<Vec<EdgeSet>> {
    let mut out = Vec::new();
    for_each_spanning_tree(g, |t| out.push(EdgeSet::from_edges(t.iter().copied())))?;
    Ok(out)
}

/// Number of spanning trees by enumeration.
pub fn count_spanning_trees(g: &Graph) -> Result<u64> {
    let mut count = 0u64;
    for_each_spanning_tree(g, |_| count += 1)?;
    Ok(count)
}

/// Grimmett's bound `|τ(H)| ≤ (1/n) (2m/(n-1))^(n-1)` for any graph with
/// `n` vertices and `m` edges.
pub fn grimmett_log_bound(n: usize, m: usize) -> Result<LogValue> {
    if n < 2 {
        return Err(invalid("grimmett bound needs n >= 2"));
    }
    if m == 0 {
        return Ok(LogValue::Zero);
    }
    let nf = n as f64;
    Ok(LogValue::Ln(
        -math::ln(nf) + (nf - 1.0) * math::ln(2.0 * m as f64 / (nf - 1.0)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, Edge};

    fn ln(x: f64) -> f64 {
        libm::log(x)
    }

    #[test]
    fn cayley_values() {
        assert!((cayley_log_count(3).unwrap().ln() - ln(3.0)).abs() < 1e-15);
        assert!((cayley_log_count(4).unwrap().ln() - ln(16.0)).abs() < 1e-15);
        assert_eq!(cayley_log_count(2).unwrap().ln(), 0.0);
        assert_eq!(cayley_log_count(1).unwrap().ln(), 0.0);
        assert!(cayley_log_count(0).is_err());
    }

    #[test]
    fn matrix_tree_small_cases() {
        let k3 = make_complete(3).unwrap();
        assert!((matrix_tree_log_count(&k3).ln() - ln(3.0)).abs() < 1e-12);
        let k4e = make_complete(4).unwrap().without_edge(Edge::new(0, 1).unwrap()).unwrap();
        assert!((matrix_tree_log_count(&k4e).ln() - ln(8.0)).abs() < 1e-12);
        assert_eq!(matrix_tree_log_count(&Graph::empty(2)), LogValue::Zero);
        assert_eq!(matrix_tree_log_count(&Graph::empty(1)), LogValue::ONE);
    }

    #[test]
    fn enumeration_small_cases() {
        let k3 = make_complete(3).unwrap();
        assert_eq!(enumerate_spanning_trees(&k3).unwrap().len(), 3);
        let path = Graph::from_pairs(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let trees = enumerate_spanning_trees(&path).unwrap();
        assert_eq!(trees, alloc::vec![path.edge_set()]);
        assert_eq!(count_spanning_trees(&make_complete(4).unwrap()).unwrap(), 16);
        assert_eq!(count_spanning_trees(&Graph::empty(3)).unwrap(), 0);
        assert_eq!(count_spanning_trees(&Graph::empty(1)).unwrap(), 1);
        assert!(matches!(
            enumerate_spanning_trees(&make_complete(10).unwrap()),
            Err(Error::TooLarge { n: 10, .. })
        ));
    }

    #[test]
    fn enumerated_trees_are_spanning_trees() {
        let g = make_complete(6).unwrap().without_edge(Edge::new(2, 4).unwrap()).unwrap();
        let trees = enumerate_spanning_trees(&g).unwrap();
        for t in &trees {
            assert_eq!(t.len(), 5);
            let sub = Graph::from_edges(6, t.iter()).unwrap();
            assert!(sub.is_connected());
            assert!(t.iter().all(|e| g.contains_edge(e)));
        }
        let mut dedup = trees.clone();
        dedup.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        dedup.dedup();
        assert_eq!(dedup.len(), trees.len());
    }

    #[test]
    fn cayley_matches_matrix_tree_up_to_1000() {
        for n in [2usize, 5, 17, 100, 333, 1000] {
            let g = make_complete(n).unwrap();
            let exact = cayley_log_count(n).unwrap().ln();
            let det = matrix_tree_log_count(&g).ln();
            assert!((det - exact).abs() <= 1e-8 * exact.abs().max(1.0), "n={n}");
        }
    }

    #[test]
    fn grimmett_values() {
        for n in 2..40 {
            let m = n * (n - 1) / 2;
            let b = grimmett_log_bound(n, m).unwrap().ln();
            let c = cayley_log_count(n).unwrap().ln();
            assert!((b - c).abs() < 1e-10, "n={n}");
        }
        assert!((grimmett_log_bound(4, 3).unwrap().ln() - ln(2.0)).abs() < 1e-14);
        assert!((grimmett_log_bound(3, 2).unwrap().ln() - ln(4.0 / 3.0)).abs() < 1e-14);
        assert_eq!(grimmett_log_bound(5, 0).unwrap(), LogValue::Zero);
        assert!(grimmett_log_bound(1, 0).is_err());
    }

    #[test]
    fn grimmett_dominates_small_graphs() {
        // every 3-edge graph on 4 vertices has at most one spanning tree
        let all = make_complete(4).unwrap();
        let edges = all.edges();
        let mut max_count = 0;
        for mask in 0u32..64 {
            if mask.count_ones() != 3 {
                continue;
            }
            let g = Graph::from_edges(4, (0..6).filter(|i| mask >> i & 1 == 1).map(|i| edges[i])).unwrap();
            max_count = max_count.max(count_spanning_trees(&g).unwrap());
        }
        assert_eq!(max_count, 1);
        assert!(grimmett_log_bound(4, 3).unwrap() >= LogValue::ONE);
        assert!(grimmett_log_bound(3, 2).unwrap() >= LogValue::ONE);
    }
}
