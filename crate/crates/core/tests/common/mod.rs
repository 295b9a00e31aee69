//! Small-graph generators shared by the oracle tests.
#![allow(dead_code)]

use ustlab_core::graph::gen_gnp;
use ustlab_core::Graph;

/// All vertex pairs of `0..n` in lexicographic order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// Every labeled graph on `n` vertices, one per subset of pairs.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = pairs(n);
    (0u32..1 << pairs.len()).map(move |mask| {
        let chosen: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        Graph::from_pairs(n, &chosen).unwrap()
    })
}

pub fn all_connected(n: usize) -> impl Iterator<Item = Graph> {
    all_graphs(n).filter(Graph::is_connected)
}

/// `count` connected `G(n, p)` draws, `n` cycling through `sizes`.
pub fn random_connected(sizes: &[usize], p: f64, count: usize, seed: u64) -> Vec<Graph> {
    let mut out = Vec::new();
    let mut s = seed;
    while out.len() < count {
        let n = sizes[out.len() % sizes.len()];
        let g = gen_gnp(n, p, s).unwrap();
        s += 1;
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

pub fn cycle(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_pairs(n, &pairs).unwrap()
}

/// `K_n` minus the edge `01`.
pub fn complete_minus_edge(n: usize) -> Graph {
    let chosen: Vec<_> = pairs(n).into_iter().filter(|&p| p != (0, 1)).collect();
    Graph::from_pairs(n, &chosen).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
