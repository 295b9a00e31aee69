//! Brute-force references: exhaustive graph families, enumeration-based tree
//! statistics and a chi-square test. Slow, simple, independent of the
//! determinant and solver code paths they check.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use ustlab_core::graph::{gen_gnp, make_complete};
use ustlab_core::tree_count::{count_spanning_trees, enumerate_spanning_trees, for_each_spanning_tree};
use ustlab_core::{EdgeSet, EmpiricalDist, Graph};

/// Vertex pairs of `0..n` in lexicographic order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// Every labeled graph on `n ≤ 7` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = pairs(n);
    assert!(pairs.len() < 32, "too many graphs");
    (0u32..1 << pairs.len()).map(move |mask| {
        let chosen: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        Graph::from_pairs(n, &chosen).expect("distinct pairs")
    })
}

pub fn all_connected(n: usize) -> impl Iterator<Item = Graph> {
    all_graphs(n).filter(Graph::is_connected)
}

/// `count` connected `G(n, p)` draws, `n` cycling through `sizes`.
pub fn random_connected(sizes: &[usize], p: f64, count: usize, seed: u64) -> Vec<Graph> {
    let mut out = Vec::with_capacity(count);
    let mut s = seed;
    while out.len() < count {
        let g = gen_gnp(sizes[out.len() % sizes.len()], p, s).expect("valid p");
        s += 1;
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

pub fn cycle(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_pairs(n, &pairs).expect("simple cycle")
}

/// `K_n` without the edge `01`.
pub fn complete_minus_edge(n: usize) -> Graph {
    let chosen: Vec<_> = pairs(n).into_iter().filter(|&p| p != (0, 1)).collect();
    Graph::from_pairs(n, &chosen).expect("simple graph")
}

/// Fraction of spanning trees containing each edge of `g`, by edge index.
pub fn enumerated_marginals(g: &Graph) -> Vec<f64> {
    let mut hits = vec![0u64; g.edge_count()];
    let mut total = 0u64;
    for_each_spanning_tree(g, |t| {
        total += 1;
        for &e in t {
            hits[g.edge_index(e).expect("tree edge in graph")] += 1;
        }
    })
    .expect("small graph");
    hits.iter().map(|&h| h as f64 / total as f64).collect()
}

/// Largest violation of `P[e, f ∈ T] ≤ P[e] P[f]` over all edge pairs of `g`
/// (negative when every pair is strictly negatively correlated).
pub fn max_correlation_excess(g: &Graph) -> f64 {
    let trees = enumerate_spanning_trees(g).expect("small graph");
    let t = trees.len() as f64;
    let m = g.edge_count();
    let mut single = vec![0u64; m];
    let mut joint = vec![0u64; m * m];
    for tree in &trees {
        let idx: Vec<usize> = tree.iter().map(|e| g.edge_index(e).expect("tree edge")).collect();
        for (x, &i) in idx.iter().enumerate() {
            single[i] += 1;
            for &j in &idx[x + 1..] {
                joint[i.min(j) * m + i.max(j)] += 1;
            }
        }
    }
    let mut worst = f64::NEG_INFINITY;
    for i in 0..m {
        for j in i + 1..m {
            let excess = joint[i * m + j] as f64 / t - (single[i] as f64 / t) * (single[j] as f64 / t);
            worst = worst.max(excess);
        }
    }
    worst
}

/// `E X^k` over all `m`-edge graphs on `n` vertices.
pub fn brute_moment(n: usize, m: usize, k: i32) -> f64 {
    let (mut total, mut graphs) = (0.0, 0u64);
    for g in all_graphs(n).filter(|g| g.edge_count() == m) {
        total += (count_spanning_trees(&g).expect("small graph") as f64).powi(k);
        graphs += 1;
    }
    total / graphs as f64
}

/// Exact law of the overlap of `k` uniform trees of `K_n`, as one count per
/// `k`-tuple of trees.
pub fn exact_overlap_counts(n: usize, k: usize) -> EmpiricalDist {
    let trees = enumerate_spanning_trees(&make_complete(n).expect("n > 0")).expect("small n");
    let t = trees.len();
    let mut counts = vec![0u64; k * (n - 1) + 1];
    for code in 0..t.pow(k as u32) {
        let mut union = EdgeSet::new();
        let mut c = code;
        for _ in 0..k {
            union = union.union(&trees[c % t]);
            c /= t;
        }
        counts[k * (n - 1) - union.len()] += 1;
    }
    EmpiricalDist::from_counts(counts)
}

/// Pearson chi-square statistic and upper-tail p-value.
pub fn chi_square(counts: &[u64], expected: &[f64]) -> (f64, f64) {
    let total: u64 = counts.iter().sum();
    let stat: f64 = counts
        .iter()
        .zip(expected)
        .map(|(&c, &p)| {
            let e = p * total as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let df = (counts.len() - 1) as f64;
    (stat, 1.0 - ChiSquared::new(df).expect("df > 0").cdf(stat))
}
