//! Uniform spanning trees by Wilson's loop-erased random walk.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{invalid, Result};
use crate::graph::{require_connected, Edge, EdgeSet, Graph};
use crate::math;
use crate::rng::{bounded_index, derive_tagged, rng_from_seed, unit_f64, SeedRng};

const TREE_STREAM: u64 = 0x7472_6565;

/// A spanning tree with its parent pointers toward root 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformTree {
    edges: EdgeSet,
    parent: Vec<Option<usize>>,
}

impl UniformTree {
    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn into_edges(self) -> EdgeSet {
        self.edges
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// Parent of `v`; `None` only at the root.
    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Checks the spanning-tree invariants: `n - 1` edges, every vertex
    /// reaches the root, and the parent pointers match the edge set.
    pub fn is_valid(&self) -> bool {
        let n = self.n();
        if n == 0 || self.edges.len() != n - 1 || self.parent[0].is_some() {
            return false;
        }
        for v in 1..n {
            let Some(p) = self.parent[v] else { return false };
            match Edge::new(v, p) {
                Ok(e) if self.edges.contains(e) => {}
                _ => return false,
            }
            // climbing must hit the root within n steps
            let mut u = v;
            let mut steps = 0;
            while let Some(p) = self.parent[u] {
                u = p;
                steps += 1;
                if steps > n {
                    return false;
                }
            }
        }
        true
    }
}

/// Samples a uniform spanning tree of `g` with a fresh generator seeded by `seed`.
pub fn wilson_sample(g: &Graph, seed: u64) -> Result<UniformTree> {
    require_connected(g)?;
    Ok(wilson_with_rng(g, &mut rng_from_seed(seed)))
}

/// Wilson's algorithm rooted at vertex 0. `g` must be connected.
pub fn wilson_with_rng(g: &Graph, rng: &mut SeedRng) -> UniformTree {
    let n = g.n();
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    in_tree[0] = true;
    for start in 1..n {
        let mut u = start;
        while !in_tree[u] {
            let nbrs = g.neighbors(u);
            next[u] = nbrs[bounded_index(rng, nbrs.len())];
            u = next[u];
        }
        // loops were erased implicitly: `next` keeps the last exit
        u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = next[u];
        }
    }
    tree_from_next(next)
}

/// Weighted spanning tree, `P[T] ∝ Π_{e ∈ T} w(e)`: Wilson's walk with
/// steps proportional to edge weights. Weights must be positive and finite.
pub fn weighted_wilson_sample<W: Fn(Edge) -> f64>(g: &Graph, weight: W, seed: u64) -> Result<UniformTree> {
    require_connected(g)?;
    if g.edges().iter().any(|&e| !(weight(e) > 0.0 && weight(e).is_finite())) {
        return Err(invalid("edge weights must be positive and finite"));
    }
    Ok(weighted_wilson_with_rng(g, weight, &mut rng_from_seed(seed)))
}

/// As [`wilson_with_rng`] with weighted steps. `g` must be connected and the
/// weights valid.
pub fn weighted_wilson_with_rng<W: Fn(Edge) -> f64>(g: &Graph, weight: W, rng: &mut SeedRng) -> UniformTree {
    let n = g.n();
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    let mut w = Vec::new();
    in_tree[0] = true;
    for start in 1..n {
        let mut u = start;
        while !in_tree[u] {
            let nbrs = g.neighbors(u);
            w.clear();
            w.extend(nbrs.iter().map(|&v| weight(Edge::new(u, v).expect("no loops"))));
            let total: f64 = w.iter().sum();
            let mut target = unit_f64(rng.next_u64()) * total;
            // falls back to the last neighbor if rounding overshoots
            let mut pick = nbrs.len() - 1;
            for (i, wi) in w.iter().enumerate() {
                if target < *wi {
                    pick = i;
                    break;
                }
                target -= wi;
            }
            next[u] = nbrs[pick];
            u = next[u];
        }
        u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = next[u];
        }
    }
    tree_from_next(next)
}

fn tree_from_next(next: Vec<usize>) -> UniformTree {
    let parent: Vec<Option<usize>> = next.iter().map(|&p| (p != usize::MAX).then_some(p)).collect();
    let edges = EdgeSet::from_edges(
        parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| Edge::new(v, p).expect("walk never stays put"))),
    );
    UniformTree { edges, parent }
}

/// Seed of tree `index` within a `k`-tuple drawn from `seed`.
pub fn tree_seed(seed: u64, index: usize) -> u64 {
    derive_tagged(seed, TREE_STREAM, index as u64)
}

/// `k` independent uniform spanning trees.
pub fn sample_k_trees(g: &Graph, k: usize, seed: u64) -> Result<Vec<UniformTree>> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    require_connected(g)?;
    Ok((0..k)
        .map(|i| wilson_with_rng(g, &mut rng_from_seed(tree_seed(seed, i))))
        .collect())
}

/// Maximum vertex degree within the tree.
pub fn tree_max_degree(t: &UniformTree) -> usize {
    let mut degree = vec![0usize; t.n()];
    for e in t.edges.iter() {
        degree[e.lo()] += 1;
        degree[e.hi()] += 1;
    }
    degree.into_iter().max().unwrap_or(0)
}

/// Moon's tail bound `P[Δ(T) > d] ≤ n / d!`, capped at 1.
pub fn moon_tail_bound(n: usize, d: usize) -> f64 {
    let log_bound = math::ln(n as f64) - math::ln_factorial(d as u64);
    if log_bound >= 0.0 {
        1.0
    } else {
        math::exp(log_bound)
    }
}
