mod common;

use common::{complete_minus_edge, cycle};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use ustlab_core::electrical::edge_inclusion_probability;
use ustlab_core::graph::make_complete;
use ustlab_core::poisson_limit::{mn_tilted_trials, tilted_pmf};
use ustlab_core::tree_count::{enumerate_spanning_trees, weighted_log_count};
use ustlab_core::tree_sample::*;
use ustlab_core::{Edge, EdgeSet, Graph};

/// Upper-tail p-value of Pearson's statistic against `expected` probabilities.
fn chi_square_p(counts: &[u64], expected: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let stat: f64 = counts
        .iter()
        .zip(expected)
        .map(|(&c, &p)| {
            let e = p * total as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    1.0 - ChiSquared::new((counts.len() - 1) as f64).unwrap().cdf(stat)
}

fn index_of(trees: &[EdgeSet], t: &EdgeSet) -> usize {
    trees.iter().position(|s| s == t).expect("sampled a spanning tree")
}

#[test]
fn wilson_is_uniform_on_small_complete_graphs() {
    for (n, samples) in [(3usize, 30_000u64), (4, 48_000)] {
        let g = make_complete(n).unwrap();
        let trees = enumerate_spanning_trees(&g).unwrap();
        let mut counts = vec![0u64; trees.len()];
        for s in 0..samples {
            let t = wilson_sample(&g, 1_000 + s).unwrap();
            assert!(t.is_valid());
            counts[index_of(&trees, t.edges())] += 1;
        }
        let uniform = vec![1.0 / trees.len() as f64; trees.len()];
        let p = chi_square_p(&counts, &uniform);
        assert!(p > 1e-3, "K_{n}: p = {p}");
    }
}

#[test]
fn wilson_is_uniform_on_irregular_graph() {
    let g = Graph::from_pairs(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (1, 3)]).unwrap();
    let trees = enumerate_spanning_trees(&g).unwrap();
    let mut counts = vec![0u64; trees.len()];
    for s in 0..40_000 {
        counts[index_of(&trees, wilson_sample(&g, s).unwrap().edges())] += 1;
    }
    assert!(chi_square_p(&counts, &vec![1.0 / trees.len() as f64; trees.len()]) > 1e-3);
}

#[test]
fn k_trees_are_jointly_uniform() {
    let g = make_complete(3).unwrap();
    let trees = enumerate_spanning_trees(&g).unwrap();
    let mut counts = vec![0u64; 9];
    for s in 0..27_000 {
        let ts = sample_k_trees(&g, 2, s).unwrap();
        counts[3 * index_of(&trees, ts[0].edges()) + index_of(&trees, ts[1].edges())] += 1;
    }
    assert!(chi_square_p(&counts, &[1.0 / 9.0; 9]) > 1e-3);
}

#[test]
fn weighted_wilson_follows_product_weights() {
    let g = make_complete(4).unwrap();
    let weight = |e: Edge| if e.lo() == 0 { 2.5 } else { 1.0 };
    let trees = enumerate_spanning_trees(&g).unwrap();
    let z = weighted_log_count(&g, weight).unwrap().value();
    let expected: Vec<f64> = trees.iter().map(|t| t.iter().map(weight).product::<f64>() / z).collect();
    assert!((expected.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let mut counts = vec![0u64; trees.len()];
    for s in 0..48_000 {
        counts[index_of(&trees, weighted_wilson_sample(&g, weight, s).unwrap().edges())] += 1;
    }
    assert!(chi_square_p(&counts, &expected) > 1e-3);
    assert!(weighted_wilson_sample(&g, |_| -1.0, 0).is_err());
}

#[test]
fn edge_marginals_match_electrical_solution() {
    let samples = 100_000u64;
    for g in [make_complete(5).unwrap(), cycle(5), complete_minus_edge(4)] {
        let mut hits = vec![0u64; g.edge_count()];
        for s in 0..samples {
            for e in wilson_sample(&g, s).unwrap().edges().iter() {
                hits[g.edge_index(e).unwrap()] += 1;
            }
        }
        for (i, &e) in g.edges().iter().enumerate() {
            let p = edge_inclusion_probability(&g, e).unwrap();
            let freq = hits[i] as f64 / samples as f64;
            let se = (p * (1.0 - p) / samples as f64).sqrt();
            assert!((freq - p).abs() <= 4.0 * se + 1e-12, "{g:?} {e:?}: {freq} vs {p}");
        }
    }
}

#[test]
fn moon_bound_holds_empirically() {
    let n = 30;
    let g = make_complete(n).unwrap();
    let samples = 4_000u64;
    let degrees: Vec<usize> = (0..samples).map(|s| tree_max_degree(&wilson_sample(&g, s).unwrap())).collect();
    for d in 3..10 {
        let freq = degrees.iter().filter(|&&x| x > d).count() as f64 / samples as f64;
        let se = (freq * (1.0 - freq) / samples as f64).sqrt();
        assert!(freq <= moon_tail_bound(n, d) + 4.0 * se, "d = {d}: {freq}");
    }
}

#[test]
fn tilted_law_is_unbiased() {
    // exact law of |T_1 ∩ T_2| for two uniform trees of K_4
    let g = make_complete(4).unwrap();
    let trees = enumerate_spanning_trees(&g).unwrap();
    let mut exact = [0.0; 4];
    for s in &trees {
        for t in &trees {
            exact[s.iter().filter(|&e| t.contains(e)).count()] += 1.0 / 256.0;
        }
    }
    let draws = mn_tilted_trials(&g, 2, 2.0, 77, 0..40_000).unwrap();
    let pmf = tilted_pmf(&draws);
    for (a, &p_exact) in exact.iter().enumerate() {
        let values: Vec<f64> = draws.iter().map(|d| if d.a == a { d.log_ratio.exp() } else { 0.0 }).collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
        let se = (var / values.len() as f64).sqrt();
        assert!((pmf.get(a).copied().unwrap_or(0.0) - p_exact).abs() <= 4.0 * se + 1e-12, "a = {a}");
    }
    // beta = 1 leaves the ratios at one
    assert!(mn_tilted_trials(&g, 3, 1.0, 1, 0..50).unwrap().iter().all(|d| d.log_ratio == 0.0));
    assert!(mn_tilted_trials(&g, 2, 0.5, 1, 0..1).is_err());
}
