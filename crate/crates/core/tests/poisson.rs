use statrs::distribution::{Discrete, DiscreteCDF, Poisson};
use ustlab_core::graph::make_complete;
use ustlab_core::poisson_limit::*;
use ustlab_core::tree_count::enumerate_spanning_trees;
use ustlab_core::EmpiricalDist;

fn within(emp: &EmpiricalDist, a: usize, exact: f64, sigmas: f64) -> bool {
    let se = (exact * (1.0 - exact) / emp.trials() as f64).sqrt();
    (emp.pmf(a) - exact).abs() <= sigmas * se + 1e-12
}

#[test]
fn triangle_overlap_law() {
    // two trees of K_3 are equal (M = 2) with probability 1/3, else share one edge
    let g = make_complete(3).unwrap();
    let d = mn_distribution(&g, 2, 30_000, 7, 3).unwrap();
    assert!(within(&d, 1, 2.0 / 3.0, 4.0));
    assert!(within(&d, 2, 1.0 / 3.0, 4.0));
    assert_eq!(d.count(0), 0);
}

#[test]
fn k4_overlap_law_matches_enumeration() {
    let g = make_complete(4).unwrap();
    let trees = enumerate_spanning_trees(&g).unwrap();
    let mut exact = [0.0; 4];
    for s in &trees {
        for t in &trees {
            exact[s.iter().filter(|&e| t.contains(e)).count()] += 1.0 / 256.0;
        }
    }
    let d = mn_distribution(&g, 2, 40_000, 3, 4).unwrap();
    for (a, &p) in exact.iter().enumerate() {
        assert!(within(&d, a, p, 4.0), "a = {a}");
    }
}

#[test]
fn shard_count_does_not_change_the_law() {
    let g = make_complete(12).unwrap();
    let one = mn_distribution(&g, 3, 2_000, 11, 1).unwrap();
    let eight = mn_distribution(&g, 3, 2_000, 11, 8).unwrap();
    assert_eq!(one, eight);
    let ranges = shard_ranges(10, 4);
    assert_eq!(ranges, vec![0..3, 3..6, 6..8, 8..10]);
    assert!(mn_distribution(&g, 2, 0, 1, 1).is_err());
    assert!(mn_distribution(&g, 2, 10, 1, 0).is_err());
}

#[test]
fn single_tree_has_no_overlap() {
    let g = make_complete(20).unwrap();
    let d = mn_distribution(&g, 1, 500, 2, 2).unwrap();
    assert_eq!(d.count(0), 500);
    let tv = tv_distance(&d, PoissonParams::for_trees(1)).unwrap();
    assert!(tv.tv.abs() < 1e-15);
}

#[test]
fn poisson_helpers_agree_with_statrs() {
    for lambda in [0.5, 2.0, 6.0, 12.0] {
        let params = PoissonParams::new(lambda).unwrap();
        let reference = Poisson::new(lambda).unwrap();
        for t in 0..40u64 {
            let (ours, theirs) = (poisson_pmf(params, t), reference.pmf(t));
            assert!((ours - theirs).abs() <= 1e-12 * theirs.max(1e-300) + 1e-300, "{lambda} {t}");
        }
        let a = poisson_truncation(params);
        assert!(reference.sf(a as u64) < TV_TAIL);
        assert!(a == 0 || reference.sf(a as u64 - 1) >= TV_TAIL);
    }
    assert!(PoissonParams::new(-1.0).is_err());
}

#[test]
fn tv_of_exact_counts_is_small_and_tails_count() {
    let params = PoissonParams::for_trees(2);
    let counts: Vec<u64> = (0..30).map(|a| libm::round(1e9 * poisson_pmf(params, a)) as u64).collect();
    let tv = tv_distance(&EmpiricalDist::from_counts(counts), params).unwrap();
    assert!(tv.tv < 1e-8);
    // all mass far beyond the truncation point: TV = 1
    let far = EmpiricalDist::from_counts({
        let mut c = vec![0u64; 100];
        c[99] = 10;
        c
    });
    assert!((tv_distance(&far, params).unwrap().tv - 1.0).abs() < 1e-12);
}

#[test]
fn claim_bounds_hold_on_moderate_graphs() {
    let n = 60;
    let g = make_complete(n).unwrap();
    for k in [2usize, 3] {
        let d = mn_distribution(&g, k, 6_000, 21, 2).unwrap();
        let regime = AlphaRegime::new(ALPHA_MAX * 0.999, n, k).unwrap();
        let slack = regime.default_slack(1.0);
        for row in pmf_table(&d, k, Some(&regime), slack) {
            assert!(row.pmf <= row.claim1 + 4.0 * row.std_error, "k={k} a={}", row.a);
            if let Some(bound) = row.claim2 {
                assert!(row.pmf <= bound + 4.0 * row.std_error, "k={k} a={}", row.a);
            }
        }
    }
}

#[test]
fn alpha_regime_limits() {
    assert!(AlphaRegime::new(0.0, 100, 2).is_err());
    assert!(AlphaRegime::new(ALPHA_MAX, 100, 2).is_err());
    let r = AlphaRegime::new(0.09, 200, 2).unwrap();
    assert!((r.a_threshold() - 200f64.powf(0.27)).abs() < 1e-12);
    assert!(r.covers(4) && !r.covers(5));
    assert!(claim2_bound(&r, 6, 0.1).is_err());
    assert!(claim2_bound(&r, 2, -0.1).is_err());
    assert!((claim1_bound(2, 3) - 8.0 / 6.0).abs() < 1e-14);
    assert_eq!(claim1_bound(1, 0), 1.0);
    assert_eq!(claim1_bound(1, 2), 0.0);
}
