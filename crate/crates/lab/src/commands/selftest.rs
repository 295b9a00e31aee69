//! Fast oracle checks, one assertion per suite.

use serde_json::{json, Map};
use ustlab_core::electrical::edge_inclusion_probability;
use ustlab_core::graph::make_complete;
use ustlab_core::poisson_limit::mn_distribution;
use ustlab_core::tail_moments::{
    expected_count_gnm, falling_factorial_estimate, falling_factorial_log, kth_moment_via_ma, GnmParams,
};
use ustlab_core::tree_count::{count_spanning_trees, enumerate_spanning_trees, matrix_tree_log_count};
use ustlab_core::tree_sample::wilson_sample;

use super::{new_report, run_config};
use crate::cli::{Command, SelftestArgs};
use crate::error::LabResult;
use crate::oracle;
use crate::report::Report;

type Check = (&'static str, bool, String);

fn counting() -> Check {
    let mut graphs = 0;
    let mut bad = 0;
    for n in 1..=5 {
        for g in oracle::all_connected(n) {
            graphs += 1;
            bad += usize::from(matrix_tree_log_count(&g).value().round() as u64 != count_spanning_trees(&g).unwrap_or(0));
        }
    }
    ("counting", bad == 0, format!("{bad} mismatches over {graphs} connected graphs, n <= 5"))
}

fn kirchhoff() -> Check {
    let mut worst = 0.0f64;
    for g in [make_complete(5).expect("K_5"), oracle::cycle(6), oracle::complete_minus_edge(4)] {
        let exact = oracle::enumerated_marginals(&g);
        for (i, &e) in g.edges().iter().enumerate() {
            let p = edge_inclusion_probability(&g, e).unwrap_or(f64::NAN);
            worst = worst.max((p - exact[i]).abs() / exact[i]);
        }
    }
    ("kirchhoff", worst <= 1e-9, format!("max relative error {worst:.3e}"))
}

fn negative_correlation() -> Check {
    let worst = (3..=5)
        .flat_map(oracle::all_connected)
        .filter(|g| g.edge_count() >= 2)
        .map(|g| oracle::max_correlation_excess(&g))
        .fold(f64::NEG_INFINITY, f64::max);
    ("negative_correlation", worst <= 1e-12, format!("max excess {worst:.3e}"))
}

fn wilson_uniformity(seed: u64) -> Check {
    let g = make_complete(4).expect("K_4");
    let trees = enumerate_spanning_trees(&g).expect("small");
    let mut counts = vec![0u64; trees.len()];
    let samples = 16_000u64;
    for s in 0..samples {
        let t = wilson_sample(&g, seed.wrapping_add(s)).expect("connected");
        counts[trees.iter().position(|x| x == t.edges()).expect("spanning tree")] += 1;
    }
    let (stat, p) = oracle::chi_square(&counts, &[1.0 / 16.0; 16]);
    ("wilson_uniformity", p > 1e-3, format!("chi-square {stat:.2} on 15 df, p = {p:.4}"))
}

fn exact_mean() -> Check {
    let mut worst = 0.0f64;
    for n in 2..=4 {
        for m in n - 1..=oracle::pairs(n).len() {
            let exact = expected_count_gnm(&GnmParams::new(n, m).expect("m <= C(n,2)"));
            worst = worst.max((exact.ln() - oracle::brute_moment(n, m, 1).ln()).abs());
        }
    }
    ("exact_mean", worst <= 1e-9, format!("max log error {worst:.3e}"))
}

fn moment_identity() -> Check {
    let law = oracle::exact_overlap_counts(3, 2);
    let via = kth_moment_via_ma(&GnmParams::new(3, 2).expect("valid"), 2, &law).map(|e| e.log.ln());
    let ok = matches!(via, Ok(x) if x.abs() < 1e-12);
    ("moment_identity", ok, format!("ln E X^2 for G(3,2) = {via:?}"))
}

fn falling_factorial() -> Check {
    let mut worst = 0.0f64;
    for big_n in [10_000u64, 100_000, 1_000_000] {
        for l in [10u64, 100, 1_000] {
            if let Ok(est) = falling_factorial_estimate(big_n, l) {
                let exact = falling_factorial_log(big_n, l).expect("l <= N");
                let bound = 2.0 * (l as f64).powi(3) / (big_n as f64).powi(2);
                worst = worst.max((exact.ln() - est.ln()).abs() / bound);
            }
        }
    }
    ("falling_factorial", worst <= 1.0, format!("max error / bound {worst:.3}"))
}

fn shard_invariance(seed: u64) -> Check {
    let g = make_complete(10).expect("K_10");
    let one = mn_distribution(&g, 2, 400, seed, 1);
    let many = mn_distribution(&g, 2, 400, seed, 7);
    let ok = matches!((&one, &many), (Ok(a), Ok(b)) if a == b);
    ("shard_invariance", ok, "400 trials, 1 vs 7 shards".to_string())
}

pub fn selftest(a: &SelftestArgs) -> LabResult<Report> {
    let mut report = new_report(run_config(&Command::Selftest(a.clone())));
    let seed = a.common.seed;
    let checks = [
        counting(),
        kirchhoff(),
        negative_correlation(),
        wilson_uniformity(seed),
        exact_mean(),
        moment_identity(),
        falling_factorial(),
        shard_invariance(seed),
    ];
    let passed = checks.iter().filter(|c| c.1).count();
    report.set("checks", json!(checks.len()));
    report.set("passed", json!(passed));
    for (name, ok, detail) in checks {
        let mut row = Map::new();
        row.insert("check".into(), json!(name));
        row.insert("passed".into(), json!(ok));
        row.insert("detail".into(), json!(detail));
        report.rows.push(row);
        report.assert(name, ok, detail);
    }
    Ok(report)
}
