use serde_json::{json, Map};
use ustlab_core::graph::make_complete;
use ustlab_core::poisson_limit::{
    mn_trials, pmf_table, trial_seed, tv_distance, AlphaRegime, PoissonParams, ALPHA_MAX,
};
use ustlab_core::EmpiricalDist;

use super::{new_report, run_config};
use crate::cli::{Command, TvPoissonArgs};
use crate::error::{LabError, LabResult};
use crate::parallel::{run_sharded, shard_table};
use crate::report::{num, opt_num, Report};

/// Standard errors of slack allowed when comparing a pmf with a bound.
const BOUND_SIGMAS: f64 = 4.0;

pub fn tv_poisson(a: &TvPoissonArgs) -> LabResult<Report> {
    if a.n < 2 {
        return Err(LabError::usage("--n must be at least 2"));
    }
    if a.k == 0 || a.trials == 0 {
        return Err(LabError::usage("--k and --trials must be positive"));
    }
    if !(a.alpha > 0.0 && a.alpha < ALPHA_MAX) {
        return Err(LabError::usage(format!("--alpha must lie in (0, {ALPHA_MAX:.6})")));
    }
    let mut report = new_report(run_config(&Command::TvPoisson(a.clone())));
    let seed = a.common.seed;
    let g = make_complete(a.n)?;
    let parts = run_sharded(a.trials, a.common.shards, |r| Ok(mn_trials(&g, a.k, seed, r)?))?;
    let mut dist = EmpiricalDist::new();
    parts.iter().for_each(|d| dist.merge(d));
    report.shards = shard_table(a.trials, a.common.shards, |t| trial_seed(seed, t));

    let params = PoissonParams::for_trees(a.k);
    let tv = tv_distance(&dist, params)?;
    let regime = AlphaRegime::new(a.alpha, a.n, a.k)?;
    let slack = regime.default_slack(a.slack_c);
    report.set("trials", json!(dist.trials()));
    report.set("lambda", num(params.lambda()));
    report.set("mean", num(dist.mean()));
    report.set("mean_std_error", num(dist.mean_std_error()));
    report.set("variance", num(dist.variance()));
    report.set("tv", num(tv.tv));
    report.set("l1", num(tv.l1));
    report.set("tv_noise", num(tv.noise));
    report.set("truncation", json!(tv.truncation));
    report.set("a_threshold", num(regime.a_threshold()));
    report.set("claim2_slack", num(slack));
    report.set("k_within_regime", json!(regime.k_within(1.0)));

    let table = pmf_table(&dist, a.k, Some(&regime), slack);
    let (mut claim1_ok, mut claim2_ok) = (true, true);
    for row in &table {
        claim1_ok &= row.pmf <= row.claim1 + BOUND_SIGMAS * row.std_error;
        if let Some(b) = row.claim2 {
            claim2_ok &= row.pmf <= b + BOUND_SIGMAS * row.std_error;
        }
        let mut r = Map::new();
        r.insert("a".into(), json!(row.a));
        r.insert("count".into(), json!(row.count));
        r.insert("pmf".into(), num(row.pmf));
        r.insert("std_error".into(), num(row.std_error));
        r.insert("poisson".into(), num(row.poisson));
        r.insert("claim1".into(), num(row.claim1));
        r.insert("claim2".into(), opt_num(row.claim2));
        report.rows.push(r);
    }
    report.set("claim1_holds", json!(claim1_ok));
    report.set("claim2_holds", json!(claim2_ok));
    if let Some(limit) = a.assert_tv_below {
        report.assert("tv_below", tv.tv < limit, format!("tv {:.6} vs limit {limit}", tv.tv));
    }
    if a.assert_claim1 {
        report.assert("claim1", claim1_ok, format!("every a, {BOUND_SIGMAS} standard errors"));
    }
    if a.assert_claim2 {
        report.assert("claim2", claim2_ok, format!("a <= {:.4}, slack {slack:.6}", regime.a_threshold()));
    }
    Ok(report)
}
