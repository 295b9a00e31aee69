use serde_json::{json, Map, Value};
use ustlab_core::lil::{
    clt_trial_seed, janson_clt_trials, lil_supremum_report, source_seed, trajectory, CltSample, LilConfig,
    TrajectoryPoint,
};
use ustlab_core::stats::{correlation, mean_variance};
use ustlab_core::CoupledGraphSource;

use super::{new_report, run_config};
use crate::cli::{Command, LilArgs};
use crate::error::{LabError, LabResult};
use crate::parallel::{run_sharded, shard_table};
use crate::report::{log_num, num, opt_num, Report};

/// One coupled source: its trajectory and whether consecutive restrictions nest.
struct SourceRun {
    points: Vec<TrajectoryPoint>,
    nested: bool,
}

fn run_source(seed: u64, config: &LilConfig) -> LabResult<SourceRun> {
    let source = CoupledGraphSource::new(seed, config.p())?;
    let points = trajectory(&source, config)?;
    let grid = config.grid();
    let mut nested = true;
    for w in grid.windows(2) {
        let (small, large) = (source.restrict(w[0])?, source.restrict(w[1])?);
        nested &= large.restrict(w[0]) == small;
    }
    Ok(SourceRun { points, nested })
}

fn range_width(xs: &[f64]) -> f64 {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

pub fn lil(a: &LilArgs) -> LabResult<Report> {
    let config = LilConfig::new(a.p, a.grid_base, a.n_min, a.n_max)?;
    if a.sources == 0 {
        return Err(LabError::usage("--sources must be positive"));
    }
    let mut report = new_report(run_config(&Command::Lil(a.clone())));
    let (seed, shards) = (a.common.seed, a.common.shards);
    let runs: Vec<SourceRun> = run_sharded(a.sources, shards, |r| {
        r.map(|s| run_source(source_seed(seed, s), &config)).collect::<LabResult<Vec<_>>>()
    })?
    .into_iter()
    .flatten()
    .collect();
    report.shards = shard_table(a.sources, shards, |s| source_seed(seed, s));

    let grid = config.grid();
    let sigma = config.sigma();
    report.set("sigma", num(sigma));
    report.set("grid", json!(grid));
    let nested = runs.iter().all(|r| r.nested);
    report.set("coupling_nested", json!(nested));

    let mut per_n = Vec::new();
    let mut band = 0.0f64;
    let mut widths = Vec::new();
    let mut min_corr = f64::INFINITY;
    let mut undefined = 0usize;
    for (i, &n) in grid.iter().enumerate() {
        let residuals: Vec<f64> = runs.iter().filter_map(|r| r.points[i].residual).collect();
        undefined += runs.len() - residuals.len();
        let (xs, es): (Vec<f64>, Vec<f64>) = runs
            .iter()
            .filter_map(|r| r.points[i].normalized(sigma).map(|x| (x, r.points[i].e_star)))
            .unzip();
        let corr = correlation(&xs, &es);
        if n >= a.n_tail {
            min_corr = min_corr.min(corr.unwrap_or(f64::NEG_INFINITY));
        }
        band = residuals.iter().fold(band, |b, r| b.max(r.abs()));
        widths.push(range_width(&residuals));
        let (mean, _) = mean_variance(&residuals);
        per_n.push(json!({
            "n": n,
            "correlation": opt_num(corr),
            "residual_min": num(residuals.iter().copied().fold(f64::INFINITY, f64::min)),
            "residual_max": num(residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
            "residual_mean": num(mean),
        }));
    }
    // widening: the upper half of the grid has a wider residual spread
    let half = widths.len() / 2;
    let lower = widths[..half.max(1)].iter().copied().fold(0.0, f64::max);
    let upper = widths[half..].iter().copied().fold(0.0, f64::max);
    let no_widening = upper <= lower + 1e-12;
    report.set("per_n", Value::Array(per_n));
    report.set("residual_band", num(band));
    report.set("band_width_lower_half", num(lower));
    report.set("band_width_upper_half", num(upper));
    report.set("no_widening", json!(no_widening));
    report.set("min_correlation_tail", num(min_corr));
    report.set("undefined_points", json!(undefined));

    let trajectories: Vec<Vec<TrajectoryPoint>> = runs.iter().map(|r| r.points.clone()).collect();
    let summary = lil_supremum_report(&trajectories, a.n_tail)?;
    report.set(
        "tail_maxima",
        json!({
            "n_tail": summary.n_tail,
            "min": num(summary.min),
            "median": num(summary.median),
            "mean": num(summary.mean),
            "max": num(summary.max),
        }),
    );

    if a.clt_trials > 0 {
        let n = a.clt_n.unwrap_or(a.n_max);
        let parts = run_sharded(a.clt_trials, shards, |r| Ok(janson_clt_trials(n, a.p, seed, r)?))?;
        let mut sample = CltSample {
            values: Vec::new(),
            dropped: 0,
        };
        parts.into_iter().for_each(|p| sample.merge(p));
        let (mean, variance) = mean_variance(&sample.values);
        report.set(
            "clt",
            json!({
                "n": n,
                "trials": a.clt_trials,
                "dropped": sample.dropped,
                "first_trial_seed": clt_trial_seed(seed, 0),
                "mean": num(mean),
                "variance": num(variance),
                "target_variance": num(2.0 * (1.0 - a.p)),
            }),
        );
    }

    if let Some(b) = a.assert_band {
        report.assert(
            "band",
            band <= b && no_widening,
            format!("max |residual| {band:.4} (limit {b}), widths {lower:.4} -> {upper:.4}"),
        );
    }
    if let Some(r) = a.assert_correlation {
        report.assert("correlation", min_corr > r, format!("min correlation {min_corr:.5} for n >= {}", a.n_tail));
    }
    if a.assert_coupling {
        report.assert("coupling", nested, "restrictions nest exactly".into());
    }

    for (s, run) in runs.iter().enumerate() {
        for pt in &run.points {
            let mut row = Map::new();
            row.insert("source".into(), json!(s));
            row.insert("n".into(), json!(pt.n));
            row.insert("edge_count".into(), json!(pt.edge_count));
            row.insert("e_star".into(), num(pt.e_star));
            row.insert("log_x".into(), log_num(pt.log_x));
            row.insert("mu".into(), num(pt.mu));
            row.insert("normalized".into(), opt_num(pt.normalized(sigma)));
            row.insert("lil_stat".into(), opt_num(pt.lil_stat));
            row.insert("residual".into(), opt_num(pt.residual));
            report.rows.push(row);
        }
    }
    Ok(report)
}
