//! Commands that act on a single explicit graph.

use serde_json::{json, Map, Value};
use ustlab_core::electrical::{edge_inclusion_probability, effective_resistance, two_path_inclusion_bound};
use ustlab_core::graph::{gen_gnm, gen_gnp, make_complete, union_size};
use ustlab_core::tree_count::{cayley_log_count, count_spanning_trees, grimmett_log_bound, matrix_tree_log_count};
use ustlab_core::tree_sample::{sample_k_trees, tree_max_degree, tree_seed};
use ustlab_core::{Edge, EdgeSet, Error, Graph};

use super::{new_report, run_config};
use crate::cli::{Command, CountArgs, GraphSource, ResistanceArgs, SampleArgs};
use crate::error::{LabError, LabResult};
use crate::io::read_graph;
use crate::report::{log_num, num, opt_num, Report, ShardInfo};

/// Largest graph whose trees are also enumerated as a cross-check.
const CROSS_CHECK_LIMIT: usize = 8;

fn parse<T: std::str::FromStr>(flag: &str, s: &str) -> LabResult<T> {
    s.parse()
        .map_err(|_| LabError::usage(format!("--{flag}: cannot parse '{s}'")))
}

/// The graph named by the source flags; random graphs are drawn from `seed`.
pub fn resolve(source: &GraphSource, seed: u64) -> LabResult<Graph> {
    if let Some(n) = source.complete {
        return Ok(make_complete(n)?);
    }
    if let Some(v) = &source.gnp {
        let (n, p) = (parse::<usize>("gnp", &v[0])?, parse::<f64>("gnp", &v[1])?);
        return Ok(gen_gnp(n, p, seed)?);
    }
    if let Some(v) = &source.gnm {
        let (n, m) = (parse::<usize>("gnm", &v[0])?, parse::<usize>("gnm", &v[1])?);
        return Ok(gen_gnm(n, m, seed)?);
    }
    match &source.file {
        Some(path) => read_graph(path),
        None => Err(LabError::usage("no graph source given")),
    }
}

fn describe(report: &mut Report, g: &Graph) {
    report.set("n", json!(g.n()));
    report.set("edges", json!(g.edge_count()));
    report.set("connected", json!(g.is_connected()));
}

pub fn count(a: &CountArgs) -> LabResult<Report> {
    let mut report = new_report(run_config(&Command::Count(a.clone())));
    let g = resolve(&a.source, a.common.seed)?;
    describe(&mut report, &g);
    let log_count = matrix_tree_log_count(&g);
    // the zero sentinel gets its own field so it cannot be mistaken for ln 1
    report.set("zero", json!(log_count.is_zero()));
    report.set("log_count", log_num(log_count));
    report.set("count", num(log_count.value()));
    let enumerated = (g.n() <= CROSS_CHECK_LIMIT).then(|| count_spanning_trees(&g)).transpose()?;
    report.set("enumerated_count", json!(enumerated));
    let cayley = a.source.complete.map(cayley_log_count).transpose()?;
    report.set("cayley_log_count", cayley.map_or(Value::Null, log_num));
    let grimmett = (g.n() >= 2).then(|| grimmett_log_bound(g.n(), g.edge_count())).transpose()?;
    report.set("grimmett_log_bound", grimmett.map_or(Value::Null, log_num));
    if let Some(enumerated) = enumerated {
        let agrees = (log_count.value().round() as u64) == enumerated;
        report.set("enumeration_agrees", json!(agrees));
    }
    if a.assert_grimmett {
        let ok = match (log_count.ln_opt(), grimmett) {
            (None, _) => true,
            (Some(lx), Some(b)) => lx <= b.ln() + 1e-9,
            (Some(_), None) => g.n() < 2,
        };
        report.assert("grimmett", ok, format!("log count {:?} vs bound {:?}", log_count.ln_opt(), grimmett.map(|b| b.ln())));
    }
    report.rows.push(report.summary.clone());
    Ok(report)
}

pub fn resistance(a: &ResistanceArgs) -> LabResult<Report> {
    let mut report = new_report(run_config(&Command::Resistance(a.clone())));
    let g = resolve(&a.source, a.common.seed)?;
    let (x, y) = (a.edge[0], a.edge[1]);
    if x >= g.n() || y >= g.n() || x == y {
        return Err(LabError::usage(format!("--edge {x} {y}: need two distinct vertices below {}", g.n())));
    }
    describe(&mut report, &g);
    let e = Edge::new(x, y)?;
    let is_edge = g.contains_edge(e);
    let r = effective_resistance(&g, x, y)?.ohms();
    let (probability, bound) = if is_edge {
        let p = match edge_inclusion_probability(&g, e) {
            Ok(p) => Some(p),
            // an edge of a disconnected graph lies in no spanning tree
            Err(Error::Disconnected) => None,
            Err(err) => return Err(err.into()),
        };
        (p, Some(two_path_inclusion_bound(&g, e)?))
    } else {
        (None, None)
    };
    report.set("a", json!(e.lo()));
    report.set("b", json!(e.hi()));
    report.set("is_edge", json!(is_edge));
    report.set("common_neighbors", json!(g.common_neighbors(x, y)));
    report.set("effective_resistance", num(r));
    report.set("inclusion_probability", opt_num(probability));
    report.set("two_path_bound", opt_num(bound));
    if a.assert_two_path {
        let ok = matches!((probability, bound), (Some(p), Some(b)) if p <= b + 1e-12);
        report.assert("two_path", ok, format!("probability {probability:?} vs bound {bound:?}"));
    }
    report.rows.push(report.summary.clone());
    Ok(report)
}

pub fn sample(a: &SampleArgs) -> LabResult<Report> {
    let mut report = new_report(run_config(&Command::Sample(a.clone())));
    let g = resolve(&a.source, a.common.seed)?;
    describe(&mut report, &g);
    let trees = sample_k_trees(&g, a.k, a.common.seed)?;
    report.shards = vec![ShardInfo {
        shard: 0,
        trial_start: 0,
        trial_end: a.k as u64,
        first_trial_seed: Some(tree_seed(a.common.seed, 0)),
    }];
    let sets: Vec<EdgeSet> = trees.iter().map(|t| t.edges().clone()).collect();
    let union = union_size(&sets);
    report.set("k", json!(a.k));
    report.set("union_size", json!(union));
    report.set("overlap", json!(a.k * (g.n() - 1) - union));
    let degrees: Vec<usize> = trees.iter().map(tree_max_degree).collect();
    report.set("max_degrees", json!(degrees));
    for (i, t) in trees.iter().enumerate() {
        for e in t.edges().iter() {
            let mut row = Map::new();
            row.insert("tree".into(), json!(i));
            row.insert("a".into(), json!(e.lo()));
            row.insert("b".into(), json!(e.hi()));
            report.rows.push(row);
        }
    }
    Ok(report)
}
