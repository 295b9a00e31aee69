//! One function per subcommand, each returning a complete report.

mod graphs;
mod lil;
mod moments;
mod selftest;
mod tv_poisson;

use serde_json::{json, Value};

use crate::cli::{Command, Common, GraphSource};
use crate::config::{float_extra, RunConfig};
use crate::error::LabError;
use crate::report::Report;

pub use graphs::{count, resistance, sample};
pub use lil::lil;
pub use moments::moments;
pub use selftest::selftest;
pub use tv_poisson::tv_poisson;

fn base(name: &str, common: &Common) -> RunConfig {
    RunConfig::new(name, common.seed, common.shards, common.format, common.output.clone())
        .with_extra("timing", json!(common.timing))
}

fn source_value(s: &GraphSource) -> Value {
    json!({
        "complete": s.complete,
        "gnp": s.gnp,
        "gnm": s.gnm,
        "file": s.file.as_ref().map(|p| p.display().to_string()),
    })
}

/// The configuration echo of a parsed command line.
pub fn run_config(command: &Command) -> RunConfig {
    match command {
        Command::TvPoisson(a) => {
            let mut c = base("tv-poisson", &a.common)
                .with_extra("slack_c", float_extra(Some(a.slack_c)))
                .with_extra("assert_tv_below", float_extra(a.assert_tv_below))
                .with_extra("assert_claim1", json!(a.assert_claim1))
                .with_extra("assert_claim2", json!(a.assert_claim2));
            c.n = Some(a.n);
            c.k = Some(a.k);
            c.trials = Some(a.trials);
            c.alpha = Some(a.alpha);
            c
        }
        Command::Count(a) => base("count", &a.common)
            .with_extra("source", source_value(&a.source))
            .with_extra("assert_grimmett", json!(a.assert_grimmett)),
        Command::Resistance(a) => base("resistance", &a.common)
            .with_extra("source", source_value(&a.source))
            .with_extra("edge", json!(a.edge))
            .with_extra("assert_two_path", json!(a.assert_two_path)),
        Command::Moments(a) => {
            let mut c = base("moments", &a.common)
                .with_extra("tilted_trials", json!(a.tilted_trials))
                .with_extra("big_k_factor", float_extra(Some(a.big_k_factor)))
                .with_extra("verify", json!(a.verify))
                .with_extra("assert_agree", float_extra(a.assert_agree))
                .with_extra("assert_markov", json!(a.assert_markov));
            c.n = Some(a.n);
            c.m = a.m;
            c.p = a.p;
            c.k = Some(a.k as usize);
            c.trials = Some(a.trials);
            c
        }
        Command::Lil(a) => {
            let mut c = base("lil", &a.common)
                .with_extra("sources", json!(a.sources))
                .with_extra("n_tail", json!(a.n_tail))
                .with_extra("clt_n", json!(a.clt_n))
                .with_extra("clt_trials", json!(a.clt_trials))
                .with_extra("assert_band", float_extra(a.assert_band))
                .with_extra("assert_correlation", float_extra(a.assert_correlation))
                .with_extra("assert_coupling", json!(a.assert_coupling));
            c.p = Some(a.p);
            c.grid_base = Some(a.grid_base);
            c.n_min = Some(a.n_min);
            c.n_max = Some(a.n_max);
            c
        }
        Command::Sample(a) => {
            let mut c = base("sample", &a.common).with_extra("source", source_value(&a.source));
            c.k = Some(a.k);
            c
        }
        Command::Selftest(a) => base("selftest", &a.common),
    }
}

/// A report that carries only the configuration and the error.
pub fn error_report(command: &Command, error: &LabError) -> Report {
    let config = run_config(command);
    let mut report = Report::new(&config.subcommand, config.to_value());
    report.error = Some(error.to_string());
    report
}

fn new_report(command_config: RunConfig) -> Report {
    Report::new(&command_config.subcommand.clone(), command_config.to_value())
}
