//! The run configuration echoed into every report.

use std::path::PathBuf;

use serde_json::{json, Map, Value};

use crate::report::{num, opt_num};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Everything that determines a run. Fields a subcommand does not use stay
/// `None`; command-specific flags go in `extra`, in insertion order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub subcommand: String,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<f64>,
    pub m: Option<usize>,
    pub trials: Option<u64>,
    pub shards: usize,
    pub seed: u64,
    pub alpha: Option<f64>,
    pub grid_base: Option<u32>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub extra: Map<String, Value>,
}

impl RunConfig {
    pub fn new(subcommand: &str, seed: u64, shards: usize, format: Format, output: Option<PathBuf>) -> RunConfig {
        RunConfig {
            subcommand: subcommand.to_string(),
            seed,
            shards,
            format,
            output,
            ..RunConfig::default()
        }
    }

    pub fn with_extra(mut self, key: &str, value: Value) -> RunConfig {
        self.extra.insert(key.to_string(), value);
        self
    }

    pub fn to_value(&self) -> Value {
        json!({
            "subcommand": self.subcommand,
            "n": self.n,
            "k": self.k,
            "p": opt_num(self.p),
            "m": self.m,
            "trials": self.trials,
            "shards": self.shards,
            "seed": self.seed,
            "alpha": opt_num(self.alpha),
            "grid_base": self.grid_base,
            "n_min": self.n_min,
            "n_max": self.n_max,
            "format": self.format.name(),
            "output": self.output.as_ref().map(|p| p.display().to_string()),
            "extra": self.extra,
        })
    }
}

/// A float flag for `extra`.
pub fn float_extra(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}
