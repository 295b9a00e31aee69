//! Machine-readable reports.
//!
//! Floats are written with exactly 12 significant digits in scientific
//! notation with a signed exponent, so identical arithmetic gives identical bytes. Non-finite values
//! become `null`. JSON is canonical; CSV carries only the `rows` table.

use std::str::FromStr;

use serde_json::{json, Map, Number, Value};
use ustlab_core::LogValue;

use crate::error::LabResult;

/// A float as a JSON number with 12 significant digits, or `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    // no negative zero in reports
    let x = if x == 0.0 { 0.0 } else { x };
    let text = format!("{x:.11e}");
    // always sign the exponent, so the text survives number parsing unchanged
    let text = match text.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => text,
    };
    Value::Number(Number::from_str(&text).expect("formatted float is a JSON number"))
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// `ln` of a log-domain value; `null` for the zero sentinel.
pub fn log_num(v: LogValue) -> Value {
    opt_num(v.ln_opt())
}

/// Where a shard's trials start and end, and the seed of its first trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShardInfo {
    pub shard: usize,
    pub trial_start: u64,
    pub trial_end: u64,
    pub first_trial_seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Assertion {
        Assertion {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub shards: Vec<ShardInfo>,
    /// Only filled in with `--timing`, which gives up byte-determinism.
    pub wall_clock_seconds: Option<f64>,
    pub summary: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
    pub assertions: Vec<Assertion>,
    pub error: Option<String>,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Report {
        Report {
            command: command.to_string(),
            config,
            shards: Vec::new(),
            wall_clock_seconds: None,
            summary: Map::new(),
            rows: Vec::new(),
            assertions: Vec::new(),
            error: None,
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.summary.insert(key.to_string(), value);
    }

    pub fn assert(&mut self, name: &str, passed: bool, detail: String) {
        self.assertions.push(Assertion::new(name, passed, detail));
    }

    /// No error and every requested assertion passed.
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.assertions.iter().all(|a| a.passed)
    }

    pub fn status(&self) -> &'static str {
        if self.error.is_some() {
            "error"
        } else if self.passed() {
            "ok"
        } else {
            "assertion-failed"
        }
    }

    pub fn to_value(&self) -> Value {
        let shards: Vec<Value> = self
            .shards
            .iter()
            .map(|s| {
                json!({
                    "shard": s.shard,
                    "trial_start": s.trial_start,
                    "trial_end": s.trial_end,
                    "first_trial_seed": s.first_trial_seed,
                })
            })
            .collect();
        let assertions: Vec<Value> = self
            .assertions
            .iter()
            .map(|a| json!({"name": a.name, "passed": a.passed, "detail": a.detail}))
            .collect();
        json!({
            "tool": crate::TOOL_NAME,
            "version": crate::VERSION,
            "command": self.command,
            "status": self.status(),
            "error": self.error,
            "config": self.config,
            "wall_clock_seconds": opt_num(self.wall_clock_seconds),
            "shards": shards,
            "summary": self.summary,
            "assertions": assertions,
            "rows": self.rows,
        })
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }

    /// The `rows` table as CSV, columns in the order of the first row.
    pub fn render_csv(&self) -> LabResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(first) = self.rows.first() {
            w.write_record(first.keys())?;
            for row in &self.rows {
                w.write_record(first.keys().map(|k| cell(row.get(k).unwrap_or(&Value::Null))))?;
            }
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 cells"))
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
