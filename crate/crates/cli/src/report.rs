use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// What a driver hands back before timing and stamping.
///
/// `checks` hold invariants that must be true on a consistent run; any
/// `false` entry turns the exit code to 1. `verdicts` carry findings that are
/// reported but are not violations by themselves.
#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: BTreeMap<String, bool>,
    pub verdicts: BTreeMap<String, String>,
    pub details: BTreeMap<String, Value>,
}

impl Outcome {
    pub fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.into(), ok);
    }

    pub fn verdict(&mut self, name: &str, value: impl ToString) {
        self.verdicts.insert(name.into(), value.to_string());
    }

    pub fn detail(&mut self, name: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report details serialize");
        self.details.insert(name.into(), value);
    }

    pub fn consistent(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub version: String,
    pub config: Value,
    pub status: &'static str,
    pub checks: BTreeMap<String, bool>,
    pub verdicts: BTreeMap<String, String>,
    pub details: BTreeMap<String, Value>,
    pub wall_time_seconds: f64,
}

impl RunReport {
    pub fn new(command: &str, config: Value, outcome: Outcome, wall_time_seconds: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            status: if outcome.consistent() { "ok" } else { "violation" },
            checks: outcome.checks,
            verdicts: outcome.verdicts,
            details: outcome.details,
            wall_time_seconds,
        }
    }

    /// Pretty JSON with every object's keys in sorted order.
    pub fn to_json(&self) -> String {
        // serde_json's `Value` map is a BTreeMap, so the round trip sorts keys
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("report serializes")
    }
}
