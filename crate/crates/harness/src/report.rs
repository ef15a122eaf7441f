//! Experiment reports and their on-disk layout.

use std::fs;
use std::path::{Path, PathBuf};

use percolab_core::rng::{SITE_GENERATOR, STREAM_GENERATOR};
use serde::{Deserialize, Serialize};

use crate::HarnessError;
use crate::config::{ExperimentConfig, ExperimentKind};

/// One named pass/fail condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Human-readable acceptance condition, e.g. `<= 0.01`.
    pub condition: String,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, condition: format!("<= {limit}"), passed: value <= limit }
    }

    pub fn within(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        Self { name: name.into(), value, condition: format!("in [{lo}, {hi}]"), passed: (lo..=hi).contains(&value) }
    }

    pub fn holds(name: &str, ok: bool) -> Self {
        Self { name: name.into(), value: f64::from(u8::from(ok)), condition: "true".into(), passed: ok }
    }
}

/// A raw table persisted as CSV next to the report.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generators {
    pub site: String,
    pub stream: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub version: String,
    pub generators: Generators,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub runtime_seconds: f64,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Experiment-specific statistics and predictions.
    pub statistics: serde_json::Value,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl ExperimentReport {
    pub fn new(cfg: &ExperimentConfig, statistics: serde_json::Value, checks: Vec<Check>, tables: Vec<Table>, runtime: f64) -> Self {
        Self {
            kind: cfg.kind,
            version: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
            generators: Generators { site: SITE_GENERATOR.into(), stream: STREAM_GENERATOR.into() },
            config_hash: cfg.hash(),
            config: cfg.clone(),
            runtime_seconds: runtime,
            passed: checks.iter().all(|c| c.passed),
            checks,
            statistics,
            tables,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn stat(&self, key: &str) -> Option<f64> {
        self.statistics.get(key).and_then(|v| v.as_f64())
    }

    /// Writes `report.json`, `config.json` and one CSV per table into
    /// `<root>/<kind>-<first 16 hex digits of the config hash>`.
    pub fn persist(&self, root: &Path) -> Result<PathBuf, HarnessError> {
        let kind = serde_json::to_value(self.kind)?;
        let dir = root.join(format!("{}-{}", kind.as_str().unwrap_or("run"), &self.config_hash[..16]));
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("report.json"), serde_json::to_string_pretty(self)?)?;
        fs::write(dir.join("config.json"), serde_json::to_string_pretty(&self.config)?)?;
        for t in &self.tables {
            let mut w = csv::Writer::from_path(dir.join(format!("{}.csv", t.name)))?;
            w.write_record(&t.header)?;
            for row in &t.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Ok(dir)
    }
}
