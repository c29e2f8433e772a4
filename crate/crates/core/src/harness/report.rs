use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{ScenarioConfig, SCHEMA_VERSION};
use super::HarnessError;
use crate::observer::LedgerSnapshot;
use crate::seed::RNG_VERSION;

/// Outcome of one invariant check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Versions {
    pub crate_version: &'static str,
    pub schema_version: u32,
    pub rng: &'static str,
}

impl Default for Versions {
    fn default() -> Self {
        Versions {
            crate_version: env!("CARGO_PKG_VERSION"),
            schema_version: SCHEMA_VERSION,
            rng: RNG_VERSION,
        }
    }
}

/// The final record of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trailer {
    pub record: &'static str,
    pub scenario_id: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub verdicts: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ledgers: Vec<LedgerSnapshot>,
    pub config: Value,
    pub versions: Versions,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub steps: Vec<Value>,
    pub trailer: Trailer,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.trailer.passed
    }
}

/// Accumulates step records, checks and verdicts while a scenario runs.
#[derive(Debug, Default)]
pub(crate) struct ReportBuilder {
    steps: Vec<Value>,
    checks: Vec<Check>,
    verdicts: BTreeMap<String, Value>,
    ledgers: Vec<LedgerSnapshot>,
}

impl ReportBuilder {
    pub fn step(&mut self, kind: &str, body: impl Serialize) {
        let mut record = json!({ "record": "step", "index": self.steps.len(), "kind": kind });
        let body = serde_json::to_value(body).expect("step values serialize");
        if let (Value::Object(dst), Value::Object(src)) = (&mut record, body) {
            dst.extend(src);
        }
        self.steps.push(record);
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }

    pub fn verdict(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.verdicts.insert(name.to_string(), v);
    }

    pub fn ledger(&mut self, snapshot: LedgerSnapshot) {
        self.ledgers.push(snapshot);
    }

    pub fn finish(self, config: &ScenarioConfig) -> Report {
        let passed = !self.checks.is_empty() && self.checks.iter().all(|c| c.passed);
        Report {
            steps: self.steps,
            trailer: Trailer {
                record: "trailer",
                scenario_id: config.id().to_string(),
                seed: config.seed,
                passed,
                checks: self.checks,
                verdicts: self.verdicts,
                ledgers: self.ledgers,
                config: serde_json::to_value(config).expect("config serializes"),
                versions: Versions::default(),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    JsonLines,
    SummaryText,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::JsonLines => "jsonl",
            Format::SummaryText => "txt",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json-lines" | "jsonl" => Ok(Format::JsonLines),
            "summary-text" | "text" => Ok(Format::SummaryText),
            other => Err(format!(
                "unknown format {other:?} (expected json-lines or summary-text)"
            )),
        }
    }
}

/// Renders a report. The output depends only on the report.
pub fn render_report(report: &Report, format: Format) -> Vec<u8> {
    let mut out = String::new();
    match format {
        Format::JsonLines => {
            for step in &report.steps {
                out.push_str(&serde_json::to_string(step).expect("step serializes"));
                out.push('\n');
            }
            out.push_str(&serde_json::to_string(&report.trailer).expect("trailer serializes"));
            out.push('\n');
        }
        Format::SummaryText => {
            let t = &report.trailer;
            let _ = writeln!(out, "scenario {}  seed {}", t.scenario_id, t.seed);
            let _ = writeln!(out, "steps    {}", report.steps.len());
            for c in &t.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "  [{mark}] {}: {}", c.name, c.detail);
            }
            for (name, v) in &t.verdicts {
                let _ = writeln!(out, "  {name} = {v}");
            }
            for l in &t.ledgers {
                let _ = writeln!(
                    out,
                    "  ledger: {} bits at {} K, energy {:e} J, action {:e} J s",
                    l.bits_recorded, l.temperature, l.energy_total, l.action_total
                );
            }
            let _ = writeln!(out, "result   {}", if t.passed { "PASS" } else { "FAIL" });
        }
    }
    out.into_bytes()
}

/// Renders `report` and writes it to `path`, creating parent directories.
pub fn emit_report(report: &Report, format: Format, path: &Path) -> Result<(), HarnessError> {
    let io = |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(path, render_report(report, format)).map_err(io)
}
