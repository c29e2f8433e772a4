use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::boxkit::{BoxSpec, TrapMode, WhiteDofSpec};
use crate::inference::{EnumerationLimits, DEFAULT_SIGNIFICANCE};
use crate::observer::ObserverConfig;
use crate::quantum::{PropagatorConfig, QuantumError};

pub const SCHEMA_VERSION: u32 = 1;

/// A complete scenario run description.
///
/// ```json
/// {"schema_version": 1, "seed": 7,
///  "scenario": {"id": "S6_landauer_ledger", "observations": 1000,
///               "box": {"kind": "stochastic", "n": 8, "p": [0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5]},
///               "observer": {"n": 8, "delta_t_seconds": 1.0, "temperature_kelvin": 300.0}}}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub scenario: Scenario,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", deny_unknown_fields)]
pub enum Scenario {
    #[serde(rename = "S1_underdetermination")]
    Underdetermination(UnderdeterminationParams),
    #[serde(rename = "S2_trap_theorem1")]
    TrapRefutation(TrapParams),
    #[serde(rename = "S3_concat_theorem2")]
    Concat(ConcatParams),
    #[serde(rename = "S4_two_observers")]
    TwoObservers(TwoObserverParams),
    #[serde(rename = "S5_quantum_pipeline")]
    QuantumPipeline(QuantumParams),
    #[serde(rename = "S6_landauer_ledger")]
    LandauerLedger(LedgerParams),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnderdeterminationParams {
    #[serde(rename = "box")]
    pub box_spec: BoxSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observer: Option<ObserverConfig>,
    pub length: usize,
    pub s_max: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapParams {
    #[serde(rename = "N")]
    pub trigger: u64,
    pub post_mode: TrapMode,
    #[serde(default = "default_significance")]
    pub significance: f64,
    /// Independent refutations, with root seeds `seed, seed + 1, ...`.
    #[serde(default = "one")]
    pub runs: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcatParams {
    #[serde(rename = "box")]
    pub box_spec: BoxSpec,
    pub white: WhiteDofSpec,
    pub length: usize,
    pub s_max: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoObserverParams {
    /// Pattern ticks before the correlated phase.
    #[serde(rename = "N", default)]
    pub trigger: u64,
    pub observations: usize,
    #[serde(default = "default_significance")]
    pub significance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observer: Option<ObserverConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumParams {
    #[serde(rename = "box")]
    pub box_spec: BoxSpec,
    pub length: usize,
    /// One entry applied to every bit, or one per bit.
    #[serde(default = "default_propagators")]
    pub propagators: Vec<PropagatorConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerParams {
    #[serde(rename = "box")]
    pub box_spec: BoxSpec,
    pub observer: ObserverConfig,
    pub observations: usize,
}

fn default_significance() -> f64 {
    DEFAULT_SIGNIFICANCE
}

fn one() -> u64 {
    1
}

fn default_propagators() -> Vec<PropagatorConfig> {
    vec![PropagatorConfig::default()]
}

/// Identifiers and one-line descriptions of every scenario.
pub const SCENARIOS: [(&str, &str); 6] = [
    (
        "S1_underdetermination",
        "every hypothesis fitting a finite trace has a non-equivalent twin",
    ),
    (
        "S2_trap_theorem1",
        "a trap box breaks any separability verdict at step N+1",
    ),
    (
        "S3_concat_theorem2",
        "a white-box degree of freedom leaves the hypothesis set unchanged",
    ),
    (
        "S4_two_observers",
        "two observers of one correlated box each see an independent coin",
    ),
    (
        "S5_quantum_pipeline",
        "trace to POVM, propagator and state vectors, with diagnostics",
    ),
    ("S6_landauer_ledger", "recording cost in energy and action"),
];

impl Scenario {
    pub fn id(&self) -> &'static str {
        let idx = match self {
            Scenario::Underdetermination(_) => 0,
            Scenario::TrapRefutation(_) => 1,
            Scenario::Concat(_) => 2,
            Scenario::TwoObservers(_) => 3,
            Scenario::QuantumPipeline(_) => 4,
            Scenario::LandauerLedger(_) => 5,
        };
        SCENARIOS[idx].0
    }
}

fn schema(msg: impl Into<String>) -> HarnessError {
    HarnessError::Schema(msg.into())
}

fn positive(name: &str, v: usize) -> Result<(), HarnessError> {
    if v == 0 {
        return Err(schema(format!("{name} must be at least 1")));
    }
    Ok(())
}

fn significance(v: f64) -> Result<(), HarnessError> {
    if !(v > 0.0 && v < 1.0) {
        return Err(schema(format!("significance must lie in (0, 1), got {v}")));
    }
    Ok(())
}

fn enumerable_width(n: usize) -> Result<(), HarnessError> {
    let cap = EnumerationLimits::default().max_width;
    if n > cap {
        return Err(schema(format!(
            "box width {n} exceeds the enumeration cap of {cap}"
        )));
    }
    Ok(())
}

fn observer_width(obs: &Option<ObserverConfig>, n: usize) -> Result<(), HarnessError> {
    match obs {
        Some(o) if o.n != n => Err(schema(format!(
            "observer width {} does not match box width {n}",
            o.n
        ))),
        _ => Ok(()),
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn id(&self) -> &'static str {
        self.scenario.id()
    }

    /// Checks everything that can be checked without running the scenario.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(schema(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match &self.scenario {
            Scenario::Underdetermination(p) => {
                p.box_spec.build(self.seed)?;
                positive("length", p.length)?;
                positive("s_max", p.s_max)?;
                enumerable_width(p.box_spec.width())?;
                observer_width(&p.observer, p.box_spec.width())
            }
            Scenario::TrapRefutation(p) => {
                if p.trigger == 0 {
                    return Err(HarnessError::Precondition {
                        code: "S2_ZERO_TRIGGER",
                        message: "N must be at least 1: with no pattern ticks there is no verdict to refute".into(),
                    });
                }
                significance(p.significance)?;
                positive("runs", p.runs as usize)
            }
            Scenario::Concat(p) => {
                p.box_spec.build(self.seed)?;
                p.white.build()?;
                positive("length", p.length)?;
                positive("s_max", p.s_max)?;
                enumerable_width(p.box_spec.width())
            }
            Scenario::TwoObservers(p) => {
                if p.observations as u64 <= p.trigger {
                    return Err(schema("observations must exceed N"));
                }
                significance(p.significance)?;
                observer_width(&p.observer, 1)
            }
            Scenario::QuantumPipeline(p) => {
                p.box_spec.build(self.seed)?;
                positive("length", p.length)?;
                let n = p.box_spec.width();
                if p.propagators.len() != 1 && p.propagators.len() != n {
                    return Err(schema(format!(
                        "propagators must have 1 or {n} entries, got {}",
                        p.propagators.len()
                    )));
                }
                for cfg in &p.propagators {
                    cfg.to_spec()?;
                    if cfg.delta_t_seconds != p.propagators[0].delta_t_seconds {
                        return Err(QuantumError::ClockMismatch.into());
                    }
                }
                Ok(())
            }
            Scenario::LandauerLedger(p) => {
                p.box_spec.build(self.seed)?;
                observer_width(&Some(p.observer.clone()), p.box_spec.width())?;
                crate::observer::ObserverState::new(&p.observer)?;
                Ok(())
            }
        }
    }
}
