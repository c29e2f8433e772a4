//! Finite observers: an n-bit outcome register, a clock counted in outcomes,
//! and a Landauer ledger charging `0.7 k_B T` per recorded bit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boxkit::{Bits, BoxError, BoxInstance, Outcome, Trace};

/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Free energy per irreversibly recorded bit, in units of `k_B T`.
pub const LANDAUER_FACTOR: f64 = 0.7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObserverError {
    #[error("observer register is {observer} bits but the box emits {emitted}")]
    WidthMismatch { observer: usize, emitted: usize },
    #[error("{name} must be non-negative and finite, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("delta_t must be positive and finite, got {0}")]
    NonPositiveInterval(f64),
    #[error("energy budget exhausted: recording would reach {needed:e} J of {budget:e} J")]
    EnergyExhausted { needed: f64, budget: f64 },
    #[error("observer register width must be positive")]
    ZeroWidth,
    #[error(transparent)]
    Trace(#[from] BoxError),
}

fn non_negative(name: &'static str, value: f64) -> Result<f64, ObserverError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(ObserverError::Negative { name, value })
    }
}

/// Energy (J) and action (J s) to record `n_bits` at `temperature` with tick interval `delta_t`.
pub fn landauer_action(
    n_bits: u64,
    temperature: f64,
    delta_t: f64,
) -> Result<(f64, f64), ObserverError> {
    let temperature = non_negative("temperature", temperature)?;
    let delta_t = non_negative("delta_t", delta_t)?;
    let energy = n_bits as f64 * LANDAUER_FACTOR * BOLTZMANN * temperature;
    Ok((energy, energy * delta_t))
}

/// Temperature implied by a per-bit action quantum `theta` acquired every `delta_t`.
pub fn observer_temperature(theta: f64, delta_t: f64) -> Result<f64, ObserverError> {
    let theta = non_negative("theta", theta)?;
    if !(delta_t.is_finite() && delta_t > 0.0) {
        return Err(ObserverError::NonPositiveInterval(delta_t));
    }
    Ok(theta / (LANDAUER_FACTOR * BOLTZMANN) / delta_t)
}

/// Outcome-counting clock; `t` is always derived as `k * delta_t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObserverClock {
    delta_t: f64,
    k: u64,
}

impl ObserverClock {
    pub fn new(delta_t: f64) -> Result<Self, ObserverError> {
        if !(delta_t.is_finite() && delta_t > 0.0) {
            return Err(ObserverError::NonPositiveInterval(delta_t));
        }
        Ok(ObserverClock { delta_t, k: 0 })
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn t(&self) -> f64 {
        self.k as f64 * self.delta_t
    }

    fn tick(&mut self) {
        self.k += 1;
    }
}

/// Per-bit Landauer bookkeeping. Totals are derived from `bits_recorded`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LandauerLedger {
    temperature: f64,
    delta_t: f64,
    /// Multiplier on the optimal cost; 1.0 is an optimal observer.
    efficiency: f64,
    bits_recorded: u64,
}

impl LandauerLedger {
    pub fn new(temperature: f64, delta_t: f64) -> Result<Self, ObserverError> {
        let temperature = non_negative("temperature", temperature)?;
        ObserverClock::new(delta_t)?;
        Ok(LandauerLedger {
            temperature,
            delta_t,
            efficiency: 1.0,
            bits_recorded: 0,
        })
    }

    /// Sub-optimal observers pay `efficiency` times the Landauer cost.
    pub fn with_efficiency(mut self, efficiency: f64) -> Result<Self, ObserverError> {
        self.efficiency = non_negative("efficiency", efficiency)?;
        Ok(self)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn bits_recorded(&self) -> u64 {
        self.bits_recorded
    }

    fn energy_per_bit(&self) -> f64 {
        self.efficiency * LANDAUER_FACTOR * BOLTZMANN * self.temperature
    }

    /// Action quantum per bit: `0.7 k_B T delta_t`.
    pub fn theta(&self) -> f64 {
        self.energy_per_bit() * self.delta_t
    }

    pub fn energy_total(&self) -> f64 {
        self.energy_for(self.bits_recorded)
    }

    pub fn action_total(&self) -> f64 {
        self.bits_recorded as f64 * self.theta()
    }

    fn energy_for(&self, bits: u64) -> f64 {
        bits as f64 * self.energy_per_bit()
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            boltzmann_k: BOLTZMANN,
            temperature: self.temperature,
            delta_t: self.delta_t,
            efficiency: self.efficiency,
            bits_recorded: self.bits_recorded,
            energy_total: self.energy_total(),
            action_total: self.action_total(),
            theta: self.theta(),
        }
    }
}

/// Serializable view of a ledger.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerSnapshot {
    pub boltzmann_k: f64,
    pub temperature: f64,
    pub delta_t: f64,
    pub efficiency: f64,
    pub bits_recorded: u64,
    pub energy_total: f64,
    pub action_total: f64,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverConfig {
    pub n: usize,
    pub delta_t_seconds: f64,
    pub temperature_kelvin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_energy_joules: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ObserverConfig {
    pub fn new(n: usize) -> Self {
        ObserverConfig {
            n,
            delta_t_seconds: 1.0,
            temperature_kelvin: 300.0,
            max_energy_joules: None,
            seed: None,
        }
    }
}

/// An observer: register width, clock, ledger and append-only log.
#[derive(Clone, Debug)]
pub struct ObserverState {
    n: usize,
    clock: ObserverClock,
    ledger: LandauerLedger,
    log: Trace,
    max_energy: Option<f64>,
}

impl ObserverState {
    pub fn new(config: &ObserverConfig) -> Result<Self, ObserverError> {
        if config.n == 0 {
            return Err(ObserverError::ZeroWidth);
        }
        let max_energy = config
            .max_energy_joules
            .map(|e| non_negative("max_energy_joules", e))
            .transpose()?;
        Ok(ObserverState {
            n: config.n,
            clock: ObserverClock::new(config.delta_t_seconds)?,
            ledger: LandauerLedger::new(config.temperature_kelvin, config.delta_t_seconds)?,
            log: Trace::new(config.n),
            max_energy,
        })
    }

    pub fn width(&self) -> usize {
        self.n
    }

    pub fn clock(&self) -> &ObserverClock {
        &self.clock
    }

    pub fn ledger(&self) -> &LandauerLedger {
        &self.ledger
    }

    pub fn log(&self) -> &Trace {
        &self.log
    }

    pub fn into_log(self) -> Trace {
        self.log
    }

    fn check_budget(&self) -> Result<(), ObserverError> {
        if let Some(budget) = self.max_energy {
            let needed = self
                .ledger
                .energy_for(self.ledger.bits_recorded + self.n as u64);
            if needed > budget {
                return Err(ObserverError::EnergyExhausted { needed, budget });
            }
        }
        Ok(())
    }

    /// Steps `bx` once and records the outcome.
    ///
    /// On error neither the observer nor the box has changed.
    pub fn observe(&mut self, bx: &mut BoxInstance) -> Result<Outcome, ObserverError> {
        if bx.width() != self.n {
            return Err(ObserverError::WidthMismatch {
                observer: self.n,
                emitted: bx.width(),
            });
        }
        self.check_budget()?;
        let emitted = bx.advance();
        Ok(self.commit(emitted.bits))
    }

    /// Value-style form of [`ObserverState::observe`].
    pub fn observed(
        &self,
        bx: &BoxInstance,
    ) -> Result<(ObserverState, BoxInstance, Outcome), ObserverError> {
        let mut obs = self.clone();
        let mut b = bx.clone();
        let o = obs.observe(&mut b)?;
        Ok((obs, b, o))
    }

    /// Records bits delivered through some other channel (e.g. this observer's
    /// share of a wider box's outcome).
    pub fn record(&mut self, bits: Bits) -> Result<Outcome, ObserverError> {
        if bits.width() != self.n {
            return Err(ObserverError::WidthMismatch {
                observer: self.n,
                emitted: bits.width(),
            });
        }
        self.check_budget()?;
        Ok(self.commit(bits))
    }

    fn commit(&mut self, bits: Bits) -> Outcome {
        self.clock.tick();
        self.ledger.bits_recorded += self.n as u64;
        let outcome = Outcome {
            k: self.clock.k(),
            bits,
        };
        self.log
            .push(outcome.clone())
            .expect("log index tracks the clock");
        outcome
    }
}
