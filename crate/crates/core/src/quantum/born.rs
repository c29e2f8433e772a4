use serde::Serialize;

use super::QuantumError;
use crate::boxkit::Trace;

/// Empirical outcome frequencies at one bit position, read as Born weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BornFit {
    pub bit_index: usize,
    pub samples: u64,
    pub ones: u64,
    pub alpha0_sq: f64,
    pub alpha1_sq: f64,
    /// Three binomial standard errors.
    pub confidence_halfwidth: f64,
}

pub fn born_fit(trace: &Trace, bit_index: usize) -> Result<BornFit, QuantumError> {
    if trace.is_empty() {
        return Err(QuantumError::EmptyTrace);
    }
    if bit_index >= trace.width() {
        return Err(QuantumError::BitIndex {
            index: bit_index,
            width: trace.width(),
        });
    }
    let samples = trace.len() as u64;
    let ones = trace
        .bits()
        .filter(|b| b.get(bit_index) == Some(true))
        .count() as u64;
    let f = ones as f64 / samples as f64;
    Ok(BornFit {
        bit_index,
        samples,
        ones,
        alpha0_sq: 1.0 - f,
        alpha1_sq: f,
        confidence_halfwidth: 3.0 * (f * (1.0 - f) / samples as f64).sqrt(),
    })
}
