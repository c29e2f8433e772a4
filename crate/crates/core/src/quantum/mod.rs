//! Quantum encoding of outcome traces.
//!
//! Hidden states are partitioned into POVM domains per bit position, each bit
//! position carries a two-dimensional space advanced by a phase-scheduled
//! propagator, and the full state lives in the direct sum of the n pairs.

mod born;
mod povm;
mod propagator;
mod state;
mod symmetry;

use thiserror::Error;

use crate::boxkit::HiddenStateId;
use crate::inference::InferenceError;

pub use born::{born_fit, BornFit};
pub use povm::{build_povm, povm_diagnostics, Povm, PovmDiagnostics};
pub use propagator::{
    phase_anticorrelation_check, unitarity_defect, Mat2, PhaseFn, PhaseKind, PhaseSchedule,
    Propagator, PropagatorConfig, PropagatorSpec, Variant, NORM_TOLERANCE, PHASE_TOLERANCE,
};
pub use state::{encode_trace, EncodedTick, StateVector};
pub use symmetry::{
    reversal_hypothesis_counts, time_reversal_check, time_reversal_check_with, TimeReversalReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("bit index {index} out of range for width {width}")]
    BitIndex { index: usize, width: usize },
    #[error("trace has {trace} outcomes but the state log has {log}")]
    LengthMismatch { trace: usize, log: usize },
    #[error("state {0} is not in the reference state set")]
    UnknownState(HiddenStateId),
    #[error(
        "state aliasing: {state} emitted both bit values at position {bit_index} (tick {tick})"
    )]
    StateAliasing {
        state: HiddenStateId,
        bit_index: usize,
        tick: u64,
    },
    #[error("alpha0^2 + alpha1^2 = {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("expected {expected} propagator specs, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },
    #[error("propagator specs disagree on the time step")]
    ClockMismatch,
    #[error("trace is empty")]
    EmptyTrace,
    #[error("propagator is not invertible")]
    Singular,
    #[error("time step must be positive and finite, got {0}")]
    NonPositiveInterval(f64),
    #[error(transparent)]
    Inference(#[from] InferenceError),
}
