use serde::Serialize;

use super::propagator::{Propagator, PropagatorSpec};
use super::state::encode_trace;
use super::QuantumError;
use crate::boxkit::Trace;
use crate::inference::{enumerate_consistent_machines, unrolled_hypothesis};

/// Round-trip tolerance for `apply_inverse(apply(v))`.
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimeReversalReport {
    pub length: usize,
    pub reversed: String,
    /// Canonical key of a machine replaying the reversed trace.
    pub reversed_hypothesis: String,
    pub reversed_consistent: bool,
    /// Largest deviation over all ticks of `apply_inverse(apply(v, k), k)` from `v`.
    pub round_trip_error: f64,
    pub round_trip_ok: bool,
}

impl TimeReversalReport {
    pub fn passed(&self) -> bool {
        self.reversed_consistent && self.round_trip_ok
    }
}

/// [`time_reversal_check_with`] under the default `normalized_phase` spec on every bit.
pub fn time_reversal_check(trace: &Trace) -> Result<TimeReversalReport, QuantumError> {
    time_reversal_check_with(trace, &PropagatorSpec::default())
}

pub fn time_reversal_check_with(
    trace: &Trace,
    spec: &PropagatorSpec,
) -> Result<TimeReversalReport, QuantumError> {
    let reversed = trace.reversed();
    let hyp = unrolled_hypothesis(&reversed);
    let prop = Propagator::new(*spec)?;
    let specs = vec![*spec; trace.width()];
    let mut worst = 0.0f64;
    for tick in encode_trace(trace, &specs)? {
        for v in [&tick.observed, &tick.unobserved] {
            let back = prop.apply_inverse(&prop.apply(v, tick.k), tick.k)?;
            worst = worst.max(back.distance(v)).max((back.t - v.t).abs());
        }
    }
    Ok(TimeReversalReport {
        length: trace.len(),
        reversed: reversed.to_string(),
        reversed_hypothesis: hyp.canonical_key(),
        reversed_consistent: hyp.is_consistent_with(&reversed),
        round_trip_error: worst,
        round_trip_ok: worst <= ROUND_TRIP_TOLERANCE,
    })
}

/// Numbers of non-equivalent hypotheses for the trace and its reversal.
pub fn reversal_hypothesis_counts(
    trace: &Trace,
    s_max: usize,
) -> Result<(usize, usize), QuantumError> {
    let fwd = enumerate_consistent_machines(trace, s_max)?;
    let rev = enumerate_consistent_machines(&trace.reversed(), s_max)?;
    Ok((fwd.len(), rev.len()))
}
