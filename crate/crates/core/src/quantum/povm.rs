use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::QuantumError;
use crate::boxkit::{HiddenStateId, HiddenStateSet, Trace};

/// The pair of partial maps sending hidden states to bit value 0 or 1 at one position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Povm {
    /// Zero-based bit position.
    pub bit_index: usize,
    pub domain0: BTreeSet<HiddenStateId>,
    pub domain1: BTreeSet<HiddenStateId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PovmDiagnostics {
    pub orthogonal: bool,
    pub resolves_identity: bool,
    /// States of the reference set in neither domain.
    pub unassigned: Vec<HiddenStateId>,
}

impl Povm {
    /// Unchecked construction; see [`povm_diagnostics`].
    pub fn from_domains(
        bit_index: usize,
        domain0: impl IntoIterator<Item = HiddenStateId>,
        domain1: impl IntoIterator<Item = HiddenStateId>,
    ) -> Self {
        Povm {
            bit_index,
            domain0: domain0.into_iter().collect(),
            domain1: domain1.into_iter().collect(),
        }
    }

    /// Diagonal of the effect for bit value `bit` over `states`, in set order.
    pub fn effect(&self, bit: bool, states: &HiddenStateSet) -> Vec<f64> {
        let domain = if bit { &self.domain1 } else { &self.domain0 };
        states
            .iter()
            .map(|s| if domain.contains(&s) { 1.0 } else { 0.0 })
            .collect()
    }

    /// The bit value a state produces, if it is assigned.
    pub fn outcome_of(&self, state: HiddenStateId) -> Option<bool> {
        match (self.domain0.contains(&state), self.domain1.contains(&state)) {
            (true, false) => Some(false),
            (false, true) => Some(true),
            _ => None,
        }
    }
}

/// Partitions the logged hidden states by the bit they emitted at `bit_index`.
///
/// States in `states` that never appear in the log stay unassigned.
pub fn build_povm(
    trace: &Trace,
    bit_index: usize,
    states: &HiddenStateSet,
    state_log: &[HiddenStateId],
) -> Result<Povm, QuantumError> {
    if bit_index >= trace.width() {
        return Err(QuantumError::BitIndex {
            index: bit_index,
            width: trace.width(),
        });
    }
    if state_log.len() != trace.len() {
        return Err(QuantumError::LengthMismatch {
            trace: trace.len(),
            log: state_log.len(),
        });
    }
    let mut assigned: BTreeMap<HiddenStateId, bool> = BTreeMap::new();
    for (outcome, &state) in trace.outcomes().iter().zip(state_log) {
        if !states.contains(state) {
            return Err(QuantumError::UnknownState(state));
        }
        let bit = outcome
            .bits
            .get(bit_index)
            .expect("index checked against width");
        match assigned.insert(state, bit) {
            Some(prev) if prev != bit => {
                return Err(QuantumError::StateAliasing {
                    state,
                    bit_index,
                    tick: outcome.k,
                });
            }
            _ => {}
        }
    }
    let (ones, zeros): (Vec<_>, Vec<_>) = assigned.into_iter().partition(|&(_, b)| b);
    Ok(Povm::from_domains(
        bit_index,
        zeros.into_iter().map(|(s, _)| s),
        ones.into_iter().map(|(s, _)| s),
    ))
}

pub fn povm_diagnostics(povm: &Povm, states: &HiddenStateSet) -> PovmDiagnostics {
    let orthogonal = povm.domain0.is_disjoint(&povm.domain1);
    let union: BTreeSet<HiddenStateId> = povm.domain0.union(&povm.domain1).copied().collect();
    let unassigned: Vec<HiddenStateId> = states.iter().filter(|s| !union.contains(s)).collect();
    let within = union.iter().all(|&s| states.contains(s));
    PovmDiagnostics {
        orthogonal,
        resolves_identity: unassigned.is_empty() && within,
        unassigned,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxkit::{fsm_box, simulate_with_states, Bits, MooreTable};

    fn ids(r: std::ops::RangeInclusive<u32>) -> Vec<HiddenStateId> {
        r.map(HiddenStateId).collect()
    }

    #[test]
    fn eight_state_partition() {
        // b1..b8 visited in order; bit 0 is zero exactly on b1..b3.
        let states = HiddenStateSet::new(ids(1..=8)).unwrap();
        let log = ids(1..=8);
        let trace =
            Trace::from_bits(1, (1..=8).map(|i| Bits::from_code(u64::from(i > 3), 1))).unwrap();
        let p = build_povm(&trace, 0, &states, &log).unwrap();
        assert_eq!(p.domain0, ids(1..=3).into_iter().collect());
        assert_eq!(p.domain1, ids(4..=8).into_iter().collect());
        let d = povm_diagnostics(&p, &states);
        assert!(d.orthogonal && d.resolves_identity);
        let sum: Vec<f64> = p
            .effect(false, &states)
            .iter()
            .zip(p.effect(true, &states))
            .map(|(a, b)| a + b)
            .collect();
        assert_eq!(sum, vec![1.0; 8]);
    }

    #[test]
    fn constant_box_single_state() {
        let mut bx = fsm_box(MooreTable::constant("1".parse().unwrap()), 0).unwrap();
        let (trace, log) = simulate_with_states(&mut bx, 10);
        let states = log.visited().unwrap();
        let p = build_povm(&trace, 0, &states, &log.labels).unwrap();
        assert!(p.domain0.is_empty());
        assert_eq!(p.domain1.len(), 1);
        assert!(povm_diagnostics(&p, &states).resolves_identity);
    }

    #[test]
    fn alternator_partition() {
        let mut bx = fsm_box(MooreTable::alternator(), 0).unwrap();
        let (trace, log) = simulate_with_states(&mut bx, 6);
        let states = log.visited().unwrap();
        let p = build_povm(&trace, 0, &states, &log.labels).unwrap();
        assert_eq!(p.domain0, [HiddenStateId(0)].into());
        assert_eq!(p.domain1, [HiddenStateId(1)].into());
    }

    #[test]
    fn negative_diagnostics() {
        let states = HiddenStateSet::range(4).unwrap();
        let overlap = Povm::from_domains(0, ids(0..=2), ids(2..=3));
        let d = povm_diagnostics(&overlap, &states);
        assert!(!d.orthogonal);
        let missing = Povm::from_domains(0, ids(0..=1), ids(3..=3));
        let d = povm_diagnostics(&missing, &states);
        assert!(d.orthogonal);
        assert!(!d.resolves_identity);
        assert_eq!(d.unassigned, vec![HiddenStateId(2)]);
    }

    #[test]
    fn aliasing_and_input_errors() {
        let states = HiddenStateSet::range(1).unwrap();
        let trace = Trace::parse(1, "0,1").unwrap();
        let log = [HiddenStateId(0), HiddenStateId(0)];
        assert!(matches!(
            build_povm(&trace, 0, &states, &log),
            Err(QuantumError::StateAliasing { tick: 2, .. })
        ));
        assert!(matches!(
            build_povm(&trace, 1, &states, &log),
            Err(QuantumError::BitIndex { .. })
        ));
        assert!(matches!(
            build_povm(&trace, 0, &states, &log[..1]),
            Err(QuantumError::LengthMismatch { .. })
        ));
        assert!(matches!(
            build_povm(&trace, 0, &states, &[HiddenStateId(0), HiddenStateId(7)]),
            Err(QuantumError::UnknownState(_))
        ));
    }
}
