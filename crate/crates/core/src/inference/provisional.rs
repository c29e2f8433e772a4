use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::InferenceError;
use crate::boxkit::{Bits, Trace};

/// Transition structure read off a finite trace.
///
/// States are the distinct length-`window` outcome histories, numbered by
/// first appearance. Each state's output is the last outcome of its history.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MachineTable {
    pub window: usize,
    pub states: Vec<Vec<Bits>>,
    pub outputs: Vec<Bits>,
    /// Observed successors of each state. Unobserved entries are absent.
    pub transitions: BTreeMap<usize, BTreeSet<usize>>,
    pub provisional: bool,
    /// Set when some history was followed by two different outcomes.
    pub conflict: bool,
}

impl MachineTable {
    pub fn size(&self) -> usize {
        self.states.len()
    }

    pub fn successors(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        self.transitions.get(&state).into_iter().flatten().copied()
    }

    /// Every state has exactly one recorded successor.
    pub fn is_total(&self) -> bool {
        (0..self.size()).all(|s| self.transitions.get(&s).is_some_and(|t| t.len() == 1))
    }

    /// States with two or more recorded successors.
    pub fn conflicting_states(&self) -> Vec<usize> {
        self.transitions
            .iter()
            .filter(|(_, t)| t.len() > 1)
            .map(|(&s, _)| s)
            .collect()
    }
}

pub fn build_provisional_table(
    trace: &Trace,
    window: usize,
) -> Result<MachineTable, InferenceError> {
    if window == 0 {
        return Err(InferenceError::ZeroWindow);
    }
    if trace.len() < window {
        return Err(InferenceError::TraceTooShort {
            len: trace.len(),
            window,
        });
    }
    let bits: Vec<&Bits> = trace.bits().collect();
    let mut index: BTreeMap<Vec<Bits>, usize> = BTreeMap::new();
    let mut states = Vec::new();
    let mut outputs = Vec::new();
    let mut ids = Vec::with_capacity(bits.len() + 1 - window);
    for hist in bits.windows(window) {
        let key: Vec<Bits> = hist.iter().map(|b| (*b).clone()).collect();
        let id = *index.entry(key.clone()).or_insert_with(|| {
            outputs.push(key[window - 1].clone());
            states.push(key);
            states.len() - 1
        });
        ids.push(id);
    }
    let mut transitions: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for pair in ids.windows(2) {
        transitions.entry(pair[0]).or_default().insert(pair[1]);
    }
    let conflict = transitions.values().any(|t| t.len() > 1);
    Ok(MachineTable {
        window,
        states,
        outputs,
        transitions,
        provisional: true,
        conflict,
    })
}
