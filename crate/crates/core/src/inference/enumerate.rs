use std::collections::BTreeMap;

use serde::Serialize;

use super::machine::MachineHypothesis;
use super::InferenceError;
use crate::boxkit::{Bits, MooreTable, Trace};

/// Bounds on the exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationLimits {
    /// Larger state bounds are clamped to this and the result flagged partial.
    pub max_states: usize,
    /// Output widths above this are rejected.
    pub max_width: usize,
    /// Candidate machines examined before giving up with a partial result.
    pub max_candidates: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_states: 4,
            max_width: 2,
            max_candidates: 1 << 22,
        }
    }
}

/// Every machine with at most `s_max` states consistent with a trace, one per
/// equivalence class, sorted by canonical serialization.
#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    pub hypotheses: Vec<MachineHypothesis>,
    pub s_max: usize,
    /// Set when the search was clamped or ran out of budget; the set may be incomplete.
    pub partial: bool,
    pub candidates_examined: u64,
}

impl Enumeration {
    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    pub fn keys(&self) -> Vec<String> {
        self.hypotheses
            .iter()
            .map(MachineHypothesis::canonical_key)
            .collect()
    }
}

pub fn enumerate_consistent_machines(
    trace: &Trace,
    s_max: usize,
) -> Result<Enumeration, InferenceError> {
    enumerate_with_limits(trace, s_max, &EnumerationLimits::default())
}

/// Searches path-into-cycle shapes directly.
///
/// The reachable part of an autonomous machine is a tail of `mu` states
/// followed by a cycle of `lambda` states, and any machine is equivalent to
/// its reachable part, so shapes with `mu + lambda <= s_max` cover every
/// machine with at most `s_max` states. Trace positions pin the outputs of
/// the states they land on; the remaining states range over all outputs.
pub fn enumerate_with_limits(
    trace: &Trace,
    s_max: usize,
    limits: &EnumerationLimits,
) -> Result<Enumeration, InferenceError> {
    if s_max == 0 {
        return Err(InferenceError::ZeroStateBound);
    }
    let width = trace.width();
    if width > limits.max_width {
        return Err(InferenceError::WidthCap {
            width,
            cap: limits.max_width,
        });
    }
    let mut partial = s_max > limits.max_states;
    let bound = s_max.min(limits.max_states);
    let alphabet = 1u64 << width;
    let codes = trace.codes();
    let mut found: BTreeMap<String, MachineHypothesis> = BTreeMap::new();
    let mut examined = 0u64;

    'shapes: for total in 1..=bound {
        for mu in 0..total {
            let lambda = total - mu;
            let mut pinned: Vec<Option<u64>> = vec![None; total];
            let fits = codes.iter().enumerate().all(|(t, &c)| {
                let s = if t < mu { t } else { mu + (t - mu) % lambda };
                match pinned[s] {
                    Some(prev) => prev == c,
                    None => {
                        pinned[s] = Some(c);
                        true
                    }
                }
            });
            if !fits {
                continue;
            }
            let free: Vec<usize> = (0..total).filter(|&s| pinned[s].is_none()).collect();
            let next: Vec<usize> = (0..total)
                .map(|i| if i + 1 < total { i + 1 } else { mu })
                .collect();
            let combos = alphabet.pow(free.len() as u32);
            for assignment in 0..combos {
                if examined == limits.max_candidates {
                    partial = true;
                    break 'shapes;
                }
                examined += 1;
                let mut outs = pinned.clone();
                let mut rest = assignment;
                for &s in &free {
                    outs[s] = Some(rest % alphabet);
                    rest /= alphabet;
                }
                let outputs = outs
                    .into_iter()
                    .map(|c| Bits::from_code(c.expect("all states assigned"), width))
                    .collect();
                let table =
                    MooreTable::new(width, outputs, next.clone()).expect("rho shape is total");
                let hyp = MachineHypothesis::new(table, 0).expect("state 0 exists");
                let canon = hyp.canonical();
                found.entry(canon.canonical_key()).or_insert(canon);
            }
        }
    }

    Ok(Enumeration {
        hypotheses: found.into_values().collect(),
        s_max,
        partial,
        candidates_examined: examined,
    })
}
