//! Candidate machines for a trace and their canonical forms.
//!
//! Boxes are autonomous, so the reachable part of any total Moore machine is
//! a path leading into a cycle. Two machines are bisimilar on their reachable
//! parts exactly when they emit the same infinite sequence, and the minimal
//! machine for that sequence is unique once states are numbered in visiting
//! order. That minimal machine is the canonical form.
//!
//! Canonical serialization: `<width>|<out>><next>;<out>><next>;...` with
//! state 0 initial, e.g. the alternator is `1|0>1;1>0`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::boxkit::{Bits, MooreTable, Trace};

/// A total machine table with an initial state.
#[derive(Clone, Debug)]
pub struct MachineHypothesis {
    table: MooreTable,
    initial: usize,
}

impl MachineHypothesis {
    pub fn new(table: MooreTable, initial: usize) -> Option<Self> {
        (initial < table.size()).then_some(MachineHypothesis { table, initial })
    }

    pub fn table(&self) -> &MooreTable {
        &self.table
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn size(&self) -> usize {
        self.table.size()
    }

    pub fn width(&self) -> usize {
        self.table.width()
    }

    pub fn replay(&self, len: usize) -> Trace {
        self.table.run(self.initial, len)
    }

    /// Bit-exact agreement with `trace` over its whole length.
    pub fn is_consistent_with(&self, trace: &Trace) -> bool {
        self.width() == trace.width() && self.replay(trace.len()) == *trace
    }

    /// Output prefix and cycle of the emitted sequence, before minimization.
    fn rho(&self) -> (Vec<Bits>, Vec<Bits>) {
        let mut seen = vec![usize::MAX; self.size()];
        let mut order = Vec::new();
        let mut s = self.initial;
        while seen[s] == usize::MAX {
            seen[s] = order.len();
            order.push(s);
            s = self.table.next(s);
        }
        let mu = seen[s];
        let outs: Vec<Bits> = order
            .iter()
            .map(|&q| self.table.output(q).clone())
            .collect();
        let cycle = outs[mu..].to_vec();
        let mut tail = outs;
        tail.truncate(mu);
        (tail, cycle)
    }

    /// Minimal equivalent machine with states numbered in visiting order.
    pub fn canonical(&self) -> MachineHypothesis {
        let (mut tail, mut cycle) = self.rho();
        let len = cycle.len();
        let period = (1..=len)
            .find(|&p| len % p == 0 && (0..len).all(|i| cycle[i] == cycle[i % p]))
            .expect("the full length is always a period");
        cycle.truncate(period);
        while let Some(last) = tail.last() {
            if *last != cycle[period - 1] {
                break;
            }
            tail.pop();
            cycle.rotate_right(1);
        }
        let mu = tail.len();
        let total = mu + period;
        let mut outputs = tail;
        outputs.extend(cycle);
        let next = (0..total)
            .map(|i| if i + 1 < total { i + 1 } else { mu })
            .collect();
        let table = MooreTable::new(self.width(), outputs, next).expect("rho machine is total");
        MachineHypothesis { table, initial: 0 }
    }

    /// Stable text form of the canonical machine.
    pub fn canonical_key(&self) -> String {
        self.canonical().serialize_table()
    }

    fn serialize_table(&self) -> String {
        debug_assert_eq!(self.initial, 0);
        let rows: Vec<String> = (0..self.size())
            .map(|s| format!("{}>{}", self.table.output(s), self.table.next(s)))
            .collect();
        format!("{}|{}", self.width(), rows.join(";"))
    }

    /// Bisimilarity of reachable parts.
    pub fn equivalent(&self, other: &MachineHypothesis) -> bool {
        self.canonical_key() == other.canonical_key()
    }

    /// Tail length and cycle length of the canonical form.
    pub fn shape(&self) -> (usize, usize) {
        let c = self.canonical();
        let mu = c.table.next(c.size() - 1);
        (mu, c.size() - mu)
    }
}

impl PartialEq for MachineHypothesis {
    fn eq(&self, other: &Self) -> bool {
        self.equivalent(other)
    }
}

impl Eq for MachineHypothesis {}

impl PartialOrd for MachineHypothesis {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MachineHypothesis {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

impl fmt::Display for MachineHypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_key())
    }
}

impl Serialize for MachineHypothesis {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The trace itself as a chain of states, the last looping on itself.
///
/// An empty trace yields the one-state all-zero machine.
pub fn unrolled_hypothesis(trace: &Trace) -> MachineHypothesis {
    let len = trace.len();
    if len == 0 {
        return MachineHypothesis {
            table: MooreTable::constant(Bits::zeros(trace.width())),
            initial: 0,
        };
    }
    let outputs: Vec<Bits> = trace.bits().cloned().collect();
    let next = (0..len).map(|i| (i + 1).min(len - 1)).collect();
    MachineHypothesis {
        table: MooreTable::new(trace.width(), outputs, next).expect("chain is total"),
        initial: 0,
    }
}

/// A machine that agrees with `hyp` for `len` ticks and differs at tick `len + 1`.
///
/// Built as `len` unrolled states followed by one state emitting `hyp`'s
/// outcome `len + 1` with bit 0 flipped, looping on itself; at most
/// `hyp.size() + len` states.
pub fn divergent_extension(hyp: &MachineHypothesis, len: usize) -> MachineHypothesis {
    let run = hyp.replay(len + 1);
    let mut outputs: Vec<Bits> = run.bits().cloned().collect();
    let last = outputs.pop().expect("replay has len + 1 outcomes");
    outputs.push(last.flip(0));
    let total = len + 1;
    let next = (0..total).map(|i| (i + 1).min(total - 1)).collect();
    MachineHypothesis {
        table: MooreTable::new(hyp.width(), outputs, next).expect("chain is total"),
        initial: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hyp(width: usize, outs: &[u64], next: &[usize], initial: usize) -> MachineHypothesis {
        let table = MooreTable::new(
            width,
            outs.iter().map(|&c| Bits::from_code(c, width)).collect(),
            next.to_vec(),
        )
        .unwrap();
        MachineHypothesis::new(table, initial).unwrap()
    }

    #[test]
    fn canonical_form_minimizes_and_renumbers() {
        // 0,1,0,1 cycle of length 4 collapses to the alternator.
        let h = hyp(1, &[0, 1, 0, 1], &[1, 2, 3, 0], 0);
        assert_eq!(h.canonical_key(), "1|0>1;1>0");
        // Tail absorbed into the cycle: 1, then (0,1) repeating == (1,0) repeating.
        let t = hyp(1, &[1, 0, 1], &[1, 2, 1], 0);
        assert_eq!(t.canonical_key(), "1|1>1;0>0");
        // Unreachable states are ignored.
        let u = hyp(1, &[1, 0, 0], &[0, 2, 1], 0);
        assert_eq!(u.canonical_key(), "1|1>0");
        // Starting mid-cycle renumbers from the initial state.
        let v = hyp(1, &[0, 1], &[1, 0], 1);
        assert_eq!(v.canonical_key(), "1|1>1;0>0");
    }

    #[test]
    fn equivalence_tracks_emitted_sequence() {
        let a = hyp(1, &[0, 1], &[1, 0], 0);
        let b = hyp(1, &[0, 1, 0, 1, 0, 1], &[1, 2, 3, 4, 5, 0], 0);
        let c = hyp(1, &[0, 1, 1], &[1, 2, 0], 0);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.shape(), (0, 2));
        assert_eq!(hyp(1, &[1, 0], &[1, 1], 0).shape(), (1, 1));
    }

    #[test]
    fn canonical_replays_identically() {
        let h = hyp(2, &[3, 1, 2, 1, 2], &[1, 2, 3, 4, 3], 0);
        let c = h.canonical();
        assert!(c.size() <= h.size());
        assert_eq!(h.replay(40), c.replay(40));
    }

    #[test]
    fn divergent_extension_of_constant_machine() {
        let zero = hyp(1, &[0], &[0], 0);
        let d = divergent_extension(&zero, 5);
        assert_eq!(d.replay(6).to_string(), "0,0,0,0,0,1");
        assert!(d.size() <= zero.size() + 5);
        assert_ne!(d, zero);
    }

    #[test]
    fn divergent_extension_of_alternator() {
        let alt = hyp(1, &[0, 1], &[1, 0], 0);
        let d = divergent_extension(&alt, 4);
        assert_eq!(alt.replay(5).to_string(), "0,1,0,1,0");
        assert_eq!(d.replay(5).to_string(), "0,1,0,1,1");
        assert_eq!(d.replay(4), alt.replay(4));
    }

    #[test]
    fn unrolled_reversed_trace() {
        let t = Trace::parse(1, "0,1,1").unwrap();
        let r = t.reversed();
        assert_eq!(r.to_string(), "1,1,0");
        let h = unrolled_hypothesis(&r);
        assert_eq!(h.size(), 3);
        assert!(h.is_consistent_with(&r));
        assert!(unrolled_hypothesis(&Trace::new(2)).is_consistent_with(&Trace::new(2)));
    }
}
