use serde::{Deserialize, Serialize};

use super::{Bits, BoxError, Trace};

/// One row of a transition table as written in a box specification.
///
/// `next` lists every successor the author declared; a valid machine has
/// exactly one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    pub output: Bits,
    pub next: Vec<usize>,
}

/// Unvalidated transition table, as found in specification files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub rows: Vec<TableRow>,
}

/// A total, deterministic, autonomous Moore machine table.
///
/// State `s` emits `output(s)` and moves to `next(s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MooreTable {
    width: usize,
    outputs: Vec<Bits>,
    next: Vec<usize>,
}

impl MooreTable {
    pub fn new(width: usize, outputs: Vec<Bits>, next: Vec<usize>) -> Result<Self, BoxError> {
        if outputs.is_empty() {
            return Err(BoxError::PartialTable("table has no states".into()));
        }
        if outputs.len() != next.len() {
            return Err(BoxError::PartialTable(format!(
                "{} outputs but {} transitions",
                outputs.len(),
                next.len()
            )));
        }
        if let Some(o) = outputs.iter().find(|o| o.width() != width) {
            return Err(BoxError::WidthMismatch {
                expected: width,
                found: o.width(),
            });
        }
        if let Some((s, &t)) = next.iter().enumerate().find(|(_, &t)| t >= outputs.len()) {
            return Err(BoxError::PartialTable(format!(
                "state {s} moves to undefined state {t}"
            )));
        }
        Ok(MooreTable {
            width,
            outputs,
            next,
        })
    }

    /// Validates a specification table: every row needs exactly one successor.
    pub fn from_spec(spec: &TableSpec, width: usize) -> Result<Self, BoxError> {
        let mut next = Vec::with_capacity(spec.rows.len());
        for (s, row) in spec.rows.iter().enumerate() {
            match row.next.as_slice() {
                [t] => next.push(*t),
                [] => {
                    return Err(BoxError::PartialTable(format!(
                        "state {s} has no successor"
                    )));
                }
                many => {
                    return Err(BoxError::Nondeterministic {
                        state: s,
                        successors: many.len(),
                    });
                }
            }
        }
        let outputs = spec.rows.iter().map(|r| r.output.clone()).collect();
        MooreTable::new(width, outputs, next)
    }

    pub fn to_spec(&self) -> TableSpec {
        TableSpec {
            rows: self
                .outputs
                .iter()
                .zip(&self.next)
                .map(|(o, &t)| TableRow {
                    output: o.clone(),
                    next: vec![t],
                })
                .collect(),
        }
    }

    /// One state per value: `constant(b)` emits `b` forever.
    pub fn constant(bits: Bits) -> Self {
        let width = bits.width();
        MooreTable::new(width, vec![bits], vec![0]).expect("single self-loop is total")
    }

    /// Cycles through `outputs` in order.
    pub fn cycle(width: usize, outputs: Vec<Bits>) -> Result<Self, BoxError> {
        let n = outputs.len();
        MooreTable::new(width, outputs, (0..n).map(|s| (s + 1) % n).collect())
    }

    /// The two-state alternator emitting 0,1,0,1,...
    pub fn alternator() -> Self {
        MooreTable::cycle(1, vec![Bits::from_code(0, 1), Bits::from_code(1, 1)])
            .expect("alternator is total")
    }

    /// Counter modulo `2^width`, emitting `k-1` at tick `k` (little-endian).
    pub fn counter(width: usize) -> Self {
        let size = 1usize << width;
        MooreTable::cycle(
            width,
            (0..size as u64)
                .map(|c| Bits::from_code(c, width))
                .collect(),
        )
        .expect("counter is total")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn size(&self) -> usize {
        self.outputs.len()
    }

    pub fn output(&self, state: usize) -> &Bits {
        &self.outputs[state]
    }

    pub fn next(&self, state: usize) -> usize {
        self.next[state]
    }

    pub fn outputs(&self) -> &[Bits] {
        &self.outputs
    }

    pub fn transitions(&self) -> &[usize] {
        &self.next
    }

    /// Runs `len` ticks from `initial`.
    pub fn run(&self, initial: usize, len: usize) -> Trace {
        let mut trace = Trace::new(self.width);
        let mut s = initial;
        for _ in 0..len {
            trace
                .push_bits(self.outputs[s].clone())
                .expect("outputs are validated to the table width");
            s = self.next[s];
        }
        trace
    }
}

/// A degree of freedom whose machine table and current state are fully visible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteBoxDof {
    pub table: MooreTable,
    pub state: usize,
}

impl WhiteBoxDof {
    pub fn new(table: MooreTable, state: usize) -> Result<Self, BoxError> {
        if state >= table.size() {
            return Err(BoxError::UnknownState(state));
        }
        Ok(WhiteBoxDof { table, state })
    }

    pub fn width(&self) -> usize {
        self.table.width()
    }

    /// Emits the current output and advances. The full future is `table.run(state, _)`.
    pub fn step(&self) -> (WhiteBoxDof, Bits) {
        let out = self.table.output(self.state).clone();
        let succ = WhiteBoxDof {
            table: self.table.clone(),
            state: self.table.next(self.state),
        };
        (succ, out)
    }

    pub fn predict(&self, len: usize) -> Trace {
        self.table.run(self.state, len)
    }
}
