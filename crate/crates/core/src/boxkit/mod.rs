//! Black boxes: hidden-state machines that emit one fixed-width outcome per tick.
//!
//! A [`BoxInstance`] exposes only its width and [`BoxInstance::step`]. Hidden
//! state stays private; the one exception is [`simulate_with_states`], a
//! simulator-side helper that labels each tick with an opaque
//! [`HiddenStateId`] for building measurement operators.

mod outcome;
mod spec;
mod table;
mod turing;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::Rng as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed::{self, Rng};

pub use outcome::{Bits, Outcome, Trace};
pub use spec::{BoxSpec, WhiteDofSpec};
pub use table::{MooreTable, TableRow, TableSpec, WhiteBoxDof};
pub use turing::{Move, ProgramSpec, RuleSpec, TuringProgram, DEFAULT_STEP_BUDGET};

use turing::TuringRun;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoxError {
    #[error("width mismatch: expected {expected} bits, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("time index {found} does not follow {}", expected - 1)]
    TimeIndex { expected: u64, found: u64 },
    #[error("bit index {index} out of range for width {width}")]
    BitIndex { index: usize, width: usize },
    #[error("invalid bit string: {0}")]
    InvalidBits(String),
    #[error("partial machine table: {0}")]
    PartialTable(String),
    #[error("nondeterministic machine table: state {state} has {successors} successors")]
    Nondeterministic { state: usize, successors: usize },
    #[error("unknown state {0}")]
    UnknownState(usize),
    #[error("invalid Turing program: {0}")]
    InvalidProgram(String),
    #[error("emission probability {value} at bit {index} is outside [0, 1]")]
    Probability { index: usize, value: f64 },
    #[error("trap boxes need at least 2 bits, got {0}")]
    TrapWidth(usize),
    #[error("outcome width must be positive")]
    ZeroWidth,
}

/// What a trap box does after its trigger count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrapMode {
    /// Uniformly random bits.
    Random,
    /// One random bit copied into every position.
    Correlated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxKind {
    Fsm,
    Turing,
    Stochastic,
    Trap,
    Composite,
}

#[derive(Clone, Debug)]
enum Mechanism {
    Fsm {
        table: MooreTable,
        state: usize,
    },
    Turing(Box<TuringRun>),
    Stochastic {
        p: Vec<f64>,
        rng: Rng,
    },
    Trap {
        trigger: u64,
        mode: TrapMode,
        rng: Rng,
    },
    Composite {
        inner: Box<BoxInstance>,
        dof: WhiteBoxDof,
    },
}

/// A black box. Cloning snapshots it; stepping a snapshot replays identically.
#[derive(Clone, Debug)]
pub struct BoxInstance {
    width: usize,
    ticks: u64,
    mechanism: Mechanism,
}

impl BoxInstance {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn kind(&self) -> BoxKind {
        match self.mechanism {
            Mechanism::Fsm { .. } => BoxKind::Fsm,
            Mechanism::Turing(_) => BoxKind::Turing,
            Mechanism::Stochastic { .. } => BoxKind::Stochastic,
            Mechanism::Trap { .. } => BoxKind::Trap,
            Mechanism::Composite { .. } => BoxKind::Composite,
        }
    }

    /// Number of outcomes emitted so far.
    pub fn ticks(&self) -> u64 {
        self.ticks
    }

    /// Returns the successor box and the outcome for the next time index.
    pub fn step(&self) -> (BoxInstance, Outcome) {
        let mut next = self.clone();
        let outcome = next.advance();
        (next, outcome)
    }

    /// In-place form of [`BoxInstance::step`].
    pub fn advance(&mut self) -> Outcome {
        self.ticks += 1;
        let k = self.ticks;
        let width = self.width;
        let bits = match &mut self.mechanism {
            Mechanism::Fsm { table, state } => {
                let out = table.output(*state).clone();
                *state = table.next(*state);
                out
            }
            Mechanism::Turing(run) => run.tick(width),
            Mechanism::Stochastic { p, rng } => {
                Bits::new(p.iter().map(|&pi| rng.random::<f64>() < pi).collect())
            }
            Mechanism::Trap { trigger, mode, rng } => {
                if k <= *trigger {
                    trap_pattern(width)
                } else {
                    match mode {
                        TrapMode::Random => Bits::new((0..width).map(|_| rng.random()).collect()),
                        TrapMode::Correlated => Bits::new(vec![rng.random(); width]),
                    }
                }
            }
            Mechanism::Composite { inner, dof } => {
                let o = inner.advance().bits;
                let (succ, d) = dof.step();
                *dof = succ;
                o.concat(&d)
            }
        };
        Outcome { k, bits }
    }

    /// Steps `len` times, collecting the trace.
    pub fn run(&mut self, len: usize) -> Trace {
        let mut trace = Trace::new(self.width);
        for _ in 0..len {
            let o = self.advance();
            trace
                .push_bits(o.bits)
                .expect("boxes emit constant-width outcomes");
        }
        trace
    }

    /// Number of Turing ticks that ended on the step budget, if this is a Turing box.
    pub fn budget_exhaustions(&self) -> Option<u64> {
        match &self.mechanism {
            Mechanism::Turing(run) => Some(run.budget_exhaustions),
            _ => None,
        }
    }

    fn hidden_key(&self, key: &mut Vec<i64>) {
        match &self.mechanism {
            Mechanism::Fsm { state, .. } => key.extend([0, *state as i64]),
            Mechanism::Turing(run) => {
                key.push(1);
                run.hidden_key(key);
            }
            // The generator position is part of the emulating machine's state.
            Mechanism::Stochastic { .. } => key.extend([2, self.ticks as i64]),
            Mechanism::Trap { .. } => key.extend([3, self.ticks as i64]),
            Mechanism::Composite { inner, dof } => {
                key.push(4);
                inner.hidden_key(key);
                key.push(dof.state as i64);
            }
        }
    }
}

/// The fixed pre-trigger pattern `<1,0,1,0,...>`.
pub fn trap_pattern(width: usize) -> Bits {
    Bits::new((0..width).map(|i| i % 2 == 0).collect())
}

pub fn make_fsm_box(
    spec: &TableSpec,
    initial: usize,
    width: usize,
) -> Result<BoxInstance, BoxError> {
    let table = MooreTable::from_spec(spec, width)?;
    fsm_box(table, initial)
}

pub fn fsm_box(table: MooreTable, initial: usize) -> Result<BoxInstance, BoxError> {
    if table.width() == 0 {
        return Err(BoxError::ZeroWidth);
    }
    if initial >= table.size() {
        return Err(BoxError::UnknownState(initial));
    }
    Ok(BoxInstance {
        width: table.width(),
        ticks: 0,
        mechanism: Mechanism::Fsm {
            table,
            state: initial,
        },
    })
}

/// Emits `pattern` for ticks `1..=trigger`, then switches to `mode`.
pub fn make_trap_box(
    trigger: u64,
    width: usize,
    mode: TrapMode,
    seed: u64,
) -> Result<BoxInstance, BoxError> {
    if width < 2 {
        return Err(BoxError::TrapWidth(width));
    }
    Ok(BoxInstance {
        width,
        ticks: 0,
        mechanism: Mechanism::Trap {
            trigger,
            mode,
            rng: seed::rng(seed),
        },
    })
}

pub fn make_turing_box(program: TuringProgram, width: usize) -> Result<BoxInstance, BoxError> {
    if width == 0 {
        return Err(BoxError::ZeroWidth);
    }
    Ok(BoxInstance {
        width,
        ticks: 0,
        mechanism: Mechanism::Turing(Box::new(TuringRun::new(program))),
    })
}

/// Bit `i` of every outcome is 1 with probability `p[i]`.
pub fn make_stochastic_box(p: &[f64], seed: u64) -> Result<BoxInstance, BoxError> {
    if p.is_empty() {
        return Err(BoxError::ZeroWidth);
    }
    if let Some((index, &value)) = p
        .iter()
        .enumerate()
        .find(|(_, v)| !(0.0..=1.0).contains(*v))
    {
        return Err(BoxError::Probability { index, value });
    }
    Ok(BoxInstance {
        width: p.len(),
        ticks: 0,
        mechanism: Mechanism::Stochastic {
            p: p.to_vec(),
            rng: seed::rng(seed),
        },
    })
}

/// Concatenates a box with a white-box degree of freedom; the box's bits come first.
pub fn concat(bx: BoxInstance, dof: WhiteBoxDof) -> BoxInstance {
    BoxInstance {
        width: bx.width + dof.width(),
        ticks: bx.ticks,
        mechanism: Mechanism::Composite {
            inner: Box::new(bx),
            dof,
        },
    }
}

/// Opaque label for a hidden state, assigned in order of first visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HiddenStateId(pub u32);

impl fmt::Display for HiddenStateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}", self.0)
    }
}

/// Nonempty set of hidden-state labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HiddenStateSet(BTreeSet<HiddenStateId>);

impl HiddenStateSet {
    pub fn new<I: IntoIterator<Item = HiddenStateId>>(ids: I) -> Option<Self> {
        let set: BTreeSet<_> = ids.into_iter().collect();
        (!set.is_empty()).then_some(HiddenStateSet(set))
    }

    /// Labels `0..count`.
    pub fn range(count: u32) -> Option<Self> {
        HiddenStateSet::new((0..count).map(HiddenStateId))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, id: HiddenStateId) -> bool {
        self.0.contains(&id)
    }

    pub fn iter(&self) -> impl Iterator<Item = HiddenStateId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_set(&self) -> &BTreeSet<HiddenStateId> {
        &self.0
    }
}

/// Per-tick hidden-state labels recorded by the simulator alongside a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateLog {
    pub labels: Vec<HiddenStateId>,
}

impl StateLog {
    /// The set of visited states, or `None` for an empty log.
    pub fn visited(&self) -> Option<HiddenStateSet> {
        HiddenStateSet::new(self.labels.iter().copied())
    }
}

/// Simulation-only: runs `len` ticks, labelling the hidden state that produced each outcome.
///
/// Observers never see these labels; they exist so the simulator can build
/// the state-to-bit partition that defines a POVM.
pub fn simulate_with_states(bx: &mut BoxInstance, len: usize) -> (Trace, StateLog) {
    let mut ids: HashMap<Vec<i64>, HiddenStateId> = HashMap::new();
    let mut labels = Vec::with_capacity(len);
    let mut trace = Trace::new(bx.width);
    let mut key = Vec::new();
    for _ in 0..len {
        key.clear();
        bx.hidden_key(&mut key);
        let next_id = HiddenStateId(ids.len() as u32);
        labels.push(*ids.entry(key.clone()).or_insert(next_id));
        let o = bx.advance();
        trace.push_bits(o.bits).expect("constant width");
    }
    (trace, StateLog { labels })
}
