//! Single-tape Turing machines observed through a fixed tape window.
//!
//! An observer tick runs the machine until it enters a yield state, halts,
//! or exhausts the per-tick step budget, then samples the window. Tape
//! symbols are small integers with `0` as blank; a window cell reads as
//! bit 1 exactly when it holds symbol `1`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Bits, BoxError, MooreTable};

pub const DEFAULT_STEP_BUDGET: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
    #[serde(rename = "S")]
    Stay,
}

impl Move {
    fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
            Move::Stay => 0,
        }
    }
}

/// `(state, read) -> (write, move, next)` as written in a program file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub state: String,
    pub read: u8,
    pub write: u8,
    #[serde(rename = "move")]
    pub mv: Move,
    pub next: String,
}

/// Serializable Turing program description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramSpec {
    pub start: String,
    /// Entering any of these states ends the current tick.
    #[serde(rename = "yield")]
    pub yield_states: Vec<String>,
    pub rules: Vec<RuleSpec>,
    /// Non-blank initial tape cells as `(position, symbol)`.
    #[serde(default)]
    pub tape: Vec<(i64, u8)>,
    #[serde(default)]
    pub window_start: i64,
    #[serde(default = "default_budget")]
    pub step_budget: u64,
}

fn default_budget() -> u64 {
    DEFAULT_STEP_BUDGET
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Rule {
    write: u8,
    mv: Move,
    next: usize,
}

/// Validated program with states interned to indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringProgram {
    names: Vec<String>,
    rules: BTreeMap<(usize, u8), Rule>,
    start: usize,
    yield_states: BTreeSet<usize>,
    tape: Vec<(i64, u8)>,
    window_start: i64,
    step_budget: u64,
}

impl TuringProgram {
    pub fn from_spec(spec: &ProgramSpec) -> Result<Self, BoxError> {
        let mut names: Vec<String> = Vec::new();
        let mut intern = |name: &str| -> usize {
            match names.iter().position(|n| n == name) {
                Some(i) => i,
                None => {
                    names.push(name.to_owned());
                    names.len() - 1
                }
            }
        };
        let start = intern(&spec.start);
        let mut rules = BTreeMap::new();
        for r in &spec.rules {
            let from = intern(&r.state);
            let next = intern(&r.next);
            let rule = Rule {
                write: r.write,
                mv: r.mv,
                next,
            };
            if rules.insert((from, r.read), rule).is_some() {
                return Err(BoxError::InvalidProgram(format!(
                    "duplicate rule for state {:?} reading {}",
                    r.state, r.read
                )));
            }
        }
        let yield_states = spec.yield_states.iter().map(|y| intern(y)).collect();
        Ok(TuringProgram {
            names,
            rules,
            start,
            yield_states,
            tape: spec.tape.clone(),
            window_start: spec.window_start,
            step_budget: spec.step_budget,
        })
    }

    pub fn to_spec(&self) -> ProgramSpec {
        ProgramSpec {
            start: self.names[self.start].clone(),
            yield_states: self
                .yield_states
                .iter()
                .map(|&s| self.names[s].clone())
                .collect(),
            rules: self
                .rules
                .iter()
                .map(|(&(s, read), r)| RuleSpec {
                    state: self.names[s].clone(),
                    read,
                    write: r.write,
                    mv: r.mv,
                    next: self.names[r.next].clone(),
                })
                .collect(),
            tape: self.tape.clone(),
            window_start: self.window_start,
            step_budget: self.step_budget,
        }
    }

    pub fn with_step_budget(mut self, budget: u64) -> Self {
        self.step_budget = budget;
        self
    }

    pub fn step_budget(&self) -> u64 {
        self.step_budget
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    /// Writes `1` over cells `0..width` and halts, leaving the window all ones.
    pub fn constant_ones(width: usize) -> Self {
        let rules = (0..width)
            .flat_map(|i| {
                (0..=1).map(move |read| RuleSpec {
                    state: format!("w{i}"),
                    read,
                    write: 1,
                    mv: Move::Right,
                    next: format!("w{}", i + 1),
                })
            })
            .collect();
        let spec = ProgramSpec {
            start: "w0".into(),
            yield_states: Vec::new(),
            rules,
            tape: Vec::new(),
            window_start: 0,
            step_budget: DEFAULT_STEP_BUDGET.max(width as u64),
        };
        TuringProgram::from_spec(&spec).expect("static program")
    }

    /// Binary counter over tape cells `0..width`, least significant bit at cell 0.
    ///
    /// Cell `-1` holds marker symbol `2`. Tick `k` shows `k - 1`; carries out of
    /// the window land beyond it, so the window reads the count modulo `2^width`.
    pub fn binary_counter() -> Self {
        let rule = |state: &str, read, write, mv, next: &str| RuleSpec {
            state: state.into(),
            read,
            write,
            mv,
            next: next.into(),
        };
        let spec = ProgramSpec {
            start: "start".into(),
            yield_states: vec!["inc".into()],
            rules: vec![
                rule("start", 0, 0, Move::Stay, "inc"),
                rule("inc", 1, 0, Move::Right, "carry"),
                rule("inc", 0, 1, Move::Left, "back"),
                rule("carry", 1, 0, Move::Right, "carry"),
                rule("carry", 0, 1, Move::Left, "back"),
                rule("back", 0, 0, Move::Left, "back"),
                rule("back", 1, 1, Move::Left, "back"),
                rule("back", 2, 2, Move::Right, "inc"),
            ],
            tape: vec![(-1, 2)],
            window_start: 0,
            step_budget: DEFAULT_STEP_BUDGET,
        };
        TuringProgram::from_spec(&spec).expect("static program")
    }

    /// Emulates an autonomous Moore table: each tick writes the current state's
    /// output into the window, rewinds to cell 0, and yields in the successor's
    /// writer state.
    pub fn from_moore(table: &MooreTable, initial: usize) -> Self {
        let n = table.width();
        let writer = |s: usize, i: usize| format!("w{s}_{i}");
        let rewind = |s: usize, j: usize| format!("r{s}_{j}");
        let mut rules = Vec::new();
        for s in 0..table.size() {
            let succ = table.next(s);
            for i in 0..n {
                let bit = u8::from(table.output(s).get(i).unwrap_or(false));
                let (mv, next) = if i + 1 < n {
                    (Move::Right, writer(s, i + 1))
                } else {
                    (Move::Stay, rewind(succ, n - 1))
                };
                for read in 0..=1 {
                    rules.push(RuleSpec {
                        state: writer(s, i),
                        read,
                        write: bit,
                        mv,
                        next: next.clone(),
                    });
                }
            }
            for j in 0..n {
                let (mv, next) = if j == 0 {
                    (Move::Stay, writer(s, 0))
                } else {
                    (Move::Left, rewind(s, j - 1))
                };
                for read in 0..=1 {
                    rules.push(RuleSpec {
                        state: rewind(s, j),
                        read,
                        write: read,
                        mv,
                        next: next.clone(),
                    });
                }
            }
        }
        let spec = ProgramSpec {
            start: writer(initial, 0),
            yield_states: (0..table.size()).map(|s| writer(s, 0)).collect(),
            rules,
            tape: Vec::new(),
            window_start: 0,
            step_budget: DEFAULT_STEP_BUDGET,
        };
        TuringProgram::from_spec(&spec).expect("generated program is well formed")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct Tape {
    cells: Vec<u8>,
    origin: i64,
}

impl Tape {
    fn get(&self, pos: i64) -> u8 {
        let idx = pos - self.origin;
        if idx < 0 {
            0
        } else {
            self.cells.get(idx as usize).copied().unwrap_or(0)
        }
    }

    fn set(&mut self, pos: i64, sym: u8) {
        if self.cells.is_empty() {
            self.origin = pos;
        }
        if pos < self.origin {
            let grow = (self.origin - pos) as usize;
            self.cells.splice(0..0, std::iter::repeat_n(0, grow));
            self.origin = pos;
        }
        let idx = (pos - self.origin) as usize;
        if idx >= self.cells.len() {
            self.cells.resize(idx + 1, 0);
        }
        self.cells[idx] = sym;
    }

    /// Non-blank cells, for identifying configurations.
    fn support(&self) -> impl Iterator<Item = (i64, u8)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.origin + i as i64, c))
    }
}

/// A running machine: program plus configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct TuringRun {
    program: TuringProgram,
    state: usize,
    head: i64,
    tape: Tape,
    halted: bool,
    /// Ticks that ended because the step budget ran out.
    pub(crate) budget_exhaustions: u64,
}

impl TuringRun {
    pub(crate) fn new(program: TuringProgram) -> Self {
        let mut tape = Tape::default();
        for &(pos, sym) in &program.tape {
            tape.set(pos, sym);
        }
        TuringRun {
            state: program.start,
            head: 0,
            tape,
            halted: false,
            budget_exhaustions: 0,
            program,
        }
    }

    /// Advances one observer tick and samples `width` cells of the window.
    pub(crate) fn tick(&mut self, width: usize) -> Bits {
        let mut steps = 0;
        while !self.halted {
            if steps == self.program.step_budget {
                self.budget_exhaustions += 1;
                break;
            }
            let read = self.tape.get(self.head);
            let Some(rule) = self.program.rules.get(&(self.state, read)).copied() else {
                self.halted = true;
                break;
            };
            self.tape.set(self.head, rule.write);
            self.head += rule.mv.delta();
            self.state = rule.next;
            steps += 1;
            if self.program.yield_states.contains(&rule.next) {
                break;
            }
        }
        let start = self.program.window_start;
        Bits::new(
            (0..width as i64)
                .map(|i| self.tape.get(start + i) == 1)
                .collect(),
        )
    }

    pub(crate) fn hidden_key(&self, key: &mut Vec<i64>) {
        key.push(self.state as i64);
        key.push(self.head);
        key.push(i64::from(self.halted));
        for (pos, sym) in self.tape.support() {
            key.push(pos);
            key.push(i64::from(sym));
        }
    }
}
