//! JSON box specification files.
//!
//! ```json
//! {"kind": "fsm", "n": 1, "table": {"rows": [{"output": "0", "next": [1]},
//!                                            {"output": "1", "next": [0]}]}}
//! {"kind": "trap", "n": 2, "N": 100, "post_mode": "random", "seed": 7}
//! {"kind": "stochastic", "n": 1, "p": [0.3]}
//! {"kind": "turing", "n": 3, "program": {...}}
//! {"kind": "composite", "n": 3, "inner": {...}, "white": {"n": 1, "table": {...}}}
//! ```
//!
//! `seed` is optional wherever it appears; a missing seed is filled from the
//! caller's default. Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use super::{
    concat, fsm_box, make_stochastic_box, make_trap_box, make_turing_box, BoxError, BoxInstance,
    MooreTable, ProgramSpec, TableSpec, TrapMode, TuringProgram, WhiteBoxDof,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoxSpec {
    Fsm {
        n: usize,
        table: TableSpec,
        #[serde(default)]
        initial: usize,
    },
    Turing {
        n: usize,
        program: ProgramSpec,
    },
    Stochastic {
        n: usize,
        p: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Trap {
        n: usize,
        #[serde(rename = "N")]
        trigger: u64,
        post_mode: TrapMode,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Composite {
        n: usize,
        inner: Box<BoxSpec>,
        white: WhiteDofSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhiteDofSpec {
    pub n: usize,
    pub table: TableSpec,
    #[serde(default)]
    pub initial: usize,
}

impl WhiteDofSpec {
    pub fn build(&self) -> Result<WhiteBoxDof, BoxError> {
        WhiteBoxDof::new(MooreTable::from_spec(&self.table, self.n)?, self.initial)
    }
}

impl BoxSpec {
    pub fn width(&self) -> usize {
        match self {
            BoxSpec::Fsm { n, .. }
            | BoxSpec::Turing { n, .. }
            | BoxSpec::Stochastic { n, .. }
            | BoxSpec::Trap { n, .. }
            | BoxSpec::Composite { n, .. } => *n,
        }
    }

    pub fn fsm(table: &MooreTable, initial: usize) -> Self {
        BoxSpec::Fsm {
            n: table.width(),
            table: table.to_spec(),
            initial,
        }
    }

    /// Builds the box, using `default_seed` where the spec carries no seed.
    pub fn build(&self, default_seed: u64) -> Result<BoxInstance, BoxError> {
        match self {
            BoxSpec::Fsm { n, table, initial } => {
                fsm_box(MooreTable::from_spec(table, *n)?, *initial)
            }
            BoxSpec::Turing { n, program } => {
                make_turing_box(TuringProgram::from_spec(program)?, *n)
            }
            BoxSpec::Stochastic { n, p, seed } => {
                if p.len() != *n {
                    return Err(BoxError::WidthMismatch {
                        expected: *n,
                        found: p.len(),
                    });
                }
                make_stochastic_box(p, seed.unwrap_or(default_seed))
            }
            BoxSpec::Trap {
                n,
                trigger,
                post_mode,
                seed,
            } => make_trap_box(*trigger, *n, *post_mode, seed.unwrap_or(default_seed)),
            BoxSpec::Composite { n, inner, white } => {
                let bx = inner.build(default_seed)?;
                let dof = white.build()?;
                if bx.width() + dof.width() != *n {
                    return Err(BoxError::WidthMismatch {
                        expected: *n,
                        found: bx.width() + dof.width(),
                    });
                }
                Ok(concat(bx, dof))
            }
        }
    }
}
