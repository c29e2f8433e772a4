//! Inference from finite traces, and the constructions that show its limits.

mod enumerate;
mod independence;
mod machine;
mod provisional;
mod refute;

use thiserror::Error;

use crate::boxkit::BoxError;

pub use enumerate::{
    enumerate_consistent_machines, enumerate_with_limits, Enumeration, EnumerationLimits,
};
pub use independence::{
    independence_test, joint_histogram, verdict_from_histogram, IndependenceVerdict,
    JointHistogram, Partition, Verdict, DEFAULT_SIGNIFICANCE,
};
pub use machine::{divergent_extension, unrolled_hypothesis, MachineHypothesis};
pub use provisional::{build_provisional_table, MachineTable};
pub use refute::{refute_separability, RefutationRecord, MAX_RESAMPLES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InferenceError {
    #[error("window must be at least 1")]
    ZeroWindow,
    #[error("trace of length {len} is shorter than window {window}")]
    TraceTooShort { len: usize, window: usize },
    #[error("state bound must be at least 1")]
    ZeroStateBound,
    #[error("outcome width {width} exceeds the enumeration cap of {cap}")]
    WidthCap { width: usize, cap: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("significance must lie in (0, 1), got {0}")]
    Significance(f64),
    #[error("trace is empty")]
    EmptyTrace,
    #[error("trigger count must be at least 1")]
    ZeroTrigger,
    #[error("no prediction violation after {attempts} seeds")]
    NoViolation { attempts: u64 },
    #[error(transparent)]
    Box(#[from] BoxError),
}
