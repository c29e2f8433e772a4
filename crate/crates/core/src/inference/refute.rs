//! Constructive refutation of separability claims.
//!
//! After `N` copies of `<1,0>` the only prediction a "separated after N
//! observations" verdict can make is `<1,0>` forever. A trap box built from
//! a counter and a random generator keeps the first `N` outcomes and breaks
//! the prediction at step `N + 1`.

use serde::Serialize;

use super::independence::{independence_test, IndependenceVerdict, Partition};
use super::InferenceError;
use crate::boxkit::{make_trap_box, trap_pattern, Bits, BoxInstance, Trace, TrapMode};
use crate::seed;

/// Seeds tried before giving up on a violation.
pub const MAX_RESAMPLES: u64 = 1000;

const RESAMPLE_STREAM: u64 = seed::Component::Resampler as u64;

#[derive(Clone, Debug, Serialize)]
pub struct RefutationRecord {
    pub trigger: u64,
    pub mode: TrapMode,
    pub root_seed: u64,
    /// Seed of the trap box that produced the violation.
    pub box_seed: u64,
    /// Trap boxes built (1-based) until outcome `N + 1` differed from the prediction.
    pub attempts: u64,
    pub prediction: Bits,
    /// Outcomes `1..=N` all equal the prediction.
    pub prefix_matches_prediction: bool,
    pub violation_step: Option<u64>,
    pub violating_outcome: Option<Bits>,
    /// Correlated mode only: verdicts over outcomes `1..=N` and `1..=2N`.
    pub verdict_first_n: Option<IndependenceVerdict>,
    pub verdict_first_2n: Option<IndependenceVerdict>,
    #[serde(skip)]
    pub observed: Trace,
}

impl RefutationRecord {
    pub fn prediction_violated(&self) -> bool {
        self.violation_step == Some(self.trigger + 1)
    }
}

/// Builds trap boxes from successive seeds derived from `root_seed` until one
/// violates the `<1,0>`-forever prediction at step `N + 1`.
///
/// Returns a fresh (unstepped) copy of that box alongside the record.
pub fn refute_separability(
    trigger: u64,
    significance: f64,
    root_seed: u64,
    mode: TrapMode,
) -> Result<(BoxInstance, RefutationRecord), InferenceError> {
    if trigger == 0 {
        return Err(InferenceError::ZeroTrigger);
    }
    const WIDTH: usize = 2;
    let prediction = trap_pattern(WIDTH);
    let observe_len = match mode {
        TrapMode::Random => trigger + 1,
        TrapMode::Correlated => 2 * trigger,
    } as usize;

    for attempt in 1..=MAX_RESAMPLES {
        let box_seed = seed::split_indexed(root_seed, RESAMPLE_STREAM, attempt - 1);
        let fresh = make_trap_box(trigger, WIDTH, mode, box_seed).map_err(InferenceError::Box)?;
        let mut bx = fresh.clone();
        let observed = bx.run(observe_len);
        let step = trigger as usize;
        let next = &observed.outcomes()[step].bits;
        if *next == prediction {
            continue;
        }
        let prefix_matches_prediction = observed.bits().take(step).all(|b| *b == prediction);
        let (verdict_first_n, verdict_first_2n) = match mode {
            TrapMode::Random => (None, None),
            TrapMode::Correlated => {
                let partition = Partition::split_at(WIDTH, 1)?;
                (
                    Some(independence_test(
                        &observed.prefix(step),
                        &partition,
                        significance,
                    )?),
                    Some(independence_test(&observed, &partition, significance)?),
                )
            }
        };
        let record = RefutationRecord {
            trigger,
            mode,
            root_seed,
            box_seed,
            attempts: attempt,
            prediction: prediction.clone(),
            prefix_matches_prediction,
            violation_step: Some(trigger + 1),
            violating_outcome: Some(next.clone()),
            verdict_first_n,
            verdict_first_2n,
            observed,
        };
        return Ok((fresh, record));
    }
    Err(InferenceError::NoViolation {
        attempts: MAX_RESAMPLES,
    })
}
