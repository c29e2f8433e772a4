//! Simulation of observers interacting with black boxes.
//!
//! - [`boxkit`]: hidden-state boxes (finite-state, Turing, stochastic, trap,
//!   composite) that emit fixed-width bit strings.
//! - [`observer`]: finite observers with an outcome clock and a Landauer
//!   energy/action ledger.
//! - [`inference`]: provisional machine tables, exhaustive enumeration of
//!   consistent machines, divergent extensions, and a G-test for
//!   separability, plus the trap-box refuter.
//! - [`quantum`]: POVMs from outcome streams, phase-scheduled propagators,
//!   state vectors in the 2n-dimensional pair space, and their diagnostics.
//! - [`harness`]: declarative scenarios with JSON-lines reports.
//!
//! Runnable walkthroughs live in `examples/`; the `blackbox` binary runs
//! scenario configs.

pub mod boxkit;
pub mod harness;
pub mod inference;
pub mod observer;
pub mod quantum;
pub mod seed;

pub use boxkit::{Bits, BoxInstance, Outcome, Trace};
pub use observer::{ObserverConfig, ObserverState};
