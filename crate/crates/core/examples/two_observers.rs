//! Two observers share one correlated box; neither can see the correlation.

use blackbox::boxkit::{make_trap_box, Trace, TrapMode};
use blackbox::inference::{independence_test, Partition, DEFAULT_SIGNIFICANCE};
use blackbox::quantum::born_fit;
use blackbox::{ObserverConfig, ObserverState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut bx = make_trap_box(0, 2, TrapMode::Correlated, 9)?;
    let mut alice = ObserverState::new(&ObserverConfig::new(1))?;
    let mut bob = ObserverState::new(&ObserverConfig::new(1))?;
    let mut joint = Trace::new(2);
    for _ in 0..1000 {
        let o = bx.advance();
        alice.record(o.bits.select(&[0]))?;
        bob.record(o.bits.select(&[1]))?;
        joint.push_bits(o.bits)?;
    }

    for (name, obs) in [("alice", &alice), ("bob", &bob)] {
        let fit = born_fit(obs.log(), 0)?;
        println!(
            "{name}: frequency of 1 = {:.3} +/- {:.3}, consistent with a fair coin: {}",
            fit.alpha1_sq,
            fit.confidence_halfwidth,
            (fit.alpha1_sq - 0.5).abs() <= fit.confidence_halfwidth
        );
    }
    let v = independence_test(&joint, &Partition::split_at(2, 1)?, DEFAULT_SIGNIFICANCE)?;
    println!(
        "joint record (never available to either observer): {:?}, G = {:.1}, 2N ln 2 = {:.1}",
        v.verdict,
        v.g_statistic,
        2000.0 * std::f64::consts::LN_2
    );
    Ok(())
}
