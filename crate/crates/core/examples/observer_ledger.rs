//! An observer pays 0.7 kT per recorded bit.

use blackbox::boxkit::make_stochastic_box;
use blackbox::observer::{
    landauer_action, observer_temperature, ObserverConfig, ObserverError, ObserverState,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (energy, action) = landauer_action(1, 300.0, 1.0)?;
    println!("one bit at 300 K, 1 s: {energy:.4e} J, {action:.4e} J s");
    println!(
        "back to temperature: {} K",
        observer_temperature(action, 1.0)?
    );

    let mut bx = make_stochastic_box(&[0.5; 8], 1)?;
    let mut obs = ObserverState::new(&ObserverConfig::new(8))?;
    for _ in 0..1000 {
        obs.observe(&mut bx)?;
    }
    let ledger = obs.ledger().snapshot();
    println!(
        "after {} ticks (t = {} s): {} bits, {:.4e} J, {:.4e} J s",
        obs.clock().k(),
        obs.clock().t(),
        ledger.bits_recorded,
        ledger.energy_total,
        ledger.action_total
    );

    // A finite energy budget means finitely many observations.
    let mut cfg = ObserverConfig::new(8);
    cfg.max_energy_joules = Some(10.0 * 8.0 * energy);
    let mut capped = ObserverState::new(&cfg)?;
    let mut count = 0;
    loop {
        match capped.observe(&mut bx) {
            Ok(_) => count += 1,
            Err(ObserverError::EnergyExhausted { needed, budget }) => {
                println!(
                    "budget {budget:.3e} J allows {count} observations (next needs {needed:.3e} J)"
                );
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}
