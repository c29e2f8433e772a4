//! From hidden states and outcomes to POVMs, propagators and state vectors.

use blackbox::boxkit::{fsm_box, simulate_with_states, MooreTable};
use blackbox::quantum::{
    born_fit, build_povm, encode_trace, phase_anticorrelation_check, povm_diagnostics,
    time_reversal_check, unitarity_defect, Propagator, PropagatorSpec, Variant,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = MooreTable::cycle(
        2,
        ["00", "10", "01", "11", "11"]
            .map(|s| s.parse().unwrap())
            .to_vec(),
    )?;
    let mut bx = fsm_box(table, 0)?;
    let (trace, log) = simulate_with_states(&mut bx, 20);
    let states = log.visited().expect("nonempty log");
    println!("trace {trace}");

    for i in 0..trace.width() {
        let povm = build_povm(&trace, i, &states, &log.labels)?;
        let d = povm_diagnostics(&povm, &states);
        let show = |set: &std::collections::BTreeSet<_>| {
            set.iter().map(|s| format!("{s}")).collect::<Vec<_>>()
        };
        println!(
            "bit {i}: E0 on {:?}, E1 on {:?}, orthogonal={} resolves identity={}",
            show(&povm.domain0),
            show(&povm.domain1),
            d.orthogonal,
            d.resolves_identity
        );
    }

    let spec = PropagatorSpec::default();
    let literal = PropagatorSpec {
        variant: Variant::PaperLiteral,
        ..spec
    };
    println!(
        "unitarity defect: normalized {:.1e}, literal {}",
        unitarity_defect(&Propagator::new(spec)?, 3),
        unitarity_defect(&Propagator::new(literal)?, 3)
    );
    println!(
        "phases anti-correlated to k=10^6: {}",
        phase_anticorrelation_check(&spec.schedule, 1_000_000)
    );

    let encoded = encode_trace(&trace, &[spec, spec])?;
    for tick in encoded.iter().take(3) {
        println!("k={} observed {:?}", tick.k, tick.observed.quadruples());
        println!(
            "    unobserved {:?} |o| = {:.6}",
            tick.unobserved.quadruples(),
            tick.unobserved.global_norm()
        );
    }

    for i in 0..2 {
        let fit = born_fit(&trace, i)?;
        println!(
            "bit {i}: alpha0^2 = {}, alpha1^2 = {}",
            fit.alpha0_sq, fit.alpha1_sq
        );
    }
    let rev = time_reversal_check(&trace)?;
    println!(
        "reversed trace consistent: {}, round trip error {:.1e}",
        rev.reversed_consistent, rev.round_trip_error
    );
    Ok(())
}
