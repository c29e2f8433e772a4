use blackbox::boxkit::{
    concat, fsm_box, make_trap_box, trap_pattern, MooreTable, TrapMode, WhiteBoxDof,
};
use blackbox::inference::{divergent_extension, enumerate_consistent_machines, MachineHypothesis};
use blackbox::observer::{landauer_action, observer_temperature, BOLTZMANN, LANDAUER_FACTOR};
use blackbox::quantum::{born_fit, encode_trace, PhaseFn, PhaseSchedule, PropagatorSpec, Variant};
use blackbox::{Bits, Trace};
use proptest::prelude::*;

fn table(width: usize, max_states: usize) -> impl Strategy<Value = MooreTable> {
    (1..=max_states).prop_flat_map(move |s| {
        (
            prop::collection::vec(0..(1u64 << width), s),
            prop::collection::vec(0..s, s),
        )
            .prop_map(move |(outs, next)| {
                let outputs = outs
                    .into_iter()
                    .map(|c| Bits::from_code(c, width))
                    .collect();
                MooreTable::new(width, outputs, next).unwrap()
            })
    })
}

fn machine(width: usize, max_states: usize) -> impl Strategy<Value = (MooreTable, usize)> {
    table(width, max_states).prop_flat_map(|t| {
        let s = t.size();
        (Just(t), 0..s)
    })
}

fn trace(width: usize, max_len: usize) -> impl Strategy<Value = Trace> {
    prop::collection::vec(0..(1u64 << width), 0..=max_len).prop_map(move |codes| {
        Trace::from_bits(width, codes.into_iter().map(|c| Bits::from_code(c, width))).unwrap()
    })
}

proptest! {
    #[test]
    fn concat_projects_back_to_the_box(
        (bt, bi) in machine(1, 5),
        (wt, wi) in machine(2, 4),
        len in 1usize..40,
    ) {
        let bx = fsm_box(bt, bi).unwrap();
        let dof = WhiteBoxDof::new(wt, wi).unwrap();
        let joint = concat(bx.clone(), dof.clone()).run(len);
        prop_assert_eq!(joint.width(), 3);
        prop_assert_eq!(joint.project(&[0]).unwrap(), bx.clone().run(len));
        prop_assert_eq!(joint.project(&[1, 2]).unwrap(), dof.predict(len));
    }

    #[test]
    fn fsm_runs_replay((t, i) in machine(2, 6), len in 0usize..50) {
        let a = fsm_box(t.clone(), i).unwrap().run(len);
        let b = fsm_box(t.clone(), i).unwrap().run(len);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a, t.run(i, len));
    }

    #[test]
    fn stepping_is_pure((t, i) in machine(1, 4), len in 1usize..20) {
        let bx = fsm_box(t, i).unwrap();
        let (after, first) = bx.step();
        prop_assert_eq!(bx.ticks(), 0);
        prop_assert_eq!(after.ticks(), 1);
        let replay = bx.clone().run(len);
        prop_assert_eq!(&replay.outcomes()[0], &first);
    }

    #[test]
    fn trap_contract(
        trigger in 0u64..30,
        pairs in 1usize..4,
        seed in any::<u64>(),
        correlated in any::<bool>(),
    ) {
        let width = 2 * pairs;
        let mode = if correlated { TrapMode::Correlated } else { TrapMode::Random };
        let t = make_trap_box(trigger, width, mode, seed).unwrap().run(trigger as usize + 20);
        let pattern = trap_pattern(width);
        for (k, bits) in t.bits().enumerate() {
            if (k as u64) < trigger {
                prop_assert_eq!(bits, &pattern);
            } else if correlated {
                let first = bits.get(0).unwrap();
                prop_assert!(bits.as_slice().iter().all(|&b| b == first));
            }
        }
        let again = make_trap_box(trigger, width, mode, seed).unwrap().run(trigger as usize + 20);
        prop_assert_eq!(t, again);
    }

    #[test]
    fn enumerated_hypotheses_replay_the_trace(t in trace(1, 7), s_max in 1usize..=3) {
        let en = enumerate_consistent_machines(&t, s_max).unwrap();
        for h in &en.hypotheses {
            prop_assert!(h.is_consistent_with(&t));
            prop_assert!(h.size() <= s_max);
            let twin = divergent_extension(h, t.len());
            prop_assert!(twin.is_consistent_with(&t));
            prop_assert!(!twin.equivalent(h));
        }
        let keys = en.keys();
        prop_assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn canonical_key_ignores_state_names((t, i) in machine(1, 5), rot in 0usize..5) {
        let s = t.size();
        let perm = |x: usize| (x + rot) % s;
        let mut outputs = vec![Bits::zeros(1); s];
        let mut next = vec![0; s];
        for q in 0..s {
            outputs[perm(q)] = t.output(q).clone();
            next[perm(q)] = perm(t.next(q));
        }
        let renamed = MooreTable::new(1, outputs, next).unwrap();
        let a = MachineHypothesis::new(t, i).unwrap();
        let b = MachineHypothesis::new(renamed, perm(i)).unwrap();
        prop_assert_eq!(a.canonical_key(), b.canonical_key());
        prop_assert!(a.equivalent(&b));
    }

    #[test]
    fn ledger_is_linear_in_bits(a in 0u64..1_000_000, b in 0u64..1_000_000, temp in 1.0f64..1e4, dt in 1e-6f64..1e3) {
        let (ea, sa) = landauer_action(a, temp, dt).unwrap();
        let (eb, sb) = landauer_action(b, temp, dt).unwrap();
        let (e, s) = landauer_action(a + b, temp, dt).unwrap();
        let direct = (a + b) as f64 * LANDAUER_FACTOR * BOLTZMANN * temp;
        prop_assert!((e - direct).abs() <= 1e-12 * direct.max(f64::MIN_POSITIVE));
        prop_assert!((e - (ea + eb)).abs() <= 1e-12 * e.max(f64::MIN_POSITIVE));
        prop_assert!((s - (sa + sb)).abs() <= 1e-12 * s.max(f64::MIN_POSITIVE));
        let (_, theta) = landauer_action(1, temp, dt).unwrap();
        prop_assert!((observer_temperature(theta, dt).unwrap() - temp).abs() <= 1e-9 * temp);
    }

    #[test]
    fn encoded_states_stay_normalized(
        t in trace(2, 60),
        angle in 0.0f64..std::f64::consts::FRAC_PI_2,
        phi in -10.0f64..10.0,
        linear in any::<bool>(),
        dt in 0.01f64..5.0,
    ) {
        let phase = if linear { PhaseFn::linear(phi) } else { PhaseFn::constant(phi) };
        let spec = PropagatorSpec {
            alpha0: angle.cos(),
            alpha1: angle.sin(),
            schedule: PhaseSchedule::antisymmetric(phase, dt),
            variant: Variant::NormalizedPhase,
        };
        for tick in encode_trace(&t, &[spec, spec]).unwrap() {
            prop_assert!(tick.observed.normalization_error() <= 1e-12);
            prop_assert!(tick.unobserved.normalization_error() <= 1e-12);
            prop_assert!(tick.unitarity_defects.iter().all(|&d| d <= 1e-12));
        }
        if !t.is_empty() {
            let fit = born_fit(&t, 1).unwrap();
            prop_assert_eq!(fit.alpha0_sq + fit.alpha1_sq, 1.0);
        }
    }
}
