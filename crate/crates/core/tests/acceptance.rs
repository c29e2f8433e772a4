//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, LN_2, TAU};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use blackbox::boxkit::{
    concat, fsm_box, make_stochastic_box, make_trap_box, simulate_with_states, MooreTable,
    TrapMode, WhiteBoxDof,
};
use blackbox::harness::{load_config, render_report, run_scenario, Scenario, ScenarioConfig};
use blackbox::inference::{
    divergent_extension, enumerate_consistent_machines, independence_test, Partition, Verdict,
};
use blackbox::observer::{landauer_action, observer_temperature};
use blackbox::quantum::{
    born_fit, build_povm, encode_trace, povm_diagnostics, reversal_hypothesis_counts,
    time_reversal_check, unitarity_defect, PhaseFn, PhaseSchedule, Propagator, PropagatorSpec,
    StateVector, Variant,
};
use blackbox::{Bits, Trace};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ac1_landauer() -> Outcome {
    let (energy, action) = landauer_action(1, 300.0, 1.0).map_err(|e| e.to_string())?;
    ensure((energy - 2.8994e-21).abs() <= 1e-24, || {
        format!("energy {energy:e}")
    })?;
    ensure((action - energy).abs() <= 1e-36, || {
        format!("action {action:e}")
    })?;
    let mut worst = 0.0f64;
    for i in 0..=1000 {
        let temp = 10f64.powf(4.0 * i as f64 / 1000.0);
        for dt in [1e-3, 1.0, 60.0] {
            let (_, theta) = landauer_action(1, temp, dt).map_err(|e| e.to_string())?;
            let back = observer_temperature(theta, dt).map_err(|e| e.to_string())?;
            worst = worst.max((back - temp).abs() / temp);
        }
    }
    ensure(worst <= 1e-9, || {
        format!("temperature round trip error {worst:e}")
    })?;
    Ok(format!(
        "E(1 bit, 300 K) = {energy:.5e} J, worst T round-trip {worst:.1e}"
    ))
}

fn ac2_underdetermination() -> Outcome {
    const MAX_LEN: usize = 8;
    let mut traces = 0;
    let mut hypotheses = 0;
    for s_max in 1..=3 {
        let sig_len = common::signature_len(MAX_LEN, s_max);
        let universe = common::all_signatures(1, s_max, sig_len);
        for len in 0..=MAX_LEN {
            for code in 0..(1u64 << len) {
                let trace =
                    Trace::from_bits(1, (0..len).map(|i| Bits::from_code((code >> i) & 1, 1)))
                        .map_err(|e| e.to_string())?;
                traces += 1;
                let en = enumerate_consistent_machines(&trace, s_max).map_err(|e| e.to_string())?;
                let got: BTreeSet<Vec<u64>> = en
                    .hypotheses
                    .iter()
                    .map(|h| h.replay(sig_len).codes())
                    .collect();
                let want = common::consistent_signatures(&universe, &trace.codes());
                ensure(!en.partial && got.len() == en.len() && got == want, || {
                    format!(
                        "trace {trace} s_max {s_max}: {} enumerated vs {} by brute force",
                        got.len(),
                        want.len()
                    )
                })?;
                for h in &en.hypotheses {
                    hypotheses += 1;
                    let twin = divergent_extension(h, trace.len());
                    ensure(
                        twin.is_consistent_with(&trace) && !twin.equivalent(h),
                        || format!("no divergent twin for {} on {trace}", h.canonical_key()),
                    )?;
                }
            }
        }
    }
    Ok(format!(
        "{traces} (trace, s_max) cases, {hypotheses} hypotheses twinned, oracle agrees"
    ))
}

fn ac3_trap_refutation() -> Outcome {
    let cfg = ScenarioConfig::from_json(
        r#"{"schema_version":1,"seed":1000,"scenario":{"id":"S2_trap_theorem1","N":100,"post_mode":"random","runs":20}}"#,
    )
    .map_err(|e| e.to_string())?;
    let report = run_scenario(&cfg).map_err(|e| e.to_string())?;
    let mut attempts = 0u64;
    for step in &report.steps {
        ensure(
            step["violation_step"] == 101 && step["prefix_matches_prediction"] == true,
            || format!("run without violation at 101: {step}"),
        )?;
        attempts += step["attempts"].as_u64().ok_or("attempts missing")?;
    }
    ensure(report.steps.len() == 20, || {
        format!("{} runs", report.steps.len())
    })?;
    let mean = attempts as f64 / 20.0;
    ensure((1.0..=2.0).contains(&mean), || {
        format!("mean attempts {mean}")
    })?;
    ensure(report.passed(), || "scenario checks failed".into())?;
    Ok(format!(
        "20/20 violations at step 101, mean attempts {mean:.3} (expected 4/3)"
    ))
}

fn ac4_independence_calibration() -> Outcome {
    const N: usize = 1000;
    let partition = Partition::split_at(2, 1).map_err(|e| e.to_string())?;
    let mut independent = 0;
    for seed in 0..1000u64 {
        let trace = make_stochastic_box(&[0.5, 0.5], seed)
            .map_err(|e| e.to_string())?
            .run(N);
        let v = independence_test(&trace, &partition, 0.01).map_err(|e| e.to_string())?;
        independent += usize::from(v.verdict == Verdict::Independent);
    }
    ensure(independent >= 980, || {
        format!("independent in {independent}/1000")
    })?;
    let expected = 2.0 * N as f64 * LN_2;
    let mut worst = 0.0f64;
    for seed in 0..1000u64 {
        let trace = make_trap_box(0, 2, TrapMode::Correlated, seed)
            .map_err(|e| e.to_string())?
            .run(N);
        let v = independence_test(&trace, &partition, 0.01).map_err(|e| e.to_string())?;
        ensure(v.verdict == Verdict::Dependent, || {
            format!("seed {seed}: correlated bits judged {:?}", v.verdict)
        })?;
        worst = worst.max((v.g_statistic - expected).abs() / expected);
    }
    ensure(worst <= 0.05, || format!("G off by {worst:.4} relative"))?;
    Ok(format!(
        "independent {independent}/1000; correlated dependent 1000/1000, worst G gap {:.2}%",
        100.0 * worst
    ))
}

fn random_table(rng: &mut ChaCha8Rng, width: usize, max_states: usize) -> (MooreTable, usize) {
    let s = rng.random_range(1..=max_states);
    let outputs = (0..s)
        .map(|_| Bits::from_code(rng.random_range(0..1u64 << width), width))
        .collect();
    let next = (0..s).map(|_| rng.random_range(0..s)).collect();
    (
        MooreTable::new(width, outputs, next).expect("valid table"),
        rng.random_range(0..s),
    )
}

fn ac5_column_stripping() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut total_classes = 0;
    let mut ambiguous = 0;
    for pair in 0..50 {
        let width = rng.random_range(1..=2);
        let (bt, bi) = random_table(&mut rng, width, 4);
        let dof_width = rng.random_range(1..=3);
        let (wt, wi) = random_table(&mut rng, dof_width, 5);
        let bx = fsm_box(bt, bi).map_err(|e| e.to_string())?;
        let dof = WhiteBoxDof::new(wt, wi).map_err(|e| e.to_string())?;
        let len = rng.random_range(2..=10);
        let s_max = 4;
        let joint = concat(bx.clone(), dof).run(len);
        let cols: Vec<usize> = (0..width).collect();
        let stripped = joint.project(&cols).map_err(|e| e.to_string())?;
        let alone = bx.clone().run(len);
        let a = enumerate_consistent_machines(&stripped, s_max).map_err(|e| e.to_string())?;
        let b = enumerate_consistent_machines(&alone, s_max).map_err(|e| e.to_string())?;
        ensure(a.keys() == b.keys(), || {
            format!("pair {pair}: hypothesis sets differ")
        })?;
        total_classes += a.len();
        ambiguous += usize::from(a.len() >= 2);
    }
    Ok(format!(
        "50/50 pairs give identical hypothesis sets ({total_classes} classes, {ambiguous} pairs with several)"
    ))
}

fn ac6_quantum_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut states = 0usize;
    for trial in 0..4u64 {
        let width = 3;
        let p: Vec<f64> = (0..width).map(|_| rng.random_range(0.05..0.95)).collect();
        let trace = make_stochastic_box(&p, trial)
            .map_err(|e| e.to_string())?
            .run(10_000);
        let specs: Vec<PropagatorSpec> = (0..width)
            .map(|i| {
                let angle: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
                let phi: f64 = rng.random_range(-5.0..5.0);
                PropagatorSpec {
                    alpha0: angle.cos(),
                    alpha1: angle.sin(),
                    schedule: PhaseSchedule::antisymmetric(
                        if i % 2 == 0 {
                            PhaseFn::constant(phi)
                        } else {
                            PhaseFn::linear(phi)
                        },
                        0.1,
                    ),
                    variant: if trial % 2 == 0 {
                        Variant::NormalizedPhase
                    } else {
                        Variant::PaperLiteral
                    },
                }
            })
            .collect();
        for tick in encode_trace(&trace, &specs).map_err(|e| e.to_string())? {
            states += 2;
            let err = tick
                .observed
                .normalization_error()
                .max(tick.unobserved.normalization_error());
            ensure(err <= 1e-12, || {
                format!("normalization error {err:e} at k={}", tick.k)
            })?;
            for (d, s) in tick.unitarity_defects.iter().zip(&specs) {
                let want = match s.variant {
                    Variant::NormalizedPhase => 0.0,
                    Variant::PaperLiteral => (s.alpha0.powi(2) - 1.0)
                        .abs()
                        .max((s.alpha1.powi(2) - 1.0).abs()),
                };
                ensure((d - want).abs() <= 1e-12, || {
                    format!("defect {d} vs {want} at k={}", tick.k)
                })?;
            }
        }
    }
    let literal = Propagator::new(PropagatorSpec {
        alpha0: FRAC_1_SQRT_2,
        alpha1: FRAC_1_SQRT_2,
        variant: Variant::PaperLiteral,
        ..PropagatorSpec::default()
    })
    .map_err(|e| e.to_string())?;
    for k in 0..10_000 {
        let d = unitarity_defect(&literal, k);
        ensure((d - 0.5).abs() <= 1e-12, || {
            format!("literal defect {d} at k={k}")
        })?;
    }

    // Every labelling of every cycle up to 12 states, then random labellings up to 64.
    let mut povms = 0;
    let mut check_cycle = |outputs: Vec<Bits>, width: usize| -> Result<(), String> {
        let s = outputs.len();
        let mut bx = fsm_box(
            MooreTable::cycle(width, outputs).map_err(|e| e.to_string())?,
            0,
        )
        .map_err(|e| e.to_string())?;
        let (trace, log) = simulate_with_states(&mut bx, 2 * s);
        let visited = log.visited().ok_or("empty log")?;
        ensure(visited.len() == s, || {
            format!("{} states visited of {s}", visited.len())
        })?;
        for i in 0..width {
            let povm = build_povm(&trace, i, &visited, &log.labels).map_err(|e| e.to_string())?;
            let d = povm_diagnostics(&povm, &visited);
            ensure(d.orthogonal && d.resolves_identity, || {
                format!("POVM fails on {s} states: {d:?}")
            })?;
            povms += 1;
        }
        Ok(())
    };
    for s in 1..=12usize {
        for code in 0..(1u64 << s) {
            check_cycle(
                (0..s)
                    .map(|j| Bits::from_code((code >> j) & 1, 1))
                    .collect(),
                1,
            )?;
        }
    }
    for s in 13..=64usize {
        for _ in 0..20 {
            check_cycle(
                (0..s)
                    .map(|_| Bits::from_code(rng.random_range(0..4), 2))
                    .collect(),
                2,
            )?;
        }
    }
    Ok(format!("{states} state vectors normalized, defects as expected, {povms} POVMs partition their state sets"))
}

fn ac7_born_fit() -> Outcome {
    let mut inside = 0;
    for seed in 0..1000u64 {
        let trace = make_stochastic_box(&[0.3], seed)
            .map_err(|e| e.to_string())?
            .run(10_000);
        let fit = born_fit(&trace, 0).map_err(|e| e.to_string())?;
        ensure(fit.alpha0_sq + fit.alpha1_sq == 1.0, || {
            "weights do not sum to 1".into()
        })?;
        inside += usize::from((fit.alpha1_sq - 0.3).abs() <= 0.014);
    }
    ensure(inside >= 990, || {
        format!("{inside}/1000 within 0.3 +/- 0.014")
    })?;
    Ok(format!("{inside}/1000 fits within 0.3 +/- 0.014"))
}

fn ac8_time_symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..=4);
        let pairs = (0..n)
            .map(|_| {
                let theta: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
                [
                    Complex64::from_polar(theta.cos(), rng.random_range(0.0..TAU)),
                    Complex64::from_polar(theta.sin(), rng.random_range(0.0..TAU)),
                ]
            })
            .collect();
        let k = rng.random_range(0..100_000u64);
        let phase = if rng.random_bool(0.5) {
            PhaseFn::constant(rng.random_range(-10.0..10.0))
        } else {
            PhaseFn::linear(rng.random_range(-1.0..1.0))
        };
        let dt = rng.random_range(0.01..2.0);
        let v = StateVector {
            pairs,
            t: k as f64 * dt,
        };
        let prop = Propagator::new(PropagatorSpec {
            schedule: PhaseSchedule::antisymmetric(phase, dt),
            ..PropagatorSpec::default()
        })
        .map_err(|e| e.to_string())?;
        let back = prop
            .apply_inverse(&prop.apply(&v, k), k)
            .map_err(|e| e.to_string())?;
        worst = worst.max(back.distance(&v));
    }
    ensure(worst <= 1e-12, || format!("round trip error {worst:e}"))?;

    let mut reversed = 0;
    for len in 0..=8usize {
        for code in 0..(1u64 << len) {
            let t = Trace::from_bits(1, (0..len).map(|i| Bits::from_code((code >> i) & 1, 1)))
                .map_err(|e| e.to_string())?;
            let r = time_reversal_check(&t).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("reversal of {t} failed"))?;
            reversed += 1;
        }
    }
    for seed in 0..50u64 {
        let width = 1 + (seed as usize % 3);
        let t = make_stochastic_box(&vec![0.5; width], seed)
            .map_err(|e| e.to_string())?
            .run(200);
        ensure(
            time_reversal_check(&t).map_err(|e| e.to_string())?.passed(),
            || format!("seed {seed}"),
        )?;
        reversed += 1;
    }
    let alt = fsm_box(MooreTable::alternator(), 0)
        .map_err(|e| e.to_string())?
        .run(10);
    let (f, r) = reversal_hypothesis_counts(&alt, 2).map_err(|e| e.to_string())?;
    ensure(f == r, || {
        format!("alternator: {f} forward vs {r} reversed hypotheses")
    })?;
    Ok(format!(
        "1000 round trips (worst {worst:.1e}), {reversed} reversed traces consistent"
    ))
}

fn numbers_close(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            if x.is_f64() || y.is_f64() {
                let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
                x == y || (x - y).abs() <= 1e-12 * x.abs().max(y.abs())
            } else {
                x == y
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(p, q)| numbers_close(p, q))
        }
        (Value::Object(x), Value::Object(y)) => {
            x.len() == y.len()
                && x.iter()
                    .all(|(k, v)| y.get(k).is_some_and(|w| numbers_close(v, w)))
        }
        _ => a == b,
    }
}

fn ac9_reproducibility() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut runs = 0;
    for entry in std::fs::read_dir(&dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let base = load_config(&path).map_err(|e| e.to_string())?;
        for seed in [base.seed, 17, 123_456_789] {
            let mut cfg = base.clone();
            cfg.seed = seed;
            if let Scenario::TrapRefutation(p) = &mut cfg.scenario {
                p.runs = p.runs.min(5);
            }
            let a = run_scenario(&cfg).map_err(|e| e.to_string())?;
            let b = run_scenario(&cfg).map_err(|e| e.to_string())?;
            let ta = serde_json::to_value(&a.trailer).map_err(|e| e.to_string())?;
            let tb = serde_json::to_value(&b.trailer).map_err(|e| e.to_string())?;
            ensure(
                numbers_close(&ta, &tb) && a.steps.len() == b.steps.len(),
                || format!("{} seed {seed}: trailers differ", cfg.id()),
            )?;
            ensure(
                a.steps
                    .iter()
                    .zip(&b.steps)
                    .all(|(x, y)| numbers_close(x, y)),
                || format!("{} seed {seed}: steps differ", cfg.id()),
            )?;
            ensure(
                render_report(&a, Default::default()) == render_report(&b, Default::default()),
                || format!("{} seed {seed}: rendered reports differ", cfg.id()),
            )?;
            runs += 1;
        }
    }
    ensure(runs == 18, || format!("{runs} scenario runs"))?;
    Ok(format!("{runs} scenario/seed pairs re-run identically"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 landauer", ac1_landauer),
        ("AC2 underdetermination", ac2_underdetermination),
        ("AC3 trap refutation", ac3_trap_refutation),
        ("AC4 independence calibration", ac4_independence_calibration),
        ("AC5 column stripping", ac5_column_stripping),
        ("AC6 quantum invariants", ac6_quantum_invariants),
        ("AC7 born fit", ac7_born_fit),
        ("AC8 time symmetry", ac8_time_symmetry),
        ("AC9 reproducibility", ac9_reproducibility),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{ms} ms]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{ms} ms]");
            }
        }
    }
    println!("{} of 9 acceptance criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
