use std::collections::BTreeSet;
use std::f64::consts::LN_2;

use serde_json::json;

use super::config::{
    ConcatParams, LedgerParams, QuantumParams, Scenario, ScenarioConfig, TrapParams,
    TwoObserverParams, UnderdeterminationParams,
};
use super::report::{Report, ReportBuilder};
use super::HarnessError;
use crate::boxkit::{concat, make_trap_box, simulate_with_states, Bits, Trace, TrapMode};
use crate::inference::{
    divergent_extension, enumerate_consistent_machines, independence_test, refute_separability,
    unrolled_hypothesis, Partition, Verdict,
};
use crate::observer::{
    landauer_action, observer_temperature, ObserverConfig, ObserverError, ObserverState,
};
use crate::quantum::{
    born_fit, build_povm, encode_trace, phase_anticorrelation_check, povm_diagnostics,
    time_reversal_check_with, PropagatorSpec, Variant, NORM_TOLERANCE,
};
use crate::seed::{self, Component};

/// Runs below this count record the mean resample count without checking it.
const MIN_RUNS_FOR_MEAN: u64 = 20;

/// Validates `config` and runs its scenario.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Report, HarnessError> {
    config.validate()?;
    let mut rb = ReportBuilder::default();
    let box_seed = seed::split(config.seed, Component::Box);
    match &config.scenario {
        Scenario::Underdetermination(p) => underdetermination(p, box_seed, &mut rb)?,
        Scenario::TrapRefutation(p) => trap_refutation(p, config.seed, &mut rb)?,
        Scenario::Concat(p) => concat_columns(p, box_seed, &mut rb)?,
        Scenario::TwoObservers(p) => two_observers(p, box_seed, &mut rb)?,
        Scenario::QuantumPipeline(p) => quantum_pipeline(p, box_seed, &mut rb)?,
        Scenario::LandauerLedger(p) => landauer_ledger(p, box_seed, &mut rb)?,
    }
    Ok(rb.finish(config))
}

fn observer_for(cfg: &Option<ObserverConfig>, n: usize) -> Result<ObserverState, HarnessError> {
    let cfg = cfg.clone().unwrap_or_else(|| ObserverConfig::new(n));
    Ok(ObserverState::new(&cfg)?)
}

fn underdetermination(
    p: &UnderdeterminationParams,
    box_seed: u64,
    rb: &mut ReportBuilder,
) -> Result<(), HarnessError> {
    let mut bx = p.box_spec.build(box_seed)?;
    let mut obs = observer_for(&p.observer, bx.width())?;
    for _ in 0..p.length {
        let o = obs.observe(&mut bx)?;
        rb.step("observation", json!({ "k": o.k, "bits": o.bits }));
    }
    let trace = obs.log().clone();
    let en = enumerate_consistent_machines(&trace, p.s_max)?;
    let mut hypotheses = en.hypotheses.clone();
    if hypotheses.is_empty() {
        hypotheses.push(unrolled_hypothesis(&trace));
    }

    let mut classes = BTreeSet::new();
    let mut all_twinned = true;
    for h in &hypotheses {
        let twin = divergent_extension(h, trace.len());
        let consistent = twin.is_consistent_with(&trace);
        let distinct = !twin.equivalent(h);
        all_twinned &= consistent && distinct && h.is_consistent_with(&trace);
        classes.insert(h.canonical_key());
        classes.insert(twin.canonical_key());
        let next = |m: &crate::inference::MachineHypothesis| {
            m.replay(trace.len() + 1).outcomes()[trace.len()]
                .bits
                .clone()
        };
        rb.step(
            "hypothesis",
            json!({
                "hypothesis": h.canonical_key(),
                "states": h.canonical().size(),
                "predicts": next(h),
                "twin": twin.canonical_key(),
                "twin_states": twin.canonical().size(),
                "twin_predicts": next(&twin),
                "twin_consistent": consistent,
                "twin_non_equivalent": distinct,
            }),
        );
    }
    rb.check(
        "every_hypothesis_has_divergent_twin",
        all_twinned,
        format!("{} hypotheses at s_max={}", hypotheses.len(), p.s_max),
    );
    rb.check(
        "trace_underdetermines_machine",
        classes.len() >= 2,
        format!("{} non-equivalent consistent machines", classes.len()),
    );
    rb.verdict("hypothesis_count", en.len());
    rb.verdict("consistent_classes", classes.len());
    rb.verdict("enumeration_partial", en.partial);
    rb.verdict("trace", trace.to_string());
    rb.ledger(obs.ledger().snapshot());
    Ok(())
}

fn trap_refutation(p: &TrapParams, root: u64, rb: &mut ReportBuilder) -> Result<(), HarnessError> {
    let mut total_attempts = 0u64;
    let mut all_violated = true;
    let mut prefix_never_refutes = true;
    for r in 0..p.runs {
        let run_seed = root.wrapping_add(r);
        let (_, rec) = refute_separability(p.trigger, p.significance, run_seed, p.post_mode)?;
        total_attempts += rec.attempts;
        all_violated &= rec.prefix_matches_prediction && rec.prediction_violated();
        if let Some(v) = &rec.verdict_first_n {
            prefix_never_refutes &= v.verdict != Verdict::Dependent;
        }
        rb.step("refutation", &rec);
    }
    let mean = total_attempts as f64 / p.runs as f64;
    rb.check(
        "violation_at_step_n_plus_1",
        all_violated,
        format!(
            "prediction <1,0> broken at step {} in every run",
            p.trigger + 1
        ),
    );
    if p.post_mode == TrapMode::Correlated {
        rb.check(
            "first_n_outcomes_look_separable",
            prefix_never_refutes,
            "independence verdict over outcomes 1..N is never dependent",
        );
    }
    if p.runs >= MIN_RUNS_FOR_MEAN {
        rb.check(
            "mean_resamples_in_range",
            (1.0..=2.0).contains(&mean),
            format!("mean attempts {mean:.4} over {} runs", p.runs),
        );
    }
    rb.verdict("runs", p.runs);
    rb.verdict("mean_attempts", mean);
    rb.verdict(
        "expected_attempts",
        match p.post_mode {
            TrapMode::Random => 4.0 / 3.0,
            TrapMode::Correlated => 1.0,
        },
    );
    Ok(())
}

fn concat_columns(
    p: &ConcatParams,
    box_seed: u64,
    rb: &mut ReportBuilder,
) -> Result<(), HarnessError> {
    let bx = p.box_spec.build(box_seed)?;
    let dof = p.white.build()?;
    let nb = bx.width();
    let n = nb + dof.width();
    let mut composite = concat(bx.clone(), dof.clone());
    let mut obs = ObserverState::new(&ObserverConfig::new(n))?;
    for _ in 0..p.length {
        let o = obs.observe(&mut composite)?;
        rb.step("observation", json!({ "k": o.k, "bits": o.bits }));
    }
    let joint = obs.log();
    let box_cols: Vec<usize> = (0..nb).collect();
    let white_cols: Vec<usize> = (nb..n).collect();
    let stripped = joint.project(&box_cols)?;
    let alone = bx.clone().run(p.length);
    rb.check(
        "stripped_trace_equals_box_trace",
        stripped == alone,
        format!("{} ticks, box columns 0..{nb}", p.length),
    );
    let predicted = dof.predict(p.length);
    rb.check(
        "white_columns_predicted",
        joint.project(&white_cols)? == predicted,
        "white degree of freedom replays its known table",
    );
    let from_stripped = enumerate_consistent_machines(&stripped, p.s_max)?;
    let from_box = enumerate_consistent_machines(&alone, p.s_max)?;
    for key in from_stripped.keys() {
        rb.step("hypothesis", json!({ "hypothesis": key }));
    }
    rb.check(
        "hypothesis_sets_equal",
        from_stripped.keys() == from_box.keys(),
        format!(
            "{} vs {} classes at s_max={}",
            from_stripped.len(),
            from_box.len(),
            p.s_max
        ),
    );
    rb.verdict("hypothesis_count", from_stripped.len());
    rb.verdict(
        "enumeration_partial",
        from_stripped.partial || from_box.partial,
    );
    rb.ledger(obs.ledger().snapshot());
    Ok(())
}

/// `(o_k, o_{k+1})` pairs of a one-bit record, as a two-bit trace.
fn serial_pairs(log: &Trace) -> Result<Trace, HarnessError> {
    let bits: Vec<&Bits> = log.bits().collect();
    let pairs = bits.windows(2).map(|w| w[0].concat(w[1]));
    Ok(Trace::from_bits(2, pairs)?)
}

fn two_observers(
    p: &TwoObserverParams,
    box_seed: u64,
    rb: &mut ReportBuilder,
) -> Result<(), HarnessError> {
    let mut bx = make_trap_box(p.trigger, 2, TrapMode::Correlated, box_seed)?;
    let mut observers = [observer_for(&p.observer, 1)?, observer_for(&p.observer, 1)?];
    let mut joint = Trace::new(2);
    for _ in 0..p.observations {
        let o = bx.advance();
        let a = observers[0].record(o.bits.select(&[0]))?;
        let b = observers[1].record(o.bits.select(&[1]))?;
        rb.step(
            "tick",
            json!({ "k": o.k, "observer_a": a.bits, "observer_b": b.bits }),
        );
        joint.push_bits(o.bits)?;
    }

    let skip = p.trigger as usize;
    let mut marginal_ok = true;
    let mut coins_ok = true;
    for (name, obs) in ["observer_a", "observer_b"].iter().zip(&observers) {
        let serial = serial_pairs(obs.log())?;
        let verdict = if serial.is_empty() {
            None
        } else {
            Some(independence_test(
                &serial,
                &Partition::split_at(2, 1)?,
                p.significance,
            )?)
        };
        marginal_ok &= verdict
            .as_ref()
            .is_none_or(|v| v.verdict != Verdict::Dependent);
        let post: Trace = Trace::from_bits(1, obs.log().bits().skip(skip).cloned())?;
        let coin = if post.is_empty() {
            None
        } else {
            Some(born_fit(&post, 0)?)
        };
        if let Some(c) = &coin {
            coins_ok &= (c.alpha1_sq - 0.5).abs() <= c.confidence_halfwidth.max(f64::EPSILON);
        }
        rb.verdict(&format!("{name}_serial"), &verdict);
        rb.verdict(&format!("{name}_coin"), &coin);
        rb.ledger(obs.ledger().snapshot());
    }
    rb.check(
        "marginals_show_no_dependence",
        marginal_ok,
        "lag-1 test on each observer's own record is degenerate or independent",
    );
    rb.check(
        "marginals_fit_fair_coin",
        coins_ok,
        "each post-trigger record matches p=1/2 within 3 sigma",
    );

    let suffix = Trace::from_bits(2, joint.bits().skip(skip).cloned())?;
    if suffix.is_empty() {
        rb.check("joint_trace_dependent", false, "no post-trigger outcomes");
    } else {
        let v = independence_test(&suffix, &Partition::split_at(2, 1)?, p.significance)?;
        let expected = 2.0 * suffix.len() as f64 * LN_2;
        let rel = (v.g_statistic - expected).abs() / expected;
        rb.check(
            "joint_trace_dependent",
            v.verdict == Verdict::Dependent && rel <= 0.05,
            format!(
                "G = {:.4}, 2N ln 2 = {expected:.4}, relative gap {rel:.4}",
                v.g_statistic
            ),
        );
        rb.verdict("joint", &v);
    }
    Ok(())
}

fn quantum_pipeline(
    p: &QuantumParams,
    box_seed: u64,
    rb: &mut ReportBuilder,
) -> Result<(), HarnessError> {
    let mut bx = p.box_spec.build(box_seed)?;
    let n = bx.width();
    let (trace, log) = simulate_with_states(&mut bx, p.length);
    let visited = log.visited().expect("length validated positive");

    let mut povm_ok = true;
    for i in 0..n {
        match build_povm(&trace, i, &visited, &log.labels) {
            Ok(povm) => {
                let d = povm_diagnostics(&povm, &visited);
                povm_ok &= d.orthogonal && d.resolves_identity;
                let domains = (visited.len() <= 64)
                    .then(|| json!({ "domain0": povm.domain0, "domain1": povm.domain1 }));
                rb.step(
                    "povm",
                    json!({
                        "bit_index": i,
                        "states": visited.len(),
                        "domain0_size": povm.domain0.len(),
                        "domain1_size": povm.domain1.len(),
                        "domains": domains,
                        "diagnostics": d,
                    }),
                );
            }
            Err(e) => {
                povm_ok = false;
                rb.step("povm", json!({ "bit_index": i, "error": e.to_string() }));
            }
        }
    }
    rb.check(
        "povm_partitions_visited_states",
        povm_ok,
        format!("{} visited hidden states, {n} bit positions", visited.len()),
    );

    let specs: Vec<PropagatorSpec> = if p.propagators.len() == 1 {
        vec![p.propagators[0].to_spec()?; n]
    } else {
        p.propagators
            .iter()
            .map(|c| c.to_spec())
            .collect::<Result<_, _>>()?
    };
    let encoded = encode_trace(&trace, &specs)?;
    let mut norm_err = 0.0f64;
    let mut defect_err = 0.0f64;
    for tick in &encoded {
        norm_err = norm_err
            .max(tick.observed.normalization_error())
            .max(tick.unobserved.normalization_error());
        for (d, s) in tick.unitarity_defects.iter().zip(&specs) {
            let expected = match s.variant {
                Variant::NormalizedPhase => 0.0,
                Variant::PaperLiteral => (s.alpha0 * s.alpha0 - 1.0)
                    .abs()
                    .max((s.alpha1 * s.alpha1 - 1.0).abs()),
            };
            defect_err = defect_err.max((d - expected).abs());
        }
        rb.step("state", tick);
    }
    rb.check(
        "pair_normalization",
        norm_err <= NORM_TOLERANCE,
        format!("max | |a0|^2 + |a1|^2 - 1 | = {norm_err:e}"),
    );
    rb.check(
        "unitarity_defect_matches_variant",
        defect_err <= NORM_TOLERANCE,
        format!("max deviation from expected defect {defect_err:e}"),
    );
    let anticorrelated = specs
        .iter()
        .all(|s| phase_anticorrelation_check(&s.schedule, p.length as u64));
    rb.check(
        "phase_anticorrelation",
        anticorrelated,
        format!("phi0 t + phi1 t = 0 mod 2 pi for k <= {}", p.length),
    );

    let mut born_ok = true;
    let mut fits = Vec::with_capacity(n);
    for i in 0..n {
        let fit = born_fit(&trace, i)?;
        born_ok &= fit.alpha0_sq + fit.alpha1_sq == 1.0;
        fits.push(fit);
    }
    rb.check(
        "born_weights_sum_to_one",
        born_ok,
        "alpha0^2 + alpha1^2 = 1 per bit",
    );
    rb.verdict("born_fits", &fits);

    let unitary = PropagatorSpec {
        variant: Variant::NormalizedPhase,
        ..specs[0]
    };
    let rev = time_reversal_check_with(&trace, &unitary)?;
    rb.check(
        "time_reversal",
        rev.passed(),
        format!("round-trip error {:e}", rev.round_trip_error),
    );
    rb.verdict("time_reversal", &rev);
    rb.verdict("hidden_states", visited.len());
    Ok(())
}

fn landauer_ledger(
    p: &LedgerParams,
    box_seed: u64,
    rb: &mut ReportBuilder,
) -> Result<(), HarnessError> {
    let mut bx = p.box_spec.build(box_seed)?;
    let mut obs = ObserverState::new(&p.observer)?;
    let mut completed = 0usize;
    for _ in 0..p.observations {
        match obs.observe(&mut bx) {
            Ok(o) => {
                completed += 1;
                let l = obs.ledger();
                rb.step(
                    "observation",
                    json!({
                        "k": o.k,
                        "t": obs.clock().t(),
                        "bits": o.bits,
                        "bits_recorded": l.bits_recorded(),
                        "energy_total": l.energy_total(),
                        "action_total": l.action_total(),
                    }),
                );
            }
            Err(ObserverError::EnergyExhausted { needed, budget }) => {
                rb.verdict(
                    "halted",
                    json!({ "after": completed, "needed": needed, "budget": budget }),
                );
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    rb.check(
        "observations_completed",
        completed == p.observations,
        format!(
            "{completed} of {} observations within the energy budget",
            p.observations
        ),
    );

    let cfg = &p.observer;
    let bits = (completed * cfg.n) as u64;
    let (energy, action) = landauer_action(bits, cfg.temperature_kelvin, cfg.delta_t_seconds)?;
    let l = obs.ledger();
    let rel = |a: f64, b: f64| {
        if b == 0.0 {
            a.abs()
        } else {
            ((a - b) / b).abs()
        }
    };
    rb.check(
        "energy_linear_in_bits",
        l.bits_recorded() == bits && rel(l.energy_total(), energy) <= 1e-12,
        format!(
            "{bits} bits: ledger {:e} J, direct {energy:e} J",
            l.energy_total()
        ),
    );
    rb.check(
        "action_is_energy_times_interval",
        rel(l.action_total(), action) <= 1e-12,
        format!("ledger {:e} J s, direct {action:e} J s", l.action_total()),
    );
    let t_back = observer_temperature(l.theta(), cfg.delta_t_seconds)?;
    rb.check(
        "temperature_round_trip",
        rel(t_back, cfg.temperature_kelvin) <= 1e-9,
        format!("theta {:e} J s gives {t_back} K", l.theta()),
    );
    rb.verdict("energy_total", l.energy_total());
    rb.verdict("action_total", l.action_total());
    rb.ledger(l.snapshot());
    Ok(())
}
