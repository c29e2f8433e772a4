//! A trap box defeats any separability verdict drawn from N observations.

use blackbox::boxkit::TrapMode;
use blackbox::inference::{refute_separability, DEFAULT_SIGNIFICANCE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (_, rec) = refute_separability(100, DEFAULT_SIGNIFICANCE, 42, TrapMode::Random)?;
    println!(
        "N=100: first 100 outcomes all {} ({}), step {:?} gave {:?} after {} attempt(s)",
        rec.prediction,
        rec.prefix_matches_prediction,
        rec.violation_step,
        rec.violating_outcome.map(|b| b.to_string()),
        rec.attempts
    );

    let (_, rec) = refute_separability(50, DEFAULT_SIGNIFICANCE, 42, TrapMode::Correlated)?;
    let first = rec.verdict_first_n.as_ref().map(|v| v.verdict);
    let both = rec
        .verdict_first_2n
        .as_ref()
        .map(|v| (v.verdict, v.g_statistic));
    println!("correlated N=50: verdict over 1..N {first:?}, over 1..2N {both:?}");

    let attempts: Vec<u64> = (0..20)
        .map(|s| {
            refute_separability(100, DEFAULT_SIGNIFICANCE, s, TrapMode::Random)
                .map(|(_, r)| r.attempts)
        })
        .collect::<Result<_, _>>()?;
    let mean = attempts.iter().sum::<u64>() as f64 / attempts.len() as f64;
    println!("attempts over 20 seeds: {attempts:?}, mean {mean:.2} (expected 4/3)");
    Ok(())
}
