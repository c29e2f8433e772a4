//! G-test of independence between two groups of outcome bits.
//!
//! `G = 2 * sum O_ij ln(O_ij N / (R_i C_j)) = 2 N I(group1; group2)` with the
//! mutual information in nats, compared against the chi-square quantile with
//! `(r - 1)(c - 1)` degrees of freedom, where `r` and `c` count the distinct
//! values each group actually took.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::InferenceError;
use crate::boxkit::Trace;

pub const DEFAULT_SIGNIFICANCE: f64 = 0.01;

/// Two disjoint, nonempty groups of bit positions covering `0..width`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    group1: Vec<usize>,
    group2: Vec<usize>,
}

impl Partition {
    pub fn new(
        width: usize,
        group1: Vec<usize>,
        group2: Vec<usize>,
    ) -> Result<Self, InferenceError> {
        let invalid = |why: &str| InferenceError::InvalidPartition(why.to_string());
        if group1.is_empty() || group2.is_empty() {
            return Err(invalid("both groups must be nonempty"));
        }
        let mut seen = BTreeSet::new();
        for &p in group1.iter().chain(&group2) {
            if p >= width {
                return Err(invalid(&format!("position {p} outside width {width}")));
            }
            if !seen.insert(p) {
                return Err(invalid(&format!("position {p} appears twice")));
            }
        }
        if seen.len() != width {
            return Err(invalid("groups do not cover every position"));
        }
        Ok(Partition { group1, group2 })
    }

    /// Positions `0..at` against `at..width`.
    pub fn split_at(width: usize, at: usize) -> Result<Self, InferenceError> {
        Partition::new(width, (0..at).collect(), (at..width).collect())
    }

    pub fn group1(&self) -> &[usize] {
        &self.group1
    }

    pub fn group2(&self) -> &[usize] {
        &self.group2
    }

    fn width(&self) -> usize {
        self.group1.len() + self.group2.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Independent,
    Dependent,
    /// One group never varied, so the data support no inference either way.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceVerdict {
    pub partition: Partition,
    pub g_statistic: f64,
    pub threshold: f64,
    pub degrees_of_freedom: usize,
    pub significance: f64,
    pub sample_count: usize,
    pub verdict: Verdict,
}

/// Joint counts of (group1 value, group2 value).
pub type JointHistogram = BTreeMap<(u64, u64), u64>;

pub fn joint_histogram(trace: &Trace, partition: &Partition) -> JointHistogram {
    let mut hist = JointHistogram::new();
    for b in trace.bits() {
        let key = (
            b.select(&partition.group1).to_code(),
            b.select(&partition.group2).to_code(),
        );
        *hist.entry(key).or_insert(0) += 1;
    }
    hist
}

pub fn independence_test(
    trace: &Trace,
    partition: &Partition,
    significance: f64,
) -> Result<IndependenceVerdict, InferenceError> {
    if trace.is_empty() {
        return Err(InferenceError::EmptyTrace);
    }
    if partition.width() != trace.width() {
        return Err(InferenceError::InvalidPartition(format!(
            "partition covers {} positions, trace has {}",
            partition.width(),
            trace.width()
        )));
    }
    let hist = joint_histogram(trace, partition);
    verdict_from_histogram(&hist, partition.clone(), significance)
}

/// The verdict depends on the trace only through its joint histogram.
pub fn verdict_from_histogram(
    hist: &JointHistogram,
    partition: Partition,
    significance: f64,
) -> Result<IndependenceVerdict, InferenceError> {
    if !(significance > 0.0 && significance < 1.0) {
        return Err(InferenceError::Significance(significance));
    }
    let mut rows: BTreeMap<u64, u64> = BTreeMap::new();
    let mut cols: BTreeMap<u64, u64> = BTreeMap::new();
    let mut n = 0u64;
    for (&(a, b), &c) in hist {
        *rows.entry(a).or_insert(0) += c;
        *cols.entry(b).or_insert(0) += c;
        n += c;
    }
    if n == 0 {
        return Err(InferenceError::EmptyTrace);
    }
    let dof = (rows.len() - 1) * (cols.len() - 1);
    if dof == 0 {
        return Ok(IndependenceVerdict {
            partition,
            g_statistic: 0.0,
            threshold: 0.0,
            degrees_of_freedom: 0,
            significance,
            sample_count: n as usize,
            verdict: Verdict::Degenerate,
        });
    }
    let total = n as f64;
    let g: f64 = 2.0
        * hist
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&(a, b), &c)| {
                let o = c as f64;
                o * (o * total / (rows[&a] as f64 * cols[&b] as f64)).ln()
            })
            .sum::<f64>();
    let g = g.max(0.0);
    let threshold = ChiSquared::new(dof as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(1.0 - significance);
    Ok(IndependenceVerdict {
        partition,
        g_statistic: g,
        threshold,
        degrees_of_freedom: dof,
        significance,
        sample_count: n as usize,
        verdict: if g > threshold {
            Verdict::Dependent
        } else {
            Verdict::Independent
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxkit::{make_stochastic_box, Bits};

    /// 2x2 G statistic via expected counts under independence.
    fn g_2x2(o: [f64; 4]) -> f64 {
        let [o1, o2, o3, o4] = o;
        let t = o1 + o2 + o3 + o4;
        let e = [
            (o1 + o2) * (o1 + o3) / t,
            (o1 + o2) * (o2 + o4) / t,
            (o3 + o4) * (o1 + o3) / t,
            (o3 + o4) * (o2 + o4) / t,
        ];
        o.iter()
            .zip(e)
            .filter(|(&x, _)| x > 0.0)
            .map(|(&x, ex)| 2.0 * x * (x / ex).ln())
            .sum()
    }

    fn trace_of(pairs: &[(bool, bool)]) -> Trace {
        Trace::from_bits(2, pairs.iter().map(|&(a, b)| Bits::new(vec![a, b]))).unwrap()
    }

    #[test]
    fn constant_pattern_is_degenerate() {
        let t = trace_of(&[(true, false); 1000]);
        let v = independence_test(&t, &Partition::split_at(2, 1).unwrap(), 0.01).unwrap();
        assert_eq!(v.verdict, Verdict::Degenerate);
        assert_eq!(v.g_statistic, 0.0);
    }

    #[test]
    fn matches_expected_count_formula() {
        // counts for (a,b) = (0,0) x 30, (0,1) x 10, (1,0) x 5, (1,1) x 55
        let mut pairs = Vec::new();
        pairs.extend(std::iter::repeat_n((false, false), 30));
        pairs.extend(std::iter::repeat_n((false, true), 10));
        pairs.extend(std::iter::repeat_n((true, false), 5));
        pairs.extend(std::iter::repeat_n((true, true), 55));
        let v = independence_test(&trace_of(&pairs), &Partition::split_at(2, 1).unwrap(), 0.01)
            .unwrap();
        // table layout for g_2x2: o1=(a0,b0) o2=(a1,b0) o3=(a0,b1) o4=(a1,b1)
        let expected = g_2x2([30.0, 5.0, 10.0, 55.0]);
        assert!(
            (v.g_statistic - expected).abs() < 1e-9,
            "{} vs {expected}",
            v.g_statistic
        );
        assert_eq!(v.degrees_of_freedom, 1);
        assert!((v.threshold - 6.634_896_601).abs() < 1e-6);
        assert_eq!(v.verdict, Verdict::Dependent);
    }

    #[test]
    fn perfectly_correlated_fair_bits() {
        let mut bx = make_stochastic_box(&[0.5], 3).unwrap();
        let coin = bx.run(1000);
        let t = Trace::from_bits(2, coin.bits().map(|b| b.concat(b))).unwrap();
        let v = independence_test(&t, &Partition::split_at(2, 1).unwrap(), 0.01).unwrap();
        assert_eq!(v.verdict, Verdict::Dependent);
        let ideal = 2.0 * 1000.0 * std::f64::consts::LN_2;
        assert!((v.g_statistic - ideal).abs() < 0.05 * ideal);
        // Exact: G = 2 N H(p_hat) for a duplicated bit.
        let ones = coin.bits().filter(|b| b.get(0) == Some(true)).count() as f64 / 1000.0;
        let h = -(ones * ones.ln() + (1.0 - ones) * (1.0 - ones).ln());
        assert!((v.g_statistic - 2000.0 * h).abs() < 1e-9);
    }

    #[test]
    fn order_does_not_matter() {
        let mut bx = make_stochastic_box(&[0.4, 0.7, 0.5], 8).unwrap();
        let t = bx.run(300);
        let p = Partition::new(3, vec![2], vec![0, 1]).unwrap();
        let fwd = independence_test(&t, &p, 0.05).unwrap();
        let rev = independence_test(&t.reversed(), &p, 0.05).unwrap();
        assert_eq!(fwd, rev);
    }

    #[test]
    fn validation() {
        assert!(Partition::new(3, vec![0], vec![1]).is_err());
        assert!(Partition::new(2, vec![0], vec![0, 1]).is_err());
        assert!(Partition::new(2, vec![], vec![0, 1]).is_err());
        assert!(Partition::new(2, vec![0], vec![2]).is_err());
        let t = trace_of(&[(true, false)]);
        let p = Partition::split_at(2, 1).unwrap();
        assert!(independence_test(&t, &p, 0.0).is_err());
        assert!(independence_test(&t, &p, 1.0).is_err());
        assert!(independence_test(&Trace::new(2), &p, 0.5).is_err());
    }
}
