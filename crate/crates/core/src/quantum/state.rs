use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::propagator::{unitarity_defect, Propagator, PropagatorSpec};
use super::QuantumError;
use crate::boxkit::Trace;

/// One pair of amplitudes per bit position, over `{|0_i>, |1_i>}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub pairs: Vec<[Complex64; 2]>,
    pub t: f64,
}

impl StateVector {
    /// Unphased basis state at `t = 0`.
    pub fn basis(bits: &[bool]) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        StateVector {
            pairs: bits
                .iter()
                .map(|&b| if b { [zero, one] } else { [one, zero] })
                .collect(),
            t: 0.0,
        }
    }

    pub fn width(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair_norm_sq(&self, i: usize) -> f64 {
        let [a, b] = self.pairs[i];
        a.norm_sqr() + b.norm_sqr()
    }

    pub fn pair_norms(&self) -> Vec<f64> {
        (0..self.width())
            .map(|i| self.pair_norm_sq(i).sqrt())
            .collect()
    }

    /// Norm in the 2n-dimensional direct sum; `sqrt(n)` when every pair is normalized.
    pub fn global_norm(&self) -> f64 {
        (0..self.width())
            .map(|i| self.pair_norm_sq(i))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest `| |a0|^2 + |a1|^2 - 1 |` over the pairs.
    pub fn normalization_error(&self) -> f64 {
        (0..self.width())
            .map(|i| (self.pair_norm_sq(i) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest componentwise modulus difference; infinite on a width mismatch.
    pub fn distance(&self, other: &StateVector) -> f64 {
        if self.width() != other.width() {
            return f64::INFINITY;
        }
        self.pairs
            .iter()
            .zip(&other.pairs)
            .flat_map(|(a, b)| [(a[0] - b[0]).norm(), (a[1] - b[1]).norm()])
            .fold(0.0, f64::max)
    }

    /// `[re0, im0, re1, im1]` per pair.
    pub fn quadruples(&self) -> Vec<[f64; 4]> {
        self.pairs
            .iter()
            .map(|[a, b]| [a.re, a.im, b.re, b.im])
            .collect()
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("StateVector", 4)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("amplitudes", &self.quadruples())?;
        st.serialize_field("pair_norms", &self.pair_norms())?;
        st.serialize_field("global_norm", &self.global_norm())?;
        st.end()
    }
}

/// The encoded state at one tick.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct EncodedTick {
    pub k: u64,
    pub t: f64,
    /// Each pair collapsed onto the observed basis vector with its phase.
    pub observed: StateVector,
    /// Each pair in the superposed form with coefficients `alpha0`, `alpha1`.
    pub unobserved: StateVector,
    /// Per-pair `|| U^dagger U - I ||` at this tick.
    pub unitarity_defects: Vec<f64>,
}

/// Encodes every outcome of `trace` with one propagator spec per bit position.
///
/// All specs must share a time step; outcome `k` sits at `t = k dt`.
pub fn encode_trace(
    trace: &Trace,
    specs: &[PropagatorSpec],
) -> Result<Vec<EncodedTick>, QuantumError> {
    if specs.len() != trace.width() {
        return Err(QuantumError::WidthMismatch {
            expected: trace.width(),
            actual: specs.len(),
        });
    }
    let props = specs
        .iter()
        .map(|s| Propagator::new(*s))
        .collect::<Result<Vec<_>, _>>()?;
    let dt = specs.first().map_or(1.0, |s| s.schedule.delta_t);
    if specs.iter().any(|s| s.schedule.delta_t != dt) {
        return Err(QuantumError::ClockMismatch);
    }

    let ticks = trace
        .outcomes()
        .iter()
        .map(|o| {
            let k = o.k;
            let t = k as f64 * dt;
            let mut observed = Vec::with_capacity(specs.len());
            let mut unobserved = Vec::with_capacity(specs.len());
            for (i, spec) in specs.iter().enumerate() {
                let (a0, a1) = spec.schedule.angles(k);
                let p0 = Complex64::from_polar(1.0, -a0);
                let p1 = Complex64::from_polar(1.0, -a1);
                let zero = Complex64::new(0.0, 0.0);
                observed.push(if o.bits.get(i) == Some(true) {
                    [zero, p1]
                } else {
                    [p0, zero]
                });
                unobserved.push([p0 * spec.alpha0, p1 * spec.alpha1]);
            }
            EncodedTick {
                k,
                t,
                observed: StateVector { pairs: observed, t },
                unobserved: StateVector {
                    pairs: unobserved,
                    t,
                },
                unitarity_defects: props.iter().map(|p| unitarity_defect(p, k)).collect(),
            }
        })
        .collect();
    Ok(ticks)
}
