//! Brute-force reference for machine enumeration.
//!
//! Every total Moore machine with at most `s_max` states is generated
//! directly (all transition functions, all output labellings, all initial
//! states) and identified by a prefix of its output stream. Two autonomous
//! machines with at most `s` states produce the same infinite stream iff
//! their first `3s` outputs agree, so a prefix of `len + 3 s_max` outputs
//! separates every pair of non-equivalent candidates.

#![allow(dead_code)]

use std::collections::BTreeSet;

pub type Signature = Vec<u64>;

/// Output stream of the machine `(outputs, next)` from `initial`.
fn stream(outputs: &[u64], next: &[usize], initial: usize, len: usize) -> Signature {
    let mut s = initial;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(outputs[s]);
        s = next[s];
    }
    out
}

/// Calls `f` with every tuple in `0..base` of length `len`.
fn each_tuple(len: usize, base: u64, mut f: impl FnMut(&[u64])) {
    let mut digits = vec![0u64; len];
    loop {
        f(&digits);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            digits[i] += 1;
            if digits[i] < base {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Distinct output-stream prefixes of length `sig_len` over all machines with
/// `1..=s_max` states and `width`-bit outputs.
pub fn all_signatures(width: usize, s_max: usize, sig_len: usize) -> BTreeSet<Signature> {
    let symbols = 1u64 << width;
    let mut sigs = BTreeSet::new();
    for s in 1..=s_max {
        each_tuple(s, s as u64, |next| {
            let next: Vec<usize> = next.iter().map(|&x| x as usize).collect();
            each_tuple(s, symbols, |outputs| {
                for initial in 0..s {
                    sigs.insert(stream(outputs, &next, initial, sig_len));
                }
            });
        });
    }
    sigs
}

/// Signatures of machines whose stream begins with `codes`.
pub fn consistent_signatures(universe: &BTreeSet<Signature>, codes: &[u64]) -> BTreeSet<Signature> {
    universe
        .iter()
        .filter(|sig| sig.starts_with(codes))
        .cloned()
        .collect()
}

pub fn signature_len(trace_len: usize, s_max: usize) -> usize {
    trace_len + 3 * s_max
}
