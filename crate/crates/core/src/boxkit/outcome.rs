use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::BoxError;

/// A fixed-width string of binary digits.
///
/// Serialized as a string of `0`/`1` characters, first bit first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn new(bits: Vec<bool>) -> Self {
        Bits(bits)
    }

    pub fn zeros(width: usize) -> Self {
        Bits(vec![false; width])
    }

    /// Little-endian decoding of `code`: bit `i` of the result is bit `i` of `code`.
    pub fn from_code(code: u64, width: usize) -> Self {
        Bits((0..width).map(|i| i < 64 && (code >> i) & 1 == 1).collect())
    }

    /// Inverse of [`Bits::from_code`]. Widths above 64 are truncated.
    pub fn to_code(&self) -> u64 {
        self.0
            .iter()
            .take(64)
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn concat(&self, other: &Bits) -> Bits {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Bits(v)
    }

    /// Selects the given positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> Bits {
        Bits(positions.iter().map(|&p| self.0[p]).collect())
    }

    pub fn flip(&self, i: usize) -> Bits {
        let mut v = self.0.clone();
        v[i] = !v[i];
        Bits(v)
    }
}

impl From<Vec<bool>> for Bits {
    fn from(v: Vec<bool>) -> Self {
        Bits(v)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bits {
    type Err = BoxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BoxError::InvalidBits(format!(
                    "unexpected character {other:?} in {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Bits)
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One observational outcome: the bits recorded at time index `k` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub k: u64,
    pub bits: Bits,
}

impl Outcome {
    pub fn width(&self) -> usize {
        self.bits.width()
    }
}

/// A finite record of outcomes of constant width with consecutive time indices starting at 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    width: usize,
    outcomes: Vec<Outcome>,
}

impl Trace {
    pub fn new(width: usize) -> Self {
        Trace {
            width,
            outcomes: Vec::new(),
        }
    }

    /// Builds a trace from raw bit strings, numbering them `1..=len`.
    pub fn from_bits<I>(width: usize, bits: I) -> Result<Self, BoxError>
    where
        I: IntoIterator<Item = Bits>,
    {
        let mut trace = Trace::new(width);
        for b in bits {
            trace.push_bits(b)?;
        }
        Ok(trace)
    }

    /// Parses `"01,11,10"` style notation. An empty string yields an empty trace.
    pub fn parse(width: usize, s: &str) -> Result<Self, BoxError> {
        let items = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::parse::<Bits>)
            .collect::<Result<Vec<_>, _>>()?;
        Trace::from_bits(width, items)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn get(&self, idx: usize) -> Option<&Outcome> {
        self.outcomes.get(idx)
    }

    pub fn bits(&self) -> impl DoubleEndedIterator<Item = &Bits> + ExactSizeIterator + '_ {
        self.outcomes.iter().map(|o| &o.bits)
    }

    /// Appends an outcome, which must carry the next time index and the trace width.
    pub fn push(&mut self, outcome: Outcome) -> Result<(), BoxError> {
        if outcome.width() != self.width {
            return Err(BoxError::WidthMismatch {
                expected: self.width,
                found: outcome.width(),
            });
        }
        let expected = self.outcomes.len() as u64 + 1;
        if outcome.k != expected {
            return Err(BoxError::TimeIndex {
                expected,
                found: outcome.k,
            });
        }
        self.outcomes.push(outcome);
        Ok(())
    }

    pub fn push_bits(&mut self, bits: Bits) -> Result<(), BoxError> {
        let k = self.outcomes.len() as u64 + 1;
        self.push(Outcome { k, bits })
    }

    /// Keeps only the given bit positions (in order), renumbering nothing.
    pub fn project(&self, positions: &[usize]) -> Result<Trace, BoxError> {
        if let Some(&bad) = positions.iter().find(|&&p| p >= self.width) {
            return Err(BoxError::BitIndex {
                index: bad,
                width: self.width,
            });
        }
        Trace::from_bits(positions.len(), self.bits().map(|b| b.select(positions)))
    }

    pub fn prefix(&self, len: usize) -> Trace {
        Trace {
            width: self.width,
            outcomes: self.outcomes[..len.min(self.outcomes.len())].to_vec(),
        }
    }

    /// The same outcomes read backwards, re-indexed from 1.
    pub fn reversed(&self) -> Trace {
        let bits: Vec<Bits> = self.bits().rev().cloned().collect();
        Trace::from_bits(self.width, bits).expect("reversal preserves width")
    }

    /// Outcomes as integer codes (see [`Bits::to_code`]).
    pub fn codes(&self) -> Vec<u64> {
        self.bits().map(Bits::to_code).collect()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.bits().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}
