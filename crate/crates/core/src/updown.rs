//! Periodic up-down sequences.
//!
//! Positions are 1-based: `p_1, p_2, ...` is the infinite repetition of the
//! period `p_1 .. p_m`. The only place index 0 is meaningful is [`UpDownPeriod::bit_at`],
//! where it resolves to `p_m`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A binary period `p` of length `m >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UpDownPeriod {
    bits: Vec<u8>,
    zeros: Vec<usize>,
}

impl UpDownPeriod {
    /// Wraps raw bits without normalizing them.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.len() < 2 {
            return Err(Error::InvalidPeriod(format!(
                "period length must be at least 2, got {}",
                bits.len()
            )));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidPeriod(format!("bit value {b} is not 0 or 1")));
        }
        let zeros = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 0)
            .map(|(i, _)| i + 1)
            .collect();
        Ok(UpDownPeriod { bits, zeros })
    }

    /// Parses then normalizes; convenience for callers that only deal with
    /// normalized periods.
    pub fn normalized(bits: Vec<u8>) -> Result<Self> {
        Ok(normalize(&bits)?.0)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Period length `m`.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// 1-based zero positions `i_1 < ... < i_r`.
    pub fn zeros(&self) -> &[usize] {
        &self.zeros
    }

    /// Number of zeros `r`.
    pub fn zero_count(&self) -> usize {
        self.zeros.len()
    }

    /// True when the period ends in 0 (so `i_r = m`).
    pub fn is_normalized(&self) -> bool {
        self.bits.last() == Some(&0)
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.to_string()))
        }
    }

    pub fn complement(&self) -> UpDownPeriod {
        let bits = self.bits.iter().map(|b| 1 - b).collect();
        UpDownPeriod::new(bits).expect("complement preserves validity")
    }

    /// The same sequence viewed with a period of length `2m`.
    pub fn doubled(&self) -> UpDownPeriod {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&self.bits);
        UpDownPeriod::new(bits).expect("doubling preserves validity")
    }

    /// `p_i` of the periodic extension. Index 0 (and every multiple of `m`)
    /// maps to position `m`.
    pub fn bit_at(&self, i: usize) -> u8 {
        let m = self.len();
        match i % m {
            0 => self.bits[m - 1],
            k => self.bits[k - 1],
        }
    }

    /// `eps_i = (-1)^(number of zeros among p_1 .. p_{i-1})`, for `i >= 1`.
    pub fn sign(&self, i: usize) -> i8 {
        assert!(i >= 1, "sign is defined for i >= 1");
        let m = self.len();
        let k = i - 1;
        let full = (k / m) * self.zero_count();
        let partial = self.bits[..k % m].iter().filter(|&&b| b == 0).count();
        if (full + partial) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Lazily evaluated sign sequence `eps_1, eps_2, ...`.
    pub fn signs(&self) -> SignSequence<'_> {
        SignSequence {
            period: self,
            next: 1,
            current: 1,
        }
    }

    /// The first `len` bits of the periodic extension.
    pub fn prefix(&self, len: usize) -> Vec<u8> {
        (1..=len).map(|i| self.bit_at(i)).collect()
    }
}

/// Normalizes a period so that it ends in 0, complementing it if needed.
/// Returns the normalized period and whether it was reflected.
pub fn normalize(bits: &[u8]) -> Result<(UpDownPeriod, bool)> {
    let period = UpDownPeriod::new(bits.to_vec())?;
    if period.is_normalized() {
        Ok((period, false))
    } else {
        Ok((period.complement(), true))
    }
}

impl fmt::Display for UpDownPeriod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for UpDownPeriod {
    type Err = Error;

    /// Reads `"1100"` as `p_1 .. p_4`. Surrounding `(`, `)` and `*` are
    /// tolerated so `"(1100)*"` also parses.
    fn from_str(s: &str) -> Result<Self> {
        let core = s.trim().trim_end_matches('*').trim_start_matches('(').trim_end_matches(')');
        let bits = core
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidPeriod(format!(
                    "unexpected character {other:?} in period {s:?}"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        UpDownPeriod::new(bits)
    }
}

/// Iterator over `eps_1, eps_2, ...`; uses `eps_i = eps_{i-1}` when
/// `p_{i-1} = 1` and `-eps_{i-1}` otherwise.
#[derive(Clone, Debug)]
pub struct SignSequence<'a> {
    period: &'a UpDownPeriod,
    next: usize,
    current: i8,
}

impl Iterator for SignSequence<'_> {
    type Item = i8;

    fn next(&mut self) -> Option<i8> {
        if self.next > 1 && self.period.bit_at(self.next - 1) == 0 {
            self.current = -self.current;
        }
        self.next += 1;
        Some(self.current)
    }
}
