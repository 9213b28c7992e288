use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// The four 802.11 code rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StandardRate {
    Half,
    TwoThirds,
    ThreeQuarters,
    FiveSixths,
}

impl StandardRate {
    pub const ALL: [StandardRate; 4] = [
        StandardRate::Half,
        StandardRate::TwoThirds,
        StandardRate::ThreeQuarters,
        StandardRate::FiveSixths,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            StandardRate::Half => "1/2",
            StandardRate::TwoThirds => "2/3",
            StandardRate::ThreeQuarters => "3/4",
            StandardRate::FiveSixths => "5/6",
        }
    }

    /// Serial puncture mask, read column by column from the two-row
    /// puncture matrix.
    pub const fn mask_str(self) -> &'static str {
        match self {
            StandardRate::Half => "11",
            StandardRate::TwoThirds => "1110",
            StandardRate::ThreeQuarters => "111001",
            // [1 1 0 1 0; 1 0 1 0 1] read column-major.
            StandardRate::FiveSixths => "1110011001",
        }
    }

    pub fn schedule(self) -> PunctureSchedule {
        self.mask_str().parse().expect("standard masks are valid")
    }
}

impl fmt::Display for StandardRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StandardRate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StandardRate::ALL
            .into_iter()
            .find(|r| r.name() == s.trim())
            .ok_or_else(|| Error::UnknownRate(s.to_string()))
    }
}

/// Periodic serial puncture mask applied to the interleaved `v1 v2 v1 v2 ...`
/// coded stream. A `true` entry is transmitted, `false` is deleted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PunctureSchedule {
    mask: Vec<bool>,
}

impl PunctureSchedule {
    pub fn new(mask: Vec<bool>) -> Result<Self> {
        let reason = if mask.len() < 2 {
            Some("period must be at least 2")
        } else if !mask.len().is_multiple_of(2) {
            Some("period must be even")
        } else if !mask.iter().any(|&b| b) {
            Some("mask must keep at least one bit")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::InvalidMask {
                mask: mask_string(&mask),
                reason,
            }),
            None => Ok(PunctureSchedule { mask }),
        }
    }

    /// The unpunctured rate-1/2 schedule.
    pub fn unpunctured() -> Self {
        PunctureSchedule {
            mask: vec![true, true],
        }
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Mask period `L` in serial coded bits.
    pub fn period(&self) -> usize {
        self.mask.len()
    }

    pub fn kept_per_period(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Exact code rate `(L/2) / popcount(mask)` in lowest terms.
    pub fn rate(&self) -> Ratio<u32> {
        Ratio::new(self.period() as u32 / 2, self.kept_per_period() as u32)
    }

    pub fn rate_f64(&self) -> f64 {
        let r = self.rate();
        *r.numer() as f64 / *r.denom() as f64
    }

    /// Whether serial position `index` (taken cyclically) is transmitted.
    #[inline]
    pub fn keeps(&self, index: usize) -> bool {
        self.mask[index % self.mask.len()]
    }

    /// Number of bits that survive puncturing of a `coded_len`-bit stream.
    pub fn punctured_len(&self, coded_len: usize) -> usize {
        let l = self.period();
        let full = coded_len / l * self.kept_per_period();
        full + self.mask[..coded_len % l].iter().filter(|&&b| b).count()
    }

    /// The matching standard rate, if this is one of the four 802.11 masks.
    pub fn standard_rate(&self) -> Option<StandardRate> {
        StandardRate::ALL
            .into_iter()
            .find(|r| r.mask_str() == mask_string(&self.mask))
    }
}

impl fmt::Display for PunctureSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&mask_string(&self.mask))
    }
}

impl FromStr for PunctureSchedule {
    type Err = Error;

    /// Parses a `0`/`1` string; the leftmost character is serial position 0.
    fn from_str(s: &str) -> Result<Self> {
        let mask = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidMask {
                    mask: s.to_string(),
                    reason: "only '0' and '1' are allowed",
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        PunctureSchedule::new(mask)
    }
}

fn mask_string(mask: &[bool]) -> String {
    mask.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Looks up the schedule of a standard rate name (`"1/2"`, `"2/3"`, `"3/4"`, `"5/6"`).
pub fn schedule_for_rate(name: &str) -> Result<PunctureSchedule> {
    Ok(name.parse::<StandardRate>()?.schedule())
}

/// Keeps `coded[i]` iff the mask is set at `i mod L`; order is preserved.
pub fn puncture<T: Copy>(coded: &[T], schedule: &PunctureSchedule) -> Vec<T> {
    coded
        .iter()
        .enumerate()
        .filter(|(i, _)| schedule.keeps(*i))
        .map(|(_, &b)| b)
        .collect()
}
