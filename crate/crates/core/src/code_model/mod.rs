//! The 802.11 mother code: shift-register encoder, 64-state trellis and
//! puncture schedules.
//!
//! Trellis states follow the shift-register convention where bit `i` of the
//! state holds the input bit `u[n-1-i]`, so the most recent input sits in the
//! LSB and a transition is `((state << 1) & 0x3f) | u`.

mod puncture;
mod trellis;

pub use puncture::{puncture, schedule_for_rate, PunctureSchedule, StandardRate};
pub use trellis::{build_trellis, Trellis, TrellisBranch};

use crate::error::{Error, Result};

/// Number of trellis states of a constraint-length-7 code.
pub const NUM_STATES: usize = 64;

/// Encoder memory (number of delay elements).
pub const MEMORY: usize = 6;

const STATE_MASK: u8 = (NUM_STATES - 1) as u8;

/// A state of the 64-state trellis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TrellisState(u8);

impl TrellisState {
    pub const ZERO: TrellisState = TrellisState(0);

    pub fn new(value: u32) -> Result<Self> {
        if value as usize >= NUM_STATES {
            return Err(Error::StateOutOfRange(value));
        }
        Ok(TrellisState(value as u8))
    }

    #[inline]
    pub(crate) const fn from_index(index: usize) -> Self {
        TrellisState(index as u8 & STATE_MASK)
    }

    #[inline]
    pub const fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    /// Successor state after shifting in `input` (only the LSB of `input` is used).
    #[inline]
    pub const fn next(self, input: u8) -> TrellisState {
        TrellisState(((self.0 << 1) & STATE_MASK) | (input & 1))
    }
}

fn check_bit(input: u8) -> Result<u8> {
    if input > 1 {
        return Err(Error::InvalidBit(input));
    }
    Ok(input)
}

/// Checked state transition on raw integers.
pub fn next_state(state: u32, input: u8) -> Result<TrellisState> {
    let input = check_bit(input)?;
    Ok(TrellisState::new(state)?.next(input))
}

/// Output pair `(v1, v2)` of the standard 802.11 encoder for a raw state and input.
pub fn branch_outputs(state: u32, input: u8) -> Result<(u8, u8)> {
    let input = check_bit(input)?;
    let state = TrellisState::new(state)?;
    Ok(GeneratorSet::ieee80211().outputs(state, input))
}

/// The two generator polynomials of a rate-1/2, constraint-length-7 code.
///
/// Taps are stored as delay-indexed masks: bit `i` is the coefficient of
/// `D^i`, where `D^0` taps the current input. Octal generator names follow
/// the usual convention in which the leading digit starts at `D^0`, so
/// `133` is `1 + D^2 + D^3 + D^5 + D^6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    taps: [u8; 2],
}

impl GeneratorSet {
    pub const CONSTRAINT_LENGTH: usize = MEMORY + 1;

    /// `g1 = 133`, `g2 = 171` (octal).
    pub const fn ieee80211() -> Self {
        GeneratorSet {
            taps: [0b110_1101, 0b100_1111],
        }
    }

    /// Builds a generator set from octal names, e.g. `from_octal(0o133, 0o171)`.
    pub fn from_octal(g1: u32, g2: u32) -> Result<Self> {
        let reverse = |g: u32| -> Result<u8> {
            if g >= 1 << Self::CONSTRAINT_LENGTH {
                return Err(Error::InvalidGenerators(format!(
                    "generator {g:o} wider than {} bits",
                    Self::CONSTRAINT_LENGTH
                )));
            }
            Ok((g as u8).reverse_bits() >> 1)
        };
        Self::from_tap_masks(reverse(g1)?, reverse(g2)?)
    }

    /// Builds a generator set from delay-indexed tap masks.
    pub fn from_tap_masks(g1: u8, g2: u8) -> Result<Self> {
        for g in [g1, g2] {
            if g >> Self::CONSTRAINT_LENGTH != 0 {
                return Err(Error::InvalidGenerators(format!(
                    "tap mask {g:#b} wider than 7 bits"
                )));
            }
            if g & 1 == 0 || g & (1 << MEMORY) == 0 {
                return Err(Error::InvalidGenerators(format!(
                    "tap mask {g:#b} must tap both D^0 and D^6"
                )));
            }
        }
        Ok(GeneratorSet { taps: [g1, g2] })
    }

    pub const fn taps(&self) -> [u8; 2] {
        self.taps
    }

    /// Encoder outputs for one step: XOR of the tapped positions of the
    /// register `(u, state bit 0, ..., state bit 5)`.
    #[inline]
    pub fn outputs(&self, state: TrellisState, input: u8) -> (u8, u8) {
        let register = ((state.get() << 1) | (input & 1)) as u32;
        (
            ((register & self.taps[0] as u32).count_ones() & 1) as u8,
            ((register & self.taps[1] as u32).count_ones() & 1) as u8,
        )
    }

    /// Encodes `info_bits` from the zero state. With `terminate`, six zero
    /// tail bits flush the register back to state 0.
    pub fn encode(&self, info_bits: &[u8], terminate: bool) -> Vec<u8> {
        let tail = if terminate { MEMORY } else { 0 };
        let mut out = Vec::with_capacity(2 * (info_bits.len() + tail));
        let mut state = TrellisState::ZERO;
        for &u in info_bits.iter().chain(std::iter::repeat_n(&0, tail)) {
            let (v1, v2) = self.outputs(state, u);
            out.push(v1);
            out.push(v2);
            state = state.next(u);
        }
        out
    }
}

impl Default for GeneratorSet {
    fn default() -> Self {
        Self::ieee80211()
    }
}

/// Encodes with the standard 802.11 generators.
pub fn encode(info_bits: &[u8], terminate: bool) -> Vec<u8> {
    GeneratorSet::ieee80211().encode(info_bits, terminate)
}
