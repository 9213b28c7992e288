//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by the code model, spectrum engine, bounds and simulator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("trellis state {0} out of range [0, 64)")]
    StateOutOfRange(u32),

    #[error("input bit must be 0 or 1, got {0}")]
    InvalidBit(u8),

    #[error("invalid generator set: {0}")]
    InvalidGenerators(String),

    #[error("invalid puncture mask {mask:?}: {reason}")]
    InvalidMask { mask: String, reason: &'static str },

    #[error("unknown code rate {0:?} (expected one of 1/2, 2/3, 3/4, 5/6)")]
    UnknownRate(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("sequence of length {len} is not a multiple of {bits_per_symbol} bits per symbol")]
    NotSymbolAligned { len: usize, bits_per_symbol: usize },

    #[error("unsupported constellation size M={0}")]
    UnsupportedModulation(u32),

    #[error("unknown modulation {0:?} (expected bpsk, qpsk, 16qam, 64qam or 256qam)")]
    UnknownModulation(String),

    #[error("spectrum is empty: no terms with d <= {d_max}")]
    EmptySpectrum { d_max: u32 },

    #[error("requested {requested} spectrum terms but only {available} are available; raise d_max")]
    TermsUnavailable { requested: usize, available: usize },

    #[error("invalid SNR grid {0:?}: {1}")]
    InvalidGrid(String, &'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
