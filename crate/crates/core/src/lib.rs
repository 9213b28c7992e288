//! Distance spectra, union bounds and link-level simulation for the
//! IEEE 802.11 rate-1/2, K=7 convolutional code (generators 133/171 octal)
//! and its punctured rates 2/3, 3/4 and 5/6.

pub mod bounds;
pub mod code_model;
pub mod error;
pub mod link_sim;
pub mod spectrum;

pub use bounds::{
    bep_union_bound, fer_union_bound, parse_snr_grid, q_function, BoundCurve, BoundQuery,
    ModulationSpec,
};
pub use code_model::{
    encode, puncture, schedule_for_rate, GeneratorSet, PunctureSchedule, StandardRate, Trellis,
    TrellisState,
};
pub use error::{Error, Result};
pub use spectrum::{brute_force_spectrum, compute_spectrum, DistanceSpectrum, SpectrumEntry};
pub use link_sim::{run_point, run_sweep, SimConfig, SimResult, StopRule};
