//! Exact distance spectra of the mother code and its punctured derivatives.
//!
//! [`compute_spectrum`] sums first-return paths of the phase-augmented
//! trellis as a truncated Neumann series; [`brute_force_spectrum`] enumerates
//! the same paths one by one and exists to cross-check it.

mod brute;
mod engine;
mod partition;
mod series;

pub use brute::{brute_force_spectrum, BruteForceResult};
pub use engine::{compute_spectrum, compute_spectrum_with};
pub use partition::{
    branch_distance, build_partition, AugmentedBranch, AugmentedGraph, AugmentedState, Partition,
};
pub use series::{SeriesPolynomial, SeriesTerm};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::code_model::PunctureSchedule;

/// One row of a distance spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub d: u32,
    /// Number of error events at distance `d`.
    pub alpha: BigUint,
    /// Total input weight of those events.
    pub beta: BigUint,
}

impl SpectrumEntry {
    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn beta_f64(&self) -> f64 {
        self.beta.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// `{(alpha_d, beta_d)}` for every `d <= d_max` with at least one event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceSpectrum {
    schedule: PunctureSchedule,
    d_max: u32,
    entries: Vec<SpectrumEntry>,
}

impl DistanceSpectrum {
    pub(crate) fn from_series(
        schedule: PunctureSchedule,
        d_max: u32,
        series: SeriesPolynomial,
    ) -> Self {
        let entries = series
            .into_terms()
            .into_iter()
            .filter(|(d, t)| *d > 0 && !t.is_zero())
            .map(|(d, t)| SpectrumEntry {
                d,
                alpha: t.count,
                beta: t.weight,
            })
            .collect();
        DistanceSpectrum {
            schedule,
            d_max,
            entries,
        }
    }

    pub fn schedule(&self) -> &PunctureSchedule {
        &self.schedule
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    /// Smallest stored distance; `None` when `d_max` is below the free distance.
    pub fn d_free(&self) -> Option<u32> {
        self.entries.first().map(|e| e.d)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn entry(&self, d: u32) -> Option<&SpectrumEntry> {
        self.entries
            .binary_search_by_key(&d, |e| e.d)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn alpha(&self, d: u32) -> Option<&BigUint> {
        self.entry(d).map(|e| &e.alpha)
    }

    pub fn beta(&self, d: u32) -> Option<&BigUint> {
        self.entry(d).map(|e| &e.beta)
    }

    /// The same spectrum truncated at a smaller `d_max`.
    pub fn restrict(&self, d_max: u32) -> DistanceSpectrum {
        DistanceSpectrum {
            schedule: self.schedule.clone(),
            d_max: d_max.min(self.d_max),
            entries: self
                .entries
                .iter()
                .take_while(|e| e.d <= d_max)
                .cloned()
                .collect(),
        }
    }
}
