//! Path-by-path enumeration of first-return error events.
//!
//! Walks the augmented graph depth-first from the start node and records
//! every path that comes back to it, pruning once the accumulated distance
//! exceeds `d_max`. Exponential in `d_max`; meant for small instances and
//! for checking [`compute_spectrum`](super::compute_spectrum).

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::code_model::{PunctureSchedule, Trellis};

use super::partition::{AugmentedGraph, AugmentedState};
use super::series::{SeriesPolynomial, SeriesTerm};
use super::DistanceSpectrum;

#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub spectrum: DistanceSpectrum,
    /// Paths dropped at `max_steps` while still within `d_max`. Non-zero means
    /// the spectrum is incomplete.
    pub abandoned_paths: u64,
}

impl BruteForceResult {
    pub fn is_complete(&self) -> bool {
        self.abandoned_paths == 0
    }
}

struct Walker<'a> {
    graph: &'a AugmentedGraph,
    d_max: u32,
    max_steps: usize,
    found: BTreeMap<u32, (u128, u128)>,
    abandoned: u64,
}

impl Walker<'_> {
    fn walk(&mut self, node: usize, distance: u32, weight: u32, steps: usize) {
        let start = AugmentedGraph::index_of(AugmentedState::START);
        for input in 0..2u8 {
            let b = self.graph.branch(node, input);
            if node == start && b.to.is_start() {
                continue;
            }
            let d = distance + b.distance;
            if d > self.d_max {
                continue;
            }
            let w = weight + input as u32;
            if b.to.is_start() {
                if d > 0 {
                    let e = self.found.entry(d).or_default();
                    e.0 += 1;
                    e.1 += w as u128;
                }
            } else if steps + 1 >= self.max_steps {
                self.abandoned += 1;
            } else {
                self.walk(AugmentedGraph::index_of(b.to), d, w, steps + 1);
            }
        }
    }
}

pub fn brute_force_spectrum(
    schedule: &PunctureSchedule,
    d_max: u32,
    max_steps: usize,
) -> BruteForceResult {
    let graph = AugmentedGraph::new(&Trellis::default(), schedule);
    let mut walker = Walker {
        graph: &graph,
        d_max,
        max_steps,
        found: BTreeMap::new(),
        abandoned: 0,
    };
    walker.walk(AugmentedGraph::index_of(AugmentedState::START), 0, 0, 0);

    let mut series = SeriesPolynomial::zero(d_max);
    for (d, (count, weight)) in walker.found {
        series.add_term(
            d,
            SeriesTerm {
                count: BigUint::from(count),
                weight: BigUint::from(weight),
            },
        );
    }
    BruteForceResult {
        spectrum: DistanceSpectrum::from_series(schedule.clone(), d_max, series),
        abandoned_paths: walker.abandoned,
    }
}
