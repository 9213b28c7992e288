//! The phase-augmented trellis and its split into start/interior branches.

use crate::code_model::{PunctureSchedule, Trellis, TrellisState, NUM_STATES};

use super::series::SeriesPolynomial;

/// Encoder state paired with the current position in the puncture mask.
///
/// Only even phases are reachable from the start node, since each trellis
/// step consumes two serial mask positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AugmentedState {
    pub sigma: TrellisState,
    pub phase: usize,
}

impl AugmentedState {
    pub const START: AugmentedState = AugmentedState {
        sigma: TrellisState::ZERO,
        phase: 0,
    };

    pub fn is_start(&self) -> bool {
        *self == Self::START
    }
}

/// Transmitted Hamming weight of a branch leaving mask position `phase`.
pub fn branch_distance(phase: usize, outputs: (u8, u8), schedule: &PunctureSchedule) -> u32 {
    schedule.keeps(phase) as u32 * outputs.0 as u32
        + schedule.keeps(phase + 1) as u32 * outputs.1 as u32
}

/// One edge of the augmented graph, labelled `D^distance N^input`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AugmentedBranch {
    pub from: AugmentedState,
    pub input: u8,
    pub to: AugmentedState,
    pub distance: u32,
}

impl AugmentedBranch {
    pub fn label(&self, d_max: u32) -> SeriesPolynomial {
        SeriesPolynomial::monomial(self.distance, self.input, d_max)
    }
}

/// The augmented graph over the reachable (even-phase) nodes.
///
/// Node `i` is `(sigma = i % 64, phase = 2 * (i / 64))`, so node 0 is the
/// start node.
#[derive(Debug, Clone)]
pub struct AugmentedGraph {
    schedule: PunctureSchedule,
    /// `branches[2 * node + input]`.
    branches: Vec<AugmentedBranch>,
}

impl AugmentedGraph {
    pub fn new(trellis: &Trellis, schedule: &PunctureSchedule) -> Self {
        let period = schedule.period();
        let node_count = NUM_STATES * period / 2;
        let mut branches = Vec::with_capacity(2 * node_count);
        for node in 0..node_count {
            let from = Self::state_of(node);
            for input in 0..2u8 {
                let b = trellis.branch(from.sigma, input);
                branches.push(AugmentedBranch {
                    from,
                    input,
                    to: AugmentedState {
                        sigma: b.to_state,
                        phase: (from.phase + 2) % period,
                    },
                    distance: branch_distance(from.phase, b.outputs, schedule),
                });
            }
        }
        AugmentedGraph {
            schedule: schedule.clone(),
            branches,
        }
    }

    pub fn schedule(&self) -> &PunctureSchedule {
        &self.schedule
    }

    pub fn node_count(&self) -> usize {
        self.branches.len() / 2
    }

    #[inline]
    pub fn index_of(state: AugmentedState) -> usize {
        state.phase / 2 * NUM_STATES + state.sigma.index()
    }

    #[inline]
    pub fn state_of(index: usize) -> AugmentedState {
        AugmentedState {
            sigma: TrellisState::from_index(index % NUM_STATES),
            phase: 2 * (index / NUM_STATES),
        }
    }

    #[inline]
    pub fn branch(&self, node: usize, input: u8) -> &AugmentedBranch {
        &self.branches[2 * node + input as usize]
    }

    pub fn branches(&self) -> &[AugmentedBranch] {
        &self.branches
    }

    /// Routes every branch to E (leaves start), Q (interior) or R (enters
    /// start). The all-zero start self-loop, which exists only for period 2,
    /// is dropped.
    pub fn partition(&self) -> Partition {
        let mut p = Partition::default();
        for b in &self.branches {
            match (b.from.is_start(), b.to.is_start()) {
                (true, true) => {}
                (true, false) => p.e.push(*b),
                (false, false) => p.q.push(*b),
                (false, true) => p.r.push(*b),
            }
        }
        p
    }
}

/// E/Q/R branch sets of the augmented graph.
#[derive(Debug, Clone, Default)]
pub struct Partition {
    pub e: Vec<AugmentedBranch>,
    pub q: Vec<AugmentedBranch>,
    pub r: Vec<AugmentedBranch>,
}

impl Partition {
    pub fn total(&self) -> usize {
        self.e.len() + self.q.len() + self.r.len()
    }
}

pub fn build_partition(schedule: &PunctureSchedule) -> Partition {
    AugmentedGraph::new(&Trellis::default(), schedule).partition()
}
