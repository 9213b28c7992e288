use super::{GeneratorSet, TrellisState, NUM_STATES};

/// One labelled edge of the trellis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TrellisBranch {
    pub from_state: TrellisState,
    pub input: u8,
    pub to_state: TrellisState,
    pub outputs: (u8, u8),
}

impl TrellisBranch {
    #[inline]
    pub fn output_weight(&self) -> u32 {
        (self.outputs.0 + self.outputs.1) as u32
    }
}

/// Full transition table, one branch per `(state, input)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trellis {
    generators: GeneratorSet,
    branches: Vec<TrellisBranch>,
}

impl Trellis {
    pub fn new(generators: GeneratorSet) -> Self {
        let branches = (0..NUM_STATES)
            .flat_map(|s| {
                let from_state = TrellisState::from_index(s);
                (0..2u8).map(move |input| TrellisBranch {
                    from_state,
                    input,
                    to_state: from_state.next(input),
                    outputs: generators.outputs(from_state, input),
                })
            })
            .collect();
        Trellis {
            generators,
            branches,
        }
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    #[inline]
    pub fn branch(&self, state: TrellisState, input: u8) -> &TrellisBranch {
        &self.branches[2 * state.index() + (input & 1) as usize]
    }

    /// All 128 branches, ordered by `(from_state, input)`.
    pub fn branches(&self) -> &[TrellisBranch] {
        &self.branches
    }
}

impl Default for Trellis {
    fn default() -> Self {
        Trellis::new(GeneratorSet::ieee80211())
    }
}

pub fn build_trellis(generators: &GeneratorSet) -> Trellis {
    Trellis::new(*generators)
}
