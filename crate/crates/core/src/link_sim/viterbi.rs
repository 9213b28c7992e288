//! 64-state soft-decision Viterbi decoder.

use crate::code_model::{GeneratorSet, TrellisState, MEMORY, NUM_STATES};
use crate::error::{Error, Result};

/// Decoded bits together with the winning path's metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub bits: Vec<u8>,
    /// `sum_i llr_i (1 - 2 v_i) / 2` along the selected path.
    pub metric: f64,
}

/// Reusable decoder state; buffers grow to the longest frame seen.
#[derive(Debug, Clone)]
pub struct ViterbiDecoder {
    /// `signs[s][u]`: `(1 - 2 v1, 1 - 2 v2) / 2` of the branch out of `s`.
    signs: [[(f64, f64); 2]; NUM_STATES],
    metrics: [f64; NUM_STATES],
    scratch: [f64; NUM_STATES],
    /// Bit `s` of `decisions[t]` is the top bit of the survivor's
    /// predecessor of state `s` at step `t`.
    decisions: Vec<u64>,
}

impl Default for ViterbiDecoder {
    fn default() -> Self {
        Self::new(&GeneratorSet::ieee80211())
    }
}

impl ViterbiDecoder {
    pub fn new(generators: &GeneratorSet) -> Self {
        let mut signs = [[(0.0, 0.0); 2]; NUM_STATES];
        for (s, row) in signs.iter_mut().enumerate() {
            for u in 0..2u8 {
                let (v1, v2) = generators.outputs(TrellisState::from_index(s), u);
                row[u as usize] = (0.5 - v1 as f64, 0.5 - v2 as f64);
            }
        }
        ViterbiDecoder {
            signs,
            metrics: [0.0; NUM_STATES],
            scratch: [0.0; NUM_STATES],
            decisions: Vec::new(),
        }
    }

    /// Decodes a full-rate LLR frame (two LLRs per trellis step).
    ///
    /// With `terminated` the last six steps are the zero tail: the path must
    /// end in state 0 and the tail bits are not returned.
    pub fn decode(&mut self, llrs: &[f64], terminated: bool) -> Result<Decoded> {
        if !llrs.len().is_multiple_of(2) {
            return Err(Error::LengthMismatch {
                expected: llrs.len() + 1,
                actual: llrs.len(),
            });
        }
        let steps = llrs.len() / 2;
        if terminated && steps < MEMORY {
            return Err(Error::LengthMismatch {
                expected: 2 * MEMORY,
                actual: llrs.len(),
            });
        }
        self.metrics = [f64::NEG_INFINITY; NUM_STATES];
        self.metrics[0] = 0.0;
        self.decisions.clear();
        self.decisions.reserve(steps);

        for pair in llrs.chunks_exact(2) {
            let (l1, l2) = (pair[0], pair[1]);
            let mut word = 0u64;
            for ns in 0..NUM_STATES {
                let u = ns & 1;
                let p0 = ns >> 1;
                let p1 = p0 | 32;
                let (a1, a2) = self.signs[p0][u];
                let (b1, b2) = self.signs[p1][u];
                let m0 = self.metrics[p0] + a1 * l1 + a2 * l2;
                let m1 = self.metrics[p1] + b1 * l1 + b2 * l2;
                if m1 > m0 {
                    self.scratch[ns] = m1;
                    word |= 1 << ns;
                } else {
                    self.scratch[ns] = m0;
                }
            }
            std::mem::swap(&mut self.metrics, &mut self.scratch);
            self.decisions.push(word);
        }

        let mut state = if terminated {
            0
        } else {
            (0..NUM_STATES)
                .max_by(|&a, &b| self.metrics[a].total_cmp(&self.metrics[b]).then(b.cmp(&a)))
                .unwrap_or(0)
        };
        let metric = self.metrics[state];
        let info_len = if terminated { steps - MEMORY } else { steps };
        let mut bits = vec![0u8; steps];
        for t in (0..steps).rev() {
            bits[t] = (state & 1) as u8;
            let top = ((self.decisions[t] >> state) & 1) as usize;
            state = (state >> 1) | (top << 5);
        }
        bits.truncate(info_len);
        Ok(Decoded { bits, metric })
    }
}

/// Maximum-likelihood info bits for a full-rate LLR frame.
pub fn viterbi_decode(llrs: &[f64], terminated: bool) -> Result<Vec<u8>> {
    ViterbiDecoder::default()
        .decode(llrs, terminated)
        .map(|d| d.bits)
}
