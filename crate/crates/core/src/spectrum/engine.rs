//! First-return series over the augmented trellis.
//!
//! With `E`, `Q`, `R` the start-leaving, interior and start-entering branch
//! sets, the generating function of first-return paths is
//! `T = E^T (I - Q)^-1 R`. The inverse is expanded as `sum_k Q^k R` and the
//! partial products are truncated at `d_max`, so the loop ends once every
//! interior path has grown past the truncation.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::code_model::{PunctureSchedule, Trellis};
use crate::error::{Error, Result};

use super::partition::{AugmentedGraph, AugmentedState};
use super::series::{SeriesPolynomial, SeriesTerm};
use super::DistanceSpectrum;

/// Dense coefficient buffer over degrees `0..=d_max` with a live range.
///
/// The hot loop reuses these across iterations so big-integer limbs are
/// not reallocated.
#[derive(Debug, Clone)]
struct DegreeBuffer {
    count: Vec<BigUint>,
    weight: Vec<BigUint>,
    lo: usize,
    hi: usize,
}

impl DegreeBuffer {
    fn new(d_max: usize) -> Self {
        DegreeBuffer {
            count: vec![BigUint::zero(); d_max + 1],
            weight: vec![BigUint::zero(); d_max + 1],
            lo: d_max + 1,
            hi: 0,
        }
    }

    fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    fn clear(&mut self) {
        for k in self.lo..self.hi {
            self.count[k].set_zero();
            self.weight[k].set_zero();
        }
        self.lo = self.count.len();
        self.hi = 0;
    }

    fn touch(&mut self, k: usize) {
        self.lo = self.lo.min(k);
        self.hi = self.hi.max(k + 1);
    }

    /// `self += src * D^shift N^input`, truncated to the buffer length.
    fn add_shifted(&mut self, src: &DegreeBuffer, shift: usize, input: u8) {
        let len = self.count.len();
        for k in src.lo..src.hi {
            let j = k + shift;
            if j >= len {
                break;
            }
            let c = &src.count[k];
            if c.is_zero() {
                continue;
            }
            self.count[j] += c;
            self.weight[j] += &src.weight[k];
            if input == 1 {
                self.weight[j] += c;
            }
            self.touch(j);
        }
    }

    fn add_assign(&mut self, src: &DegreeBuffer) {
        self.add_shifted(src, 0, 0);
    }

    fn to_polynomial(&self, d_max: u32) -> SeriesPolynomial {
        let mut p = SeriesPolynomial::zero(d_max);
        for k in self.lo..self.hi {
            if !self.count[k].is_zero() {
                p.add_term(
                    k as u32,
                    SeriesTerm {
                        count: self.count[k].clone(),
                        weight: self.weight[k].clone(),
                    },
                );
            }
        }
        p
    }
}

/// Computes `{(alpha_d, beta_d) : d <= d_max}` for the standard generators.
///
/// Returns an empty spectrum (no `d_free`) when every error event is heavier
/// than `d_max`.
pub fn compute_spectrum(schedule: &PunctureSchedule, d_max: u32) -> Result<DistanceSpectrum> {
    compute_spectrum_with(&Trellis::default(), schedule, d_max)
}

pub fn compute_spectrum_with(
    trellis: &Trellis,
    schedule: &PunctureSchedule,
    d_max: u32,
) -> Result<DistanceSpectrum> {
    if d_max < 1 {
        return Err(Error::InvalidParameter("d_max must be at least 1".into()));
    }
    let graph = AugmentedGraph::new(trellis, schedule);
    let partition = graph.partition();
    let nodes = graph.node_count();
    let dm = d_max as usize;
    let start = AugmentedGraph::index_of(AugmentedState::START);

    // Interior rows: for each source node, its Q-branches as (target, d, u).
    let mut rows: Vec<Vec<(usize, usize, u8)>> = vec![Vec::new(); nodes];
    for b in &partition.q {
        rows[AugmentedGraph::index_of(b.from)].push((
            AugmentedGraph::index_of(b.to),
            b.distance as usize,
            b.input,
        ));
    }

    // term <- R
    let mut term: Vec<DegreeBuffer> = (0..nodes).map(|_| DegreeBuffer::new(dm)).collect();
    let mut next: Vec<DegreeBuffer> = term.clone();
    for b in &partition.r {
        let d = b.distance as usize;
        if d <= dm {
            let buf = &mut term[AugmentedGraph::index_of(b.from)];
            buf.count[d] += 1u32;
            buf.weight[d] += b.input as u32;
            buf.touch(d);
        }
    }

    // Only the entries of x that E reads are ever needed.
    let e_targets: Vec<usize> = partition
        .e
        .iter()
        .map(|b| AugmentedGraph::index_of(b.to))
        .collect();
    let mut x: Vec<Option<DegreeBuffer>> = vec![None; nodes];
    for &t in &e_targets {
        x[t] = Some(DegreeBuffer::new(dm));
    }

    let cap = 4 * dm.max(1) * schedule.period();
    let mut iterations = 0usize;
    loop {
        for &t in &e_targets {
            if let Some(acc) = x[t].as_mut() {
                acc.add_assign(&term[t]);
            }
        }
        let mut live = false;
        for (n, row) in rows.iter().enumerate() {
            let buf = &mut next[n];
            buf.clear();
            for &(t, d, u) in row {
                debug_assert_ne!(t, start);
                if !term[t].is_empty() {
                    buf.add_shifted(&term[t], d, u);
                }
            }
            live |= !buf.is_empty();
        }
        std::mem::swap(&mut term, &mut next);
        iterations += 1;
        if !live {
            break;
        }
        if iterations >= cap {
            return Err(Error::Internal(format!(
                "series did not terminate after {iterations} iterations (mask {schedule}, d_max {d_max}); \
                 the punctured code may be catastrophic"
            )));
        }
    }

    // T <- E^T x
    let mut transfer = SeriesPolynomial::zero(d_max);
    for b in &partition.e {
        if let Some(acc) = &x[AugmentedGraph::index_of(b.to)] {
            transfer += &(&b.label(d_max) * &acc.to_polynomial(d_max));
        }
    }
    transfer.remove(0);
    Ok(DistanceSpectrum::from_series(schedule.clone(), d_max, transfer))
}
