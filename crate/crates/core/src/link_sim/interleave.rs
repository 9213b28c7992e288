//! Seeded pseudo-random bit interleaver and the inverse of puncturing.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::code_model::PunctureSchedule;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// A fixed permutation of `len` positions drawn from `seed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    /// Output position `i` carries input position `perm[i]`.
    perm: Vec<usize>,
}

impl Interleaver {
    pub fn new(len: usize, seed: u64) -> Self {
        let mut perm: Vec<usize> = (0..len).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Interleaver { perm }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply_into<T: Copy>(&self, x: &[T], direction: Direction, out: &mut Vec<T>) -> Result<()> {
        if x.len() != self.perm.len() {
            return Err(Error::LengthMismatch {
                expected: self.perm.len(),
                actual: x.len(),
            });
        }
        out.clear();
        match direction {
            Direction::Forward => out.extend(self.perm.iter().map(|&p| x[p])),
            Direction::Inverse => {
                out.extend_from_slice(x);
                for (i, &p) in self.perm.iter().enumerate() {
                    out[p] = x[i];
                }
            }
        }
        Ok(())
    }
}

/// Permutes `x` with the interleaver for `(seed, x.len())`.
pub fn interleave<T: Copy>(x: &[T], seed: u64, direction: Direction) -> Vec<T> {
    let mut out = Vec::with_capacity(x.len());
    Interleaver::new(x.len(), seed)
        .apply_into(x, direction, &mut out)
        .expect("lengths agree");
    out
}

pub fn deinterleave<T: Copy>(x: &[T], seed: u64) -> Vec<T> {
    interleave(x, seed, Direction::Inverse)
}

/// Re-inserts zero LLRs at the punctured positions of a `coded_len`-bit
/// mother-code sequence.
pub fn depuncture_into(
    llrs: &[f64],
    schedule: &PunctureSchedule,
    coded_len: usize,
    out: &mut Vec<f64>,
) -> Result<()> {
    let expected = schedule.punctured_len(coded_len);
    if llrs.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: llrs.len(),
        });
    }
    out.clear();
    let mut it = llrs.iter();
    out.extend((0..coded_len).map(|i| {
        if schedule.keeps(i) {
            *it.next().expect("counted")
        } else {
            0.0
        }
    }));
    Ok(())
}

pub fn depuncture(llrs: &[f64], schedule: &PunctureSchedule, coded_len: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(coded_len);
    depuncture_into(llrs, schedule, coded_len, &mut out)?;
    Ok(out)
}
