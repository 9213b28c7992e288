//! Gray-coded square QAM mapping, AWGN and max-log soft demapping.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bounds::{db_to_linear, ModulationSpec};
use crate::error::{Error, Result};

/// Per-axis Gray PAM tables for one modulation.
///
/// The first half of each symbol's bits labels the in-phase axis and the
/// second half the quadrature axis, MSB first. Label 0 sits on the most
/// positive level. BPSK uses the in-phase axis only.
#[derive(Debug, Clone)]
pub struct Constellation {
    modulation: ModulationSpec,
    bits_per_axis: usize,
    /// `amplitude[label]`, already scaled for unit symbol energy.
    amplitude: Vec<f64>,
}

fn gray_decode(mut g: usize) -> usize {
    let mut b = g;
    while g > 1 {
        g >>= 1;
        b ^= g;
    }
    b
}

impl Constellation {
    pub fn new(modulation: ModulationSpec) -> Self {
        let levels = modulation.levels_per_axis();
        let bits_per_axis = levels.trailing_zeros() as usize;
        let scale = if modulation.is_bpsk() {
            1.0
        } else {
            (1.5 / (modulation.order() as f64 - 1.0)).sqrt()
        };
        let amplitude = (0..levels)
            .map(|label| (levels as f64 - 1.0 - 2.0 * gray_decode(label) as f64) * scale)
            .collect();
        Constellation {
            modulation,
            bits_per_axis,
            amplitude,
        }
    }

    pub fn modulation(&self) -> ModulationSpec {
        self.modulation
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.modulation.bits_per_symbol()
    }

    pub fn bits_per_axis(&self) -> usize {
        self.bits_per_axis
    }

    /// Axis amplitude for a Gray label.
    pub fn amplitude(&self, label: usize) -> f64 {
        self.amplitude[label]
    }

    fn label(bits: &[u8]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | (b & 1) as usize)
    }

    pub fn map(&self, bits: &[u8], out: &mut Vec<Complex64>) -> Result<()> {
        let m = self.bits_per_symbol();
        if !bits.len().is_multiple_of(m) {
            return Err(Error::NotSymbolAligned {
                len: bits.len(),
                bits_per_symbol: m,
            });
        }
        out.clear();
        let k = self.bits_per_axis;
        out.extend(bits.chunks_exact(m).map(|sym| {
            if self.modulation.is_bpsk() {
                Complex64::new(self.amplitude[Self::label(sym)], 0.0)
            } else {
                Complex64::new(
                    self.amplitude[Self::label(&sym[..k])],
                    self.amplitude[Self::label(&sym[k..])],
                )
            }
        }));
        Ok(())
    }

    fn demap_axis(&self, y: f64, inv_n0: f64, out: &mut Vec<f64>) {
        let mut dist = [0f64; 16];
        for (d, a) in dist.iter_mut().zip(&self.amplitude) {
            *d = (y - a) * (y - a);
        }
        let levels = self.amplitude.len();
        for bit in (0..self.bits_per_axis).rev() {
            let mut best = [f64::INFINITY; 2];
            for (label, &d) in dist[..levels].iter().enumerate() {
                let b = (label >> bit) & 1;
                if d < best[b] {
                    best[b] = d;
                }
            }
            out.push((best[1] - best[0]) * inv_n0);
        }
    }

    /// Appends `m` max-log LLRs per received symbol; positive favours 0.
    pub fn demap(&self, received: &[Complex64], noise_variance: f64, out: &mut Vec<f64>) {
        out.clear();
        let inv_n0 = 1.0 / noise_variance;
        for y in received {
            self.demap_axis(y.re, inv_n0, out);
            if !self.modulation.is_bpsk() {
                self.demap_axis(y.im, inv_n0, out);
            }
        }
    }
}

/// Maps coded bits onto unit-energy Gray-coded symbols.
pub fn map_symbols(bits: &[u8], modulation: ModulationSpec) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(bits.len() / modulation.bits_per_symbol());
    Constellation::new(modulation).map(bits, &mut out)?;
    Ok(out)
}

/// Complex noise variance `N0` for unit symbol energy.
pub fn noise_variance(ebno_db: f64, rate: f64, modulation: ModulationSpec) -> f64 {
    1.0 / (modulation.bits_per_symbol() as f64 * rate * db_to_linear(ebno_db))
}

pub(crate) fn add_noise<R: Rng + ?Sized>(symbols: &mut [Complex64], n0: f64, rng: &mut R) {
    let sigma = (n0 / 2.0).sqrt();
    for s in symbols {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *s += Complex64::new(sigma * re, sigma * im);
    }
}

/// Adds circularly symmetric Gaussian noise of total variance `N0`.
pub fn awgn_channel<R: Rng + ?Sized>(
    symbols: &[Complex64],
    ebno_db: f64,
    rate: f64,
    modulation: ModulationSpec,
    rng: &mut R,
) -> Vec<Complex64> {
    let mut out = symbols.to_vec();
    add_noise(&mut out, noise_variance(ebno_db, rate, modulation), rng);
    out
}

/// One max-log LLR per coded bit.
pub fn demap_llr(received: &[Complex64], modulation: ModulationSpec, noise_variance: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(received.len() * modulation.bits_per_symbol());
    Constellation::new(modulation).demap(received, noise_variance, &mut out);
    out
}
