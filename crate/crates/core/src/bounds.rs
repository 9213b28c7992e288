//! Union bounds on bit and frame error probability over AWGN.
//!
//! Gray-coded square M-QAM enters only through the penalty factor
//! `delta = 3m / (2(M - 1))`, which scales the effective `Eb/N0` of each
//! pairwise error event. `delta = 1` for BPSK and QPSK.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::spectrum::DistanceSpectrum;

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
///
/// Computed through `erfc`, so it stays accurate deep into the tail; the
/// result underflows to zero only beyond `x ~ 37.5`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Supported constellations: BPSK and Gray-coded square 4/16/64/256-QAM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModulationSpec {
    order: u32,
}

impl ModulationSpec {
    pub const BPSK: ModulationSpec = ModulationSpec { order: 2 };
    pub const QPSK: ModulationSpec = ModulationSpec { order: 4 };
    pub const QAM16: ModulationSpec = ModulationSpec { order: 16 };
    pub const QAM64: ModulationSpec = ModulationSpec { order: 64 };
    pub const QAM256: ModulationSpec = ModulationSpec { order: 256 };

    pub const ALL: [ModulationSpec; 5] = [
        Self::BPSK,
        Self::QPSK,
        Self::QAM16,
        Self::QAM64,
        Self::QAM256,
    ];

    pub fn new(order: u32) -> Result<Self> {
        match order {
            2 | 4 | 16 | 64 | 256 => Ok(ModulationSpec { order }),
            _ => Err(Error::UnsupportedModulation(order)),
        }
    }

    /// Constellation size `M`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// `m = log2 M`.
    pub fn bits_per_symbol(&self) -> usize {
        self.order.trailing_zeros() as usize
    }

    /// Points per axis of the square constellation (1 for BPSK).
    pub fn levels_per_axis(&self) -> usize {
        if self.order == 2 {
            2
        } else {
            1 << (self.bits_per_symbol() / 2)
        }
    }

    pub fn is_bpsk(&self) -> bool {
        self.order == 2
    }

    /// Penalty factor `3m / (2(M-1))`, fixed to 1 for BPSK.
    pub fn delta(&self) -> Ratio<u32> {
        if self.order == 2 {
            return Ratio::from_integer(1);
        }
        let m = self.bits_per_symbol() as u32;
        Ratio::new(3 * m, 2 * (self.order - 1))
    }

    pub fn delta_f64(&self) -> f64 {
        let d = self.delta();
        *d.numer() as f64 / *d.denom() as f64
    }

    /// `10 log10(1 / delta)`: Eb/N0 shift relative to BPSK.
    pub fn penalty_db(&self) -> f64 {
        10.0 * self.delta_f64().recip().log10()
    }

    pub fn name(&self) -> &'static str {
        match self.order {
            2 => "bpsk",
            4 => "qpsk",
            16 => "16qam",
            64 => "64qam",
            _ => "256qam",
        }
    }
}

impl fmt::Display for ModulationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModulationSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        ModulationSpec::ALL
            .into_iter()
            .find(|m| m.name() == lower)
            .ok_or_else(|| Error::UnknownModulation(s.to_string()))
    }
}

/// Parses an inclusive `start:stop:step` grid in dB.
///
/// The stop value is included when it lies within half a step of the last
/// generated point.
pub fn parse_snr_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidGrid(spec.into(), "expected start:stop:step"));
    }
    let mut vals = [0f64; 3];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .trim()
            .parse()
            .map_err(|_| Error::InvalidGrid(spec.into(), "not a number"))?;
        if !v.is_finite() {
            return Err(Error::InvalidGrid(spec.into(), "values must be finite"));
        }
    }
    let [start, stop, step] = vals;
    if step <= 0.0 {
        return Err(Error::InvalidGrid(spec.into(), "step must be positive"));
    }
    if stop < start {
        return Err(Error::InvalidGrid(spec.into(), "stop is below start"));
    }
    let n = ((stop - start) / step + 0.5).floor() as usize;
    Ok((0..=n)
        .map(|i| {
            let x = start + i as f64 * step;
            (x * 1e9).round() / 1e9
        })
        .collect())
}

/// Pairwise error probability of two paths at Hamming distance `d`.
pub fn pairwise_error(d: u32, rate: f64, delta: f64, ebno_db: f64) -> f64 {
    q_function((2.0 * rate * d as f64 * delta * db_to_linear(ebno_db)).sqrt())
}

pub fn uncoded_bpsk(ebno_db: f64) -> f64 {
    q_function((2.0 * db_to_linear(ebno_db)).sqrt())
}

/// Nearest-neighbour BEP approximation for uncoded Gray-coded square M-QAM.
pub fn uncoded_qam(order: u32, ebno_db: f64) -> Result<f64> {
    if !matches!(order, 4 | 16 | 64 | 256) {
        return Err(Error::UnsupportedModulation(order));
    }
    let m = order.trailing_zeros() as f64;
    let m_ = order as f64;
    Ok(4.0 / m
        * (1.0 - 1.0 / m_.sqrt())
        * q_function((3.0 * m / (m_ - 1.0) * db_to_linear(ebno_db)).sqrt()))
}

/// Uncoded reference for any supported modulation.
pub fn uncoded(modulation: ModulationSpec, ebno_db: f64) -> f64 {
    if modulation.is_bpsk() {
        uncoded_bpsk(ebno_db)
    } else {
        uncoded_qam(modulation.order(), ebno_db).expect("square QAM order")
    }
}

/// Leading-term approximation `beta_dfree * P2(d_free)`.
pub fn single_term_approx(
    spectrum: &DistanceSpectrum,
    rate: f64,
    delta: f64,
    ebno_db: f64,
) -> Result<f64> {
    let first = spectrum.entries().first().ok_or(Error::EmptySpectrum {
        d_max: spectrum.d_max(),
    })?;
    Ok(first.beta_f64() * pairwise_error(first.d, rate, delta, ebno_db))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Bep,
    Fer,
    Uncoded,
}

impl CurveKind {
    pub fn name(&self) -> &'static str {
        match self {
            CurveKind::Bep => "bep",
            CurveKind::Fer => "fer",
            CurveKind::Uncoded => "uncoded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPoint {
    pub ebno_db: f64,
    /// Bound clamped to `[0, 1]`.
    pub value: f64,
    /// Unclamped sum; exceeds 1 at low SNR.
    pub raw: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub kind: CurveKind,
    pub points: Vec<BoundPoint>,
    pub rate: Option<Ratio<u32>>,
    pub modulation: ModulationSpec,
    pub terms: usize,
    pub frame_bits: u32,
}

impl BoundCurve {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }
}

/// Inputs to the coded union bounds.
#[derive(Debug, Clone)]
pub struct BoundQuery<'a> {
    pub spectrum: &'a DistanceSpectrum,
    pub rate: Ratio<u32>,
    pub modulation: ModulationSpec,
    pub ebno_db: Vec<f64>,
    /// Number of leading spectrum entries summed.
    pub terms: usize,
    /// Information bits per frame, used only by the FER bound.
    pub frame_bits: u32,
}

impl<'a> BoundQuery<'a> {
    /// Query at the spectrum's own code rate, summing all stored terms,
    /// with `frame_bits = 1`.
    pub fn new(spectrum: &'a DistanceSpectrum, modulation: ModulationSpec, ebno_db: Vec<f64>) -> Self {
        BoundQuery {
            spectrum,
            rate: spectrum.schedule().rate(),
            modulation,
            ebno_db,
            terms: spectrum.len(),
            frame_bits: 1,
        }
    }

    pub fn with_terms(mut self, terms: usize) -> Self {
        self.terms = terms;
        self
    }

    pub fn with_frame_bits(mut self, frame_bits: u32) -> Self {
        self.frame_bits = frame_bits;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.spectrum.is_empty() {
            return Err(Error::EmptySpectrum {
                d_max: self.spectrum.d_max(),
            });
        }
        if self.terms == 0 {
            return Err(Error::InvalidParameter("terms must be at least 1".into()));
        }
        if self.terms > self.spectrum.len() {
            return Err(Error::TermsUnavailable {
                requested: self.terms,
                available: self.spectrum.len(),
            });
        }
        if self.frame_bits == 0 {
            return Err(Error::InvalidParameter("frame_bits must be at least 1".into()));
        }
        if self.ebno_db.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("Eb/N0 values must be finite".into()));
        }
        Ok(())
    }

    fn rate_f64(&self) -> f64 {
        *self.rate.numer() as f64 / *self.rate.denom() as f64
    }

    fn evaluate(&self, kind: CurveKind) -> Result<BoundCurve> {
        self.validate()?;
        let rate = self.rate_f64();
        let delta = self.modulation.delta_f64();
        let (scale, use_beta) = match kind {
            CurveKind::Fer => (self.frame_bits as f64, false),
            _ => (1.0, true),
        };
        let coeffs: Vec<(u32, f64)> = self.spectrum.entries()[..self.terms]
            .iter()
            .map(|e| (e.d, if use_beta { e.beta_f64() } else { e.alpha_f64() }))
            .collect();
        let points = self
            .ebno_db
            .iter()
            .map(|&ebno_db| {
                let sum: f64 = coeffs
                    .iter()
                    .map(|&(d, c)| c * pairwise_error(d, rate, delta, ebno_db))
                    .sum();
                let raw = scale * sum;
                BoundPoint {
                    ebno_db,
                    value: raw.min(1.0),
                    raw,
                }
            })
            .collect();
        Ok(BoundCurve {
            kind,
            points,
            rate: Some(self.rate),
            modulation: self.modulation,
            terms: self.terms,
            frame_bits: self.frame_bits,
        })
    }
}

/// `P_b <= sum_d beta_d P2(d)` over the first `terms` spectrum entries.
pub fn bep_union_bound(query: &BoundQuery<'_>) -> Result<BoundCurve> {
    query.evaluate(CurveKind::Bep)
}

/// `P_f <= K sum_d alpha_d P2(d)` with `K = frame_bits`.
pub fn fer_union_bound(query: &BoundQuery<'_>) -> Result<BoundCurve> {
    query.evaluate(CurveKind::Fer)
}

/// Uncoded reference curve for `modulation` over a grid.
pub fn uncoded_curve(modulation: ModulationSpec, ebno_db: &[f64]) -> BoundCurve {
    BoundCurve {
        kind: CurveKind::Uncoded,
        points: ebno_db
            .iter()
            .map(|&x| {
                let v = uncoded(modulation, x);
                BoundPoint {
                    ebno_db: x,
                    value: v,
                    raw: v,
                }
            })
            .collect(),
        rate: None,
        modulation,
        terms: 0,
        frame_bits: 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::schedule_for_rate;
    use crate::spectrum::compute_spectrum;

    #[test]
    fn delta_table() {
        assert_eq!(ModulationSpec::QPSK.delta(), Ratio::from_integer(1));
        assert_eq!(ModulationSpec::QAM16.delta(), Ratio::new(2, 5));
        assert_eq!(ModulationSpec::QAM64.delta(), Ratio::new(2, 14));
        assert_eq!(ModulationSpec::QAM256.delta(), Ratio::new(8, 170));
        assert_eq!(ModulationSpec::BPSK.delta(), Ratio::from_integer(1));
        assert!(ModulationSpec::new(32).is_err());
        assert_eq!("256QAM".parse::<ModulationSpec>().unwrap(), ModulationSpec::QAM256);
        assert!("8psk".parse::<ModulationSpec>().is_err());
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_snr_grid("5:5:1").unwrap(), vec![5.0]);
        assert_eq!(parse_snr_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_snr_grid("0:1.05:0.25").unwrap().len(), 5);
        assert_eq!(parse_snr_grid("0:1.2:0.25").unwrap().len(), 6);
        assert_eq!(parse_snr_grid("0:0.3:0.1").unwrap(), vec![0.0, 0.1, 0.2, 0.3]);
        for bad in ["1:2", "a:b:c", "0:1:0", "2:1:0.5", "0:inf:1"] {
            assert!(parse_snr_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn q_function_basics() {
        assert_eq!(q_function(0.0), 0.5);
        assert!((q_function(-1.0) + q_function(1.0) - 1.0).abs() < 1e-15);
        assert!(q_function(37.0) > 0.0);
        assert!(q_function(40.0) >= 0.0);
        assert!((uncoded_bpsk(-300.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn uncoded_qpsk_equals_bpsk() {
        for x in [0.0, 3.5, 10.0] {
            let a = uncoded_qam(4, x).unwrap();
            assert!((a - uncoded_bpsk(x)).abs() <= 1e-15 * a.max(1e-300));
        }
        assert!(uncoded_qam(2, 10.0).is_err());
        assert!(uncoded_qam(32, 10.0).is_err());
    }

    #[test]
    fn query_validation() {
        let s = compute_spectrum(&schedule_for_rate("1/2").unwrap(), 20).unwrap();
        let q = BoundQuery::new(&s, ModulationSpec::QPSK, vec![5.0]).with_terms(7);
        assert_eq!(
            bep_union_bound(&q),
            Err(Error::TermsUnavailable {
                requested: 7,
                available: 6
            })
        );
        let q = BoundQuery::new(&s, ModulationSpec::QPSK, vec![5.0]).with_terms(0);
        assert!(bep_union_bound(&q).is_err());
        let q = BoundQuery::new(&s, ModulationSpec::QPSK, vec![f64::NAN]);
        assert!(bep_union_bound(&q).is_err());
        let empty = compute_spectrum(&schedule_for_rate("1/2").unwrap(), 5).unwrap();
        let q = BoundQuery::new(&empty, ModulationSpec::QPSK, vec![5.0]);
        assert!(matches!(fer_union_bound(&q), Err(Error::EmptySpectrum { .. })));
        assert!(single_term_approx(&empty, 0.5, 1.0, 5.0).is_err());
    }

    #[test]
    fn fer_is_linear_in_frame_bits() {
        let s = compute_spectrum(&schedule_for_rate("3/4").unwrap(), 30).unwrap();
        let grid = vec![2.0, 5.0, 8.0];
        let one = fer_union_bound(&BoundQuery::new(&s, ModulationSpec::QPSK, grid.clone())).unwrap();
        let k = fer_union_bound(&BoundQuery::new(&s, ModulationSpec::QPSK, grid).with_frame_bits(1024))
            .unwrap();
        for (a, b) in one.points.iter().zip(&k.points) {
            assert!((b.raw - 1024.0 * a.raw).abs() <= 1e-12 * b.raw);
            assert!(b.value <= 1.0);
        }
    }

    #[test]
    fn single_term_is_one_term_bound() {
        let s = compute_spectrum(&schedule_for_rate("1/2").unwrap(), 40).unwrap();
        let q = BoundQuery::new(&s, ModulationSpec::QPSK, vec![5.0]).with_terms(1);
        let b = bep_union_bound(&q).unwrap().points[0].raw;
        assert_eq!(b, single_term_approx(&s, 0.5, 1.0, 5.0).unwrap());
    }
}
