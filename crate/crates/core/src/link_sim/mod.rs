//! Monte Carlo AWGN link: encode, puncture, interleave, Gray QAM, max-log
//! demapping, depuncturing and soft Viterbi decoding.
//!
//! Every frame draws from its own ChaCha8 stream (`seed`, stream = frame
//! index), and frames are processed in fixed batches of [`BATCH_FRAMES`]
//! with the stop rule checked between batches. Results therefore do not
//! depend on the number of worker threads.

mod interleave;
mod modem;
mod viterbi;

pub use interleave::{deinterleave, depuncture, depuncture_into, interleave, Direction, Interleaver};
pub use modem::{awgn_channel, demap_llr, map_symbols, noise_variance, Constellation};
pub use viterbi::{viterbi_decode, Decoded, ViterbiDecoder};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::ModulationSpec;
use crate::code_model::{GeneratorSet, PunctureSchedule, MEMORY};
use crate::error::{Error, Result};

pub const BATCH_FRAMES: u64 = 128;

/// Stop once any threshold is reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub min_bit_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_frame_errors: 100,
            min_bit_errors: 500,
            max_frames: 10_000_000,
        }
    }
}

impl StopRule {
    pub fn reached(&self, frames: u64, frame_errors: u64, bit_errors: u64) -> bool {
        frames >= self.max_frames
            || frame_errors >= self.min_frame_errors
            || bit_errors >= self.min_bit_errors
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub schedule: PunctureSchedule,
    pub modulation: ModulationSpec,
    pub ebno_db: f64,
    /// Information bits per frame, before the six tail bits.
    pub frame_bits: usize,
    pub seed: u64,
    pub stop: StopRule,
    pub workers: usize,
    pub interleave: bool,
}

impl SimConfig {
    pub fn new(schedule: PunctureSchedule, modulation: ModulationSpec, ebno_db: f64) -> Self {
        SimConfig {
            schedule,
            modulation,
            ebno_db,
            frame_bits: 1024,
            seed: 0,
            stop: StopRule::default(),
            workers: 1,
            interleave: true,
        }
    }

    pub fn at(&self, ebno_db: f64) -> Self {
        SimConfig {
            ebno_db,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.frame_bits == 0 {
            return bad("frame_bits must be at least 1");
        }
        if self.stop.min_frame_errors == 0 || self.stop.min_bit_errors == 0 || self.stop.max_frames == 0 {
            return bad("stop thresholds must be at least 1");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        if !self.ebno_db.is_finite() {
            return bad("Eb/N0 must be finite");
        }
        Ok(())
    }

    /// Mother-code bits per frame including the tail.
    pub fn coded_len(&self) -> usize {
        2 * (self.frame_bits + MEMORY)
    }

    /// Transmitted bits per frame after puncturing, before symbol padding.
    pub fn transmitted_len(&self) -> usize {
        self.schedule.punctured_len(self.coded_len())
    }
}

/// Two-sided interval for a binomial proportion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95% for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> Interval {
    if n == 0 {
        return Interval { lo: 0.0, hi: 1.0 };
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Interval {
        lo: (centre - half).max(0.0),
        hi: (centre + half).min(1.0),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub ebno_db: f64,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub ber_ci: Interval,
    pub fer_ci: Interval,
}

impl SimResult {
    fn from_tallies(ebno_db: f64, frames: u64, bits: u64, bit_errors: u64, frame_errors: u64) -> Self {
        let ratio = |k: u64, n: u64| if n == 0 { 0.0 } else { k as f64 / n as f64 };
        SimResult {
            ebno_db,
            frames,
            bits,
            bit_errors,
            frame_errors,
            ber: ratio(bit_errors, bits),
            fer: ratio(frame_errors, frames),
            ber_ci: wilson_interval(bit_errors, bits),
            fer_ci: wilson_interval(frame_errors, frames),
        }
    }
}

/// Per-point constants shared by every frame.
struct Link<'a> {
    config: &'a SimConfig,
    generators: GeneratorSet,
    constellation: Constellation,
    interleaver: Option<Interleaver>,
    n0: f64,
    pad: usize,
}

impl<'a> Link<'a> {
    fn new(config: &'a SimConfig) -> Self {
        let tx = config.transmitted_len();
        let m = config.modulation.bits_per_symbol();
        Link {
            config,
            generators: GeneratorSet::ieee80211(),
            constellation: Constellation::new(config.modulation),
            interleaver: config.interleave.then(|| Interleaver::new(tx, config.seed)),
            n0: noise_variance(config.ebno_db, config.schedule.rate_f64(), config.modulation),
            pad: (m - tx % m) % m,
        }
    }
}

/// Scratch buffers reused across the frames handled by one worker.
#[derive(Default)]
struct FrameWork {
    info: Vec<u8>,
    tx: Vec<u8>,
    permuted: Vec<u8>,
    symbols: Vec<Complex64>,
    llr: Vec<f64>,
    deinterleaved: Vec<f64>,
    full: Vec<f64>,
    decoder: ViterbiDecoder,
}

impl FrameWork {
    /// Runs one frame and returns its bit error count.
    fn run(&mut self, link: &Link<'_>, frame: u64) -> u64 {
        let cfg = link.config;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(frame);

        self.info.clear();
        self.info.extend((0..cfg.frame_bits).map(|_| rng.random::<bool>() as u8));
        let coded = link.generators.encode(&self.info, true);
        self.tx.clear();
        self.tx.extend(
            coded
                .iter()
                .enumerate()
                .filter(|(i, _)| cfg.schedule.keeps(*i))
                .map(|(_, &b)| b),
        );

        let bits = match &link.interleaver {
            Some(il) => {
                il.apply_into(&self.tx, Direction::Forward, &mut self.permuted)
                    .expect("interleaver sized for the frame");
                &mut self.permuted
            }
            None => &mut self.tx,
        };
        let tx_len = bits.len();
        bits.resize(tx_len + link.pad, 0);
        link.constellation
            .map(bits, &mut self.symbols)
            .expect("padded to whole symbols");
        modem::add_noise(&mut self.symbols, link.n0, &mut rng);
        link.constellation.demap(&self.symbols, link.n0, &mut self.llr);
        self.llr.truncate(tx_len);

        let llr = match &link.interleaver {
            Some(il) => {
                il.apply_into(&self.llr, Direction::Inverse, &mut self.deinterleaved)
                    .expect("interleaver sized for the frame");
                &self.deinterleaved
            }
            None => &self.llr,
        };
        depuncture_into(llr, &cfg.schedule, coded.len(), &mut self.full).expect("lengths agree");
        let decoded = self
            .decoder
            .decode(&self.full, true)
            .expect("full-rate frame is well formed");
        decoded
            .bits
            .iter()
            .zip(&self.info)
            .filter(|(a, b)| a != b)
            .count() as u64
    }
}

/// Simulates one SNR point until the stop rule fires.
pub fn run_point(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let link = Link::new(config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;

    let (mut frames, mut bit_errors, mut frame_errors) = (0u64, 0u64, 0u64);
    while !config.stop.reached(frames, frame_errors, bit_errors) {
        let n = BATCH_FRAMES.min(config.stop.max_frames - frames);
        let errors: Vec<u64> = pool.install(|| {
            (frames..frames + n)
                .into_par_iter()
                .map_init(FrameWork::default, |w, i| w.run(&link, i))
                .collect()
        });
        frames += n;
        bit_errors += errors.iter().sum::<u64>();
        frame_errors += errors.iter().filter(|&&e| e > 0).count() as u64;
    }
    Ok(SimResult::from_tallies(
        config.ebno_db,
        frames,
        frames * config.frame_bits as u64,
        bit_errors,
        frame_errors,
    ))
}

/// Runs each configuration in order.
pub fn run_sweep(configs: &[SimConfig]) -> Result<Vec<SimResult>> {
    configs.iter().map(run_point).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::{puncture, schedule_for_rate, StandardRate};

    fn cfg(rate: &str, m: ModulationSpec, ebno: f64) -> SimConfig {
        SimConfig::new(schedule_for_rate(rate).unwrap(), m, ebno)
    }

    #[test]
    fn wilson_reference_values() {
        // Closed form at p = 1/2: centre 1/2, half-width z / (2 sqrt(n + z^2)).
        let n = 100u64;
        let ci = wilson_interval(50, n);
        let z = Z95;
        let half = z / (2.0 * (n as f64 + z * z).sqrt());
        assert!((ci.lo - (0.5 - half)).abs() < 1e-12);
        assert!((ci.hi - (0.5 + half)).abs() < 1e-12);
        let zero = wilson_interval(0, 1000);
        assert!(zero.lo.abs() < 1e-15);
        assert!((zero.hi - z * z / (1000.0 + z * z)).abs() < 1e-12);
        assert_eq!(wilson_interval(0, 0), Interval { lo: 0.0, hi: 1.0 });
    }

    #[test]
    fn invalid_configs() {
        let mut c = cfg("1/2", ModulationSpec::QPSK, 5.0);
        c.frame_bits = 0;
        assert!(run_point(&c).is_err());
        let mut c = cfg("1/2", ModulationSpec::QPSK, 5.0);
        c.stop.min_bit_errors = 0;
        assert!(run_point(&c).is_err());
        let mut c = cfg("1/2", ModulationSpec::QPSK, 5.0);
        c.workers = 0;
        assert!(run_point(&c).is_err());
    }

    #[test]
    fn noiseless_frames_are_error_free() {
        for rate in StandardRate::ALL {
            for m in [ModulationSpec::BPSK, ModulationSpec::QAM16, ModulationSpec::QAM64] {
                let mut c = SimConfig::new(rate.schedule(), m, 100.0);
                c.frame_bits = 200;
                c.stop.max_frames = 10;
                let r = run_point(&c).unwrap();
                assert_eq!((r.frames, r.bit_errors, r.frame_errors), (10, 0, 0), "{rate} {m}");
                assert_eq!(r.bits, 2000);
            }
        }
    }

    #[test]
    fn odd_frame_lengths_are_padded() {
        // 2 * (5 + 6) = 22 coded bits -> 15 after rate-3/4 puncturing, not a multiple of 6.
        let mut c = cfg("3/4", ModulationSpec::QAM64, 100.0);
        c.frame_bits = 5;
        c.stop.max_frames = 3;
        assert_eq!(c.transmitted_len(), 15);
        assert_eq!(run_point(&c).unwrap().bit_errors, 0);
    }

    #[test]
    fn deterministic_and_worker_independent() {
        let mut c = cfg("3/4", ModulationSpec::QAM16, 6.0);
        c.frame_bits = 256;
        c.seed = 99;
        c.stop = StopRule {
            min_frame_errors: 20,
            min_bit_errors: 1_000_000,
            max_frames: 5000,
        };
        let a = run_point(&c).unwrap();
        assert_eq!(a, run_point(&c).unwrap());
        c.workers = 3;
        assert_eq!(a, run_point(&c).unwrap());
        assert!(a.frame_errors >= 20);
        assert_eq!(a.frames % BATCH_FRAMES, 0);
    }

    #[test]
    fn stop_rule_caps_frames() {
        let mut c = cfg("1/2", ModulationSpec::QPSK, 100.0);
        c.frame_bits = 16;
        c.stop.max_frames = 300;
        assert_eq!(run_point(&c).unwrap().frames, 300);
    }

    #[test]
    fn sweep_keeps_grid_order() {
        let mut c = cfg("2/3", ModulationSpec::QPSK, 0.0);
        c.frame_bits = 128;
        c.stop.max_frames = 256;
        let configs: Vec<_> = [4.0, 1.0, 2.5].iter().map(|&x| c.at(x)).collect();
        let r = run_sweep(&configs).unwrap();
        assert_eq!(r.iter().map(|p| p.ebno_db).collect::<Vec<_>>(), vec![4.0, 1.0, 2.5]);
        assert_eq!(r, run_sweep(&configs).unwrap());
    }

    #[test]
    fn punctured_positions_carry_no_metric() {
        // Decode a noisy punctured frame, re-encode the decision and sum the
        // correlation metric over transmitted positions only.
        let s = schedule_for_rate("5/6").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let info: Vec<u8> = (0..300).map(|_| rng.random::<bool>() as u8).collect();
        let coded = crate::code_model::encode(&info, true);
        let tx = puncture(&coded, &s);
        let syms = map_symbols(&tx, ModulationSpec::BPSK).unwrap();
        let n0 = noise_variance(2.0, s.rate_f64(), ModulationSpec::BPSK);
        let y = awgn_channel(&syms, 2.0, s.rate_f64(), ModulationSpec::BPSK, &mut rng);
        let llr = demap_llr(&y, ModulationSpec::BPSK, n0);
        let full = depuncture(&llr, &s, coded.len()).unwrap();
        let d = ViterbiDecoder::default().decode(&full, true).unwrap();

        let v = crate::code_model::encode(&d.bits, true);
        let kept_metric: f64 = puncture(&v, &s)
            .iter()
            .zip(&llr)
            .map(|(&b, &l)| l * (0.5 - b as f64))
            .sum();
        assert!((kept_metric - d.metric).abs() < 1e-9 * d.metric.abs().max(1.0));
    }

    #[test]
    fn interleaving_does_not_change_qpsk_statistics() {
        let mut c = cfg("1/2", ModulationSpec::QPSK, 2.0);
        c.frame_bits = 512;
        c.stop = StopRule {
            min_frame_errors: 1_000_000,
            min_bit_errors: 3000,
            max_frames: 100_000,
        };
        c.workers = 4;
        let with = run_point(&c).unwrap();
        c.interleave = false;
        c.seed = 1;
        let without = run_point(&c).unwrap();
        // Bit errors cluster in bursts, so widen the binomial interval.
        let ratio = with.ber / without.ber;
        assert!((0.75..1.33).contains(&ratio), "{} vs {}", with.ber, without.ber);
    }
}
