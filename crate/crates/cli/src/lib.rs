//! Argument parsing and rendering for the `bcc-spectrum` binary.
//!
//! Each subcommand renders into a `String`; `main` decides where it goes.

use std::fmt::Write as _;

use anyhow::anyhow;
use bcc_core::bounds::{uncoded_curve, BoundCurve};
use bcc_core::{
    bep_union_bound, compute_spectrum, fer_union_bound, parse_snr_grid, run_sweep, BoundQuery,
    DistanceSpectrum, ModulationSpec, PunctureSchedule, SimConfig, StandardRate, StopRule,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bcc-spectrum",
    version,
    about = "Distance spectra, union bounds and Viterbi simulation for the 802.11 K=7 convolutional code"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the leading distance spectrum terms of one or more codes.
    Spectrum(SpectrumArgs),
    /// Evaluate BEP or FER union bounds over an Eb/N0 grid (CSV).
    Bounds(BoundsArgs),
    /// Monte Carlo simulation over an Eb/N0 grid (CSV).
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Standard rate (1/2, 2/3, 3/4, 5/6); repeatable. Default: all four.
    #[arg(long, conflicts_with = "mask")]
    pub rate: Vec<StandardRate>,
    /// Custom puncture mask, serial order, e.g. 111001.
    #[arg(long)]
    pub mask: Option<PunctureSchedule>,
    #[arg(long, default_value_t = 30)]
    pub dmax: u32,
    /// Rows shown per code.
    #[arg(long, default_value_t = 5)]
    pub terms: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    #[arg(long, conflicts_with = "mask")]
    pub rate: Option<StandardRate>,
    #[arg(long)]
    pub mask: Option<PunctureSchedule>,
}

impl CodeArgs {
    fn schedule(&self) -> Option<PunctureSchedule> {
        self.rate.map(StandardRate::schedule).or_else(|| self.mask.clone())
    }
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long = "mod", default_value = "qpsk")]
    pub modulation: ModulationSpec,
    /// Eb/N0 grid in dB as start:stop:step.
    #[arg(long)]
    pub snr: String,
    #[arg(long, default_value_t = 30)]
    pub terms: usize,
    #[arg(long, default_value_t = 130)]
    pub dmax: u32,
    /// Frame error bound instead of bit error bound.
    #[arg(long)]
    pub fer: bool,
    #[arg(long, default_value_t = 1024)]
    pub frame_bits: u32,
    /// Also emit the uncoded reference for the modulation.
    #[arg(long)]
    pub uncoded: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long = "mod", default_value = "qpsk")]
    pub modulation: ModulationSpec,
    #[arg(long)]
    pub snr: String,
    #[arg(long, default_value_t = 1024)]
    pub frame_bits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub min_frame_errors: u64,
    #[arg(long, default_value_t = 500)]
    pub min_bit_errors: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_frames: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(anyhow::Error),
    EmptySpectrum(String),
    Failed(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Failed(_) => 1,
            CliError::EmptySpectrum(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(e) | CliError::Failed(e) => write!(f, "{e:#}"),
            CliError::EmptySpectrum(m) => f.write_str(m),
        }
    }
}

fn usage(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Usage(e.into())
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Simulate(a) => cmd_simulate(a),
    }
}

/// Rate name for standard schedules, the mask string otherwise.
pub fn code_label(schedule: &PunctureSchedule) -> String {
    match schedule.standard_rate() {
        Some(r) => r.name().to_string(),
        None => schedule.to_string(),
    }
}

fn spectrum_or_empty(schedule: &PunctureSchedule, dmax: u32) -> Result<DistanceSpectrum, CliError> {
    let s = compute_spectrum(schedule, dmax).map_err(usage)?;
    if s.is_empty() {
        return Err(CliError::EmptySpectrum(format!(
            "no terms <= dmax for code {} (dmax = {dmax}); increase --dmax",
            code_label(schedule)
        )));
    }
    Ok(s)
}

/// Decimal digits grouped in threes with commas.
pub fn thousands(n: &impl ToString) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

pub fn cmd_spectrum(a: &SpectrumArgs) -> Result<String, CliError> {
    if a.dmax < 1 {
        return Err(usage(anyhow!("--dmax must be at least 1")));
    }
    if a.terms < 1 {
        return Err(usage(anyhow!("--terms must be at least 1")));
    }
    let schedules: Vec<PunctureSchedule> = match (&a.mask, a.rate.is_empty()) {
        (Some(m), _) => vec![m.clone()],
        (None, true) => StandardRate::ALL.iter().map(|r| r.schedule()).collect(),
        (None, false) => a.rate.iter().map(|r| r.schedule()).collect(),
    };
    let spectra = schedules
        .iter()
        .map(|s| spectrum_or_empty(s, a.dmax))
        .collect::<Result<Vec<_>, _>>()?;

    let mut out = String::new();
    match a.format {
        Format::Csv => {
            out.push_str("rate,d,alpha,beta\n");
            for s in &spectra {
                let label = code_label(s.schedule());
                for e in s.entries().iter().take(a.terms) {
                    writeln!(out, "{label},{},{},{}", e.d, e.alpha, e.beta).unwrap();
                }
            }
        }
        Format::Table => {
            out.push_str("IEEE 802.11 BCC Distance Spectrum\n");
            out.push_str("K=7, generators 133_8 / 171_8\n");
            writeln!(out, "d_max={}, showing first {} non-zero terms", a.dmax, a.terms).unwrap();
            out.push_str(&"=".repeat(60));
            out.push('\n');
            for s in &spectra {
                let sched = s.schedule();
                out.push('\n');
                match sched.standard_rate() {
                    Some(r) => writeln!(out, "Rate {r}  (puncture period = {})", sched.period()),
                    None => writeln!(
                        out,
                        "Mask {sched}  (rate {}, puncture period = {})",
                        sched.rate(),
                        sched.period()
                    ),
                }
                .unwrap();
                writeln!(out, "d_free = {}", s.d_free().expect("non-empty")).unwrap();
                writeln!(out, "{:>7}  {:>22}  {:>24}", "d", "alpha_d", "beta_d").unwrap();
                writeln!(out, "  {}  {}  {}", "-".repeat(5), "-".repeat(22), "-".repeat(24)).unwrap();
                for e in s.entries().iter().take(a.terms) {
                    writeln!(
                        out,
                        "{:>7}  {:>22}  {:>24}",
                        e.d,
                        thousands(&e.alpha),
                        thousands(&e.beta)
                    )
                    .unwrap();
                }
            }
        }
    }
    Ok(out)
}

fn write_curve(out: &mut String, curve: &BoundCurve, with_kind: bool) {
    for p in &curve.points {
        if with_kind {
            writeln!(out, "{},{},{:.6e}", p.ebno_db, curve.kind.name(), p.value).unwrap();
        } else {
            writeln!(out, "{},{:.6e}", p.ebno_db, p.value).unwrap();
        }
    }
}

pub fn cmd_bounds(a: &BoundsArgs) -> Result<String, CliError> {
    let grid = parse_snr_grid(&a.snr).map_err(usage)?;
    let schedule = a.code.schedule();
    if schedule.is_none() && !a.uncoded {
        return Err(usage(anyhow!("one of --rate or --mask is required")));
    }
    let mut curves = Vec::new();
    if let Some(schedule) = schedule {
        let spectrum = spectrum_or_empty(&schedule, a.dmax)?;
        let query = BoundQuery::new(&spectrum, a.modulation, grid.clone())
            .with_terms(a.terms)
            .with_frame_bits(a.frame_bits);
        let curve = if a.fer {
            fer_union_bound(&query)
        } else {
            bep_union_bound(&query)
        };
        curves.push(curve.map_err(usage)?);
    }
    if a.uncoded {
        curves.push(uncoded_curve(a.modulation, &grid));
    }

    let mut out = String::new();
    if a.uncoded {
        out.push_str("ebno_db,kind,value\n");
    } else {
        out.push_str("ebno_db,value\n");
    }
    for c in &curves {
        write_curve(&mut out, c, a.uncoded);
    }
    Ok(out)
}

pub fn simulate_configs(a: &SimulateArgs) -> Result<Vec<SimConfig>, CliError> {
    let grid = parse_snr_grid(&a.snr).map_err(usage)?;
    let schedule = a
        .code
        .schedule()
        .ok_or_else(|| usage(anyhow!("one of --rate or --mask is required")))?;
    let mut base = SimConfig::new(schedule, a.modulation, 0.0);
    base.frame_bits = a.frame_bits;
    base.seed = a.seed;
    base.workers = a.workers;
    base.stop = StopRule {
        min_frame_errors: a.min_frame_errors,
        min_bit_errors: a.min_bit_errors,
        max_frames: a.max_frames,
    };
    base.validate().map_err(usage)?;
    Ok(grid.into_iter().map(|x| base.at(x)).collect())
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<String, CliError> {
    let configs = simulate_configs(a)?;
    let results = run_sweep(&configs).map_err(|e| CliError::Failed(e.into()))?;
    let mut out = String::from(
        "ebno_db,frames,bits,bit_errors,frame_errors,ber,fer,ber_ci_lo,ber_ci_hi,fer_ci_lo,fer_ci_hi\n",
    );
    for r in &results {
        writeln!(
            out,
            "{},{},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e}",
            r.ebno_db,
            r.frames,
            r.bits,
            r.bit_errors,
            r.frame_errors,
            r.ber,
            r.fer,
            r.ber_ci.lo,
            r.ber_ci.hi,
            r.fer_ci.lo,
            r.fer_ci.hi
        )
        .unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thousands_grouping() {
        assert_eq!(thousands(&7), "7");
        assert_eq!(thousands(&1404), "1,404");
        assert_eq!(thousands(&792114), "792,114");
        assert_eq!(thousands(&1234567), "1,234,567");
        assert_eq!(thousands(&100), "100");
    }

    #[test]
    fn labels() {
        assert_eq!(code_label(&StandardRate::ThreeQuarters.schedule()), "3/4");
        assert_eq!(code_label(&"1110011010".parse().unwrap()), "1110011010");
    }

    #[test]
    fn uncoded_only_bounds() {
        let a = BoundsArgs {
            code: CodeArgs { rate: None, mask: None },
            modulation: ModulationSpec::BPSK,
            snr: "10:10:1".into(),
            terms: 30,
            dmax: 130,
            fer: false,
            frame_bits: 1024,
            uncoded: true,
        };
        let out = cmd_bounds(&a).unwrap();
        let v = bcc_core::bounds::uncoded_bpsk(10.0);
        assert_eq!(out, format!("ebno_db,kind,value\n10,uncoded,{v:.6e}\n"));
    }
}
