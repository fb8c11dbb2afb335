//! The `spincorr` command line.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::angle::{DetectorSettings, SettingsQuad};
use crate::error::{Error, Result};
use crate::estimators::{chsh_from_batches, correlation_from_counts};
use crate::models::ModelSpec;
use crate::output::{emit, emit_csv_table, fmt_real, Format, OutputRecord, RecordKind};
use crate::rationality::{rationality_report, significance_compare, sweep_reports};
use crate::runner::{run_experiment, run_quad, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "spincorr", version, about = "Singlet spin-correlation simulator and rationality-gap analyzer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate n pairs at one settings pair and estimate the correlation.
    Simulate(SimulateArgs),
    /// Simulate the four settings pairs of a quad and evaluate CHSH.
    Chsh(ChshArgs),
    /// Quantization gap of n·sin²(Δ/2) for one settings pair.
    Rationality(RationalityArgs),
    /// Rationality reports over a grid of Δ and n (CSV).
    Sweep(SweepArgs),
    /// Recompute the θ_A = 47.4°, θ_B = 45°, n = 10⁴ worked example against its quoted values.
    ReproducePaper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::JsonLines,
        }
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_parser = parse_model)]
    model: ModelSpec,
    /// Detector A angle, degrees.
    #[arg(long, value_parser = parse_degrees, allow_negative_numbers = true)]
    theta_a: f64,
    /// Detector B angle, degrees.
    #[arg(long, value_parser = parse_degrees, allow_negative_numbers = true)]
    theta_b: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Opt into chunked parallel sampling with this chunk size. Results
    /// differ from the default sequential stream.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    chunk_size: Option<u64>,
}

#[derive(Debug, Args)]
struct ChshArgs {
    #[arg(long, value_parser = parse_model)]
    model: ModelSpec,
    /// a,a′,b,b′ in degrees.
    #[arg(long, value_parser = parse_quad, allow_hyphen_values = true)]
    quad: [f64; 4],
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct RationalityArgs {
    #[arg(long, value_parser = parse_degrees, allow_negative_numbers = true)]
    theta_a: f64,
    #[arg(long, value_parser = parse_degrees, allow_negative_numbers = true)]
    theta_b: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// start:stop:step in degrees, stop inclusive.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    deltas: DegreeRange,
    /// Comma-separated pair counts.
    #[arg(long, value_parser = parse_n_list)]
    ns: NList,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Clone, Debug)]
struct DegreeRange(Vec<f64>);

#[derive(Clone, Debug)]
struct NList(Vec<u64>);

fn parse_model(s: &str) -> std::result::Result<ModelSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_degrees(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not a finite angle"))
    }
}

fn parse_quad(s: &str) -> std::result::Result<[f64; 4], String> {
    let parts: Vec<f64> = s.split(',').map(parse_degrees).collect::<std::result::Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|p: Vec<f64>| format!("expected 4 comma-separated angles, got {}", p.len()))
}

/// Expands `start:stop:step` into `start + k·step` for every `k` with the
/// value at most `stop` (allowing for rounding in the step count).
pub fn expand_range(s: &str) -> Result<Vec<f64>> {
    let bad = |why| Error::MalformedRange(s.to_string(), why);
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(bad("expected start:stop:step"));
    };
    let num = |t: &str| parse_degrees(t).map_err(|_| bad("bounds and step must be finite numbers"));
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if step <= 0.0 {
        return Err(bad("step must be positive"));
    }
    if start > stop {
        return Err(bad("start exceeds stop"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
    if count > 10_000_000 {
        return Err(bad("too many grid points"));
    }
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

fn parse_range(s: &str) -> std::result::Result<DegreeRange, String> {
    expand_range(s).map(DegreeRange).map_err(|e| e.to_string())
}

fn parse_n_list(s: &str) -> std::result::Result<NList, String> {
    s.split(',')
        .map(|t| match t.trim().parse::<u64>() {
            Ok(0) => Err("n must be at least 1".to_string()),
            Ok(n) => Ok(n),
            Err(_) => Err(format!("'{t}' is not a positive integer")),
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(NList)
}

/// Parses `args` (program name first) and runs the command, writing data to
/// `out` and diagnostics to `err`. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = writeln!(err, "{}", one_line(&e.render().to_string()));
            return EXIT_CONFIG;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_config() {
                EXIT_CONFIG
            } else {
                EXIT_INTERNAL
            }
        }
    }
}

/// Collapses a clap diagnostic to its first paragraph on a single line.
fn one_line(rendered: &str) -> String {
    rendered
        .lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Simulate(a) => {
            let settings = DetectorSettings::from_degrees(a.theta_a, a.theta_b)?;
            let mut config = RunConfig::new(a.model, settings, a.n, a.seed)?;
            if let Some(size) = a.chunk_size {
                config = config.chunked(size)?;
            }
            let batch = run_experiment(&config)?;
            let estimate = correlation_from_counts(&batch);
            let records = [OutputRecord::batch(&batch), OutputRecord::estimate(&batch, &estimate)];
            emit(&records, a.format.into(), out)
        }
        Command::Chsh(a) => {
            let [p, q, r, s] = a.quad;
            let quad = SettingsQuad::from_degrees(p, q, r, s)?;
            let batches = run_quad(&RunConfig::new(a.model, quad, a.n, a.seed)?)?;
            let chsh = chsh_from_batches(&batches);
            let mut records: Vec<OutputRecord> = batches.iter().map(OutputRecord::batch).collect();
            records.push(OutputRecord::chsh(&quad, &a.model, a.seed, &chsh));
            emit(&records, a.format.into(), out)
        }
        Command::Rationality(a) => {
            let settings = DetectorSettings::from_degrees(a.theta_a, a.theta_b)?;
            let delta = settings.delta();
            let report = rationality_report(delta, a.n)?;
            let record = OutputRecord::rationality(delta.to_degrees(), &report, &significance_compare(&report));
            emit(&[record], a.format.into(), out)
        }
        Command::Sweep(a) => {
            let deltas: Vec<f64> = a.deltas.0.iter().map(|d| d.to_radians()).collect();
            let reports = sweep_reports(&deltas, &a.ns.0)?;
            let per_delta = a.ns.0.len();
            let records: Vec<OutputRecord> = reports
                .iter()
                .enumerate()
                .map(|(i, r)| OutputRecord::sweep_row(a.deltas.0[i / per_delta], r, &significance_compare(r)))
                .collect();
            match a.format.into() {
                Format::Csv => emit_csv_table(RecordKind::SweepRow, &records, out),
                f => emit(&records, f, out),
            }
        }
        Command::ReproducePaper => reproduce_paper(out),
    }
}

/// Values quoted alongside the worked example.
const QUOTED_X: &str = "4.4e-4";
const QUOTED_REAL_COUNT: &str = "4.4";
const QUOTED_M: &str = "4";
const QUOTED_RELATIVE_ERROR: &str = "0.1";

pub const WORKED_THETA_A_DEG: f64 = 47.4;
pub const WORKED_THETA_B_DEG: f64 = 45.0;
pub const WORKED_N: u64 = 10_000;

fn reproduce_paper(out: &mut dyn Write) -> Result<()> {
    let settings = DetectorSettings::from_degrees(WORKED_THETA_A_DEG, WORKED_THETA_B_DEG)?;
    let report = rationality_report(settings.delta(), WORKED_N)?;
    let sig = significance_compare(&report);
    let rel = report.relative_error.expect("nearest m is 4");
    let ratio = sig.ratio.expect("sigma is positive");

    writeln!(
        out,
        "worked example: theta_A = {} deg, theta_B = {} deg, n = {}",
        fmt_real(WORKED_THETA_A_DEG),
        fmt_real(WORKED_THETA_B_DEG),
        WORKED_N
    )?;
    writeln!(out, "{:<16} {:>12} {:>10} {:>8}", "quantity", "computed", "rounded", "quoted")?;
    let row = |out: &mut dyn Write, name: &str, computed: String, rounded: String, quoted: &str| {
        writeln!(out, "{name:<16} {computed:>12} {rounded:>10} {quoted:>8}")
    };
    row(out, "x", fmt_real(report.target_fraction), format!("{:.1e}", report.target_fraction), QUOTED_X)?;
    row(out, "real_count", fmt_real(report.real_count), format!("{:.1}", report.real_count), QUOTED_REAL_COUNT)?;
    row(out, "nearest_m", report.nearest_m.to_string(), report.nearest_m.to_string(), QUOTED_M)?;
    row(out, "relative_error", fmt_real(rel), format!("{rel:.1}"), QUOTED_RELATIVE_ERROR)?;
    row(out, "gap", fmt_real(report.gap), format!("{:.1}", report.gap), "")?;
    row(out, "sigma", fmt_real(report.binomial_sigma), format!("{:.1}", report.binomial_sigma), "")?;
    row(out, "ratio", fmt_real(ratio), sig.label.to_string(), "")?;
    row(out, "exact", report.exact.to_string(), String::new(), "")?;
    out.flush()?;
    Ok(())
}
