//! Structured records and their CSV / json-lines encodings.
//!
//! CSV tables have one header row per record kind and print reals with six
//! significant digits. json-lines keeps full precision so records parse back
//! unchanged.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::angle::{DetectorSettings, SettingsQuad};
use crate::error::{Error, Result};
use crate::estimators::{ChshEstimate, CorrelationEstimate};
use crate::models::{expected_correlation, ModelSpec};
use crate::rationality::{RationalityReport, Significance};
use crate::runner::{TrialBatch, PRNG_ID};

pub const TOOL_VERSION: &str = concat!("spincorr ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: Option<u64>,
    pub model: Option<String>,
    pub prng: Option<String>,
    pub tool_version: String,
}

impl Metadata {
    pub fn simulated(model: &ModelSpec, seed: u64) -> Self {
        Metadata {
            seed: Some(seed),
            model: Some(model.name().to_string()),
            prng: Some(PRNG_ID.to_string()),
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn analytic() -> Self {
        Metadata { seed: None, model: None, prng: None, tool_version: TOOL_VERSION.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchRow {
    pub theta_a_deg: f64,
    pub theta_b_deg: f64,
    pub n: u64,
    pub n_pp: u64,
    pub n_pm: u64,
    pub n_mp: u64,
    pub n_mm: u64,
    pub m: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub theta_a_deg: f64,
    pub theta_b_deg: f64,
    pub n: u64,
    pub m: u64,
    pub numerator: i64,
    pub denominator: u64,
    pub value: f64,
    pub std_error: f64,
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshRow {
    pub a_deg: f64,
    pub a2_deg: f64,
    pub b_deg: f64,
    pub b2_deg: f64,
    pub n: u64,
    pub c_ab: f64,
    pub c_ab2: f64,
    pub c_a2b: f64,
    pub c_a2b2: f64,
    pub s_value: f64,
    pub combined_sigma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalityRow {
    pub delta_deg: f64,
    pub n: u64,
    pub x: f64,
    pub real_count: f64,
    pub nearest_m: u64,
    pub gap: f64,
    pub relative_error: Option<f64>,
    pub sigma: f64,
    pub ratio: Option<f64>,
    pub label: String,
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordKind {
    Batch,
    Estimate,
    Chsh,
    Rationality,
    SweepRow,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Batch(BatchRow),
    Estimate(EstimateRow),
    Chsh(ChshRow),
    Rationality(RationalityRow),
    SweepRow(RationalityRow),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    #[serde(flatten)]
    pub payload: Payload,
    pub metadata: Metadata,
}

fn settings_deg(s: &DetectorSettings) -> (f64, f64) {
    (s.theta_a.degrees(), s.theta_b.degrees())
}

impl OutputRecord {
    pub fn batch(batch: &TrialBatch) -> Self {
        let (theta_a_deg, theta_b_deg) = settings_deg(&batch.settings);
        let c = batch.counts;
        OutputRecord {
            payload: Payload::Batch(BatchRow {
                theta_a_deg,
                theta_b_deg,
                n: c.n(),
                n_pp: c.n_pp,
                n_pm: c.n_pm,
                n_mp: c.n_mp,
                n_mm: c.n_mm,
                m: c.m(),
            }),
            metadata: Metadata::simulated(&batch.model, batch.seed.0),
        }
    }

    pub fn estimate(batch: &TrialBatch, estimate: &CorrelationEstimate) -> Self {
        let (theta_a_deg, theta_b_deg) = settings_deg(&batch.settings);
        OutputRecord {
            payload: Payload::Estimate(EstimateRow {
                theta_a_deg,
                theta_b_deg,
                n: estimate.denominator,
                m: estimate.plus_count(),
                numerator: estimate.numerator,
                denominator: estimate.denominator,
                value: estimate.real_value,
                std_error: estimate.std_error,
                expected: expected_correlation(&batch.model, &batch.settings),
            }),
            metadata: Metadata::simulated(&batch.model, batch.seed.0),
        }
    }

    pub fn chsh(quad: &SettingsQuad, model: &ModelSpec, seed: u64, chsh: &ChshEstimate) -> Self {
        let [e1, e2, e3, e4] = chsh.components;
        OutputRecord {
            payload: Payload::Chsh(ChshRow {
                a_deg: quad.theta_a_prime.degrees(),
                a2_deg: quad.theta_a_double.degrees(),
                b_deg: quad.theta_b_prime.degrees(),
                b2_deg: quad.theta_b_double.degrees(),
                n: e1.denominator,
                c_ab: e1.real_value,
                c_ab2: e2.real_value,
                c_a2b: e3.real_value,
                c_a2b2: e4.real_value,
                s_value: chsh.s_value,
                combined_sigma: chsh.combined_sigma(),
            }),
            metadata: Metadata::simulated(model, seed),
        }
    }

    fn rationality_row(delta_deg: f64, report: &RationalityReport, sig: &Significance) -> RationalityRow {
        RationalityRow {
            delta_deg,
            n: report.n,
            x: report.target_fraction,
            real_count: report.real_count,
            nearest_m: report.nearest_m,
            gap: report.gap,
            relative_error: report.relative_error,
            sigma: report.binomial_sigma,
            ratio: sig.ratio,
            label: sig.label.as_str().to_string(),
            exact: report.exact,
        }
    }

    /// `delta_deg` is the difference as the caller specified it; the report
    /// itself only keeps the folded magnitude.
    pub fn rationality(delta_deg: f64, report: &RationalityReport, sig: &Significance) -> Self {
        OutputRecord {
            payload: Payload::Rationality(Self::rationality_row(delta_deg, report, sig)),
            metadata: Metadata::analytic(),
        }
    }

    pub fn sweep_row(delta_deg: f64, report: &RationalityReport, sig: &Significance) -> Self {
        OutputRecord {
            payload: Payload::SweepRow(Self::rationality_row(delta_deg, report, sig)),
            metadata: Metadata::analytic(),
        }
    }

    pub fn kind(&self) -> RecordKind {
        match self.payload {
            Payload::Batch(_) => RecordKind::Batch,
            Payload::Estimate(_) => RecordKind::Estimate,
            Payload::Chsh(_) => RecordKind::Chsh,
            Payload::Rationality(_) => RecordKind::Rationality,
            Payload::SweepRow(_) => RecordKind::SweepRow,
        }
    }

    fn reals(&self) -> Vec<f64> {
        match &self.payload {
            Payload::Batch(r) => vec![r.theta_a_deg, r.theta_b_deg],
            Payload::Estimate(r) => vec![r.theta_a_deg, r.theta_b_deg, r.value, r.std_error, r.expected],
            Payload::Chsh(r) => vec![
                r.a_deg, r.a2_deg, r.b_deg, r.b2_deg, r.c_ab, r.c_ab2, r.c_a2b, r.c_a2b2, r.s_value,
                r.combined_sigma,
            ],
            Payload::Rationality(r) | Payload::SweepRow(r) => {
                let mut v = vec![r.delta_deg, r.x, r.real_count, r.gap, r.sigma];
                v.extend(r.relative_error);
                v.extend(r.ratio);
                v
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.reals().iter().all(|x| x.is_finite())
    }

    fn csv_cells(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(fmt_real).unwrap_or_default();
        let mut cells: Vec<String> = match &self.payload {
            Payload::Batch(r) => vec![
                fmt_real(r.theta_a_deg),
                fmt_real(r.theta_b_deg),
                r.n.to_string(),
                r.n_pp.to_string(),
                r.n_pm.to_string(),
                r.n_mp.to_string(),
                r.n_mm.to_string(),
                r.m.to_string(),
            ],
            Payload::Estimate(r) => vec![
                fmt_real(r.theta_a_deg),
                fmt_real(r.theta_b_deg),
                r.n.to_string(),
                r.m.to_string(),
                r.numerator.to_string(),
                r.denominator.to_string(),
                fmt_real(r.value),
                fmt_real(r.std_error),
                fmt_real(r.expected),
            ],
            Payload::Chsh(r) => {
                let mut v: Vec<String> = [r.a_deg, r.a2_deg, r.b_deg, r.b2_deg].into_iter().map(fmt_real).collect();
                v.push(r.n.to_string());
                v.extend([r.c_ab, r.c_ab2, r.c_a2b, r.c_a2b2, r.s_value, r.combined_sigma].into_iter().map(fmt_real));
                v
            }
            Payload::Rationality(r) | Payload::SweepRow(r) => vec![
                fmt_real(r.delta_deg),
                r.n.to_string(),
                fmt_real(r.x),
                fmt_real(r.real_count),
                r.nearest_m.to_string(),
                fmt_real(r.gap),
                opt(r.relative_error),
                fmt_real(r.sigma),
                opt(r.ratio),
                r.label.clone(),
            ],
        };
        match &self.payload {
            Payload::Rationality(r) => cells.push(r.exact.to_string()),
            Payload::SweepRow(_) => {}
            _ => {
                let m = &self.metadata;
                cells.push(m.seed.map(|s| s.to_string()).unwrap_or_default());
                cells.push(m.model.clone().unwrap_or_default());
                cells.push(m.prng.clone().unwrap_or_default());
                cells.push(m.tool_version.clone());
            }
        }
        cells
    }
}

const METADATA_COLUMNS: [&str; 4] = ["seed", "model", "prng", "tool_version"];

const RATIONALITY_COLUMNS: [&str; 10] = [
    "delta_deg",
    "n",
    "x",
    "real_count",
    "nearest_m",
    "gap",
    "relative_error",
    "sigma",
    "ratio",
    "label",
];

impl RecordKind {
    pub fn csv_header(self) -> Vec<&'static str> {
        let payload: &[&str] = match self {
            RecordKind::Batch => &["theta_a_deg", "theta_b_deg", "n", "n_pp", "n_pm", "n_mp", "n_mm", "m"],
            RecordKind::Estimate => &[
                "theta_a_deg",
                "theta_b_deg",
                "n",
                "m",
                "numerator",
                "denominator",
                "value",
                "std_error",
                "expected",
            ],
            RecordKind::Chsh => &[
                "a_deg",
                "a2_deg",
                "b_deg",
                "b2_deg",
                "n",
                "c_ab",
                "c_ab2",
                "c_a2b",
                "c_a2b2",
                "s_value",
                "combined_sigma",
            ],
            RecordKind::Rationality | RecordKind::SweepRow => &RATIONALITY_COLUMNS,
        };
        let mut header = payload.to_vec();
        if self == RecordKind::Rationality {
            header.push("exact");
        }
        if matches!(self, RecordKind::Batch | RecordKind::Estimate | RecordKind::Chsh) {
            header.extend(METADATA_COLUMNS);
        }
        header
    }
}

/// Formats a real with six significant digits, `%g` style.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn check_finite(records: &[OutputRecord]) -> Result<()> {
    if records.iter().all(OutputRecord::is_finite) {
        Ok(())
    } else {
        Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            "record contains a non-finite value",
        )))
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Writes one CSV table: header row for `kind`, then one line per record.
/// An empty slice yields the header alone.
pub fn emit_csv_table<W: Write>(kind: RecordKind, records: &[OutputRecord], out: W) -> Result<()> {
    check_finite(records)?;
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    writer.write_record(kind.csv_header()).map_err(csv_error)?;
    for record in records {
        debug_assert_eq!(record.kind(), kind);
        writer.write_record(record.csv_cells()).map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes records in `format`. In CSV, each run of same-kind records forms
/// its own table; tables are separated by a blank line.
pub fn emit<W: Write>(records: &[OutputRecord], format: Format, mut out: W) -> Result<()> {
    check_finite(records)?;
    match format {
        Format::JsonLines => {
            for record in records {
                serde_json::to_writer(&mut out, record)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let groups = records.chunk_by(|a, b| a.kind() == b.kind());
            for (i, group) in groups.enumerate() {
                if i > 0 {
                    out.write_all(b"\n")?;
                }
                emit_csv_table(group[0].kind(), group, &mut out)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Parses json-lines output back into records.
pub fn parse_json_lines(text: &str) -> Result<Vec<OutputRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}
