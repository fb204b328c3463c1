use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use qsphere::axioms::VerificationReport;
use serde::Serialize;
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use crate::args::Format;

/// `SOURCE_DATE_EPOCH` as RFC 3339, or `None` so that reports stay
/// byte-identical across runs.
pub fn generated_at() -> Result<Option<String>> {
    let Ok(raw) = std::env::var("SOURCE_DATE_EPOCH") else {
        return Ok(None);
    };
    let secs: i64 = raw
        .trim()
        .parse()
        .context("SOURCE_DATE_EPOCH is not an integer")?;
    Ok(Some(
        OffsetDateTime::from_unix_timestamp(secs)?.format(&Rfc3339)?,
    ))
}

/// Prints a progress line; a closed stdout is not an error.
pub fn say(line: std::fmt::Arguments<'_>) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

pub fn q_tag(q: f64) -> String {
    format!("q{q}")
}

/// Frozen column order of CSV reports: one row per item, then one per fit.
pub const REPORT_COLUMNS: [&str; 20] = [
    "suite",
    "q",
    "l_max",
    "convention",
    "verdict",
    "kind",
    "name",
    "value",
    "relation",
    "tolerance",
    "pass",
    "band",
    "rate",
    "log_prefactor",
    "residual",
    "rate_threshold",
    "residual_threshold",
    "samples",
    "status",
    "note",
];

#[derive(Debug, Serialize)]
struct ReportRow<'a> {
    suite: &'a str,
    q: f64,
    l_max: &'a str,
    convention: Option<&'a str>,
    verdict: String,
    kind: &'static str,
    name: &'a str,
    value: Option<f64>,
    relation: Option<&'static str>,
    tolerance: Option<f64>,
    pass: bool,
    band: Option<f64>,
    rate: Option<f64>,
    log_prefactor: Option<f64>,
    residual: Option<f64>,
    rate_threshold: Option<f64>,
    residual_threshold: Option<f64>,
    samples: Option<usize>,
    status: Option<String>,
    note: Option<&'a str>,
}

fn csv_report(report: &VerificationReport) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(REPORT_COLUMNS)?;
    let base = |kind, name| ReportRow {
        suite: &report.suite,
        q: report.q,
        l_max: &report.l_max,
        convention: report.convention.as_deref(),
        verdict: report.verdict.to_string(),
        kind,
        name,
        value: None,
        relation: None,
        tolerance: None,
        pass: false,
        band: None,
        rate: None,
        log_prefactor: None,
        residual: None,
        rate_threshold: None,
        residual_threshold: None,
        samples: None,
        status: None,
        note: None,
    };
    for item in &report.items {
        w.serialize(ReportRow {
            value: Some(item.value),
            relation: Some(item.relation.symbol()),
            tolerance: Some(item.tolerance),
            pass: item.pass,
            note: item.note.as_deref(),
            ..base("item", &item.name)
        })?;
    }
    for fit in &report.fits {
        w.serialize(ReportRow {
            pass: fit.pass,
            band: fit.band,
            rate: fit.rate,
            log_prefactor: fit.log_prefactor,
            residual: fit.residual,
            rate_threshold: Some(fit.rate_threshold),
            residual_threshold: Some(fit.residual_threshold),
            samples: Some(fit.samples),
            status: Some(
                serde_json::to_value(fit.status)?
                    .as_str()
                    .unwrap_or_default()
                    .to_string(),
            ),
            ..base("fit", &fit.label)
        })?;
    }
    Ok(w.into_inner()?)
}

pub fn write_report(dir: &Path, report: &VerificationReport, format: Format) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(format!(
        "{}-{}.{}",
        report.suite,
        q_tag(report.q),
        format.extension()
    ));
    let bytes = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => csv_report(report)?,
    };
    fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

pub fn write_table<R: Serialize>(
    dir: &Path,
    name: &str,
    columns: &[&str],
    rows: impl IntoIterator<Item = R>,
) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(&path)
        .with_context(|| format!("writing {}", path.display()))?;
    w.write_record(columns)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(path)
}
