//! Verification reports shared by the suites and the command line.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::kq::{KqOutcome, KqStatus};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// How `value` is compared with `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

impl Relation {
    pub fn holds(self, value: f64, tolerance: f64) -> bool {
        match self {
            Relation::Below => value < tolerance,
            Relation::AtMost => value <= tolerance,
            Relation::AtLeast => value >= tolerance,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Below => "<",
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportItem {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReportItem {
    pub fn new(name: impl Into<String>, value: f64, relation: Relation, tolerance: f64) -> Self {
        ReportItem {
            name: name.into(),
            value,
            tolerance,
            relation,
            pass: relation.holds(value, tolerance),
            note: None,
        }
    }

    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value, Relation::Below, tolerance)
    }

    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value, Relation::AtMost, tolerance)
    }

    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value, Relation::AtLeast, tolerance)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// One decay fit as it appears in a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRecord {
    pub label: String,
    /// `l_row - l_col` of the band with the slowest decay.
    pub band: Option<f64>,
    pub rate: Option<f64>,
    pub log_prefactor: Option<f64>,
    /// Largest RMS log-residual over the fitted bands.
    pub residual: Option<f64>,
    pub rate_threshold: f64,
    pub residual_threshold: f64,
    pub samples: usize,
    pub status: KqStatus,
    pub pass: bool,
}

impl FitRecord {
    pub fn from_outcome(label: impl Into<String>, outcome: &KqOutcome) -> Self {
        FitRecord {
            label: label.into(),
            band: outcome
                .worst
                .as_ref()
                .map(|w| f64::from(w.band_twice) / 2.0),
            rate: outcome.worst.as_ref().map(|w| w.fit.rate),
            log_prefactor: outcome.worst.as_ref().map(|w| w.fit.log_prefactor),
            residual: outcome.worst.as_ref().map(|_| outcome.max_residual),
            rate_threshold: outcome.rate_threshold,
            residual_threshold: outcome.residual_threshold,
            samples: outcome.samples,
            status: outcome.status,
            pass: outcome.status != KqStatus::Fail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub suite: String,
    pub q: f64,
    pub l_max: String,
    pub margin: u32,
    pub convention: Option<String>,
    pub verdict: Verdict,
    pub items: Vec<ReportItem>,
    pub fits: Vec<FitRecord>,
    pub config: BTreeMap<String, String>,
    pub generated_at: Option<String>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, q: f64, l_max: impl fmt::Display, margin: u32) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            suite: suite.into(),
            q,
            l_max: l_max.to_string(),
            margin,
            convention: None,
            verdict: Verdict::Pass,
            items: Vec::new(),
            fits: Vec::new(),
            config: BTreeMap::new(),
            generated_at: None,
        }
    }

    pub fn push(&mut self, item: ReportItem) {
        self.items.push(item);
        self.refresh();
    }

    pub fn push_fit(&mut self, fit: FitRecord) {
        self.fits.push(fit);
        self.refresh();
    }

    pub fn echo(&mut self, key: &str, value: impl fmt::Display) {
        self.config.insert(key.to_string(), value.to_string());
    }

    fn refresh(&mut self) {
        let pass = self.items.iter().all(|i| i.pass) && self.fits.iter().all(|f| f.pass);
        self.verdict = Verdict::from_pass(pass);
    }

    /// Items and fits that did not pass.
    pub fn failures(&self) -> Vec<String> {
        let items = self.items.iter().filter(|i| !i.pass).map(|i| {
            format!(
                "{} = {:e} (want {} {:e})",
                i.name,
                i.value,
                i.relation.symbol(),
                i.tolerance
            )
        });
        let fits = self.fits.iter().filter(|f| !f.pass).map(|f| {
            format!(
                "{}: rate {} (want <= {:.4}), residual {} (want < {})",
                f.label,
                f.rate.map_or("-".into(), |r| format!("{r:.4}")),
                f.rate_threshold,
                f.residual.map_or("-".into(), |r| format!("{r:.3}")),
                f.residual_threshold
            )
        });
        items.chain(fits).collect()
    }
}
