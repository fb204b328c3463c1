//! Verification suites: each checks one property of the spectral data on
//! finite truncations and produces a [`VerificationReport`].
//!
//! Exact identities are asserted only on compressions `P X P`, with `P` the
//! projector onto levels `l ≤ L_max - w · margin` for operator words of total
//! generator length `w`; the top levels of a truncation see matrix elements
//! cut off and are not expected to satisfy anything.

mod kq;
mod report;
mod suites;

pub use kq::{BandFit, KqCriterion, KqOutcome, KqStatus};
pub use report::{FitRecord, Relation, ReportItem, Verdict, VerificationReport, SCHEMA_VERSION};
pub use suites::{
    boundedness_drift, check_bounded_commutators, check_commutant_failure, check_commutant_mod_kq,
    check_equivariance, check_first_order_mod_kq, check_relations, check_spectrum_and_dimension,
    check_structure_identities, commutant_failure_norm, commutant_operator, counting_dimension,
    counting_function, decay_outcomes, default_profile_cases, dirac_commutator_norms,
    faithfulness_residual, first_order_operator, generator_pairs, profile_outcome, random_pairs,
    relation_residuals, uniqueness_scan, ProfileCase, ProfileOutcome, DEFAULT_SPECTRUM_K,
    SPECTRUM_LAMBDA_MAX,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hilbert::HilbertSpec;
use crate::operators::LinearOperator;
use crate::qcore::{half_int, HalfInt, QParam};
use crate::spectral::{
    calibrate_conventions, default_candidates, ConventionChoice, DiracProfile, IndexReading,
    SpectralData, CALIBRATION_TOL,
};

pub const RELATION_TOL: f64 = 1e-10;
pub const EQUIVARIANCE_TOL: f64 = 1e-9;
pub const STRUCTURE_TOL: f64 = 1e-12;
pub const NONVANISHING_TOL: f64 = 1e-3;
pub const STABILITY_TOL: f64 = 1e-6;

/// Smallest truncation the decay suites accept: generator pairs keep levels
/// up to `L_max - 2`, and for pairs that vanish on the diagonal band the
/// off-diagonal bands need three samples past the burn-in.
pub const MIN_DECAY_L_MAX: HalfInt = half_int(15);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompressionRule {
    /// Levels trimmed per unit of word length.
    pub margin: u32,
}

impl Default for CompressionRule {
    fn default() -> Self {
        CompressionRule { margin: 1 }
    }
}

impl CompressionRule {
    /// The top level kept for words of total length `word_length`.
    pub fn cut(&self, spec: HilbertSpec, word_length: u32) -> Result<HalfInt> {
        let trimmed = spec.l_max().twice() - 2 * (word_length * self.margin) as i32;
        if trimmed < 1 {
            return Err(Error::InvalidConfig(format!(
                "L_max = {} leaves no levels after trimming {} for word length {}",
                spec.l_max(),
                word_length * self.margin,
                word_length
            )));
        }
        Ok(HalfInt::from_twice(trimmed))
    }

    pub fn compress(&self, op: &LinearOperator, word_length: u32) -> Result<LinearOperator> {
        Ok(op.compress(self.cut(op.spec(), word_length)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteId {
    Relations,
    Equivariance,
    Structure,
    CommutantFailure,
    CommutantModKq,
    FirstOrderModKq,
    BoundedCommutators,
    Spectrum,
    Uniqueness,
}

impl SuiteId {
    pub const ALL: [SuiteId; 9] = [
        SuiteId::Relations,
        SuiteId::Equivariance,
        SuiteId::Structure,
        SuiteId::CommutantFailure,
        SuiteId::CommutantModKq,
        SuiteId::FirstOrderModKq,
        SuiteId::BoundedCommutators,
        SuiteId::Spectrum,
        SuiteId::Uniqueness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteId::Relations => "relations",
            SuiteId::Equivariance => "equivariance",
            SuiteId::Structure => "structure",
            SuiteId::CommutantFailure => "commutant-failure",
            SuiteId::CommutantModKq => "commutant-mod-kq",
            SuiteId::FirstOrderModKq => "first-order-mod-kq",
            SuiteId::BoundedCommutators => "bounded-commutators",
            SuiteId::Spectrum => "spectrum",
            SuiteId::Uniqueness => "uniqueness",
        }
    }

    /// Suites that fit `q^l` decay and so need `q < 1` and a few levels.
    pub fn needs_decay(self) -> bool {
        matches!(
            self,
            SuiteId::CommutantModKq | SuiteId::FirstOrderModKq | SuiteId::Uniqueness
        )
    }

    pub fn needs_deformation(self) -> bool {
        self != SuiteId::Spectrum
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.as_str() == s.trim())
            .ok_or_else(|| {
                let known: Vec<&str> = SuiteId::ALL.iter().map(|s| s.as_str()).collect();
                Error::InvalidConfig(format!(
                    "unknown suite '{s}' (known: {}, all)",
                    known.join(", ")
                ))
            })
    }
}

/// Everything a suite run depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub q: f64,
    pub l_max: HalfInt,
    pub margin: u32,
    pub profile: DiracProfile,
    pub reading: IndexReading,
    pub seed: u64,
    pub random_pairs: usize,
    pub spectrum_k: u32,
}

impl RunSettings {
    pub fn new(q: f64, l_max: HalfInt) -> Self {
        RunSettings {
            q,
            l_max,
            margin: 1,
            profile: DiracProfile::standard(),
            reading: IndexReading::Corrected,
            seed: 0,
            random_pairs: 50,
            spectrum_k: DEFAULT_SPECTRUM_K,
        }
    }

    /// Rejects settings a suite cannot run with.
    pub fn validate(&self, suite: SuiteId) -> Result<QParam> {
        let q = QParam::new(self.q)?;
        if suite.needs_deformation() && q.is_classical() {
            return Err(Error::InvalidConfig("decay suites require q < 1".into()));
        }
        self.l_max.validate_spin()?;
        if self.margin == 0 {
            return Err(Error::InvalidConfig("margin must be at least 1".into()));
        }
        if suite.needs_decay() && self.l_max < MIN_DECAY_L_MAX {
            return Err(Error::InvalidConfig(format!(
                "decay suites require L_max >= {MIN_DECAY_L_MAX}, got {}",
                self.l_max
            )));
        }
        Ok(q)
    }

    /// `{L, L + 5, L + 10}`.
    pub fn ladder_sizes(&self) -> [HalfInt; 3] {
        [
            self.l_max,
            self.l_max + HalfInt::from_int(5),
            self.l_max + HalfInt::from_int(10),
        ]
    }

    fn data(
        &self,
        q: QParam,
        l_max: HalfInt,
        profile: &DiracProfile,
        convention: &ConventionChoice,
    ) -> Result<SpectralData> {
        SpectralData::new(
            HilbertSpec::new(l_max)?,
            q,
            profile.clone(),
            self.reading,
            convention.clone(),
        )
    }

    fn ladder(
        &self,
        q: QParam,
        profile: &DiracProfile,
        convention: &ConventionChoice,
    ) -> Result<Vec<SpectralData>> {
        self.ladder_sizes()
            .iter()
            .map(|&l| self.data(q, l, profile, convention))
            .collect()
    }

    fn echo(&self, report: &mut VerificationReport) {
        report.echo("q", self.q);
        report.echo("l_max", self.l_max);
        report.echo("margin", self.margin);
        report.echo("d_profile", &self.profile);
        report.echo("index_reading", self.reading.id());
        report.echo("seed", self.seed);
        report.echo("random_pairs", self.random_pairs);
        report.echo("spectrum_k", self.spectrum_k);
        let ladder: Vec<String> = self.ladder_sizes().iter().map(|l| l.to_string()).collect();
        report.echo("ladder", ladder.join(","));
    }
}

/// Runs one suite; errors are configuration problems, failed checks show up
/// in the report verdict.
pub fn run_suite(suite: SuiteId, settings: &RunSettings) -> Result<VerificationReport> {
    let q = settings.validate(suite)?;
    let rule = CompressionRule {
        margin: settings.margin,
    };
    let criterion = KqCriterion::default();
    let mut report = if suite == SuiteId::Spectrum {
        check_spectrum_and_dimension(&settings.profile, settings.spectrum_k, settings.q)?
    } else {
        let convention = calibrate_conventions(q, &default_candidates(), CALIBRATION_TOL)?;
        let single = || settings.data(q, settings.l_max, &settings.profile, &convention);
        match suite {
            SuiteId::Relations => check_relations(&single()?, rule)?,
            SuiteId::Equivariance => check_equivariance(&single()?, rule)?,
            SuiteId::Structure => check_structure_identities(&single()?)?,
            SuiteId::CommutantFailure => {
                check_commutant_failure(&settings.ladder(q, &settings.profile, &convention)?, rule)?
            }
            SuiteId::CommutantModKq => check_commutant_mod_kq(
                &single()?,
                rule,
                &criterion,
                settings.seed,
                settings.random_pairs,
            )?,
            SuiteId::FirstOrderModKq => check_first_order_mod_kq(
                &single()?,
                rule,
                &criterion,
                settings.seed,
                settings.random_pairs,
            )?,
            SuiteId::BoundedCommutators => check_bounded_commutators(
                &settings.ladder(q, &settings.profile, &convention)?,
                rule,
            )?,
            SuiteId::Uniqueness => {
                uniqueness_scan(&default_profile_cases(), rule, &criterion, |p| {
                    settings.ladder(q, p, &convention)
                })?
            }
            SuiteId::Spectrum => unreachable!("handled above"),
        }
    };
    settings.echo(&mut report);
    Ok(report)
}
