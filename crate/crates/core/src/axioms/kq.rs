//! Numerical membership test for the ideal `K_q` generated by `L_q`.
//!
//! An operator passes when, in every band `l_row - l_col` with enough level
//! blocks above the floor, `ln ‖block‖` falls linearly in `l` at least as fast
//! as `rate_factor · ln q` and the line fits (RMS log-residual below
//! `max_residual`). The first levels carry near-cancellations that are not
//! part of the asymptotics, so samples with `min(l_row, l_col) < burn_in` are
//! dropped, and only the trailing `tail_fraction` of what remains (at least
//! three samples) is fitted: a sum like `q^{4l} + q^{2l}` bends before it
//! settles on its slowest rate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{
    band_samples, block_norms, decay_fit, DecayFit, LinearOperator, DEFAULT_FLOOR,
};
use crate::qcore::QParam;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KqCriterion {
    pub rate_factor: f64,
    pub max_residual: f64,
    pub floor: f64,
    pub burn_in: f64,
    pub tail_fraction: f64,
}

impl Default for KqCriterion {
    fn default() -> Self {
        KqCriterion {
            rate_factor: 0.9,
            max_residual: 0.5,
            floor: DEFAULT_FLOOR,
            burn_in: 2.0,
            tail_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KqStatus {
    Pass,
    Fail,
    /// Every block is at or below the floor.
    BelowFloor,
    /// Blocks above the floor exist but no band has three samples past the
    /// burn-in.
    Insufficient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandFit {
    pub band_twice: i32,
    pub fit: DecayFit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KqOutcome {
    pub status: KqStatus,
    /// The band with the largest (slowest) fitted rate.
    pub worst: Option<BandFit>,
    pub max_residual: f64,
    pub rate_threshold: f64,
    pub residual_threshold: f64,
    /// Samples used across all fitted bands; for an insufficient outcome, the
    /// most found in any band.
    pub samples: usize,
    pub bands: Vec<BandFit>,
}

impl KqOutcome {
    pub fn passes(&self) -> bool {
        matches!(self.status, KqStatus::Pass | KqStatus::BelowFloor)
    }

    /// Turns [`KqStatus::Insufficient`] into an error.
    pub fn require_samples(self) -> Result<Self> {
        if self.status == KqStatus::Insufficient {
            return Err(Error::TooFewSamples {
                found: self.samples,
            });
        }
        Ok(self)
    }

    pub fn worst_rate(&self) -> Option<f64> {
        self.worst.as_ref().map(|w| w.fit.rate)
    }
}

impl KqCriterion {
    pub fn rate_threshold(&self, q: QParam) -> f64 {
        self.rate_factor * q.get().ln()
    }

    pub fn evaluate(&self, op: &LinearOperator, q: QParam) -> Result<KqOutcome> {
        let threshold = self.rate_threshold(q);
        let bands = band_samples(&block_norms(op)?);
        let mut fits = Vec::new();
        let mut above_floor = 0;
        let mut most_in_band = 0;
        for (&band_twice, samples) in &bands {
            let kept: Vec<(f64, f64)> = samples
                .iter()
                .copied()
                .filter(|&(l, v)| l >= self.burn_in && v > self.floor)
                .collect();
            above_floor += samples.iter().filter(|s| s.1 > self.floor).count();
            most_in_band = most_in_band.max(kept.len());
            if kept.len() >= 3 {
                let take =
                    ((kept.len() as f64 * self.tail_fraction).ceil() as usize).clamp(3, kept.len());
                fits.push(BandFit {
                    band_twice,
                    fit: decay_fit(&kept[kept.len() - take..], self.floor)?,
                });
            }
        }
        if fits.is_empty() {
            let (status, samples) = if above_floor == 0 {
                (KqStatus::BelowFloor, 0)
            } else {
                (KqStatus::Insufficient, most_in_band)
            };
            return Ok(KqOutcome {
                status,
                worst: None,
                max_residual: 0.0,
                rate_threshold: threshold,
                residual_threshold: self.max_residual,
                samples,
                bands: Vec::new(),
            });
        }
        let worst = fits
            .iter()
            .max_by(|x, y| x.fit.rate.total_cmp(&y.fit.rate))
            .cloned();
        let max_residual = fits.iter().map(|b| b.fit.residual).fold(0.0, f64::max);
        let pass = fits.iter().all(|b| {
            b.fit.decays_like(q.get().ln(), self.rate_factor) && b.fit.residual < self.max_residual
        });
        Ok(KqOutcome {
            status: if pass { KqStatus::Pass } else { KqStatus::Fail },
            worst,
            max_residual,
            rate_threshold: threshold,
            residual_threshold: self.max_residual,
            samples: fits.iter().map(|b| b.fit.samples.len()).sum(),
            bands: fits,
        })
    }
}
