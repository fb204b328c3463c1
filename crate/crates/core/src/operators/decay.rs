//! Level-block norms and exponential decay fits.
//!
//! An operator in the ideal generated by `L_q` has level blocks whose norms
//! fall off like `q^l`; on a finite truncation that shows up as a straight
//! line in `ln ‖P_l X P_l'‖` against `l`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{op_norm, LinearOperator};
use crate::error::{Error, Result};
use crate::qcore::HalfInt;

/// Blocks with norm at or below this are treated as exact zeros.
pub const DEFAULT_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockNorm {
    pub l_row: HalfInt,
    pub l_col: HalfInt,
    pub norm: f64,
}

/// `‖P_{l_row} A P_{l_col}‖` for every pair of levels, row level major.
pub fn block_norms(a: &LinearOperator) -> Result<Vec<BlockNorm>> {
    let spec = a.spec();
    let levels = spec.levels();
    let ordinals: Vec<Vec<usize>> = levels.iter().map(|&l| spec.level_ordinals(l)).collect();
    let pairs: Vec<(usize, usize)> = (0..levels.len())
        .flat_map(|r| (0..levels.len()).map(move |c| (r, c)))
        .collect();
    pairs
        .par_iter()
        .map(|&(r, c)| {
            let block = a.matrix().select(&ordinals[r], &ordinals[c]);
            let norm = if block.is_zero() {
                0.0
            } else {
                op_norm(&block)?
            };
            Ok(BlockNorm {
                l_row: levels[r],
                l_col: levels[c],
                norm,
            })
        })
        .collect()
}

/// Groups block norms by band `l_row - l_col` (keyed by its doubled value);
/// each sample is `(min(l_row, l_col), norm)` in ascending `l`.
pub fn band_samples(blocks: &[BlockNorm]) -> BTreeMap<i32, Vec<(f64, f64)>> {
    let mut bands: BTreeMap<i32, Vec<(f64, f64)>> = BTreeMap::new();
    for b in blocks {
        let band = (b.l_row - b.l_col).twice();
        let l = b.l_row.min(b.l_col).value();
        bands.entry(band).or_default().push((l, b.norm));
    }
    for samples in bands.values_mut() {
        samples.sort_by(|x, y| x.0.total_cmp(&y.0));
    }
    bands
}

/// Least-squares line through `(l, ln norm)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    /// `ln C` in `norm ≈ C e^{rate·l}`.
    pub log_prefactor: f64,
    /// Fitted slope per unit `l`.
    pub rate: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    /// The samples used by the fit.
    pub samples: Vec<(f64, f64)>,
}

impl DecayFit {
    /// Whether the fit decays at least at `margin` times the rate `ln q`.
    pub fn decays_like(&self, ln_q: f64, margin: f64) -> bool {
        self.rate <= margin * ln_q
    }
}

/// Fits `ln norm = log_prefactor + rate · l` over samples above `floor`.
pub fn decay_fit(samples: &[(f64, f64)], floor: f64) -> Result<DecayFit> {
    let used: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|&(_, v)| v > floor)
        .collect();
    if used.len() < 3 {
        return Err(Error::TooFewSamples { found: used.len() });
    }
    let n = used.len() as f64;
    let mean_x = used.iter().map(|s| s.0).sum::<f64>() / n;
    let mean_y = used.iter().map(|s| s.1.ln()).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, v) in &used {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (v.ln() - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::TooFewSamples { found: 1 });
    }
    let rate = sxy / sxx;
    let log_prefactor = mean_y - rate * mean_x;
    let residual = (used
        .iter()
        .map(|&(x, v)| (v.ln() - log_prefactor - rate * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(DecayFit {
        log_prefactor,
        rate,
        residual,
        samples: used,
    })
}
