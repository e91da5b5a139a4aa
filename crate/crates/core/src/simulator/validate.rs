//! Monte Carlo check of the analytic accuracy model on a (bit-width, depth)
//! grid.

use rayon::prelude::*;
use serde::Serialize;

use crate::accuracy::model::{kappa_distorted_unchecked, quant_variance_unchecked};
use crate::accuracy::{accuracy_model, FeatureProfile, QuantizerSpec};
use crate::error::{argument, Result};
use crate::rng::substream;

use super::classify::empirical_accuracy;
use super::dataset::{distort, generate_dataset};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationCell {
    pub q: f64,
    pub ell: f64,
    pub n: usize,
    pub analytic: f64,
    pub empirical: f64,
    pub ci: f64,
    /// Three binomial standard errors at the analytic accuracy.
    pub bound: f64,
    pub pass: bool,
}

/// Simulates each grid cell with `truth` and compares against the analytic
/// accuracy computed from `model`. The two profiles coincide except for
/// negative controls.
pub fn validate_grid(
    truth: &FeatureProfile,
    model: &FeatureProfile,
    spec: &QuantizerSpec,
    bit_widths: &[f64],
    depths: &[f64],
    n_per_class: usize,
    seed: u64,
) -> Result<Vec<ValidationCell>> {
    if bit_widths.is_empty() || depths.is_empty() {
        return Err(argument("validate_grid", "grid is empty"));
    }
    let cells: Vec<(f64, f64)> = bit_widths
        .iter()
        .flat_map(|&q| depths.iter().map(move |&ell| (q, ell)))
        .collect();
    cells
        .into_par_iter()
        .enumerate()
        .map(|(index, (q, ell))| {
            let cell_seed = substream(seed, index as u64);
            let clean = generate_dataset(truth, ell, n_per_class, cell_seed)?;
            let sigma2 = quant_variance_unchecked(q, spec);
            let noisy = distort(&clean, sigma2, truth, substream(cell_seed, 1))?;
            let decision_kappa =
                kappa_distorted_unchecked(sigma2, ell, truth).max(f64::MIN_POSITIVE);
            let emp = empirical_accuracy(&noisy, truth, decision_kappa)?;
            let analytic = accuracy_model(q, ell, model, spec)?;
            let n = emp.total;
            let bound = 3.0 * (analytic * (1.0 - analytic) / n as f64).sqrt();
            Ok(ValidationCell {
                q,
                ell,
                n,
                analytic,
                empirical: emp.accuracy,
                ci: emp.half_width,
                bound,
                pass: (emp.accuracy - analytic).abs() < bound,
            })
        })
        .collect()
}
