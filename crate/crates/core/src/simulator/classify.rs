use crate::accuracy::FeatureProfile;
use crate::circstats::angle::distance_unchecked;
use crate::error::{argument, Result};

use super::dataset::AngularDataset;

const TIE_TOL: f64 = 1.0e-12;

/// MAP class (1-based) for angle `theta`. With a shared concentration and
/// uniform priors the posterior peaks at the nearest centroid for any
/// `kappa > 0`; `kappa = 0` makes every class equally likely. Ties go to the
/// smallest class index.
pub fn classify_map(theta: f64, profile: &FeatureProfile, kappa: f64) -> usize {
    if kappa <= 0.0 {
        return 1;
    }
    let mut best = 1;
    let mut best_distance = distance_unchecked(theta, profile.centroid(1));
    for j in 2..=profile.classes {
        let d = distance_unchecked(theta, profile.centroid(j));
        if d < best_distance - TIE_TOL {
            best = j;
            best_distance = d;
        }
    }
    best
}

/// Fraction of correct MAP decisions with a Wald 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalAccuracy {
    pub accuracy: f64,
    pub half_width: f64,
    pub correct: usize,
    pub total: usize,
}

impl EmpiricalAccuracy {
    pub fn from_counts(correct: usize, total: usize) -> Self {
        let p = correct as f64 / total as f64;
        Self {
            accuracy: p,
            half_width: 1.96 * (p * (1.0 - p) / total as f64).sqrt(),
            correct,
            total,
        }
    }
}

pub fn empirical_accuracy(
    dataset: &AngularDataset,
    profile: &FeatureProfile,
    kappa_for_decision: f64,
) -> Result<EmpiricalAccuracy> {
    let labels = dataset
        .samples
        .labels()
        .ok_or_else(|| argument("empirical_accuracy", "dataset is unlabelled"))?;
    if labels.is_empty() {
        return Err(argument("empirical_accuracy", "dataset is empty"));
    }
    let correct = dataset
        .samples
        .angles()
        .iter()
        .zip(labels)
        .filter(|(&t, &l)| classify_map(t, profile, kappa_for_decision) == l)
        .count();
    Ok(EmpiricalAccuracy::from_counts(correct, labels.len()))
}
