use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::accuracy::model::{grad_energy_unchecked, kappa_bar_unchecked};
use crate::accuracy::FeatureProfile;
use crate::circstats::angle::normalize_angle;
use crate::circstats::vonmises::draw;
use crate::circstats::AngularSampleSet;
use crate::error::{argument, require_nonneg, Error, Result};
use crate::rng::{stream_rng, substream};

const GENERATE_DOMAIN: u64 = 0;
const DISTORT_DOMAIN: u64 = 1;

/// Labelled angular features at one depth, before or after distortion.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularDataset {
    pub depth: f64,
    pub classes: usize,
    pub samples: AngularSampleSet,
    pub seed: u64,
    pub distorted: bool,
    /// Angular noise variance `σ²·a(ℓ)` applied; 0 when undistorted.
    pub sigma2_effective: f64,
}

/// `n_per_class` draws from `vM(μ_j, κ̄(ℓ))` for every class, grouped by class.
pub fn generate_dataset(
    profile: &FeatureProfile,
    ell: f64,
    n_per_class: usize,
    seed: u64,
) -> Result<AngularDataset> {
    profile.check_depth("generate_dataset", ell)?;
    if n_per_class == 0 {
        return Err(argument(
            "generate_dataset",
            "n_per_class must be at least 1",
        ));
    }
    let kappa = kappa_bar_unchecked(ell, profile);
    let blocks: Vec<Vec<f64>> = (1..=profile.classes)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream_rng(seed, substream(GENERATE_DOMAIN, j as u64));
            let mu = profile.centroid(j);
            (0..n_per_class)
                .map(|_| draw(&mut rng, mu, kappa))
                .collect()
        })
        .collect();
    let labels = (1..=profile.classes)
        .flat_map(|j| std::iter::repeat_n(j, n_per_class))
        .collect();
    Ok(AngularDataset {
        depth: ell,
        classes: profile.classes,
        samples: AngularSampleSet::from_parts_unchecked(blocks.concat(), Some(labels)),
        seed,
        distorted: false,
        sigma2_effective: 0.0,
    })
}

/// Adds wrapped Gaussian angular noise of variance `σ²·a(ℓ)` to every sample.
pub fn distort(
    dataset: &AngularDataset,
    sigma2: f64,
    profile: &FeatureProfile,
    seed: u64,
) -> Result<AngularDataset> {
    if dataset.distorted {
        return Err(Error::State {
            op: "distort",
            detail: "dataset is already distorted".into(),
        });
    }
    require_nonneg("distort", "sigma2", sigma2)?;
    let effective = sigma2 * grad_energy_unchecked(dataset.depth, profile);
    let angles = if effective == 0.0 {
        dataset.samples.angles().to_vec()
    } else {
        add_wrapped_noise(dataset.samples.angles(), effective, seed)
    };
    Ok(AngularDataset {
        samples: AngularSampleSet::from_parts_unchecked(
            angles,
            dataset.samples.labels().map(<[usize]>::to_vec),
        ),
        distorted: true,
        sigma2_effective: effective,
        ..dataset.clone()
    })
}

const NOISE_CHUNK: usize = 1 << 14;

pub(crate) fn add_wrapped_noise(angles: &[f64], variance: f64, seed: u64) -> Vec<f64> {
    let sd = variance.sqrt();
    angles
        .par_chunks(NOISE_CHUNK)
        .enumerate()
        .flat_map_iter(|(chunk, block)| {
            let mut rng = stream_rng(seed, substream(DISTORT_DOMAIN, chunk as u64));
            block
                .iter()
                .map(|&t| {
                    let g: f64 = rng.sample(StandardNormal);
                    normalize_angle(t + sd * g)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}
