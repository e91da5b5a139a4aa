//! Concentration estimators and the wrapped-Gaussian matching.

use crate::error::{argument, require_nonneg, Result};

use super::bessel::{ratio_inv_saturating, Concentration};
use super::samples::AngularSampleSet;

const COLLINEAR_RBAR: f64 = 1.0 - 1.0e-12;

/// Normalized resultant length `R̄ = |Σ e^{iθ}| / N`.
pub fn mean_resultant_length(angles: &[f64]) -> f64 {
    let (c, s) = angles
        .iter()
        .fold((0.0, 0.0), |(c, s), &t| (c + t.cos(), s + t.sin()));
    c.hypot(s) / angles.len() as f64
}

/// `κ̂ = A⁻¹(R̄)` over all angles of the set (callers pass a single class).
pub fn estimate_kappa(samples: &AngularSampleSet) -> Result<Concentration> {
    estimate_from_angles(samples.angles())
}

pub(crate) fn estimate_from_angles(angles: &[f64]) -> Result<Concentration> {
    if angles.len() < 2 {
        return Err(argument(
            "estimate_kappa",
            format!("need at least 2 samples, got {}", angles.len()),
        ));
    }
    let rbar = mean_resultant_length(angles);
    if rbar >= COLLINEAR_RBAR {
        return Ok(Concentration {
            kappa: super::bessel::KAPPA_MAX,
            saturated: true,
        });
    }
    Ok(ratio_inv_saturating(rbar))
}

/// Mean of the per-class estimates over classes `1..=classes`. Saturated if
/// any class estimate saturated.
pub fn estimate_kappa_pooled(samples: &AngularSampleSet, classes: usize) -> Result<Concentration> {
    let labels = samples
        .labels()
        .ok_or_else(|| argument("estimate_kappa_pooled", "samples carry no labels"))?;
    if classes == 0 {
        return Err(argument(
            "estimate_kappa_pooled",
            "class count must be positive",
        ));
    }
    let mut per_class: Vec<Vec<f64>> = vec![Vec::new(); classes];
    for (&a, &l) in samples.angles().iter().zip(labels) {
        if l > classes {
            return Err(argument(
                "estimate_kappa_pooled",
                format!("label {l} exceeds class count {classes}"),
            ));
        }
        per_class[l - 1].push(a);
    }
    let mut total = 0.0;
    let mut saturated = false;
    for (j, angles) in per_class.iter().enumerate() {
        if angles.len() < 2 {
            return Err(argument(
                "estimate_kappa_pooled",
                format!(
                    "class {} has {} samples, need at least 2",
                    j + 1,
                    angles.len()
                ),
            ));
        }
        let est = estimate_from_angles(angles)?;
        total += est.kappa;
        saturated |= est.saturated;
    }
    Ok(Concentration {
        kappa: total / classes as f64,
        saturated,
    })
}

/// Concentration of the von Mises matched to a wrapped Gaussian of variance
/// `sigma2`: `A⁻¹(exp(−σ²/2))`.
pub fn wrapped_gaussian_kappa(sigma2: f64) -> Result<Concentration> {
    require_nonneg("wrapped_gaussian_kappa", "sigma2", sigma2)?;
    Ok(ratio_inv_saturating((-0.5 * sigma2).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circstats::bessel::KAPPA_MAX;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn dispersed_samples_give_zero() {
        let s = AngularSampleSet::new(vec![0.0, FRAC_PI_2, PI, -FRAC_PI_2]).unwrap();
        let k = estimate_kappa(&s).unwrap();
        assert!(k.kappa < 1e-12);
        assert!(!k.saturated);
    }

    #[test]
    fn identical_samples_saturate() {
        let s = AngularSampleSet::new(vec![0.3; 5]).unwrap();
        let k = estimate_kappa(&s).unwrap();
        assert!(k.saturated);
        assert_eq!(k.kappa, KAPPA_MAX);
    }

    #[test]
    fn too_few_samples() {
        let s = AngularSampleSet::new(vec![0.3]).unwrap();
        assert!(estimate_kappa(&s).is_err());
    }

    #[test]
    fn pooled_is_mean_of_classes() {
        // class 1: R̄ = A(2); class 2: R̄ = A(4), built from symmetric pairs ±φ
        let a2 = crate::circstats::bessel_ratio(2.0).unwrap();
        let a4 = crate::circstats::bessel_ratio(4.0).unwrap();
        let angles = vec![a2.acos(), -a2.acos(), a4.acos(), -a4.acos()];
        let s = AngularSampleSet::labeled(angles, vec![1, 1, 2, 2]).unwrap();
        let k = estimate_kappa_pooled(&s, 2).unwrap();
        assert!((k.kappa - 3.0).abs() < 1e-9);
        assert!(estimate_kappa_pooled(&s, 3).is_err());
    }

    #[test]
    fn single_class_pooled_matches_plain() {
        let angles = vec![0.1, 0.5, -0.2, 0.05];
        let s = AngularSampleSet::labeled(angles.clone(), vec![1; 4]).unwrap();
        let plain = estimate_kappa(&AngularSampleSet::new(angles).unwrap()).unwrap();
        assert_eq!(estimate_kappa_pooled(&s, 1).unwrap(), plain);
    }

    #[test]
    fn wrapped_gaussian_examples() {
        assert!(wrapped_gaussian_kappa(50.0).unwrap().kappa < 1e-10);
        let zero = wrapped_gaussian_kappa(0.0).unwrap();
        assert!(zero.saturated);
        assert_eq!(zero.kappa, KAPPA_MAX);
        // A⁻¹(e^{-1/4}) by bisection on an independent high-precision A
        let k = wrapped_gaussian_kappa(0.5).unwrap().kappa;
        assert!((k - 2.633_808_658_165_859).abs() < 1e-8, "{k}");
        assert!(wrapped_gaussian_kappa(-1.0).is_err());
    }
}
