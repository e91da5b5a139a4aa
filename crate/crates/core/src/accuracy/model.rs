//! Concentration laws, distortion propagation and the accuracy integral.

use std::f64::consts::PI;

use crate::circstats::bessel::{ratio_inv_saturating, ratio_unchecked, scaled_i0_i1};
use crate::error::{argument, domain, require_nonneg, Result};

use super::profile::{FeatureProfile, QuantizerSpec};
use super::quadrature::simpson;

const QUAD_REL_TOL: f64 = 1.0e-11;
/// Above this concentration the erf form replaces quadrature.
pub const ERF_SWITCH_KAPPA: f64 = 1.0e4;
const DEPTH_TOL: f64 = 1.0e-10;

/// Variance of the uniform quantization error for an average bit-width `q`.
///
/// A fractional `q = q₀ + 1 − α` mixes `α·d` features at `q₀` bits with the
/// rest at `q₀ + 1` bits; integer `q` gives `(c_max − c_min)²/(12·2^{2q})`.
pub fn quant_variance(q: f64, spec: &QuantizerSpec) -> Result<f64> {
    require_nonneg("quant_variance", "q", q)?;
    Ok(quant_variance_unchecked(q, spec))
}

pub(crate) fn quant_variance_unchecked(q: f64, spec: &QuantizerSpec) -> f64 {
    let q0 = q.floor();
    let alpha = 1.0 - (q - q0);
    let base = spec.span() * spec.span() / 12.0 * 0.25_f64.powi(q0 as i32);
    if alpha == 1.0 {
        base
    } else {
        (1.0 + 3.0 * alpha) / 4.0 * base
    }
}

/// Undistorted concentration at depth `ell`.
pub fn kappa_bar(ell: f64, profile: &FeatureProfile) -> Result<f64> {
    profile.check_depth("kappa_bar", ell)?;
    Ok(kappa_bar_unchecked(ell, profile))
}

pub(crate) fn kappa_bar_unchecked(ell: f64, p: &FeatureProfile) -> f64 {
    p.c1 * ell + p.c2
}

/// Expected squared gradient norm of the angular feature at depth `ell`.
pub fn grad_energy(ell: f64, profile: &FeatureProfile) -> Result<f64> {
    profile.check_depth("grad_energy", ell)?;
    Ok(grad_energy_unchecked(ell, profile))
}

pub(crate) fn grad_energy_unchecked(ell: f64, p: &FeatureProfile) -> f64 {
    p.c3 * (-p.c4 * ell).exp()
}

/// Concentration after quantization noise of variance `sigma2` propagates to
/// depth `ell`: `A⁻¹(A(κ̄(ℓ))·A(ρ))` with `A(ρ) = exp(−σ²·a(ℓ)/2)`.
pub fn kappa_distorted(sigma2: f64, ell: f64, profile: &FeatureProfile) -> Result<f64> {
    require_nonneg("kappa_distorted", "sigma2", sigma2)?;
    profile.check_depth("kappa_distorted", ell)?;
    Ok(kappa_distorted_unchecked(sigma2, ell, profile))
}

pub(crate) fn kappa_distorted_unchecked(sigma2: f64, ell: f64, p: &FeatureProfile) -> f64 {
    let clean = kappa_bar_unchecked(ell, p);
    if sigma2 == 0.0 {
        return clean;
    }
    // A(A⁻¹(x)) = x, so the noise term enters directly and never saturates.
    let noise_resultant = (-0.5 * sigma2 * grad_energy_unchecked(ell, p)).exp();
    ratio_inv_saturating(ratio_unchecked(clean) * noise_resultant).kappa
}

fn check_classes(op: &'static str, classes: usize) -> Result<()> {
    if classes < 2 {
        Err(argument(
            op,
            format!("class count must be >= 2, got {classes}"),
        ))
    } else {
        Ok(())
    }
}

/// Probability that a `vM(μ_j, κ)` feature falls in its own decision sector
/// of half-width `π/J`.
pub fn accuracy_of_kappa(kappa: f64, classes: usize) -> Result<f64> {
    require_nonneg("accuracy_of_kappa", "kappa", kappa)?;
    check_classes("accuracy_of_kappa", classes)?;
    Ok(accuracy_of_kappa_unchecked(kappa, classes))
}

pub(crate) fn accuracy_of_kappa_unchecked(kappa: f64, classes: usize) -> f64 {
    let half_width = PI / classes as f64;
    if kappa == 0.0 {
        return 1.0 / classes as f64;
    }
    if kappa > ERF_SWITCH_KAPPA {
        return erf_ratio(kappa, classes);
    }
    let norm = PI * scaled_i0_i1(kappa).0;
    // cos x − 1 = −2 sin²(x/2), without cancellation near 0
    let integrand = |x: f64| {
        let s = (0.5 * x).sin();
        (-2.0 * kappa * s * s).exp() / norm
    };
    simpson(integrand, 0.0, half_width, QUAD_REL_TOL)
}

/// Misclassification probability `1 − P(κ)`, integrated over the tail
/// `[π/J, π]` so that it keeps full relative precision when `P` rounds to 1.
pub fn error_of_kappa(kappa: f64, classes: usize) -> Result<f64> {
    require_nonneg("error_of_kappa", "kappa", kappa)?;
    check_classes("error_of_kappa", classes)?;
    Ok(error_of_kappa_unchecked(kappa, classes))
}

pub(crate) fn error_of_kappa_unchecked(kappa: f64, classes: usize) -> f64 {
    let edge = PI / classes as f64;
    if kappa == 0.0 {
        return 1.0 - 1.0 / classes as f64;
    }
    // value of the scaled integrand at the sector edge, factored out
    let lead = (-2.0 * kappa * (0.5 * edge).sin().powi(2)).exp();
    if lead == 0.0 {
        return 0.0;
    }
    let norm = PI * scaled_i0_i1(kappa).0;
    // cos(edge) − cos x = 2·sin((x+edge)/2)·sin((x−edge)/2)
    let integrand =
        |x: f64| (-2.0 * kappa * (0.5 * (x + edge)).sin() * (0.5 * (x - edge)).sin()).exp();
    // the integrand decays on a scale of 1/(κ·sin(edge)); cover it with
    // geometrically growing pieces so each one is resolved
    let mut width = 1.0 / (1.0 + kappa * edge.sin());
    let mut lo = edge;
    let mut total = 0.0;
    while lo < PI {
        let hi = (lo + width).min(PI);
        total += simpson(integrand, lo, hi, QUAD_REL_TOL);
        lo = hi;
        width *= 4.0;
    }
    lead * total / norm
}

/// Gaussian-tail form `erf((π/J)√(κ/2)) / erf(π√(κ/2))`.
pub fn accuracy_erf_approx(kappa: f64, classes: usize) -> Result<f64> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(domain(
            "accuracy_erf_approx",
            format!("kappa must be > 0, got {kappa}"),
        ));
    }
    check_classes("accuracy_erf_approx", classes)?;
    Ok(erf_ratio(kappa, classes))
}

fn erf_ratio(kappa: f64, classes: usize) -> f64 {
    let root = (0.5 * kappa).sqrt();
    libm::erf(PI / classes as f64 * root) / libm::erf(PI * root)
}

/// Inference accuracy for bit-width `q` at depth `ell`.
pub fn accuracy_model(
    q: f64,
    ell: f64,
    profile: &FeatureProfile,
    spec: &QuantizerSpec,
) -> Result<f64> {
    let sigma2 = quant_variance(q, spec)?;
    accuracy_at_variance(sigma2, ell, profile)
}

/// Inference accuracy for quantization variance `sigma2` at depth `ell`.
pub fn accuracy_at_variance(sigma2: f64, ell: f64, profile: &FeatureProfile) -> Result<f64> {
    let kappa = kappa_distorted(sigma2, ell, profile)?;
    Ok(accuracy_of_kappa_unchecked(kappa, profile.classes))
}

pub(crate) fn accuracy_at_variance_unchecked(sigma2: f64, ell: f64, p: &FeatureProfile) -> f64 {
    accuracy_of_kappa_unchecked(kappa_distorted_unchecked(sigma2, ell, p), p.classes)
}

/// Large-depth form of the distortion-free error `1 − P(0, ℓ)`.
pub fn error_scaling(ell: f64, profile: &FeatureProfile) -> Result<f64> {
    profile.check_depth("error_scaling", ell)?;
    Ok(error_scaling_of_kappa(
        kappa_bar_unchecked(ell, profile),
        profile.classes,
    ))
}

/// `√2·J / (π^{3/2}·√κ) · exp(−π²κ / (2J²))`.
pub fn error_scaling_of_kappa(kappa: f64, classes: usize) -> f64 {
    let j = classes as f64;
    std::f64::consts::SQRT_2 * j / (PI.powf(1.5) * kappa.sqrt())
        * (-(PI * PI) / (2.0 * j * j) * kappa).exp()
}

/// Smallest depth in `[1, L]` whose accuracy at variance `sigma2` reaches
/// `p0`, by bisection; `None` when even depth `L` falls short.
pub fn min_depth_for_accuracy(
    sigma2: f64,
    p0: f64,
    profile: &FeatureProfile,
) -> Result<Option<f64>> {
    require_nonneg("min_depth_for_accuracy", "sigma2", sigma2)?;
    check_target(p0, profile.classes)?;
    Ok(min_depth_unchecked(sigma2, p0, profile))
}

pub(crate) fn check_target(p0: f64, classes: usize) -> Result<()> {
    let floor = 1.0 / classes as f64;
    if p0.is_finite() && p0 > floor && p0 < 1.0 {
        Ok(())
    } else {
        Err(argument(
            "target accuracy",
            format!("must lie in (1/J, 1) = ({floor}, 1), got {p0}"),
        ))
    }
}

pub(crate) fn min_depth_unchecked(sigma2: f64, p0: f64, p: &FeatureProfile) -> Option<f64> {
    let acc = |ell: f64| accuracy_at_variance_unchecked(sigma2, ell, p);
    let mut lo = 1.0;
    if acc(lo) >= p0 {
        return Some(lo);
    }
    let mut hi = p.max_depth();
    if acc(hi) < p0 {
        return None;
    }
    while hi - lo > DEPTH_TOL {
        let mid = 0.5 * (lo + hi);
        if acc(mid) >= p0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}
