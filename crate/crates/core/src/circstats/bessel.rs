//! Exponentially scaled modified Bessel functions of orders 0 and 1, the
//! mean-resultant-length map `A(κ) = I₁(κ)/I₀(κ)` and its inverse.
//!
//! Everything is evaluated in the scaled form `e^{-x}·I_ν(x)`, so arguments
//! up to [`KAPPA_MAX`] stay finite.

use crate::error::{domain, require_nonneg, Result};

/// Saturation cap for concentration parameters.
pub const KAPPA_MAX: f64 = 1.0e6;

const SERIES_CUTOFF: f64 = 15.0;
const SERIES_EPS: f64 = 1.0e-17;
const INV_REL_TOL: f64 = 1.0e-10;
const INV_MAX_ITER: usize = 200;

/// A concentration value together with a flag telling whether it was clipped
/// at [`KAPPA_MAX`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Concentration {
    pub kappa: f64,
    pub saturated: bool,
}

impl Concentration {
    pub(crate) fn exact(kappa: f64) -> Self {
        Self {
            kappa,
            saturated: false,
        }
    }

    pub(crate) fn capped() -> Self {
        Self {
            kappa: KAPPA_MAX,
            saturated: true,
        }
    }
}

/// `(e^{-x} I₀(x), e^{-x} I₁(x))` for `x >= 0`, unchecked.
pub(crate) fn scaled_i0_i1(x: f64) -> (f64, f64) {
    if x < SERIES_CUTOFF {
        series(x)
    } else {
        asymptotic(x)
    }
}

fn series(x: f64) -> (f64, f64) {
    let quarter_sq = 0.25 * x * x;
    let mut t0 = 1.0;
    let mut s0 = 1.0;
    let mut t1 = 0.5 * x;
    let mut s1 = t1;
    let mut k = 1.0_f64;
    loop {
        t0 *= quarter_sq / (k * k);
        t1 *= quarter_sq / (k * (k + 1.0));
        s0 += t0;
        s1 += t1;
        if t0 <= SERIES_EPS * s0 && t1 <= SERIES_EPS * s1.max(f64::MIN_POSITIVE) {
            break;
        }
        k += 1.0;
    }
    let scale = (-x).exp();
    (s0 * scale, s1 * scale)
}

// Hankel expansion; the terms of both series shrink until k ≈ 2x, so at the
// cutoff the smallest term is ~e^{-30} relative.
fn asymptotic(x: f64) -> (f64, f64) {
    let eight_x = 8.0 * x;
    let mut t0 = 1.0_f64;
    let mut s0 = 1.0_f64;
    let mut t1 = 1.0_f64;
    let mut s1 = 1.0_f64;
    let mut done0 = false;
    let mut done1 = false;
    let mut k = 1.0_f64;
    while !(done0 && done1) && k < 2.0 * x {
        let odd = 2.0 * k - 1.0;
        if !done0 {
            let next = t0 * odd * odd / (k * eight_x);
            if next.abs() >= t0.abs() {
                done0 = true;
            } else {
                t0 = next;
                s0 += t0;
                done0 = t0.abs() < SERIES_EPS * s0.abs();
            }
        }
        if !done1 {
            let next = t1 * (odd * odd - 4.0) / (k * eight_x);
            if next.abs() >= t1.abs() && k > 1.0 {
                done1 = true;
            } else {
                t1 = next;
                s1 += t1;
                done1 = t1.abs() < SERIES_EPS * s1.abs();
            }
        }
        k += 1.0;
    }
    let lead = 1.0 / (2.0 * std::f64::consts::PI * x).sqrt();
    (lead * s0, lead * s1)
}

/// `e^{-x}·I₀(x)`.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    require_nonneg("bessel_i0_scaled", "x", x)?;
    Ok(scaled_i0_i1(x).0)
}

/// `e^{-x}·I₁(x)`.
pub fn bessel_i1_scaled(x: f64) -> Result<f64> {
    require_nonneg("bessel_i1_scaled", "x", x)?;
    Ok(scaled_i0_i1(x).1)
}

pub(crate) fn ratio_unchecked(kappa: f64) -> f64 {
    if kappa == 0.0 {
        return 0.0;
    }
    let (i0, i1) = scaled_i0_i1(kappa);
    i1 / i0
}

/// `A(κ) = I₁(κ)/I₀(κ)`, the mean resultant length of a von Mises variable.
pub fn bessel_ratio(kappa: f64) -> Result<f64> {
    require_nonneg("bessel_ratio", "kappa", kappa)?;
    Ok(ratio_unchecked(kappa))
}

/// `A'(κ) = 1 − A/κ − A²`.
fn ratio_derivative(kappa: f64, a: f64) -> f64 {
    if kappa == 0.0 {
        0.5
    } else {
        1.0 - a / kappa - a * a
    }
}

/// Inverse of [`bessel_ratio`] on `[0, 1)`.
///
/// Arguments so close to 1 that the solution exceeds [`KAPPA_MAX`] return the
/// cap with `saturated` set.
pub fn bessel_ratio_inv(r: f64) -> Result<Concentration> {
    if !(r.is_finite() && (0.0..1.0).contains(&r)) {
        return Err(domain(
            "bessel_ratio_inv",
            format!("argument must lie in [0, 1), got {r}"),
        ));
    }
    Ok(ratio_inv_unchecked(r))
}

/// Like [`bessel_ratio_inv`] but maps `r >= 1` to the saturated cap.
pub(crate) fn ratio_inv_saturating(r: f64) -> Concentration {
    if r >= 1.0 {
        Concentration::capped()
    } else {
        ratio_inv_unchecked(r.max(0.0))
    }
}

fn ratio_inv_unchecked(r: f64) -> Concentration {
    if r == 0.0 {
        return Concentration::exact(0.0);
    }
    if r >= ratio_unchecked(KAPPA_MAX) {
        return Concentration::capped();
    }

    let mut lo = 0.0_f64;
    let mut hi = KAPPA_MAX;
    let mut kappa = (r * (2.0 - r * r) / (1.0 - r * r)).min(KAPPA_MAX);
    for _ in 0..INV_MAX_ITER {
        let a = ratio_unchecked(kappa);
        let f = a - r;
        if f == 0.0 {
            break;
        }
        if f < 0.0 {
            lo = kappa;
        } else {
            hi = kappa;
        }
        let slope = ratio_derivative(kappa, a);
        let mut next = kappa - f / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = if hi / lo.max(f64::MIN_POSITIVE) > 4.0 && lo > 0.0 {
                (lo * hi).sqrt()
            } else {
                0.5 * (lo + hi)
            };
        }
        let step = (next - kappa).abs();
        kappa = next;
        if step <= INV_REL_TOL * kappa {
            break;
        }
    }
    Concentration::exact(kappa)
}
