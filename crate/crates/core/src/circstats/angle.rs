use std::f64::consts::{PI, TAU};

use crate::error::{domain, Result};

/// Reduces an angle to `(−π, π]`. `−π` maps to `π`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Shortest arc length between two directions, in `[0, π]`.
pub fn angular_distance(b1: f64, b2: f64) -> Result<f64> {
    if !(b1.is_finite() && b2.is_finite()) {
        return Err(domain(
            "angular_distance",
            format!("angles must be finite, got ({b1}, {b2})"),
        ));
    }
    Ok(distance_unchecked(b1, b2))
}

pub(crate) fn distance_unchecked(b1: f64, b2: f64) -> f64 {
    normalize_angle(b1 - b2).abs()
}
