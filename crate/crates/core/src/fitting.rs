//! Least-squares fits of the depth laws from measured `(ℓ, value)` pairs.

use serde::Serialize;

use crate::error::{argument, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DepthSeries {
    points: Vec<(f64, f64)>,
}

impl DepthSeries {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(argument(
                "DepthSeries",
                format!("need at least 2 points, got {}", points.len()),
            ));
        }
        if let Some((l, v)) = points
            .iter()
            .find(|(l, v)| !(l.is_finite() && v.is_finite()))
        {
            return Err(argument(
                "DepthSeries",
                format!("non-finite point ({l}, {v})"),
            ));
        }
        let mut depths: Vec<f64> = points.iter().map(|p| p.0).collect();
        depths.sort_by(f64::total_cmp);
        if depths.windows(2).any(|w| w[0] == w[1]) {
            return Err(argument("DepthSeries", "depths must be distinct"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineFit {
    pub c1: f64,
    pub c2: f64,
    pub rms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialFit {
    pub c3: f64,
    pub c4: f64,
    /// Residual RMS of `ln(value)`.
    pub rms_log: f64,
    /// Set when the fitted decay rate is not positive.
    pub nonpositive_decay: bool,
}

fn ols(points: impl Iterator<Item = (f64, f64)> + Clone) -> (f64, f64, f64) {
    let n = points.clone().count() as f64;
    let (sx, sy) = points
        .clone()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = points.clone().fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = points
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    (slope, intercept, (sse / n).sqrt())
}

/// `value ≈ c1·ℓ + c2` by ordinary least squares.
pub fn fit_affine(series: &DepthSeries) -> AffineFit {
    let (c1, c2, rms) = ols(series.points.iter().copied());
    AffineFit { c1, c2, rms }
}

/// `value ≈ c3·e^{−c4·ℓ}` by least squares on `ln(value)`.
pub fn fit_exponential(series: &DepthSeries) -> Result<ExponentialFit> {
    if let Some((l, v)) = series.points.iter().find(|(_, v)| *v <= 0.0) {
        return Err(argument(
            "fit_exponential",
            format!("values must be positive, got {v} at depth {l}"),
        ));
    }
    let (slope, intercept, rms_log) = ols(series.points.iter().map(|&(l, v)| (l, v.ln())));
    let c4 = if slope == 0.0 { 0.0 } else { -slope };
    Ok(ExponentialFit {
        c3: intercept.exp(),
        c4,
        rms_log,
        nonpositive_decay: c4 <= 0.0,
    })
}
