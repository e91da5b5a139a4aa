//! Von Mises density, sampling and a tabulated CDF.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{argument, require_nonneg, Result};
use crate::rng::stream_rng;

use super::angle::normalize_angle;
use super::bessel::scaled_i0_i1;
use super::samples::AngularSampleSet;

const UNIFORM_KAPPA: f64 = 1.0e-8;
const GAUSSIAN_KAPPA: f64 = 1.0e5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMisesParams {
    mu: f64,
    kappa: f64,
}

impl VonMisesParams {
    /// `mu` is reduced to `(−π, π]`. `kappa` may exceed [`KAPPA_MAX`]; the cap
    /// only bounds estimates and inverses.
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(argument(
                "VonMisesParams",
                format!("mu must be finite, got {mu}"),
            ));
        }
        require_nonneg("VonMisesParams", "kappa", kappa)?;
        Ok(Self {
            mu: normalize_angle(mu),
            kappa,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Density in the scaled form `exp(κ(cos(θ−μ)−1)) / (2π·e^{−κ}I₀(κ))`.
    pub fn pdf(&self, theta: f64) -> f64 {
        let (i0s, _) = scaled_i0_i1(self.kappa);
        (self.kappa * ((theta - self.mu).cos() - 1.0)).exp() / (TAU * i0s)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        draw(rng, self.mu, self.kappa)
    }
}

pub fn vm_pdf(theta: f64, params: &VonMisesParams) -> f64 {
    params.pdf(theta)
}

/// `n` independent draws, reproducible from `seed`.
pub fn vm_sample(params: &VonMisesParams, n: usize, seed: u64) -> Result<AngularSampleSet> {
    if n == 0 {
        return Err(argument("vm_sample", "n must be at least 1"));
    }
    let mut rng = stream_rng(seed, 0);
    let angles = (0..n).map(|_| params.sample(&mut rng)).collect();
    Ok(AngularSampleSet::from_parts_unchecked(angles, None))
}

/// Best–Fisher rejection sampler. Very small κ is uniform, very large κ uses
/// the wrapped Gaussian with variance 1/κ.
pub(crate) fn draw<R: Rng + ?Sized>(rng: &mut R, mu: f64, kappa: f64) -> f64 {
    if kappa < UNIFORM_KAPPA {
        return PI - TAU * rng.random::<f64>();
    }
    if kappa > GAUSSIAN_KAPPA {
        let z: f64 = rng.sample(StandardNormal);
        return normalize_angle(mu + z / kappa.sqrt());
    }
    let s = if kappa < 1.0e-5 {
        1.0 / kappa + kappa
    } else {
        let r = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
        let rho = (r - (2.0 * r).sqrt()) / (2.0 * kappa);
        (1.0 + rho * rho) / (2.0 * rho)
    };
    let w = loop {
        let u: f64 = rng.random();
        let z = (PI * u).cos();
        let w = (1.0 + s * z) / (s + z);
        let y = kappa * (s - w);
        let v: f64 = rng.random();
        if y * (2.0 - y) - v >= 0.0 || (y / v).ln() + 1.0 - y >= 0.0 {
            break w;
        }
    };
    let offset = w.clamp(-1.0, 1.0).acos();
    let signed = if rng.random::<f64>() < 0.5 {
        -offset
    } else {
        offset
    };
    normalize_angle(mu + signed)
}

/// Cumulative distribution on `(−π, π]` tabulated by composite Simpson on a
/// uniform grid and linearly interpolated between nodes.
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    step: f64,
    values: Vec<f64>,
}

impl TabulatedCdf {
    /// `intervals` is rounded up to an even number.
    pub fn from_density<F: Fn(f64) -> f64>(density: F, intervals: usize) -> Self {
        let n = (intervals.max(2) + 1) & !1;
        let h = TAU / n as f64;
        let f: Vec<f64> = (0..=n).map(|i| density(-PI + h * i as f64)).collect();
        let mut values = vec![0.0; n + 1];
        for i in 1..=n {
            values[i] = if i % 2 == 0 {
                values[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i])
            } else {
                // half panel under the quadratic through nodes i-1, i, i+1
                values[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1])
            };
        }
        let total = values[n];
        for v in &mut values {
            *v /= total;
        }
        Self { step: h, values }
    }

    pub fn von_mises(params: &VonMisesParams, intervals: usize) -> Self {
        Self::from_density(|t| params.pdf(t), intervals)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let x = (normalize_angle(theta) + PI) / self.step;
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let frac = x - i as f64;
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }
}

/// One-sample Kolmogorov–Smirnov statistic of `angles` against `cdf`, with the
/// circle cut at −π.
pub fn ks_statistic<F: Fn(f64) -> f64>(angles: &[f64], cdf: F) -> f64 {
    let mut sorted: Vec<f64> = angles.iter().map(|&a| normalize_angle(a)).collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}
