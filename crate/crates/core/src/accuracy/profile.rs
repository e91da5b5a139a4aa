use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Analytic feature-statistics model: class count, the affine concentration
/// law `κ̄(ℓ) = c1·ℓ + c2`, the gradient-energy law `a(ℓ) = c3·e^{−c4·ℓ}`, and
/// the number of server layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureProfile {
    pub classes: usize,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub layers: usize,
}

fn invalid(path: &str, detail: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        detail: detail.into(),
    }
}

impl FeatureProfile {
    pub fn new(classes: usize, c1: f64, c2: f64, c3: f64, c4: f64, layers: usize) -> Result<Self> {
        let p = Self {
            classes,
            c1,
            c2,
            c3,
            c4,
            layers,
        };
        p.validate("feature_profile")?;
        Ok(p)
    }

    /// Checks the invariants, reporting violations under `prefix.<field>`.
    /// `c4 = 0` (flat gradient energy) is accepted.
    pub fn validate(&self, prefix: &str) -> Result<()> {
        let at = |f: &str| format!("{prefix}.{f}");
        if self.classes < 2 {
            return Err(invalid(
                &at("J"),
                format!("class count must be >= 2, got {}", self.classes),
            ));
        }
        for (name, v) in [
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
            ("c4", self.c4),
        ] {
            if !v.is_finite() {
                return Err(invalid(&at(name), format!("must be finite, got {v}")));
            }
        }
        if self.c1 <= 0.0 {
            return Err(invalid(&at("c1"), format!("must be > 0, got {}", self.c1)));
        }
        if self.c3 <= 0.0 {
            return Err(invalid(&at("c3"), format!("must be > 0, got {}", self.c3)));
        }
        if self.c4 < 0.0 {
            return Err(invalid(&at("c4"), format!("must be >= 0, got {}", self.c4)));
        }
        if self.layers < 1 {
            return Err(invalid(&at("L"), "must be >= 1"));
        }
        if self.c1 + self.c2 <= 0.0 {
            return Err(invalid(
                &at("c2"),
                format!(
                    "c1 + c2 must be > 0 so that kappa_bar(1) > 0, got {}",
                    self.c1 + self.c2
                ),
            ));
        }
        Ok(())
    }

    /// Mean direction of class `j` (1-based): `−π + (2j−1)·π/J`.
    pub fn centroid(&self, j: usize) -> f64 {
        -PI + (2 * j - 1) as f64 * PI / self.classes as f64
    }

    pub fn max_depth(&self) -> f64 {
        self.layers as f64
    }

    pub(crate) fn check_depth(&self, op: &'static str, ell: f64) -> Result<()> {
        if ell.is_finite() && ell >= 1.0 && ell <= self.max_depth() {
            Ok(())
        } else {
            Err(domain(
                op,
                format!("depth must lie in [1, {}], got {ell}", self.layers),
            ))
        }
    }
}

/// Uniform quantizer: range `[c_min, c_max]` and the admissible bit-widths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizerSpec {
    pub c_min: f64,
    pub c_max: f64,
    pub q_max: u32,
    pub bit_alphabet: Vec<u32>,
}

impl QuantizerSpec {
    pub fn new(c_min: f64, c_max: f64, q_max: u32, bit_alphabet: Vec<u32>) -> Result<Self> {
        let s = Self {
            c_min,
            c_max,
            q_max,
            bit_alphabet,
        };
        s.validate("quantizer")?;
        Ok(s)
    }

    /// Range `[c_min, c_max]` with the full alphabet `{0, 1, …, q_max}`.
    pub fn full(c_min: f64, c_max: f64, q_max: u32) -> Result<Self> {
        Self::new(c_min, c_max, q_max, (0..=q_max).collect())
    }

    pub fn validate(&self, prefix: &str) -> Result<()> {
        let at = |f: &str| format!("{prefix}.{f}");
        if !(self.c_min.is_finite() && self.c_max.is_finite()) {
            return Err(invalid(&at("c_min"), "range bounds must be finite"));
        }
        if self.c_max <= self.c_min {
            return Err(invalid(
                &at("c_max"),
                format!("must exceed c_min ({} <= {})", self.c_max, self.c_min),
            ));
        }
        if self.bit_alphabet.is_empty() {
            return Err(invalid(&at("bit_alphabet"), "must be nonempty"));
        }
        if self.bit_alphabet.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(&at("bit_alphabet"), "must be strictly increasing"));
        }
        if let Some(&q) = self.bit_alphabet.iter().find(|&&q| q > self.q_max) {
            return Err(invalid(
                &at("bit_alphabet"),
                format!("entry {q} exceeds q_max {}", self.q_max),
            ));
        }
        Ok(())
    }

    pub fn span(&self) -> f64 {
        self.c_max - self.c_min
    }
}
