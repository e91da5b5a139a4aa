//! Run configuration: a JSON document holding every experimental knob.
//!
//! Every rejection names the offending field path, e.g.
//! `feature_profile.c1` or `link.snr_db`.

use serde::Deserialize;

use crate::accuracy::model::check_target;
use crate::accuracy::{FeatureProfile, QuantizerSpec};
use crate::error::{Error, Result};
use crate::optimizer::ExitSet;
use crate::system::{db_to_linear, ComputeProfile, LinkState};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    link: RawLink,
    compute: RawCompute,
    feature_profile: RawProfile,
    quantizer: RawQuantizer,
    exits: Vec<usize>,
    target_accuracy: f64,
    seed: u64,
    monte_carlo: MonteCarlo,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLink {
    bandwidth_hz: f64,
    snr_db: Option<f64>,
    snr_linear: Option<f64>,
    t_max_s: f64,
    d: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCompute {
    b1_s: Option<f64>,
    b2_s: Option<f64>,
    flops: Option<RawFlops>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlops {
    device_flops: f64,
    per_layer_flops: f64,
    device_flops_per_s: f64,
    server_flops_per_s: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    #[serde(rename = "J")]
    classes: usize,
    c1: f64,
    c2: f64,
    c3: f64,
    c4: f64,
    #[serde(rename = "L")]
    layers: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuantizer {
    c_min: f64,
    c_max: f64,
    q_max: u32,
    bit_alphabet: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarlo {
    pub n_per_class: usize,
    pub tasks: usize,
}

/// A validated configuration. The SNR is stored linear.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub link: LinkState,
    pub compute: ComputeProfile,
    pub profile: FeatureProfile,
    pub quantizer: QuantizerSpec,
    pub exits: ExitSet,
    pub target_accuracy: f64,
    pub seed: u64,
    pub monte_carlo: MonteCarlo,
}

fn at(path: &str, detail: impl Into<String>) -> Error {
    Error::Config {
        path: path.into(),
        detail: detail.into(),
    }
}

// serde reports a missing key at its parent; name the key itself instead
fn missing_field(detail: &str) -> Option<&str> {
    let rest = detail.strip_prefix("missing field `")?;
    rest.split('`').next()
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let raw: RawConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if inner.is_syntax() || inner.is_eof() {
                Error::Parse {
                    line: inner.line(),
                    detail: inner.to_string(),
                }
            } else {
                let detail = inner.to_string();
                let full = match missing_field(&detail) {
                    Some(field) if path == "." => field.to_string(),
                    Some(field) => format!("{path}.{field}"),
                    None => path,
                };
                at(&full, detail)
            }
        })?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let snr = match (raw.link.snr_db, raw.link.snr_linear) {
            (Some(db), None) => {
                if !db.is_finite() {
                    return Err(at("link.snr_db", format!("must be finite, got {db}")));
                }
                db_to_linear(db)
            }
            (None, Some(lin)) => lin,
            (Some(_), Some(_)) => {
                return Err(at(
                    "link",
                    "give exactly one of snr_db and snr_linear, not both",
                ))
            }
            (None, None) => return Err(at("link", "one of snr_db or snr_linear is required")),
        };
        let link = LinkState {
            bandwidth_hz: raw.link.bandwidth_hz,
            snr,
            t_max_s: raw.link.t_max_s,
            features: raw.link.d,
        };
        link.validate("link").map_err(|e| match e {
            Error::Config { path, detail } if path == "link.snr" => {
                let field = if raw.link.snr_db.is_some() {
                    "link.snr_db"
                } else {
                    "link.snr_linear"
                };
                at(field, detail)
            }
            other => other,
        })?;

        let compute = match (raw.compute.b1_s, raw.compute.b2_s, raw.compute.flops) {
            (Some(b1), Some(b2), None) => {
                let c = ComputeProfile { b1_s: b1, b2_s: b2 };
                c.validate("compute")?;
                c
            }
            (None, None, Some(f)) => ComputeProfile::from_flops(
                f.device_flops,
                f.per_layer_flops,
                f.device_flops_per_s,
                f.server_flops_per_s,
            )?,
            (None, None, None) => {
                return Err(at("compute", "give either b1_s and b2_s, or a flops block"))
            }
            (b1, _, None) => {
                let missing = if b1.is_none() {
                    "compute.b1_s"
                } else {
                    "compute.b2_s"
                };
                return Err(at(missing, "affine compute needs both b1_s and b2_s"));
            }
            (_, _, Some(_)) => {
                return Err(at(
                    "compute",
                    "give either b1_s/b2_s or a flops block, not both",
                ))
            }
        };

        let p = raw.feature_profile;
        let profile = FeatureProfile {
            classes: p.classes,
            c1: p.c1,
            c2: p.c2,
            c3: p.c3,
            c4: p.c4,
            layers: p.layers,
        };
        profile.validate("feature_profile")?;

        let q = raw.quantizer;
        let quantizer = QuantizerSpec {
            c_min: q.c_min,
            c_max: q.c_max,
            q_max: q.q_max,
            bit_alphabet: q.bit_alphabet.unwrap_or_else(|| (0..=q.q_max).collect()),
        };
        quantizer.validate("quantizer")?;

        let exits = ExitSet::new(raw.exits, profile.layers)?;

        check_target(raw.target_accuracy, profile.classes)
            .map_err(|e| at("target_accuracy", e.to_string()))?;

        if raw.monte_carlo.n_per_class == 0 {
            return Err(at("monte_carlo.n_per_class", "must be at least 1"));
        }
        if raw.monte_carlo.tasks == 0 {
            return Err(at("monte_carlo.tasks", "must be at least 1"));
        }

        Ok(Self {
            link,
            compute,
            profile,
            quantizer,
            exits,
            target_accuracy: raw.target_accuracy,
            seed: raw.seed,
            monte_carlo: raw.monte_carlo,
        })
    }
}
