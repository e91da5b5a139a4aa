//! Joint choice of quantization bit-width and exit depth maximizing EPR under
//! an accuracy target and an air-latency budget.
//!
//! The bit-width is fixed first (largest one meeting the latency budget), then
//! the shallowest depth meeting the accuracy target at that bit-width.

use serde::Serialize;

use crate::accuracy::model::{
    accuracy_at_variance_unchecked, check_target, min_depth_unchecked, quant_variance_unchecked,
};
use crate::accuracy::{FeatureProfile, QuantizerSpec};
use crate::error::{Error, Result};
use crate::system::{
    comm_latency_unchecked, comp_latency_unchecked, epr_unchecked, floor_in_alphabet,
    max_bitwidth_continuous, ComputeProfile, LinkState,
};

const DEPTH_MATCH_TOL: f64 = 1.0e-9;

/// Sorted set of layers at which inference may exit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExitSet {
    layers: Vec<usize>,
}

impl ExitSet {
    pub fn new(layers: Vec<usize>, max_layer: usize) -> Result<Self> {
        let bad = |detail: String| Error::Config {
            path: "exits".into(),
            detail,
        };
        if layers.is_empty() {
            return Err(bad("exit set must be nonempty".into()));
        }
        if layers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad(format!(
                "exit layers must be strictly increasing, got {layers:?}"
            )));
        }
        if layers[0] < 1 || *layers.last().unwrap() > max_layer {
            return Err(bad(format!(
                "exit layers must lie in [1, {max_layer}], got {layers:?}"
            )));
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    pub fn deepest(&self) -> usize {
        *self.layers.last().expect("nonempty")
    }

    /// Smallest exit not below `depth` (within a small tolerance).
    pub fn ceiling(&self, depth: f64) -> Option<usize> {
        self.layers
            .iter()
            .copied()
            .find(|&l| l as f64 >= depth - DEPTH_MATCH_TOL)
    }

    /// Dash-joined label such as `9-19-37`.
    pub fn label(&self) -> String {
        self.layers
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// A bit-width/depth decision with its predicted performance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plan {
    pub q: f64,
    pub ell: f64,
    pub predicted_accuracy: f64,
    pub t_comm: f64,
    pub t_comp: f64,
    pub epr: f64,
    pub feasible: bool,
}

impl Plan {
    fn assemble(
        q: f64,
        ell: f64,
        feasible: bool,
        link: &LinkState,
        comp: &ComputeProfile,
        profile: &FeatureProfile,
        spec: &QuantizerSpec,
    ) -> Self {
        let predicted_accuracy = if q > 0.0 {
            accuracy_at_variance_unchecked(quant_variance_unchecked(q, spec), ell, profile)
        } else {
            1.0 / profile.classes as f64
        };
        Self {
            q,
            ell,
            predicted_accuracy,
            t_comm: comm_latency_unchecked(q, link),
            t_comp: comp_latency_unchecked(ell, comp),
            epr: if feasible {
                epr_unchecked(q, ell, link, comp)
            } else {
                0.0
            },
            feasible,
        }
    }
}

/// Continuous relaxation: real bit-width and real depth. Upper-bounds the
/// EPR of [`solve_discrete`].
pub fn solve_cr(
    link: &LinkState,
    comp: &ComputeProfile,
    profile: &FeatureProfile,
    spec: &QuantizerSpec,
    p0: f64,
) -> Result<Plan> {
    check_target(p0, profile.classes)?;
    let q = max_bitwidth_continuous(link);
    let sigma2 = quant_variance_unchecked(q, spec);
    let plan = match min_depth_unchecked(sigma2, p0, profile) {
        Some(ell) => Plan::assemble(q, ell, true, link, comp, profile, spec),
        None => Plan::assemble(q, profile.max_depth(), false, link, comp, profile, spec),
    };
    Ok(plan)
}

/// Bit-width floored into the alphabet, depth ceiled into the exit set.
/// A zero bit-width sends nothing and is scored as a random guess. Falls back to the deepest exit with zero EPR when the target is out of
/// reach.
pub fn solve_discrete(
    link: &LinkState,
    comp: &ComputeProfile,
    profile: &FeatureProfile,
    spec: &QuantizerSpec,
    exits: &ExitSet,
    p0: f64,
) -> Result<Plan> {
    check_target(p0, profile.classes)?;
    check_exits(exits, profile)?;
    let deepest = exits.deepest() as f64;
    let Some(q) = floor_in_alphabet(max_bitwidth_continuous(link), &spec.bit_alphabet) else {
        return Ok(Plan::assemble(
            0.0, deepest, false, link, comp, profile, spec,
        ));
    };
    let q = f64::from(q);
    if q == 0.0 {
        return Ok(Plan::assemble(q, deepest, false, link, comp, profile, spec));
    }
    let sigma2 = quant_variance_unchecked(q, spec);
    let chosen = min_depth_unchecked(sigma2, p0, profile).and_then(|depth| {
        // The bisection brackets the threshold to far below DEPTH_MATCH_TOL;
        // re-checking the candidate guards the boundary itself.
        exits
            .layers()
            .iter()
            .copied()
            .skip_while(|&l| (l as f64) < depth - DEPTH_MATCH_TOL)
            .find(|&l| accuracy_at_variance_unchecked(sigma2, l as f64, profile) >= p0)
    });
    Ok(match chosen {
        Some(ell) => Plan::assemble(q, ell as f64, true, link, comp, profile, spec),
        None => Plan::assemble(q, deepest, false, link, comp, profile, spec),
    })
}

/// Exhaustive search over the alphabet × exit set. Ties go to the larger
/// bit-width, then the smaller depth.
pub fn brute_force(
    link: &LinkState,
    comp: &ComputeProfile,
    profile: &FeatureProfile,
    spec: &QuantizerSpec,
    exits: &ExitSet,
    p0: f64,
) -> Result<Plan> {
    check_target(p0, profile.classes)?;
    check_exits(exits, profile)?;
    let mut best: Option<(f64, u32, usize)> = None;
    let mut widest_sendable: Option<u32> = None;
    for &q in &spec.bit_alphabet {
        let qf = f64::from(q);
        if comm_latency_unchecked(qf, link) > link.t_max_s {
            continue;
        }
        widest_sendable = Some(q);
        let sigma2 = quant_variance_unchecked(qf, spec);
        for &ell in exits.layers() {
            let acc = if q > 0 {
                accuracy_at_variance_unchecked(sigma2, ell as f64, profile)
            } else {
                1.0 / profile.classes as f64
            };
            if acc < p0 {
                continue;
            }
            let value = epr_unchecked(qf, ell as f64, link, comp);
            let better = match best {
                None => true,
                Some((v, bq, bl)) => value > v || (value == v && (q > bq || (q == bq && ell < bl))),
            };
            if better {
                best = Some((value, q, ell));
            }
        }
    }
    let plan = match best {
        Some((_, q, ell)) => {
            Plan::assemble(f64::from(q), ell as f64, true, link, comp, profile, spec)
        }
        None => Plan::assemble(
            widest_sendable.map_or(0.0, f64::from),
            exits.deepest() as f64,
            false,
            link,
            comp,
            profile,
            spec,
        ),
    };
    Ok(plan)
}

fn check_exits(exits: &ExitSet, profile: &FeatureProfile) -> Result<()> {
    if exits.deepest() > profile.layers {
        return Err(Error::Config {
            path: "exits".into(),
            detail: format!(
                "deepest exit {} exceeds server layer count {}",
                exits.deepest(),
                profile.layers
            ),
        });
    }
    Ok(())
}
