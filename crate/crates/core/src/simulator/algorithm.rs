//! Per-task simulation of the channel-adaptive planner and SNR sweeps.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::accuracy::model::{
    grad_energy_unchecked, kappa_bar_unchecked, quant_variance_unchecked,
};
use crate::accuracy::{FeatureProfile, QuantizerSpec};
use crate::circstats::angle::normalize_angle;
use crate::circstats::vonmises::draw;
use crate::error::{argument, Result};
use crate::optimizer::{solve_cr, solve_discrete, ExitSet, Plan};
use crate::rng::{stream_rng, substream};
use crate::system::{db_to_linear, ComputeProfile, LinkState};

use super::classify::{classify_map, EmpiricalAccuracy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaskRecord {
    pub task: usize,
    pub class: usize,
    pub inferred: usize,
    pub q: f64,
    pub ell: f64,
    pub feasible: bool,
    pub epr: f64,
    pub t_comm: f64,
    pub t_comp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Algorithm1Report {
    pub plan: Plan,
    pub records: Vec<TaskRecord>,
    pub accuracy: EmpiricalAccuracy,
    pub mean_epr: f64,
    pub mean_t_comm: f64,
    pub mean_t_comp: f64,
}

/// Simulates `tasks` inference requests over a fixed channel. Task `i`
/// carries class `(i mod J) + 1`. Each task transmits its feature at the
/// planned bit-width and is classified at the planned exit; plans that are
/// infeasible or send zero bits are scored as uniform random guesses.
///
/// Under a fixed channel every task yields the same plan, so the planner runs
/// once per call.
#[allow(clippy::too_many_arguments)]
pub fn run_algorithm1(
    tasks: usize,
    link: &LinkState,
    comp: &ComputeProfile,
    profile: &FeatureProfile,
    spec: &QuantizerSpec,
    exits: &ExitSet,
    p0: f64,
    seed: u64,
) -> Result<Algorithm1Report> {
    if tasks == 0 {
        return Err(argument("run_algorithm1", "tasks must be at least 1"));
    }
    let plan = solve_discrete(link, comp, profile, spec, exits, p0)?;
    let transmits = plan.feasible && plan.q > 0.0;
    let kappa = kappa_bar_unchecked(plan.ell, profile);
    let noise_sd = if transmits {
        (quant_variance_unchecked(plan.q, spec) * grad_energy_unchecked(plan.ell, profile)).sqrt()
    } else {
        0.0
    };
    let classes = profile.classes;

    let records: Vec<TaskRecord> = (0..tasks)
        .into_par_iter()
        .map(|task| {
            let mut rng = stream_rng(seed, task as u64);
            let class = task % classes + 1;
            let inferred = if transmits {
                let clean = draw(&mut rng, profile.centroid(class), kappa);
                let g: f64 = rng.sample(StandardNormal);
                classify_map(normalize_angle(clean + noise_sd * g), profile, kappa)
            } else {
                rng.random_range(1..=classes)
            };
            TaskRecord {
                task,
                class,
                inferred,
                q: plan.q,
                ell: plan.ell,
                feasible: plan.feasible,
                epr: plan.epr,
                t_comm: plan.t_comm,
                t_comp: plan.t_comp,
            }
        })
        .collect();

    let n = tasks as f64;
    let correct = records.iter().filter(|r| r.class == r.inferred).count();
    Ok(Algorithm1Report {
        plan,
        accuracy: EmpiricalAccuracy::from_counts(correct, tasks),
        mean_epr: records.iter().map(|r| r.epr).sum::<f64>() / n,
        mean_t_comm: records.iter().map(|r| r.t_comm).sum::<f64>() / n,
        mean_t_comp: records.iter().map(|r| r.t_comp).sum::<f64>() / n,
        records,
    })
}

/// Channel-independent parameters shared by every point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub bandwidth_hz: f64,
    pub t_max_s: f64,
    pub features: u64,
    pub compute: ComputeProfile,
    pub profile: FeatureProfile,
    pub quantizer: QuantizerSpec,
    pub tasks: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub snr_db: f64,
    pub variant: String,
    pub p0: f64,
    pub q: f64,
    pub ell: f64,
    pub pred_acc: f64,
    pub emp_acc: f64,
    pub emp_ci: f64,
    pub epr: f64,
    pub epr_cr: f64,
    pub feasible: bool,
}

/// One row per (exit set, target, SNR), ordered by exit-set position, then
/// ascending target, then ascending SNR.
pub fn sweep(
    snr_grid_db: &[f64],
    scenario: &Scenario,
    variants: &[ExitSet],
    targets: &[f64],
) -> Result<Vec<SweepRow>> {
    if snr_grid_db.is_empty() {
        return Err(argument("sweep", "SNR grid is empty"));
    }
    if variants.is_empty() || targets.is_empty() {
        return Err(argument(
            "sweep",
            "need at least one exit set and one target",
        ));
    }
    let mut snrs = snr_grid_db.to_vec();
    snrs.sort_by(f64::total_cmp);
    let mut p0s = targets.to_vec();
    p0s.sort_by(f64::total_cmp);

    let mut points = Vec::new();
    for exits in variants {
        for &p0 in &p0s {
            for &snr_db in &snrs {
                points.push((exits, p0, snr_db));
            }
        }
    }
    points
        .into_par_iter()
        .enumerate()
        .map(|(index, (exits, p0, snr_db))| {
            let link = LinkState::new(
                scenario.bandwidth_hz,
                db_to_linear(snr_db),
                scenario.t_max_s,
                scenario.features,
            )?;
            let report = run_algorithm1(
                scenario.tasks,
                &link,
                &scenario.compute,
                &scenario.profile,
                &scenario.quantizer,
                exits,
                p0,
                substream(scenario.seed, index as u64),
            )?;
            let cr = solve_cr(
                &link,
                &scenario.compute,
                &scenario.profile,
                &scenario.quantizer,
                p0,
            )?;
            Ok(SweepRow {
                snr_db,
                variant: exits.label(),
                p0,
                q: report.plan.q,
                ell: report.plan.ell,
                pred_acc: report.plan.predicted_accuracy,
                emp_acc: report.accuracy.accuracy,
                emp_ci: report.accuracy.half_width,
                epr: report.plan.epr,
                epr_cr: cr.epr,
                feasible: report.plan.feasible,
            })
        })
        .collect()
}
