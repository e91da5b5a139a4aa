//! Command implementations behind the `exitplan` binary.
//!
//! Each command writes its report to a caller-supplied writer and returns an
//! [`Outcome`] that `main` turns into the process exit status.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use exitplan::config::RunConfig;
use exitplan::fitting::{fit_affine, fit_exponential};
use exitplan::io::{
    fmt_sig9, parse_depth_series, parse_exit_variants, parse_grid, parse_number_list, parse_range,
};
use exitplan::optimizer::{solve_cr, solve_discrete, ExitSet, Plan};
use exitplan::simulator::{sweep, validate_grid, Scenario, SweepRow, ValidationCell};
use serde_json::json;

pub const SWEEP_HEADER: &str =
    "snr_db,variant,p0,q,ell,pred_acc,emp_acc,emp_ci,epr_bits_per_s,epr_cr_bits_per_s,feasible";
pub const VALIDATE_HEADER: &str = "q,ell,n,analytic_acc,emp_acc,emp_ci,se3_bound,pass";
pub const DEFAULT_GRID: &str = "q=6,7,8,10;ell=5,15,25,35";

#[derive(Debug, Parser)]
#[command(
    name = "exitplan",
    version,
    about = "Bit-width and exit-depth planning for split edge inference"
)]
pub struct Cli {
    /// Worker threads for Monte Carlo work (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the bit-width and exit layer of one configuration.
    Plan {
        config: PathBuf,
        /// Also report the continuous-relaxation bound.
        #[arg(long)]
        cr: bool,
    },
    /// Simulate the planner over an SNR grid and emit one CSV row per point.
    Sweep {
        config: PathBuf,
        /// SNR grid in dB as `from:to:step`.
        #[arg(long = "snr-db", default_value = "-5:25:1", allow_hyphen_values = true)]
        snr_db: String,
        /// Exit sets separated by `;`, layers by `,` (default: the config's exits).
        #[arg(long = "exits-variants")]
        exits_variants: Option<String>,
        /// Comma-separated target accuracies (default: the config's target).
        #[arg(long = "p0-list")]
        p0_list: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare simulated and analytic accuracy on a (q, ell) grid.
    Validate {
        config: PathBuf,
        #[arg(long, default_value = DEFAULT_GRID)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Scale a profile coefficient on the analytic side only, e.g. `c1=0.5`.
        #[arg(long, value_name = "KEY=FACTOR")]
        perturb: Vec<String>,
        /// Samples per class per cell (default: the config's monte_carlo.n_per_class).
        #[arg(long = "n-per-class")]
        n_per_class: Option<usize>,
    },
    /// Fit depth-profile coefficients to an `ell,value` CSV.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: FitKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitKind {
    Affine,
    Exp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Infeasible,
    ValidationFailed,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Infeasible => 2,
            Outcome::ValidationFailed => 3,
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    match &cli.command {
        Command::Plan { config, cr } => cmd_plan(&load_config(config)?, *cr, stdout),
        Command::Sweep {
            config,
            snr_db,
            exits_variants,
            p0_list,
            out,
        } => {
            let cfg = load_config(config)?;
            let grid = parse_range(snr_db).context("--snr-db")?;
            let variants = match exits_variants {
                Some(spec) => parse_exit_variants(spec)
                    .context("--exits-variants")?
                    .into_iter()
                    .map(|layers| ExitSet::new(layers, cfg.profile.layers))
                    .collect::<exitplan::Result<Vec<_>>>()
                    .context("--exits-variants")?,
                None => vec![cfg.exits.clone()],
            };
            let targets = match p0_list {
                Some(spec) => parse_number_list(spec).context("--p0-list")?,
                None => vec![cfg.target_accuracy],
            };
            let csv = sweep_csv(&cfg, &grid, &variants, &targets)?;
            emit(out.as_deref(), &csv, stdout)?;
            Ok(Outcome::Success)
        }
        Command::Validate {
            config,
            grid,
            out,
            perturb,
            n_per_class,
        } => {
            let cfg = load_config(config)?;
            let (bits, depths) = parse_grid(grid).context("--grid")?;
            let cells = validate_cells(&cfg, &bits, &depths, perturb, *n_per_class)?;
            emit(out.as_deref(), &validate_csv(&cells), stdout)?;
            let failed = cells.iter().filter(|c| !c.pass).count();
            let summary = format!(
                "cells={} passed={} failed={failed}\n",
                cells.len(),
                cells.len() - failed
            );
            if out.is_some() {
                stdout.write_all(summary.as_bytes())?;
            } else {
                eprint!("{summary}");
            }
            Ok(if failed == 0 {
                Outcome::Success
            } else {
                Outcome::ValidationFailed
            })
        }
        Command::Fit { input, kind, out } => cmd_fit(input, *kind, out.as_deref(), stdout),
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    RunConfig::from_json(&text).with_context(|| format!("invalid config {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn plan_lines(prefix: &str, plan: &Plan) -> String {
    format!(
        "{prefix}feasible={}\n{prefix}q={}\n{prefix}ell={}\n{prefix}predicted_accuracy={}\n\
         {prefix}t_comm_s={}\n{prefix}t_comp_s={}\n{prefix}epr_bits_per_s={}\n",
        plan.feasible,
        plan.q,
        plan.ell,
        plan.predicted_accuracy,
        plan.t_comm,
        plan.t_comp,
        plan.epr
    )
}

fn cmd_plan(cfg: &RunConfig, with_cr: bool, stdout: &mut dyn Write) -> Result<Outcome> {
    let plan = solve_discrete(
        &cfg.link,
        &cfg.compute,
        &cfg.profile,
        &cfg.quantizer,
        &cfg.exits,
        cfg.target_accuracy,
    )?;
    let mut text = format!(
        "snr_linear={}\ntarget_accuracy={}\n",
        cfg.link.snr, cfg.target_accuracy
    );
    text.push_str(&plan_lines("", &plan));
    let mut record = json!({
        "snr_linear": cfg.link.snr,
        "target_accuracy": cfg.target_accuracy,
        "exits": cfg.exits.layers(),
        "plan": plan,
    });
    if with_cr {
        let cr = solve_cr(
            &cfg.link,
            &cfg.compute,
            &cfg.profile,
            &cfg.quantizer,
            cfg.target_accuracy,
        )?;
        text.push_str(&plan_lines("cr_", &cr));
        record["cr_plan"] = serde_json::to_value(cr)?;
    }
    text.push_str(&serde_json::to_string_pretty(&record)?);
    text.push('\n');
    stdout.write_all(text.as_bytes())?;
    Ok(if plan.feasible {
        Outcome::Success
    } else {
        Outcome::Infeasible
    })
}

pub fn sweep_csv(
    cfg: &RunConfig,
    grid: &[f64],
    variants: &[ExitSet],
    targets: &[f64],
) -> Result<String> {
    let scenario = Scenario {
        bandwidth_hz: cfg.link.bandwidth_hz,
        t_max_s: cfg.link.t_max_s,
        features: cfg.link.features,
        compute: cfg.compute,
        profile: cfg.profile,
        quantizer: cfg.quantizer.clone(),
        tasks: cfg.monte_carlo.tasks,
        seed: cfg.seed,
    };
    let rows = sweep(grid, &scenario, variants, targets)?;
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&sweep_row(r));
    }
    Ok(csv)
}

fn sweep_row(r: &SweepRow) -> String {
    let nums = [
        r.p0, r.q, r.ell, r.pred_acc, r.emp_acc, r.emp_ci, r.epr, r.epr_cr,
    ]
    .map(fmt_sig9);
    format!(
        "{},{},{},{}\n",
        fmt_sig9(r.snr_db),
        r.variant,
        nums.join(","),
        r.feasible
    )
}

pub fn validate_cells(
    cfg: &RunConfig,
    bits: &[f64],
    depths: &[f64],
    perturb: &[String],
    n_per_class: Option<usize>,
) -> Result<Vec<ValidationCell>> {
    let mut model = cfg.profile;
    for item in perturb {
        let (key, factor) = item
            .split_once('=')
            .with_context(|| format!("--perturb expects KEY=FACTOR, got `{item}`"))?;
        let factor: f64 = factor
            .trim()
            .parse()
            .with_context(|| format!("--perturb factor `{factor}` is not a number"))?;
        let slot = match key.trim() {
            "c1" => &mut model.c1,
            "c2" => &mut model.c2,
            "c3" => &mut model.c3,
            "c4" => &mut model.c4,
            other => bail!("--perturb key must be one of c1, c2, c3, c4, got `{other}`"),
        };
        *slot *= factor;
    }
    model.validate("--perturb")?;
    let n = n_per_class.unwrap_or(cfg.monte_carlo.n_per_class);
    Ok(validate_grid(
        &cfg.profile,
        &model,
        &cfg.quantizer,
        bits,
        depths,
        n,
        cfg.seed,
    )?)
}

pub fn validate_csv(cells: &[ValidationCell]) -> String {
    let mut csv = String::from(VALIDATE_HEADER);
    csv.push('\n');
    for c in cells {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_sig9(c.q),
            fmt_sig9(c.ell),
            c.n,
            fmt_sig9(c.analytic),
            fmt_sig9(c.empirical),
            fmt_sig9(c.ci),
            fmt_sig9(c.bound),
            c.pass
        ));
    }
    csv
}

fn cmd_fit(
    input: &Path,
    kind: FitKind,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<Outcome> {
    let text =
        fs::read_to_string(input).with_context(|| format!("cannot read {}", input.display()))?;
    let series = parse_depth_series(&text).with_context(|| format!("in {}", input.display()))?;
    let (lines, record) = match kind {
        FitKind::Affine => {
            let fit = fit_affine(&series);
            (
                format!("c1={}\nc2={}\nrms={}\n", fit.c1, fit.c2, fit.rms),
                json!({ "kind": "affine", "points": series.points().len(), "fit": fit }),
            )
        }
        FitKind::Exp => {
            let fit = fit_exponential(&series)?;
            if fit.nonpositive_decay {
                eprintln!("warning: fitted c4 = {} is not positive", fit.c4);
            }
            (
                format!("c3={}\nc4={}\nrms_log={}\n", fit.c3, fit.c4, fit.rms_log),
                json!({ "kind": "exp", "points": series.points().len(), "fit": fit }),
            )
        }
    };
    stdout.write_all(lines.as_bytes())?;
    if let Some(path) = out {
        let mut body = serde_json::to_string_pretty(&record)?;
        body.push('\n');
        fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(Outcome::Success)
}
