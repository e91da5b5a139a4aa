//! Monte Carlo ground truth for the accuracy model and the planner.
//!
//! Features are simulated directly in the angular domain: clean angles follow
//! the per-class von Mises law, and quantization noise enters as a wrapped
//! Gaussian with variance `σ²·a(ℓ)`.

pub mod algorithm;
pub mod classify;
pub mod dataset;
pub mod validate;

pub use algorithm::{run_algorithm1, sweep, Algorithm1Report, Scenario, SweepRow, TaskRecord};
pub use classify::{classify_map, empirical_accuracy, EmpiricalAccuracy};
pub use dataset::{distort, generate_dataset, AngularDataset};
pub use validate::{validate_grid, ValidationCell};
