//! Tractable inference-accuracy model for early-exit classification of
//! quantized angular features.

pub mod model;
pub mod profile;
pub mod quadrature;

pub use model::{
    accuracy_at_variance, accuracy_erf_approx, accuracy_model, accuracy_of_kappa, error_of_kappa,
    error_scaling, error_scaling_of_kappa, grad_energy, kappa_bar, kappa_distorted,
    min_depth_for_accuracy, quant_variance, ERF_SWITCH_KAPPA,
};
pub use profile::{FeatureProfile, QuantizerSpec};
