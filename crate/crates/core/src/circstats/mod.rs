//! Circular statistics: Bessel functions, von Mises distributions and
//! concentration estimation.

pub mod angle;
pub mod bessel;
pub mod estimate;
pub mod samples;
pub mod vonmises;

pub use angle::{angular_distance, normalize_angle};
pub use bessel::{
    bessel_i0_scaled, bessel_i1_scaled, bessel_ratio, bessel_ratio_inv, Concentration, KAPPA_MAX,
};
pub use estimate::{
    estimate_kappa, estimate_kappa_pooled, mean_resultant_length, wrapped_gaussian_kappa,
};
pub use samples::AngularSampleSet;
pub use vonmises::{ks_statistic, vm_pdf, vm_sample, TabulatedCdf, VonMisesParams};
