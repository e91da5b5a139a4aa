//! Accuracy modelling and channel-adaptive planning for early-exit edge
//! inference.
//!
//! A device quantizes an intermediate feature vector to `q` bits per entry and
//! sends it over a link of known SNR; the server runs `ℓ` more layers before an
//! early-exit classifier maps the feature to an angle and decides the class.
//! The crate models the class-conditional angles as von Mises laws whose
//! concentration grows with depth and shrinks with quantization noise, turns
//! that into a closed-form accuracy, and picks `(q, ℓ)` to maximize the edge
//! processing rate (bits processed per second of end-to-end latency) under an
//! accuracy target and an air-latency budget. A Monte Carlo simulator in the
//! angular domain checks the model.

pub mod accuracy;
pub mod circstats;
pub mod config;
pub mod error;
pub mod fitting;
pub mod io;
pub mod optimizer;
pub mod rng;
pub mod simulator;
pub mod system;

pub use error::{Error, Result};
