//! Air-interface and compute latency, and the edge processing rate (EPR).
//!
//! Units are SI throughout: hertz, seconds, bits. SNR is linear.

use serde::{Deserialize, Serialize};

use crate::accuracy::QuantizerSpec;
use crate::error::{argument, domain, require_nonneg, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkState {
    pub bandwidth_hz: f64,
    pub snr: f64,
    pub t_max_s: f64,
    pub features: u64,
}

impl LinkState {
    pub fn new(bandwidth_hz: f64, snr: f64, t_max_s: f64, features: u64) -> Result<Self> {
        let l = Self {
            bandwidth_hz,
            snr,
            t_max_s,
            features,
        };
        l.validate("link")?;
        Ok(l)
    }

    pub fn with_snr_db(
        bandwidth_hz: f64,
        snr_db: f64,
        t_max_s: f64,
        features: u64,
    ) -> Result<Self> {
        Self::new(bandwidth_hz, db_to_linear(snr_db), t_max_s, features)
    }

    pub fn validate(&self, prefix: &str) -> Result<()> {
        let fields = [
            ("bandwidth_hz", self.bandwidth_hz),
            ("snr", self.snr),
            ("t_max_s", self.t_max_s),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config {
                    path: format!("{prefix}.{name}"),
                    detail: format!("must be positive and finite, got {v}"),
                });
            }
        }
        if self.features == 0 {
            return Err(Error::Config {
                path: format!("{prefix}.d"),
                detail: "feature count must be positive".into(),
            });
        }
        Ok(())
    }

    /// Shannon rate `B·log₂(1+γ)` in bits per second.
    pub fn rate(&self) -> f64 {
        self.bandwidth_hz * self.snr.ln_1p() / std::f64::consts::LN_2
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Server compute time `b1·ℓ + b2` (the device part is folded into `b2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComputeProfile {
    pub b1_s: f64,
    pub b2_s: f64,
}

impl ComputeProfile {
    pub fn new(b1_s: f64, b2_s: f64) -> Result<Self> {
        let c = Self { b1_s, b2_s };
        c.validate("compute")?;
        Ok(c)
    }

    /// From workload and throughput: `b1 = λ/ν_s`, `b2 = Λ/ν_d`.
    pub fn from_flops(
        device_flops: f64,
        per_layer_flops: f64,
        device_flops_per_s: f64,
        server_flops_per_s: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("device_flops_per_s", device_flops_per_s),
            ("server_flops_per_s", server_flops_per_s),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config {
                    path: format!("compute.flops.{name}"),
                    detail: format!("must be positive and finite, got {v}"),
                });
            }
        }
        for (name, v) in [
            ("device_flops", device_flops),
            ("per_layer_flops", per_layer_flops),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config {
                    path: format!("compute.flops.{name}"),
                    detail: format!("must be non-negative and finite, got {v}"),
                });
            }
        }
        Self::new(
            per_layer_flops / server_flops_per_s,
            device_flops / device_flops_per_s,
        )
    }

    pub fn validate(&self, prefix: &str) -> Result<()> {
        for (name, v) in [("b1_s", self.b1_s), ("b2_s", self.b2_s)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config {
                    path: format!("{prefix}.{name}"),
                    detail: format!("must be non-negative and finite, got {v}"),
                });
            }
        }
        Ok(())
    }
}

/// Time to send `d` features at `q` bits each.
pub fn comm_latency(q: f64, link: &LinkState) -> Result<f64> {
    require_nonneg("comm_latency", "q", q)?;
    Ok(comm_latency_unchecked(q, link))
}

pub(crate) fn comm_latency_unchecked(q: f64, link: &LinkState) -> f64 {
    link.features as f64 * q / link.rate()
}

pub fn comp_latency(ell: f64, comp: &ComputeProfile) -> Result<f64> {
    if !(ell.is_finite() && ell >= 1.0) {
        return Err(domain(
            "comp_latency",
            format!("depth must be >= 1, got {ell}"),
        ));
    }
    Ok(comp_latency_unchecked(ell, comp))
}

pub(crate) fn comp_latency_unchecked(ell: f64, comp: &ComputeProfile) -> f64 {
    comp.b1_s * ell + comp.b2_s
}

/// Bits processed per second of end-to-end latency, `d·q / (T_comm + T_comp)`.
pub fn epr(q: f64, ell: f64, link: &LinkState, comp: &ComputeProfile) -> Result<f64> {
    let t_comm = comm_latency(q, link)?;
    let t_comp = comp_latency(ell, comp)?;
    if q == 0.0 {
        return Ok(0.0);
    }
    Ok(link.features as f64 * q / (t_comm + t_comp))
}

pub(crate) fn epr_unchecked(q: f64, ell: f64, link: &LinkState, comp: &ComputeProfile) -> f64 {
    if q == 0.0 {
        return 0.0;
    }
    let t = comm_latency_unchecked(q, link) + comp_latency_unchecked(ell, comp);
    link.features as f64 * q / t
}

/// Largest real bit-width meeting the air-latency budget, `T_max·R / d`.
pub fn max_bitwidth_continuous(link: &LinkState) -> f64 {
    link.t_max_s * link.rate() / link.features as f64
}

/// Largest alphabet entry not above [`max_bitwidth_continuous`]; `None` when
/// every entry exceeds it.
pub fn max_bitwidth_discrete(link: &LinkState, spec: &QuantizerSpec) -> Result<Option<u32>> {
    if spec.bit_alphabet.is_empty() {
        return Err(argument("max_bitwidth_discrete", "bit alphabet is empty"));
    }
    Ok(floor_in_alphabet(
        max_bitwidth_continuous(link),
        &spec.bit_alphabet,
    ))
}

pub(crate) fn floor_in_alphabet(x: f64, alphabet: &[u32]) -> Option<u32> {
    alphabet.iter().rev().copied().find(|&q| f64::from(q) <= x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link() -> LinkState {
        LinkState::new(1e8, 15.0, 0.012, 120_000).unwrap()
    }

    #[test]
    fn comm_latency_examples() {
        let l = link();
        assert_eq!(comm_latency(0.0, &l).unwrap(), 0.0);
        assert!((comm_latency(40.0, &l).unwrap() - 0.012).abs() < 1e-15);
        let half = LinkState::new(5e7, 15.0, 0.012, 120_000).unwrap();
        let ratio = comm_latency(40.0, &half).unwrap() / comm_latency(40.0, &l).unwrap();
        assert!((ratio - 2.0).abs() < 1e-14);
    }

    #[test]
    fn comp_latency_examples() {
        let c = ComputeProfile::new(0.0, 0.002).unwrap();
        assert_eq!(comp_latency(17.0, &c).unwrap(), 0.002);
        let c = ComputeProfile::new(1e-4, 0.0).unwrap();
        assert!((comp_latency(39.0, &c).unwrap() - 0.0039).abs() < 1e-15);
        let c = ComputeProfile::from_flops(2e8, 1e8, 1e11, 5e11).unwrap();
        assert!((comp_latency(10.0, &c).unwrap() - 0.004).abs() < 1e-15);
        assert!(comp_latency(0.5, &c).is_err());
    }

    #[test]
    fn epr_examples() {
        let l = link();
        let c = ComputeProfile::new(1e-4, 0.002).unwrap();
        assert_eq!(epr(0.0, 10.0, &l, &c).unwrap(), 0.0);
        let e = epr(40.0, 10.0, &l, &c).unwrap();
        assert!((e - 3.2e8).abs() / 3.2e8 < 1e-12);
        let free = ComputeProfile::new(0.0, 1e-15).unwrap();
        let e = epr(40.0, 10.0, &l, &free).unwrap();
        assert!(e < l.rate() && (l.rate() - e) / l.rate() < 1e-9);
    }

    #[test]
    fn bitwidth_ceilings() {
        let l = link();
        assert!((max_bitwidth_continuous(&l) - 40.0).abs() < 1e-12);
        let tiny = LinkState::new(1e8, 1e-300, 0.012, 120_000).unwrap();
        assert!(max_bitwidth_continuous(&tiny) < 1e-290);
        let full = QuantizerSpec::full(0.0, 1.0, 32).unwrap();
        assert_eq!(max_bitwidth_discrete(&l, &full).unwrap(), Some(32));
        assert_eq!(floor_in_alphabet(7.9, &[0, 4, 8, 16, 32]), Some(4));
        assert_eq!(
            floor_in_alphabet(0.5, &(0..=32).collect::<Vec<_>>()),
            Some(0)
        );
        assert_eq!(floor_in_alphabet(0.5, &[1, 2]), None);
    }

    #[test]
    fn db_conversion() {
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
        assert!((db_to_linear(-5.0) - 0.316_227_766_016_837_94).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_link() {
        assert!(LinkState::new(0.0, 1.0, 1.0, 1).is_err());
        assert!(LinkState::new(1.0, f64::NAN, 1.0, 1).is_err());
        assert!(LinkState::new(1.0, 1.0, 1.0, 0).is_err());
        assert!(ComputeProfile::new(-1.0, 0.0).is_err());
    }
}
