//! The single-peak convolution integrals driving the measurement analysis.
//!
//! `I_k(y)  = int chi^eps_delta(k)(u)^2 eta_kappa(u - y)^2 du`
//! `I'_k    = int eta_kappa(u) eta_kappa(k) chi^eps_delta(k)(u)^2 du`
//!
//! Both are supported on `[k - eps, k + eps]`. They are evaluated here by
//! adaptive quadrature; the measurement engine recomputes them via erf closed
//! forms, and the two routes are tested against each other.

use super::spec::{eta, truncated_peak};
use crate::error::{Error, Result};
use crate::quad;

#[derive(Debug, Clone, Copy)]
pub struct ConvQuantities {
    pub k: i64,
    pub delta: f64,
    pub i_k: f64,
    pub i_k_prime: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ConvParams {
    pub kappa: f64,
    pub delta: f64,
    pub eps: f64,
}

impl ConvParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.delta > 0.0) {
            return Err(Error::Parameter("kappa and delta must be positive".into()));
        }
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return Err(Error::Parameter(format!("eps must lie in (0, 1/2), got {}", self.eps)));
        }
        Ok(())
    }

    /// `I_k(y)` by adaptive quadrature to absolute accuracy 1e-12.
    pub fn i_k(&self, k: i64, y: f64) -> f64 {
        let peak = truncated_peak(k as f64, self.delta, self.eps);
        quad::integrate_real(
            |u| {
                let p = peak.value(u).re;
                let e = eta(self.kappa, u - y);
                p * p * e * e
            },
            k as f64 - self.eps,
            k as f64 + self.eps,
            1e-13,
        )
    }

    /// `I'_k` by adaptive quadrature to absolute accuracy 1e-12.
    pub fn i_k_prime(&self, k: i64) -> f64 {
        let peak = truncated_peak(k as f64, self.delta, self.eps);
        let ek = eta(self.kappa, k as f64);
        quad::integrate_real(
            |u| {
                let p = peak.value(u).re;
                eta(self.kappa, u) * ek * p * p
            },
            k as f64 - self.eps,
            k as f64 + self.eps,
            1e-13,
        )
    }

    pub fn quantities(&self, k: i64, y: f64) -> Result<ConvQuantities> {
        self.validate()?;
        Ok(ConvQuantities {
            k,
            delta: y,
            i_k: self.i_k(k, y),
            i_k_prime: self.i_k_prime(k),
        })
    }
}

/// Convenience wrapper matching the flat call signature used by the CLI.
pub fn conv_quantities(k: i64, y: f64, kappa: f64, delta: f64, eps: f64) -> Result<ConvQuantities> {
    ConvParams { kappa, delta, eps }.quantities(k, y)
}
