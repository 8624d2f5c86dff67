//! Named state families and their constructors.

use super::gaussian::{GaussianSum, GaussianTerm};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// The state families used by the protocols and verification suites.
///
/// Conventions: peaks have width `delta` and unit spacing; `kappa` is the
/// inverse width of the Gaussian envelope; `eps` is the half-width of a peak
/// truncation window; `l` counts peaks of a rectangular envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Vacuum,
    SqueezedVacuum { delta: f64 },
    TruncatedGaussian { delta: f64, eps: f64 },
    Comb { l: u32, delta: f64 },
    TruncatedComb { l: u32, delta: f64, eps: f64 },
    GkpPeakwise { kappa: f64, delta: f64 },
    GkpPointwise { kappa: f64, delta: f64 },
    GkpTruncated { kappa: f64, delta: f64, eps: f64 },
    GkpTruncatedBounded { l: u32, kappa: f64, delta: f64, eps: f64 },
    GkpMomentumTruncated { kappa: f64, delta: f64, eps: f64 },
}

impl StateSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must be positive and finite, got {v}")))
            }
        };
        let eps_ok = |eps: f64| {
            if eps > 0.0 && eps < 0.5 {
                Ok(())
            } else {
                Err(Error::Parameter(format!("eps must lie in (0, 1/2), got {eps}")))
            }
        };
        let l_ok = |l: u32| {
            if l >= 2 && l % 2 == 0 {
                Ok(())
            } else {
                Err(Error::Parameter(format!("L must be a positive even integer, got {l}")))
            }
        };
        match *self {
            StateSpec::Vacuum => Ok(()),
            StateSpec::SqueezedVacuum { delta } => positive("delta", delta),
            StateSpec::TruncatedGaussian { delta, eps } => {
                positive("delta", delta)?;
                eps_ok(eps)
            }
            StateSpec::Comb { l, delta } => {
                l_ok(l)?;
                positive("delta", delta)
            }
            StateSpec::TruncatedComb { l, delta, eps } => {
                l_ok(l)?;
                positive("delta", delta)?;
                eps_ok(eps)
            }
            StateSpec::GkpPeakwise { kappa, delta } | StateSpec::GkpPointwise { kappa, delta } => {
                positive("kappa", kappa)?;
                positive("delta", delta)
            }
            StateSpec::GkpTruncated { kappa, delta, eps }
            | StateSpec::GkpMomentumTruncated { kappa, delta, eps } => {
                positive("kappa", kappa)?;
                positive("delta", delta)?;
                eps_ok(eps)
            }
            StateSpec::GkpTruncatedBounded { l, kappa, delta, eps } => {
                l_ok(l)?;
                positive("kappa", kappa)?;
                positive("delta", delta)?;
                eps_ok(eps)
            }
        }
    }

    /// Narrowest feature width (used by grid sizing).
    pub fn min_width(&self) -> f64 {
        match *self {
            StateSpec::Vacuum => 1.0,
            StateSpec::SqueezedVacuum { delta } | StateSpec::TruncatedGaussian { delta, .. } => {
                delta
            }
            StateSpec::Comb { delta, .. } | StateSpec::TruncatedComb { delta, .. } => delta,
            StateSpec::GkpPeakwise { delta, .. }
            | StateSpec::GkpPointwise { delta, .. }
            | StateSpec::GkpTruncated { delta, .. }
            | StateSpec::GkpTruncatedBounded { delta, .. } => delta,
            StateSpec::GkpMomentumTruncated { kappa, .. } => kappa,
        }
    }

    /// Half-width of the effective position support (to tolerance ~1e-10).
    pub fn support_radius(&self) -> f64 {
        match *self {
            StateSpec::Vacuum => 8.0,
            StateSpec::SqueezedVacuum { delta } => 8.0 * delta.max(1.0),
            StateSpec::TruncatedGaussian { eps, .. } => eps,
            StateSpec::Comb { l, delta } => l as f64 / 2.0 + 8.0 * delta,
            StateSpec::TruncatedComb { l, .. } => l as f64 / 2.0 + 0.5,
            StateSpec::GkpPeakwise { kappa, delta }
            | StateSpec::GkpPointwise { kappa, delta } => 8.0 / kappa + 8.0 * delta,
            StateSpec::GkpTruncated { kappa, .. } => 8.0 / kappa + 0.5,
            StateSpec::GkpTruncatedBounded { l, .. } => l as f64 / 2.0 + 0.5,
            StateSpec::GkpMomentumTruncated { delta, .. } => 8.0 / delta + 0.5,
        }
    }
}

/// Smallest `z_max` with `sum_{|z| > z_max} eta^2(z) < tol * sum_z eta^2(z)`
/// for the envelope `eta(z) = e^{-kappa^2 z^2 / 2}` on an integer lattice with
/// spacing `step`.
pub(crate) fn envelope_cutoff(kappa: f64, step: f64, tol: f64) -> i64 {
    let c = kappa * kappa * step * step; // eta^2(k*step) = e^{-c k^2}
    let mut total = 1.0;
    let mut k: i64 = 1;
    // Accumulate until terms are negligible relative to the running total.
    loop {
        let t = (-c * (k * k) as f64).exp();
        total += 2.0 * t;
        if t < 1e-320 || t < f64::EPSILON * total / 4.0 {
            break;
        }
        k += 1;
    }
    // Find the smallest cutoff with relative residual below tol.
    let mut residual = 0.0;
    let mut zmax = k;
    for j in (1..=k).rev() {
        residual += 2.0 * (-c * (j * j) as f64).exp();
        if residual >= tol * total {
            zmax = j;
            break;
        }
        zmax = j - 1;
    }
    zmax.max(1)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol <= 1e-6 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("tol must lie in (0, 1e-6], got {tol}")))
    }
}

/// Envelope weight `eta_kappa(z) = sqrt(kappa) pi^{-1/4} e^{-kappa^2 z^2/2}`.
pub fn eta(kappa: f64, z: f64) -> f64 {
    kappa.sqrt() * PI.powf(-0.25) * (-0.5 * kappa * kappa * z * z).exp()
}

/// The envelope as a Gaussian term (`eta_kappa` centered at 0).
pub fn eta_term(kappa: f64) -> GaussianTerm {
    GaussianTerm::new(
        Complex64::new(kappa.sqrt() * PI.powf(-0.25), 0.0),
        0.0,
        kappa * kappa,
        0.0,
    )
}

/// A truncated normalized peak `Psi^eps_delta(x - mu)`.
pub fn truncated_peak(mu: f64, delta: f64, eps: f64) -> GaussianTerm {
    use libm::erf;
    let mass = erf(eps / delta);
    let amp = (PI * delta * delta).powf(-0.25) / mass.sqrt();
    GaussianTerm::new(Complex64::new(amp, 0.0), mu, 1.0 / (delta * delta), 0.0)
        .with_window(mu - eps, mu + eps)
}

/// Build the analytic (normalized) wavefunction for `spec`.
///
/// Infinite peak sums are truncated so the discarded envelope weight is below
/// `tol` (relative); normalization constants are then resolved numerically
/// from the term overlaps.
pub fn build_state(spec: StateSpec, tol: f64) -> Result<GaussianSum> {
    spec.validate()?;
    check_tol(tol)?;
    let mut sum = match spec {
        StateSpec::Vacuum => GaussianSum::new(vec![GaussianTerm::normalized_peak(0.0, 1.0)]),
        StateSpec::SqueezedVacuum { delta } => {
            GaussianSum::new(vec![GaussianTerm::normalized_peak(0.0, delta)])
        }
        StateSpec::TruncatedGaussian { delta, eps } => {
            GaussianSum::new(vec![truncated_peak(0.0, delta, eps)])
        }
        StateSpec::Comb { l, delta } => {
            let w = 1.0 / (l as f64).sqrt();
            let terms = comb_range(l)
                .map(|z| {
                    let mut t = GaussianTerm::normalized_peak(z as f64, delta);
                    t.amp *= w;
                    t
                })
                .collect();
            GaussianSum::new(terms)
        }
        StateSpec::TruncatedComb { l, delta, eps } => {
            let w = 1.0 / (l as f64).sqrt();
            let terms = comb_range(l)
                .map(|z| {
                    let mut t = truncated_peak(z as f64, delta, eps);
                    t.amp *= w;
                    t
                })
                .collect();
            GaussianSum::new(terms)
        }
        StateSpec::GkpPeakwise { kappa, delta } => {
            let zmax = envelope_cutoff(kappa, 1.0, tol);
            let terms = (-zmax..=zmax)
                .map(|z| {
                    let mut t = GaussianTerm::normalized_peak(z as f64, delta);
                    t.amp *= eta(kappa, z as f64);
                    t
                })
                .collect();
            GaussianSum::new(terms)
        }
        StateSpec::GkpPointwise { kappa, delta } => {
            let zmax = envelope_cutoff(kappa, 1.0, tol);
            let env = eta_term(kappa);
            let terms = (-zmax..=zmax)
                .filter_map(|z| GaussianTerm::normalized_peak(z as f64, delta).product(&env))
                .collect();
            GaussianSum::new(terms)
        }
        StateSpec::GkpTruncated { kappa, delta, eps } => {
            let zmax = envelope_cutoff(kappa, 1.0, tol);
            let terms = (-zmax..=zmax)
                .map(|z| {
                    let mut t = truncated_peak(z as f64, delta, eps);
                    t.amp *= eta(kappa, z as f64);
                    t
                })
                .collect();
            GaussianSum::new(terms)
        }
        StateSpec::GkpTruncatedBounded { l, kappa, delta, eps } => {
            let terms = comb_range(l)
                .map(|z| {
                    let mut t = truncated_peak(z as f64, delta, eps);
                    t.amp *= eta(kappa, z as f64);
                    t
                })
                .collect();
            GaussianSum::new(terms)
        }
        StateSpec::GkpMomentumTruncated { kappa, delta, eps } => {
            // Momentum-space wavefunction: peaks of width kappa at 2 pi z under
            // the pointwise envelope eta_delta(p).
            let step = 2.0 * PI;
            let zmax = envelope_cutoff(delta, step, tol);
            let env = eta_term(delta);
            let terms = (-zmax..=zmax)
                .filter_map(|z| truncated_peak(step * z as f64, kappa, eps).product(&env))
                .collect();
            GaussianSum::new(terms)
        }
    };
    sum.normalize()?;
    Ok(sum)
}

/// Peak positions `{-L/2, ..., L/2 - 1}` of a comb with `L` peaks.
pub fn comb_range(l: u32) -> impl Iterator<Item = i64> {
    let half = l as i64 / 2;
    -half..half
}

/// Momentum-space representation of the peak-wise GKP state: width-`kappa`
/// peaks spaced `2 pi` apart under the pointwise envelope `eta_delta`,
/// truncated at relative envelope weight `tol` and normalized.
pub fn momentum_rep(kappa: f64, delta: f64, tol: f64) -> Result<GaussianSum> {
    StateSpec::GkpPeakwise { kappa, delta }.validate()?;
    check_tol(tol)?;
    let step = 2.0 * PI;
    let zmax = envelope_cutoff(delta, step, tol);
    let env = eta_term(delta);
    let terms: Vec<_> = (-zmax..=zmax)
        .filter_map(|z| {
            GaussianTerm::normalized_peak(step * z as f64, kappa).product(&env)
        })
        .collect();
    let mut sum = GaussianSum::new(terms);
    sum.normalize()?;
    Ok(sum)
}
