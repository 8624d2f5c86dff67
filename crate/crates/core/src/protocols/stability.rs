//! Heralding-stability audit: run the Gaussification channel on two nearby
//! inputs and verify that acceptance probability and output quality degrade
//! no faster than the input trace distance allows.

use super::gaussify::{run_gaussification, GaussifyInput};
use crate::error::{Error, Result};
use crate::states::GaussianSum;

/// Measured quantities and verdicts of one stability audit.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    /// Upper bound on the input trace distance `||rho_a - rho_b||_1`.
    pub delta: f64,
    /// Upper bound on `||rho_acc^a - target||_1` (the surrogate `2 sqrt(1-F_a)`).
    pub gamma: f64,
    pub p_acc_a: f64,
    pub p_acc_b: f64,
    pub fidelity_a: f64,
    pub fidelity_b: f64,
    /// `Pr[acc|b] >= Pr[acc|a] - delta/2`.
    pub acceptance_holds: bool,
    /// `2(1 - F_b) <= delta / Pr[acc|a] + gamma` (conservative surrogate ends).
    pub closeness_holds: bool,
}

/// Trace distance between two mixtures of pure states, as an upper bound:
/// exact for pure-vs-pure; for a pure state against a two-component mixture
/// sharing the first component the leakage formula is exact; otherwise the
/// convexity bound `sum_i |w_i - v_i| + sum min(w,v) d(a_i, b_i)` is used with
/// matched component order.
pub fn input_distance_bound(a: &GaussifyInput, b: &GaussifyInput) -> f64 {
    let pure_dist = |x: &GaussianSum, y: &GaussianSum| {
        let o = x.overlap(y).norm_sqr().min(1.0);
        2.0 * (1.0 - o).sqrt()
    };
    if a.components.len() == 1 && b.components.len() == 1 {
        return pure_dist(&a.components[0].1, &b.components[0].1);
    }
    if a.components.len() == 1
        && b.components.len() == 2
        && pure_dist(&a.components[0].1, &b.components[0].1) < 1e-9
    {
        // rho vs (1-w) rho + w junk: || . ||_1 = w * || |a><a| - |j><j| ||_1.
        let w = b.components[1].0;
        return w * pure_dist(&a.components[0].1, &b.components[1].1);
    }
    // Generic convexity bound over matched components.
    let mut acc = 0.0;
    let n = a.components.len().max(b.components.len());
    for i in 0..n {
        match (a.components.get(i), b.components.get(i)) {
            (Some((wa, sa)), Some((wb, sb))) => {
                acc += (wa - wb).abs() + wa.min(*wb) * pure_dist(sa, sb);
            }
            (Some((w, _)), None) | (None, Some((w, _))) => acc += w,
            (None, None) => {}
        }
    }
    acc
}

/// Run the channel on both inputs and check the two stability conclusions
/// against the measured `delta` and `gamma`.
pub fn stability_audit(
    input_a: &GaussifyInput,
    input_b: &GaussifyInput,
    target: &GaussianSum,
    kappa: f64,
    delta_peak: f64,
    l: u32,
) -> Result<StabilityReport> {
    let out_a = run_gaussification(input_a, kappa, delta_peak, l, None)?;
    let out_b = run_gaussification(input_b, kappa, delta_peak, l, None)?;
    let p_a = out_a.report.p_acc.unwrap_or(0.0);
    let p_b = out_b.report.p_acc.unwrap_or(0.0);
    if p_a <= 0.0 {
        return Err(Error::Precondition("the reference input is never accepted".into()));
    }
    let f_a = out_a.ensemble.fidelity_to(target);
    let f_b = out_b.ensemble.fidelity_to(target);
    let delta = input_distance_bound(input_a, input_b);
    let gamma = 2.0 * (1.0 - f_a).max(0.0).sqrt();

    let tol = 1e-9;
    let acceptance_holds = p_b >= p_a - delta / 2.0 - tol;
    // The true distance of rho_acc^b to the target is at least 2(1 - F_b); the
    // guarantee bounds it by delta / p_a + gamma.
    let closeness_holds = 2.0 * (1.0 - f_b).max(0.0) <= delta / p_a + gamma + tol;

    Ok(StabilityReport {
        delta,
        gamma,
        p_acc_a: p_a,
        p_acc_b: p_b,
        fidelity_a: f_a,
        fidelity_b: f_b,
        acceptance_holds,
        closeness_holds,
    })
}
