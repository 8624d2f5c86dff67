//! Gaussian lattice sums and normalization-constant bounds.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Shift pattern of the lattice sum `sum_z e^{-c * arg(z)^2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesMode {
    /// `arg = z`, summed over all integers.
    Centered,
    /// `arg = z - 1/2`.
    HalfShift,
    /// `arg = |z| + eps`.
    AbsPlusEps(f64),
    /// `arg = |z| - eps`, summed over nonzero integers.
    AbsMinusEpsNonzero(f64),
}

/// A lattice sum together with the closed-form bracket that applies to it.
/// One-sided brackets carry an infinite bound on the unasserted side.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

/// Evaluate `sum e^{-c arg^2}` to machine tolerance along with its bracket:
/// centered sums are sandwiched by `sqrt(pi/c) -+ 1`; the shifted variants get
/// `sqrt(pi/c) - 1`, `sqrt(pi/c) - 2(1+eps)` (lower) and `sqrt(pi/c) + 2`
/// (upper) respectively.
pub fn gaussian_series(c: f64, mode: SeriesMode) -> Result<SeriesValue> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Parameter(format!("series parameter c must be positive, got {c}")));
    }
    if let SeriesMode::AbsPlusEps(eps) | SeriesMode::AbsMinusEpsNonzero(eps) = mode {
        if !(eps > 0.0 && eps < 0.5) {
            return Err(Error::Parameter(format!("eps must lie in (0, 1/2), got {eps}")));
        }
    }

    let term = |z: i64| -> f64 {
        let arg = match mode {
            SeriesMode::Centered => z as f64,
            SeriesMode::HalfShift => z as f64 - 0.5,
            SeriesMode::AbsPlusEps(eps) => (z as f64).abs() + eps,
            SeriesMode::AbsMinusEpsNonzero(eps) => (z as f64).abs() - eps,
        };
        (-c * arg * arg).exp()
    };

    let mut value = match mode {
        SeriesMode::AbsMinusEpsNonzero(_) => 0.0,
        _ => term(0),
    };
    let mut z = 1;
    loop {
        let t = term(z) + term(-z);
        value += t;
        if t < 1e-18 {
            break;
        }
        z += 1;
    }

    let root = (PI / c).sqrt();
    let (lower_bound, upper_bound) = match mode {
        SeriesMode::Centered => (root - 1.0, root + 1.0),
        SeriesMode::HalfShift => (root - 1.0, f64::INFINITY),
        SeriesMode::AbsPlusEps(eps) => (root - 2.0 * (1.0 + eps), f64::INFINITY),
        SeriesMode::AbsMinusEpsNonzero(_) => (f64::NEG_INFINITY, root + 2.0),
    };
    Ok(SeriesValue { value, lower_bound, upper_bound })
}

/// Numerically summed envelope normalization constants and their closed-form
/// bounds.
#[derive(Debug, Clone, Copy)]
pub struct NormalizationBounds {
    /// `C_kappa^{-2} = sum_k eta_kappa(k)^2`, summed directly.
    pub c_k_inv_sq: f64,
    /// Closed-form sandwich `1 -+ kappa/sqrt(pi)` around `c_k_inv_sq`.
    pub c_k_inv_sq_lb: f64,
    pub c_k_inv_sq_ub: f64,
    /// `C_{kappa,delta}^{-2}`, summed directly (peaks overlap).
    pub c_kd_inv_sq: f64,
    /// Closed-form upper bound on `C_{kappa,delta}^{-2}`.
    pub c_kd_inv_sq_ub: f64,
    /// `C_{L,kappa}^{-2}`, summed over the bounded peak range.
    pub c_lk_inv_sq: f64,
    /// Valid closed-form lower bound on `C_{L,kappa}^{-2}`:
    /// `(1 - kappa/sqrt(pi)) - 2 e^{-(kappa L/2)^2} (1 + kappa/sqrt(pi))`.
    pub c_lk_inv_sq_lb: f64,
    /// Measured ratio `C_{kappa,delta}^2 / C_kappa^2`.
    pub ratio: f64,
    /// Closed-form lower bound on the ratio.
    pub ratio_lb: f64,
    /// Whether the sandwich and the ratio <= 1 claims hold numerically.
    pub sandwich_holds: bool,
}

/// Direct sum `C_kappa^{-2}` truncated at machine tolerance.
pub fn c_kappa_inv_sq(kappa: f64) -> f64 {
    let c = kappa * kappa;
    let series = gaussian_series(c, SeriesMode::Centered).expect("kappa > 0");
    kappa / PI.sqrt() * series.value
}

/// `C_{L,kappa}^{-2} = sum_{k=-L/2}^{L/2-1} eta(k)^2`.
pub fn c_l_kappa_inv_sq(kappa: f64, l: u32) -> f64 {
    let half = l as i64 / 2;
    let c = kappa * kappa;
    let s: f64 = (-half..half).map(|k| (-c * (k * k) as f64).exp()).sum();
    kappa / PI.sqrt() * s
}

/// `C_{kappa,delta}^{-2} = sum_{z,z'} eta(z) eta(z') e^{-(z-z')^2/(4 delta^2)}`.
pub fn c_kappa_delta_inv_sq(kappa: f64, delta: f64) -> f64 {
    let zmax = super::spec::envelope_cutoff(kappa, 1.0, 1e-15);
    // Off-diagonal reach: e^{-k^2/(4 delta^2)} < 1e-20 beyond kmax.
    let kmax = (delta * (4.0 * 46.1f64).sqrt()).ceil() as i64 + 1;
    let eta2 = |z: i64| (-kappa * kappa * (z * z) as f64).exp();
    let mut acc = 0.0;
    for z in -zmax..=zmax {
        for dz in -kmax..=kmax {
            let zp = z + dz;
            if zp < -zmax || zp > zmax {
                continue;
            }
            let cross = (-((dz * dz) as f64) / (4.0 * delta * delta)).exp();
            acc += (eta2(z) * eta2(zp)).sqrt() * cross;
        }
    }
    kappa / PI.sqrt() * acc
}

/// Evaluate all envelope-normalization quantities for `(kappa, delta, L)`.
pub fn normalization_bounds(kappa: f64, delta: f64, l: u32) -> Result<NormalizationBounds> {
    if !(kappa > 0.0 && delta > 0.0) {
        return Err(Error::Parameter("kappa and delta must be positive".into()));
    }
    if l < 2 || l % 2 != 0 {
        return Err(Error::Parameter(format!("L must be a positive even integer, got {l}")));
    }
    let c_k = c_kappa_inv_sq(kappa);
    let c_kd = c_kappa_delta_inv_sq(kappa, delta);
    let c_lk = c_l_kappa_inv_sq(kappa, l);

    let kpi = kappa / PI.sqrt();
    let c_k_lb = 1.0 - kpi;
    let c_k_ub = 1.0 + kpi;
    let c_kd_ub = 1.0 + kpi + 2.0 * ((2.0 * PI).sqrt() + kappa) * delta;
    let tail = 2.0 * (-(kappa * l as f64 / 2.0).powi(2)).exp();
    let c_lk_lb = (1.0 - kpi) - tail * (1.0 + kpi);
    let ratio = c_k / c_kd;
    let ratio_lb = 1.0 - 2.0 * ((2.0 * PI).sqrt() + kappa) * delta / (1.0 - kpi);

    let sandwich_holds = c_k_lb <= c_k && c_k <= c_k_ub && ratio <= 1.0 + 1e-12;
    Ok(NormalizationBounds {
        c_k_inv_sq: c_k,
        c_k_inv_sq_lb: c_k_lb,
        c_k_inv_sq_ub: c_k_ub,
        c_kd_inv_sq: c_kd,
        c_kd_inv_sq_ub: c_kd_ub,
        c_lk_inv_sq: c_lk,
        c_lk_inv_sq_lb: c_lk_lb,
        ratio,
        ratio_lb,
        sandwich_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn centered_series_at_one() {
        let s = gaussian_series(1.0, SeriesMode::Centered).unwrap();
        assert_abs_diff_eq!(s.value, 1.772637204826652, epsilon = 1e-12);
        assert_abs_diff_eq!(s.lower_bound, PI.sqrt() - 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.upper_bound, PI.sqrt() + 1.0, epsilon = 1e-15);
        assert!(s.lower_bound <= s.value && s.value <= s.upper_bound);
    }

    #[test]
    fn large_c_collapses_to_one() {
        let s = gaussian_series(100.0, SeriesMode::Centered).unwrap();
        assert!((s.value - 1.0).abs() < 1e-40);
    }

    #[test]
    fn half_shift_lower_bound() {
        let s = gaussian_series(0.25, SeriesMode::HalfShift).unwrap();
        assert!(s.value >= (PI / 0.25).sqrt() - 1.0);
        assert!(s.upper_bound.is_infinite());
    }

    #[test]
    fn bracketing_on_log_grid() {
        for i in 0..50 {
            let c = 10f64.powf(-4.0 + 6.0 * i as f64 / 49.0);
            for mode in [
                SeriesMode::Centered,
                SeriesMode::HalfShift,
                SeriesMode::AbsPlusEps(0.2),
                SeriesMode::AbsMinusEpsNonzero(0.2),
            ] {
                let s = gaussian_series(c, mode).unwrap();
                assert!(
                    s.lower_bound <= s.value && s.value <= s.upper_bound,
                    "bracket failed at c={c}, mode={mode:?}: {s:?}"
                );
            }
        }
    }

    #[test]
    fn normalization_sandwich() {
        for kappa in [0.01, 0.05, 0.1, 0.2] {
            for delta in [0.01, 0.05, 0.1, 0.2] {
                let nb = normalization_bounds(kappa, delta, 8).unwrap();
                assert!(nb.sandwich_holds, "sandwich failed at kappa={kappa}, delta={delta}");
                assert!(nb.c_kd_inv_sq <= nb.c_kd_inv_sq_ub + 1e-12);
                assert!(nb.c_lk_inv_sq >= nb.c_lk_inv_sq_lb - 1e-12);
                assert!(nb.ratio >= nb.ratio_lb - 1e-12);
            }
        }
    }

    #[test]
    fn large_kappa_direct_sum() {
        // kappa = 10: the k = 0 term dominates.
        let v = c_kappa_inv_sq(10.0);
        let direct: f64 = (-50..=50)
            .map(|k| 10.0 / PI.sqrt() * (-100.0 * (k * k) as f64).exp())
            .sum();
        assert_abs_diff_eq!(v, direct, epsilon = 1e-6);
    }
}
