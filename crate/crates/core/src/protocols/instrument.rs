//! Semi-analytic homodyne instrument for sheared two-mode product states.
//!
//! The pre-measurement state is `e^{-i P_1 Q_2}(Psi_1 (x) Psi_2)` with
//! wavefunction `Psi_1(x-y) Psi_2(y)`. Measuring mode 1 at outcome `x` leaves
//! mode 2 in the (unnormalized) slice `Psi_1(x-y) Psi_2(y)`; the protocol's
//! correction `e^{i round(x) P}` recenters it. All accepted-state functionals
//! are integrals over the outcome sweep and never materialize a density
//! matrix.

use crate::error::{Error, Result};
use crate::sim::TwoModeGauss;
use crate::states::GaussianSum;
use num_complex::Complex64;

/// Round half-integers toward zero so `x - round(x)` lies in `[-1/2, 1/2]`.
pub fn round_half_toward_zero(x: f64) -> f64 {
    let f = x - x.trunc();
    if f.abs() == 0.5 {
        x.trunc()
    } else {
        x.round()
    }
}

/// Uniform outcome grid over `[lo, hi]` with spacing at most `resolution`,
/// endpoints included, plus trapezoid weights.
pub fn outcome_grid(lo: f64, hi: f64, resolution: f64) -> (Vec<f64>, Vec<f64>) {
    let steps = (((hi - lo) / resolution).ceil() as usize).max(1);
    let dx = (hi - lo) / steps as f64;
    let xs: Vec<f64> = (0..=steps).map(|i| lo + i as f64 * dx).collect();
    let mut ws = vec![dx; steps + 1];
    ws[0] = 0.5 * dx;
    ws[steps] = 0.5 * dx;
    (xs, ws)
}

/// Numerical evenness check by sampling: `max_x |psi(x) - psi(-x)|`.
pub fn evenness_defect(psi: &GaussianSum) -> f64 {
    let mut worst = 0.0f64;
    for t in &psi.terms {
        let sigma = 1.0 / t.a.sqrt();
        for k in -6..=6 {
            let x = t.mu + k as f64 * sigma / 2.0;
            let d = (psi.eval(x) - psi.eval(-x)).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Sampled measurement-instrument quantities on an outcome region `A`.
#[derive(Debug, Clone)]
pub struct InstrumentProfile {
    pub xs: Vec<f64>,
    /// Outcome density `p(x) = int |Psi_1(x-y)|^2 |Psi_2(y)|^2 dy`.
    pub p: Vec<f64>,
    /// `m(x) = int conj(Psi_1(y-d)) Psi_1(y) conj(Psi_2(round(x)+y)) Psi_2(y) dy`.
    pub m: Vec<Complex64>,
    /// `p(0) = || Psi_1 Psi_2 ||^2` (pointwise product).
    pub p0: f64,
    /// `p(A)` by the trapezoid rule on the sweep.
    pub p_region: f64,
    /// `int_A |m|^2 / (p(0) p(A))`: overlap of the accepted average state with
    /// the normalized pointwise product.
    pub conditional_overlap: f64,
}

/// Evaluate the instrument quantities for even `psi1` over `region`.
pub fn instrument_profile(
    psi1: &GaussianSum,
    psi2: &GaussianSum,
    region: (f64, f64),
    resolution: f64,
) -> Result<InstrumentProfile> {
    let defect = evenness_defect(psi1);
    if defect > 1e-9 {
        return Err(Error::Precondition(format!(
            "Psi_1 must be even; sampled asymmetry {defect:.2e}"
        )));
    }
    if !(resolution > 0.0) || region.0 >= region.1 {
        return Err(Error::Parameter("need a positive resolution and a nonempty region".into()));
    }
    let mut sheared = TwoModeGauss::product(psi1.clone(), psi2.clone());
    sheared.shear()?;

    // Phi_unnorm = Psi_1 * Psi_2 pointwise; p(0) its squared norm.
    let phi = pointwise_product(psi1, psi2);
    let p0 = phi.norm_sq_uncached();
    if !(p0 > 0.0) {
        return Err(Error::Numeric("the pointwise product Psi_1 Psi_2 vanishes".into()));
    }

    let (xs, ws) = outcome_grid(region.0, region.1, resolution);
    let mut p = Vec::with_capacity(xs.len());
    let mut m = Vec::with_capacity(xs.len());
    for &x in &xs {
        let slice = sheared.slice(x);
        p.push(slice.norm_sq_uncached());
        let corrected = slice.translated(-round_half_toward_zero(x));
        m.push(corrected.overlap(&phi));
    }
    let p_region: f64 = p.iter().zip(ws.iter()).map(|(a, w)| a * w).sum();
    let msq: f64 = m.iter().zip(ws.iter()).map(|(a, w)| a.norm_sqr() * w).sum();
    let conditional_overlap = msq / (p0 * p_region);
    Ok(InstrumentProfile { xs, p, m, p0, p_region, conditional_overlap })
}

/// Specialized conditional-overlap evaluation for the exact truncated comb
/// input, using the single-peak convolution structure.
///
/// For `Psi_2 = Sha^eps_{L,delta}` the sweep quantities collapse to shifted
/// window sums of the per-peak integrals
/// `I_k(d) = int chi^eps(k)^2 eta^2(.-d)` and
/// `M'_k(d) = int eta(.-d) eta chi^eps(k)^2`, so the whole sweep costs
/// `O((L + outcomes) * resolution)` erf evaluations instead of per-outcome
/// slice norms. Exact combs at L in the hundreds stay cheap this way.
pub fn comb_conditional_overlap(
    kappa: f64,
    delta: f64,
    eps: f64,
    l: u32,
    resolution: f64,
) -> Result<f64> {
    use crate::states::{eta_term, truncated_peak};
    if l == 0 || l % 8 != 0 {
        return Err(Error::Parameter(format!("L must be a positive multiple of 8, got {l}")));
    }
    let li = l as i64;
    let m_max = li / 8;
    let k_lo = -li / 2 - m_max;
    let k_hi = li / 2 - 1 + m_max;

    // delta-subgrid of one unit cell (even step count so 0 is a node),
    // trapezoid weights.
    let steps = 2 * (((0.5 / resolution).ceil() as usize).max(1));
    let dd = 1.0 / steps as f64;
    let ds: Vec<f64> = (0..=steps).map(|i| -0.5 + i as f64 * dd).collect();

    // chi^eps(k)^2 as a Gaussian term; eta^2 and eta(.-d) eta likewise.
    let peak_sq = |k: i64| {
        let t = truncated_peak(k as f64, delta, eps);
        t.product(&t).expect("window is nonempty")
    };
    let env = eta_term(kappa);
    let env_sq = env.product(&env).expect("untruncated");

    // Tables I[k][j], M'[k][j] over the k range and the delta grid.
    let nk = (k_hi - k_lo + 1) as usize;
    let mut table_i = vec![vec![0.0f64; ds.len()]; nk];
    let mut table_m = vec![vec![0.0f64; ds.len()]; nk];
    for (ki, k) in (k_lo..=k_hi).enumerate() {
        let psq = peak_sq(k);
        for (ji, &d) in ds.iter().enumerate() {
            let shifted_env_sq = env_sq.translated(d);
            table_i[ki][ji] = psq.overlap(&shifted_env_sq).re;
            let pair = env.translated(d).product(&env).expect("untruncated");
            table_m[ki][ji] = psq.overlap(&pair).re;
        }
    }
    let idx = |k: i64| (k - k_lo) as usize;

    // p(0) = (1/L) sum_{k=-L/2}^{L/2-1} I_k(0).
    let j0 = steps / 2; // ds[j0] == 0 for even step counts
    debug_assert!(ds[j0].abs() < 1e-12);
    let p0: f64 =
        (-li / 2..li / 2).map(|k| table_i[idx(k)][j0]).sum::<f64>() / l as f64;

    // Integrate |m|^2 and p over Omega_L cell by cell (each cell has the full
    // delta range since the region endpoints sit at half-integers).
    let mut msq = 0.0;
    let mut p_region = 0.0;
    for m in -m_max..=m_max {
        for (ji, _) in ds.iter().enumerate() {
            let w = if ji == 0 || ji == steps { 0.5 * dd } else { dd };
            let (mut mm, mut pp) = (0.0, 0.0);
            for k in (-li / 2 - m)..(li / 2 - m) {
                pp += table_i[idx(k)][ji];
            }
            let (klo, khi) = if m >= 0 { (-li / 2, li / 2 - m) } else { (-li / 2 - m, li / 2) };
            for k in klo..khi {
                mm += table_m[idx(k)][ji];
            }
            msq += w * (mm / l as f64).powi(2);
            p_region += w * pp / l as f64;
        }
    }
    Ok(msq / (p0 * p_region))
}

/// Pointwise product of two sums (all term pairs with nonempty windows).
pub fn pointwise_product(a: &GaussianSum, b: &GaussianSum) -> GaussianSum {
    let mut terms = Vec::new();
    for t1 in &a.terms {
        for t2 in &b.terms {
            if let Some(p) = t1.product(t2) {
                if p.amp.norm() > 1e-300 {
                    terms.push(p);
                }
            }
        }
    }
    GaussianSum::new(terms)
}

/// One accepted outcome: its sweep weight, position, and corrected normalized
/// conditional state.
#[derive(Debug, Clone)]
pub struct HeraldedEntry {
    pub weight: f64,
    pub outcome: f64,
    pub state: GaussianSum,
}

/// Outcome-indexed decomposition of the accepted average state
/// `rho_acc = (1/p_acc) sum_i weight_i |state_i><state_i|`.
#[derive(Debug, Clone)]
pub struct HeraldedEnsemble {
    pub entries: Vec<HeraldedEntry>,
    pub p_acc: f64,
    pub region: (f64, f64),
}

impl HeraldedEnsemble {
    /// Sweep the corrected instrument over `region` for a pure input
    /// component of weight `component_weight`, appending to `entries`.
    pub fn sweep_component(
        entries: &mut Vec<HeraldedEntry>,
        psi1: &GaussianSum,
        psi2: &GaussianSum,
        region: (f64, f64),
        resolution: f64,
        component_weight: f64,
    ) -> Result<f64> {
        let mut sheared = TwoModeGauss::product(psi1.clone(), psi2.clone());
        sheared.shear()?;
        let (xs, ws) = outcome_grid(region.0, region.1, resolution);
        let mut p_acc = 0.0;
        for (&x, &w) in xs.iter().zip(ws.iter()) {
            let slice = sheared.slice(x);
            let density = slice.norm_sq_uncached();
            let weight = component_weight * density * w;
            if weight <= 0.0 {
                continue;
            }
            let mut state = slice.translated(-round_half_toward_zero(x));
            let scale = 1.0 / density.sqrt();
            for t in &mut state.terms {
                t.amp *= scale;
            }
            p_acc += weight;
            entries.push(HeraldedEntry { weight, outcome: x, state });
        }
        Ok(p_acc)
    }

    /// Fidelity of `rho_acc` against a normalized pure target:
    /// the weight-averaged squared overlap.
    pub fn fidelity_to(&self, target: &GaussianSum) -> f64 {
        let acc: f64 = self
            .entries
            .iter()
            .map(|e| e.weight * target.overlap(&e.state).norm_sqr())
            .sum();
        acc / self.p_acc
    }

    /// `tr(e^{-i s P} rho_acc)` (shift-operator expectation).
    pub fn shift_expectation(&self, s: f64) -> Complex64 {
        let acc: Complex64 = self
            .entries
            .iter()
            .map(|e| e.state.shift_expectation(s) * e.weight)
            .sum();
        acc / self.p_acc
    }

    /// `tr(e^{i beta Q} rho_acc)`.
    pub fn phase_expectation(&self, beta: f64) -> Complex64 {
        let acc: Complex64 = self
            .entries
            .iter()
            .map(|e| e.state.phase_expectation(beta) * e.weight)
            .sum();
        acc / self.p_acc
    }

    /// Weighted mean of the distance from `<Q>` to the nearest integer.
    pub fn mean_position_offset(&self) -> f64 {
        let acc: f64 = self
            .entries
            .iter()
            .map(|e| {
                let (q, _) = e.state.position_moments();
                let frac = q - round_half_toward_zero(q);
                e.weight * frac
            })
            .sum();
        acc / self.p_acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{build_state, conv_quantities, eta_term, StateSpec};
    use approx::assert_abs_diff_eq;

    #[test]
    fn rounding_is_half_toward_zero() {
        assert_eq!(round_half_toward_zero(2.5), 2.0);
        assert_eq!(round_half_toward_zero(-2.5), -2.0);
        assert_eq!(round_half_toward_zero(2.51), 3.0);
        assert_eq!(round_half_toward_zero(-0.5), 0.0);
        assert_eq!(round_half_toward_zero(0.49), 0.0);
    }

    #[test]
    fn pdf_matches_single_peak_convolutions() {
        // p(x) = (1/L) sum_k I_k(x) for the truncated comb input.
        let (kappa, delta, eps, l) = (0.3, 0.05, 0.2, 8u32);
        let eta = GaussianSum::new(vec![eta_term(kappa)]);
        let comb =
            build_state(StateSpec::TruncatedComb { l, delta, eps }, 1e-12).unwrap();
        let prof =
            instrument_profile(&eta, &comb, (-1.3, 1.3), 0.65).unwrap();
        for (&x, &p) in prof.xs.iter().zip(prof.p.iter()) {
            let direct: f64 = (-(l as i64) / 2..l as i64 / 2)
                .map(|k| conv_quantities(k, x, kappa, delta, eps).unwrap().i_k)
                .sum::<f64>()
                / l as f64;
            assert_abs_diff_eq!(p, direct, epsilon = 1e-8);
        }
    }

    #[test]
    fn instrument_equals_ensemble_average() {
        // conditional_overlap == weighted-average fidelity to the normalized
        // pointwise product, computed through the ensemble route.
        let (kappa, delta, eps, l) = (0.25, 0.04, 0.2, 8u32);
        let eta = GaussianSum::new(vec![eta_term(kappa)]);
        let comb =
            build_state(StateSpec::TruncatedComb { l, delta, eps }, 1e-12).unwrap();
        let region = (-(l as f64) / 8.0 - 0.5, l as f64 / 8.0 + 0.5);
        let res = 0.02;
        let prof = instrument_profile(&eta, &comb, region, res).unwrap();

        let mut entries = Vec::new();
        let p_acc =
            HeraldedEnsemble::sweep_component(&mut entries, &eta, &comb, region, res, 1.0)
                .unwrap();
        let ens = HeraldedEnsemble { entries, p_acc, region };
        let mut phi = pointwise_product(&eta, &comb);
        phi.normalize().unwrap();
        let f_ens = ens.fidelity_to(&phi);
        assert_abs_diff_eq!(prof.conditional_overlap, f_ens, epsilon = 1e-4);
        assert_abs_diff_eq!(prof.p_region, ens.p_acc, epsilon = 1e-12);
    }

    #[test]
    fn fast_comb_overlap_matches_generic_engine() {
        let (kappa, delta, eps, l) = (0.2, 0.01, 0.1, 8u32);
        let eta = GaussianSum::new(vec![eta_term(kappa)]);
        let comb =
            build_state(StateSpec::TruncatedComb { l, delta, eps }, 1e-12).unwrap();
        let region = (-(l as f64) / 8.0 - 0.5, l as f64 / 8.0 + 0.5);
        // m(x) jumps at half-integers, where the two engines weight the
        // one-sided limits differently; the gap closes as O(dx * jump).
        let res = 0.0025;
        let prof = instrument_profile(&eta, &comb, region, res).unwrap();
        let fast = comb_conditional_overlap(kappa, delta, eps, l, res).unwrap();
        assert_abs_diff_eq!(prof.conditional_overlap, fast, epsilon = 2e-4);
    }

    #[test]
    fn conditional_overlap_floor_binds_at_long_combs() {
        // kappa = 0.02, L = 800: the floor 1 - 3 kappa^2 L / 2 - 4 e^{-k^2L^2/32}
        // is ~0.519 and genuinely constrains the measured overlap.
        let (kappa, delta, eps, l) = (0.02, 0.01, 0.1, 800u32);
        let k2l = kappa * kappa * l as f64;
        let floor = 1.0 - 1.5 * k2l - 4.0 * (-k2l * l as f64 / 32.0).exp();
        assert!(floor > 0.5, "intended to be binding, floor = {floor}");
        let measured = comb_conditional_overlap(kappa, delta, eps, l, 0.05).unwrap();
        assert!(
            measured >= floor,
            "conditional overlap {measured} below the floor {floor}"
        );
        assert!(measured <= 1.0 + 1e-8);
    }

    #[test]
    fn full_line_sweep_has_unit_mass() {
        let (kappa, delta, eps, l) = (0.3, 0.05, 0.2, 4u32);
        let eta = GaussianSum::new(vec![eta_term(kappa)]);
        let comb =
            build_state(StateSpec::TruncatedComb { l, delta, eps }, 1e-12).unwrap();
        let radius = l as f64 / 2.0 + 8.0 / kappa;
        let prof = instrument_profile(&eta, &comb, (-radius, radius), 0.02).unwrap();
        assert_abs_diff_eq!(prof.p_region, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn odd_psi1_is_rejected() {
        let shifted = build_state(StateSpec::Vacuum, 1e-12).unwrap().translated(0.3);
        let comb = build_state(
            StateSpec::TruncatedComb { l: 4, delta: 0.05, eps: 0.2 },
            1e-12,
        )
        .unwrap();
        assert!(instrument_profile(&shifted, &comb, (-1.0, 1.0), 0.1).is_err());
    }
}
