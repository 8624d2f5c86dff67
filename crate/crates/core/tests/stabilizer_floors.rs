//! Stabilizer-expectation floors for truncated grid states, and the
//! phase-alignment inequality behind the peak-doubling cleanup gate.

use gkp_core::states::{build_state, truncated_peak, GaussianSum, StateSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

#[test]
fn truncated_gkp_shift_stabilizer_floor() {
    // |<GKP^eps, e^{-iP} GKP^eps>|^2 >= 1 - 4 kappa.
    for &kappa in &[0.05, 0.1, 0.2] {
        let s = build_state(
            StateSpec::GkpTruncated { kappa, delta: 0.05, eps: 0.2 },
            1e-13,
        )
        .unwrap();
        let sp = s.shift_expectation(1.0);
        assert!(
            sp.norm_sqr() >= 1.0 - 4.0 * kappa,
            "kappa={kappa}: |<S_P>|^2 = {} below 1 - 4 kappa",
            sp.norm_sqr()
        );
        assert!(sp.norm_sqr() <= 1.0 + 1e-10);
    }
}

#[test]
fn truncated_gkp_phase_stabilizer_floor() {
    // |<GKP^eps, e^{2 pi i Q} GKP^eps>|^2 >= 1 - 40 eps^2.
    for &eps in &[0.1, 0.2, 0.3] {
        let s = build_state(
            StateSpec::GkpTruncated { kappa: 0.2, delta: 0.02, eps },
            1e-13,
        )
        .unwrap();
        let sq = s.phase_expectation(2.0 * PI);
        assert!(
            sq.norm_sqr() >= 1.0 - 40.0 * eps * eps,
            "eps={eps}: |<S_Q>|^2 = {} below 1 - 40 eps^2",
            sq.norm_sqr()
        );
    }
}

#[test]
fn bounded_envelope_overlap_floor() {
    // |<GKP^eps_L, GKP^eps>|^2 >= 1 - 2 e^{-kappa^2 L^2 / 4}: cutting the
    // envelope to L peaks costs only the envelope tail. (The floor is
    // trivially true below kappa L ~ 2.4 and carries a healthy margin above.)
    for &kappa in &[0.1, 0.15, 0.2] {
        for &l in &[8u32, 16, 32] {
            let full = build_state(
                StateSpec::GkpTruncated { kappa, delta: 0.02, eps: 0.2 },
                1e-13,
            )
            .unwrap();
            let bounded = build_state(
                StateSpec::GkpTruncatedBounded { l, kappa, delta: 0.02, eps: 0.2 },
                1e-13,
            )
            .unwrap();
            let o = full.overlap(&bounded).norm_sqr();
            let floor = 1.0 - 2.0 * (-kappa * kappa * (l * l) as f64 / 4.0).exp();
            assert!(
                o >= floor,
                "kappa={kappa} L={l}: overlap^2 {o} below {floor}"
            );
        }
    }
}

#[test]
fn half_period_phase_alignment_floor() {
    // <chi^eps(z), e^{-i pi z} e^{i pi Q} chi^eps(z)> >= 1 - 5 eps^2: the
    // residual phase the cleanup gate leaves on each truncated peak.
    for &eps in &[0.05, 0.2, 0.4] {
        for z in -3i64..=3 {
            let peak = GaussianSum::new(vec![truncated_peak(z as f64, 0.05, eps)]);
            let phased = peak.phased(PI);
            let o = peak.overlap(&phased) * Complex64::new(0.0, -PI * z as f64).exp();
            assert!(o.im.abs() < 1e-10, "alignment overlap should be real");
            assert!(
                o.re >= 1.0 - 5.0 * eps * eps,
                "z={z} eps={eps}: alignment {} below 1 - 5 eps^2",
                o.re
            );
            assert!(o.re <= 1.0 + 1e-12);
        }
    }
}
