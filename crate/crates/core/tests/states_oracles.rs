//! Cross-module oracles for the analytic state library: fine-grid quadrature
//! for overlaps, the FFT as an independent route to the momentum
//! representation, and the momentum-truncation distance corollary.

use gkp_core::sim::{fourier, sample_on_axis, GridAxis};
use gkp_core::states::{build_state, momentum_rep, StateSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

#[test]
fn peakwise_pointwise_overlap_matches_fine_grid_quadrature() {
    let (kappa, delta) = (0.2, 0.05);
    let gkp = build_state(StateSpec::GkpPeakwise { kappa, delta }, 1e-14).unwrap();
    let gkp_pt = build_state(StateSpec::GkpPointwise { kappa, delta }, 1e-14).unwrap();
    let o = gkp.overlap(&gkp_pt);
    assert!(o.im.abs() < 1e-10, "overlap should be real, got {o}");
    assert!(o.re > 0.0 && o.re <= 1.0 + 1e-12, "overlap {o} outside (0, 1]");

    // Riemann sum on a grid resolving the peaks twelvefold.
    let radius = 8.0 / kappa + 4.0;
    let dx = delta / 12.0;
    let n = (2.0 * radius / dx).ceil() as usize;
    let direct: Complex64 = (0..n)
        .map(|j| {
            let x = -radius + j as f64 * dx;
            gkp.eval(x).conj() * gkp_pt.eval(x) * dx
        })
        .sum();
    assert!(
        (o - direct).norm() <= 1e-8,
        "closed-form overlap {o} vs quadrature {direct}"
    );
}

#[test]
fn momentum_rep_matches_grid_fourier_transform() {
    let (kappa, delta) = (0.2, 0.05);
    let gkp = build_state(StateSpec::GkpPeakwise { kappa, delta }, 1e-13).unwrap();
    let mr = momentum_rep(kappa, delta, 1e-13).unwrap();

    // Independent route: sample in position space and apply the DFT with the
    // continuum normalization f_hat(p_m) = dx/sqrt(2 pi) e^{-i p_m x_min} X_m.
    let axis = GridAxis::auto(8.0 / kappa + 4.0, delta).unwrap();
    let mut samples = sample_on_axis(&gkp, &axis);
    fourier::fft(&mut samples);
    let norm = axis.dx / (2.0 * PI).sqrt();
    let dp = 2.0 * PI / axis.extent();
    let mut overlap = Complex64::new(0.0, 0.0);
    for (m, v) in samples.iter().enumerate() {
        let p = axis.momentum(m);
        let fhat = norm * Complex64::new(0.0, -p * axis.x_min).exp() * v;
        overlap += mr.eval(p).conj() * fhat * dp;
    }
    assert!(
        overlap.norm_sqr() >= 1.0 - 1e-6,
        "momentum representation vs FFT: |o|^2 = {}",
        overlap.norm_sqr()
    );
}

#[test]
fn momentum_truncation_distance_corollary() {
    // || GKP - GKP^{eps-hat} ||_1 <= 4 sqrt(kappa) + 13 sqrt(delta) at
    // eps = sqrt(delta), computed in momentum space where both are exact sums.
    for &(kappa, delta) in &[(0.1, 0.01), (0.2, 0.01), (0.2, 0.04)] {
        let eps = f64::sqrt(delta);
        let mr = momentum_rep(kappa, delta, 1e-13).unwrap();
        let trunc =
            build_state(StateSpec::GkpMomentumTruncated { kappa, delta, eps }, 1e-13).unwrap();
        let o = mr.overlap(&trunc).norm_sqr().min(1.0);
        let dist = 2.0 * (1.0 - o).sqrt();
        let rhs = 4.0 * kappa.sqrt() + 13.0 * delta.sqrt();
        assert!(
            dist <= rhs,
            "kappa={kappa} delta={delta}: distance {dist} above {rhs}"
        );
    }
}
