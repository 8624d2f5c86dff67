//! FFT plumbing for the grid backend: cached plans, signed momentum grids,
//! high-accuracy chirp phases and a Bluestein-style band-limited resampler.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
    static SCRATCH: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|p| {
        let (planner, cache) = &mut *p.borrow_mut();
        cache
            .entry((n, forward))
            .or_insert_with(|| {
                if forward {
                    planner.plan_fft_forward(n)
                } else {
                    planner.plan_fft_inverse(n)
                }
            })
            .clone()
    })
}

fn run_plan(buf: &mut [Complex64], forward: bool) {
    let p = plan(buf.len(), forward);
    SCRATCH.with(|s| {
        let scratch = &mut *s.borrow_mut();
        let need = p.get_inplace_scratch_len();
        if scratch.len() < need {
            scratch.resize(need, Complex64::new(0.0, 0.0));
        }
        p.process_with_scratch(buf, &mut scratch[..need]);
    });
}

/// In-place unnormalized forward DFT: `X_m = sum_j x_j e^{-2 pi i j m / n}`.
pub fn fft(buf: &mut [Complex64]) {
    run_plan(buf, true);
}

/// In-place normalized inverse DFT.
pub fn ifft(buf: &mut [Complex64]) {
    run_plan(buf, false);
    let s = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= s;
    }
}

/// Signed frequency index for bin `m` of an `n`-point DFT.
pub fn signed_index(m: usize, n: usize) -> i64 {
    if m < n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// `e^{i pi q b}` for an exact integer `q`, with the argument reduced mod 2
/// through an exact dyadic split of `b`, so the phase stays accurate for
/// `|q b| >> 1`.
pub fn phase_pi(q: i64, b: f64) -> Complex64 {
    const SPLIT: f64 = 67108864.0; // 2^26
    let bh = (b * SPLIT).round() / SPLIT;
    let bl = b - bh;
    // q * bh is exact in i128 arithmetic scaled by 2^26; reduce mod 2.
    let prod = (q as i128) * ((bh * SPLIT) as i128);
    let frac_h = (prod.rem_euclid((SPLIT as i128) << 1)) as f64 / SPLIT;
    let frac_l = (q as f64 * bl) % 2.0;
    Complex64::new(0.0, PI * (frac_h + frac_l)).exp()
}

/// `e^{2 pi i m a}`.
pub fn phase_linear(m: i64, a: f64) -> Complex64 {
    phase_pi(2 * m, a)
}

/// `e^{i pi q b}` (alias used for chirp kernels where `q = j^2`).
pub fn phase_quadratic(q: i64, b: f64) -> Complex64 {
    phase_pi(q, b)
}

/// Evaluate the band-limited (trigonometric) interpolant of `samples` given on
/// `x_j = x_min + j dx` at the scaled points `u_k = alpha x_k`, returning the
/// `n` interpolated values. Points falling outside `[x_min, x_min + (n-1) dx]`
/// yield exact zeros instead of the periodic continuation.
///
/// This is a chirp-z evaluation (Bluestein factorization), O(n log n).
pub fn resample_scaled(samples: &[Complex64], x_min: f64, dx: f64, alpha: f64) -> Vec<Complex64> {
    let n = samples.len();
    debug_assert!(n.is_power_of_two());
    let beta = alpha / n as f64;

    // Spectrum with signed-bin interpretation.
    let mut spec = samples.to_vec();
    fft(&mut spec);

    // B'_m = Psi_{m - n/2} e^{2 pi i (m - n/2) A},  A = (alpha - 1) x_min / (n dx)
    let a_coef = (alpha - 1.0) * x_min / (n as f64 * dx);
    let half = (n / 2) as i64;
    let m_cap = 2 * n; // linear convolution length cap
    let conv_n = m_cap.next_power_of_two();

    let mut u = vec![Complex64::new(0.0, 0.0); conv_n];
    for m in 0..n {
        let signed = m as i64 - half; // m' = m - n/2 indexes bins -n/2..n/2-1
        let bin = signed.rem_euclid(n as i64) as usize;
        let v = spec[bin] * phase_linear(signed, a_coef) * phase_quadratic(m as i64 * m as i64, beta);
        u[m] = v;
    }

    // Chirp kernel v_j = e^{-i pi beta j^2} for j in -(n-1)..=(n-1), laid out
    // for circular convolution.
    let mut v = vec![Complex64::new(0.0, 0.0); conv_n];
    for j in 0..n as i64 {
        let w = phase_quadratic(j * j, -beta);
        v[j as usize] = w;
        if j > 0 {
            v[conv_n - j as usize] = w;
        }
    }

    fft(&mut u);
    fft(&mut v);
    for (a, b) in u.iter_mut().zip(v.iter()) {
        *a *= b;
    }
    ifft(&mut u);

    let x_max = x_min + (n as f64 - 1.0) * dx;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let target = alpha * (x_min + k as f64 * dx);
        if target < x_min - 0.5 * dx || target > x_max + 0.5 * dx {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        // C_k = e^{-2 pi i (n/2) k beta} e^{i pi beta k^2} (u * v)_k / n
        let c = phase_linear(k as i64, -half as f64 * beta)
            * phase_quadratic((k * k) as i64, beta)
            * u[k]
            / n as f64;
        out.push(c);
    }
    out
}
