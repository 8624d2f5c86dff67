//! Finite sums of complex-weighted Gaussians with linear phases.
//!
//! Every wavefunction in this crate that admits a closed form lives here: a
//! term is `amp * exp(-a (x-mu)^2 / 2) * exp(i b x)`, optionally restricted to
//! a window `[lo, hi]`. The class is closed under translation, linear phases,
//! squeezing, pointwise Gaussian multiplication and (for untruncated terms)
//! the Fourier transform, which is what makes the exact backend possible.

use crate::error::{Error, Result};
use crate::quad;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Pairwise integrals whose magnitude bound falls below this are skipped.
const PRUNE_TOL: f64 = 1e-18;
/// Absolute tolerance for quadrature on truncated-term integrals.
const QUAD_TOL: f64 = 1e-13;

/// A single Gaussian term `amp * e^{-a(x-mu)^2/2} * e^{ibx}` on `window`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianTerm {
    /// Complex weight.
    pub amp: Complex64,
    /// Center of the Gaussian factor.
    pub mu: f64,
    /// Inverse variance; must be positive.
    pub a: f64,
    /// Linear phase coefficient (multiplies `i x` in the exponent).
    pub b: f64,
    /// Optional support restriction `[lo, hi]`; the term is 0 outside.
    pub window: Option<(f64, f64)>,
}

impl GaussianTerm {
    pub fn new(amp: Complex64, mu: f64, a: f64, b: f64) -> Self {
        assert!(a > 0.0, "inverse variance must be positive");
        GaussianTerm { amp, mu, a, b, window: None }
    }

    pub fn with_window(mut self, lo: f64, hi: f64) -> Self {
        assert!(lo < hi, "truncation window must be nonempty");
        self.window = Some((lo, hi));
        self
    }

    /// A normalized Gaussian of width `delta` centered at `mu`:
    /// `(pi delta^2)^{-1/4} e^{-(x-mu)^2/(2 delta^2)}`.
    pub fn normalized_peak(mu: f64, delta: f64) -> Self {
        let amp = (PI * delta * delta).powf(-0.25);
        GaussianTerm::new(Complex64::new(amp, 0.0), mu, 1.0 / (delta * delta), 0.0)
    }

    pub fn value(&self, x: f64) -> Complex64 {
        if let Some((lo, hi)) = self.window {
            if x < lo || x > hi {
                return Complex64::new(0.0, 0.0);
            }
        }
        let d = x - self.mu;
        let mag = (-0.5 * self.a * d * d).exp();
        self.amp * mag * Complex64::new(0.0, self.b * x).exp()
    }

    /// `psi'(x) = psi(x - dx)`: support moves by `+dx`, linear phase kept as a
    /// coefficient of `x` by absorbing the constant into the amplitude.
    pub fn translated(&self, dx: f64) -> Self {
        let mut t = self.clone();
        t.mu += dx;
        t.amp *= Complex64::new(0.0, -self.b * dx).exp();
        if let Some((lo, hi)) = t.window {
            t.window = Some((lo + dx, hi + dx));
        }
        t
    }

    /// Multiply by `e^{i beta x}`.
    pub fn phased(&self, beta: f64) -> Self {
        let mut t = self.clone();
        t.b += beta;
        t
    }

    /// `(S(z) psi)(x) = e^{z/2} psi(e^z x)`.
    pub fn squeezed(&self, z: f64) -> Self {
        let s = z.exp();
        let mut t = self.clone();
        t.a = self.a * s * s;
        t.mu = self.mu / s;
        t.b = self.b * s;
        t.amp = self.amp * (0.5 * z).exp();
        if let Some((lo, hi)) = self.window {
            let (wlo, whi) = (lo / s, hi / s);
            t.window = Some((wlo.min(whi), wlo.max(whi)));
        }
        t
    }

    /// Reflect through the origin: `psi'(x) = psi(-x)`.
    pub fn reflected(&self) -> Self {
        let mut t = self.clone();
        t.mu = -self.mu;
        t.b = -self.b;
        if let Some((lo, hi)) = self.window {
            t.window = Some((-hi, -lo));
        }
        t
    }

    /// Pointwise product of two terms (window intersection; `None` if empty).
    pub fn product(&self, other: &GaussianTerm) -> Option<GaussianTerm> {
        let window = match (self.window, other.window) {
            (None, None) => None,
            (Some(w), None) | (None, Some(w)) => Some(w),
            (Some((l1, h1)), Some((l2, h2))) => {
                let lo = l1.max(l2);
                let hi = h1.min(h2);
                if lo >= hi {
                    return None;
                }
                Some((lo, hi))
            }
        };
        let a = self.a + other.a;
        let mu = (self.a * self.mu + other.a * other.mu) / a;
        let q = self.a * other.a * (self.mu - other.mu).powi(2) / (2.0 * a);
        let amp = self.amp * other.amp * (-q).exp();
        Some(GaussianTerm { amp, mu, a, b: self.b + other.b, window })
    }

    /// Exact Fourier transform `t_hat(p) = (2 pi)^{-1/2} int t(x) e^{-ipx} dx`.
    ///
    /// Only defined for untruncated terms (a truncated Gaussian transforms to
    /// an erf-smeared profile outside this class).
    pub fn fourier(&self) -> Result<GaussianTerm> {
        if self.window.is_some() {
            return Err(Error::Capability(
                "Fourier transform of a truncated Gaussian term leaves the representable class"
                    .into(),
            ));
        }
        let amp = self.amp / self.a.sqrt() * Complex64::new(0.0, self.b * self.mu).exp();
        Ok(GaussianTerm { amp, mu: self.b, a: 1.0 / self.a, b: -self.mu, window: None })
    }

    /// `<self, other> = int conj(self)(x) other(x) dx` over the window
    /// intersection further restricted to `range` when given.
    pub fn overlap_on(&self, other: &GaussianTerm, range: Option<(f64, f64)>) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        // Effective integration domain.
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for w in [self.window, other.window, range].into_iter().flatten() {
            lo = lo.max(w.0);
            hi = hi.min(w.1);
        }
        if lo >= hi {
            return zero;
        }

        let a_sum = self.a + other.a;
        let m = (self.a * self.mu + other.a * other.mu) / a_sum;
        let q = self.a * other.a * (self.mu - other.mu).powi(2) / (2.0 * a_sum);
        let beta = other.b - self.b;
        let coeff = self.amp.conj() * other.amp * (-q).exp();

        // Magnitude bound used for pruning: |coeff| * full-line Gaussian mass.
        if coeff.norm() * (2.0 * PI / a_sum).sqrt() < PRUNE_TOL {
            return zero;
        }

        if lo.is_infinite() && hi.is_infinite() {
            // Closed form on the whole line.
            let phase = Complex64::new(-beta * beta / (2.0 * a_sum), beta * m).exp();
            return coeff * (2.0 * PI / a_sum).sqrt() * phase;
        }

        // Finite domain: distance from the Gaussian center to the domain.
        let dist = if m < lo {
            lo - m
        } else if m > hi {
            m - hi
        } else {
            0.0
        };
        let bound = coeff.norm()
            * (-0.5 * a_sum * dist * dist).exp()
            * (hi - lo).min((2.0 * PI / a_sum).sqrt());
        if bound < PRUNE_TOL {
            return zero;
        }

        if beta == 0.0 {
            // Phase-free pairs integrate in closed form through erf.
            let s = (0.5 * a_sum).sqrt();
            let mass = (PI / (2.0 * a_sum)).sqrt()
                * (libm::erf(s * (hi - m)) - libm::erf(s * (lo - m)));
            return coeff * mass;
        }

        // Restrict to the effective Gaussian support so the adaptive rule
        // cannot miss a narrow peak inside a wide interval.
        let w = (90.0 / a_sum).sqrt();
        let lo = lo.max(m - w);
        let hi = hi.min(m + w);
        if lo >= hi {
            return zero;
        }

        coeff
            * quad::integrate(
                |x| {
                    let d = x - m;
                    (-0.5 * a_sum * d * d).exp() * Complex64::new(0.0, beta * x).exp()
                },
                lo,
                hi,
                QUAD_TOL,
            )
    }

    pub fn overlap(&self, other: &GaussianTerm) -> Complex64 {
        self.overlap_on(other, None)
    }
}

/// A wavefunction represented as a finite sum of [`GaussianTerm`]s (one mode).
#[derive(Debug, Clone, Default)]
pub struct GaussianSum {
    pub terms: Vec<GaussianTerm>,
    norm_cache: Option<f64>,
}

impl GaussianSum {
    pub fn new(terms: Vec<GaussianTerm>) -> Self {
        GaussianSum { terms, norm_cache: None }
    }

    pub fn modes(&self) -> usize {
        1
    }

    /// Pointwise value of the wavefunction.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.terms.iter().map(|t| t.value(x)).sum()
    }

    /// Pointwise value with dimension checking (1-mode states take 1 coordinate).
    pub fn eval_at(&self, point: &[f64]) -> Result<Complex64> {
        if point.len() != 1 {
            return Err(Error::Usage(format!(
                "state has 1 mode but point has {} coordinates",
                point.len()
            )));
        }
        Ok(self.eval(point[0]))
    }

    /// `<self, other>` to absolute accuracy ~1e-10 (closed forms for
    /// untruncated pairs, adaptive quadrature otherwise, pair pruning at 1e-18).
    pub fn overlap(&self, other: &GaussianSum) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t1 in &self.terms {
            for t2 in &other.terms {
                acc += t1.overlap(t2);
            }
        }
        acc
    }

    /// Squared L2 norm, cached after the first computation.
    pub fn norm_sq(&mut self) -> f64 {
        if let Some(n) = self.norm_cache {
            return n;
        }
        let n = self.norm_sq_uncached();
        self.norm_cache = Some(n);
        n
    }

    pub fn norm_sq_uncached(&self) -> f64 {
        let s = self;
        s.overlap(s).re
    }

    /// Scale so the squared norm is 1. Errors on (numerically) null states.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sq();
        if !(n > 1e-300) {
            return Err(Error::Numeric("cannot normalize a null state".into()));
        }
        let s = 1.0 / n.sqrt();
        for t in &mut self.terms {
            t.amp *= s;
        }
        self.norm_cache = Some(1.0);
        Ok(())
    }

    pub fn scaled(&self, c: Complex64) -> GaussianSum {
        let mut s = self.clone();
        for t in &mut s.terms {
            t.amp *= c;
        }
        s.norm_cache = None;
        s
    }

    pub fn add(&self, other: &GaussianSum) -> GaussianSum {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        GaussianSum::new(terms)
    }

    pub fn map_terms(&self, f: impl Fn(&GaussianTerm) -> GaussianTerm) -> GaussianSum {
        GaussianSum::new(self.terms.iter().map(f).collect())
    }

    /// `psi'(x) = psi(x - dx)`.
    pub fn translated(&self, dx: f64) -> GaussianSum {
        self.map_terms(|t| t.translated(dx))
    }

    /// Multiply by `e^{i beta x}`.
    pub fn phased(&self, beta: f64) -> GaussianSum {
        self.map_terms(|t| t.phased(beta))
    }

    /// `S(z)`.
    pub fn squeezed(&self, z: f64) -> GaussianSum {
        self.map_terms(|t| t.squeezed(z))
    }

    pub fn reflected(&self) -> GaussianSum {
        self.map_terms(|t| t.reflected())
    }

    /// Pointwise product with a single term (e.g. a Gaussian envelope).
    pub fn times_term(&self, env: &GaussianTerm) -> GaussianSum {
        GaussianSum::new(self.terms.iter().filter_map(|t| t.product(env)).collect())
    }

    /// Exact Fourier transform; errors if any term is truncated.
    pub fn fourier(&self) -> Result<GaussianSum> {
        let terms: Result<Vec<_>> = self.terms.iter().map(|t| t.fourier()).collect();
        Ok(GaussianSum::new(terms?))
    }

    /// `int_{lo}^{hi} |psi|^2`.
    pub fn mass_on(&self, lo: f64, hi: f64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t1 in &self.terms {
            for t2 in &self.terms {
                acc += t1.overlap_on(t2, Some((lo, hi)));
            }
        }
        acc.re
    }

    /// `<self | e^{-iP} | self>`-style shift expectations: `<psi(.), psi(. - s)>`.
    pub fn shift_expectation(&self, s: f64) -> Complex64 {
        let shifted = self.translated(s);
        self.overlap(&shifted)
    }

    /// `<psi | e^{i beta Q} | psi>`.
    pub fn phase_expectation(&self, beta: f64) -> Complex64 {
        let phased = self.phased(beta);
        self.overlap(&phased)
    }

    /// First and second position moments `(<Q>, <Q^2>)` of the normalized state.
    pub fn position_moments(&self) -> (f64, f64) {
        // <Q^n> = sum over pairs of int conj(t1) x^n t2. Evaluate by quadrature
        // on an effective support window; Gaussian decay makes this cheap.
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for t1 in &self.terms {
            for t2 in &self.terms {
                let probe = t1.overlap(t2);
                if probe.norm() < 1e-16 {
                    continue;
                }
                let a_sum = t1.a + t2.a;
                let m = (t1.a * t1.mu + t2.a * t2.mu) / a_sum;
                let w = 9.0 / a_sum.sqrt();
                let (mut lo, mut hi) = (m - w, m + w);
                for win in [t1.window, t2.window].into_iter().flatten() {
                    lo = lo.max(win.0);
                    hi = hi.min(win.1);
                }
                if lo >= hi {
                    continue;
                }
                let f1 = quad::integrate(
                    |x| t1.value(x).conj() * t2.value(x) * x,
                    lo,
                    hi,
                    QUAD_TOL,
                );
                let f2 = quad::integrate(
                    |x| t1.value(x).conj() * t2.value(x) * x * x,
                    lo,
                    hi,
                    QUAD_TOL,
                );
                m1 += f1.re;
                m2 += f2.re;
            }
        }
        (m1, m2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normalized_peak_has_unit_norm() {
        let t = GaussianTerm::normalized_peak(0.3, 0.17);
        let mut s = GaussianSum::new(vec![t]);
        assert_abs_diff_eq!(s.norm_sq(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn translated_gaussian_overlap_closed_form() {
        // <chi(z), chi(z')> = e^{-(z-z')^2/(4 delta^2)}
        let delta = 0.5;
        let t0 = GaussianTerm::normalized_peak(0.0, delta);
        let t1 = GaussianTerm::normalized_peak(1.0, delta);
        let o = t0.overlap(&t1);
        assert_abs_diff_eq!(o.re, (-1.0f64 / (4.0 * delta * delta)).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(o.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn squeeze_maps_width() {
        // S(log 2) takes width delta to delta/2
        let t = GaussianTerm::normalized_peak(0.0, 0.2);
        let s = t.squeezed(2.0f64.ln());
        let target = GaussianTerm::normalized_peak(0.0, 0.1);
        let o = GaussianSum::new(vec![s]).overlap(&GaussianSum::new(vec![target]));
        assert_abs_diff_eq!(o.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fourier_roundtrip_moments() {
        // FT of the vacuum is the vacuum; FT of e^{ibx}-phased Gaussian recenters.
        let t = GaussianTerm::normalized_peak(0.0, 1.0).phased(2.5);
        let f = t.fourier().unwrap();
        assert_abs_diff_eq!(f.mu, 2.5, epsilon = 1e-14);
        let mut s = GaussianSum::new(vec![f]);
        assert_abs_diff_eq!(s.norm_sq(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn windowed_overlap_matches_erf() {
        use libm::erf;
        // Truncated vacuum mass on [-e, e] is erf(e) for delta = 1.
        let e = 0.7;
        let t = GaussianTerm::normalized_peak(0.0, 1.0).with_window(-e, e);
        let mut s = GaussianSum::new(vec![t]);
        assert_abs_diff_eq!(s.norm_sq(), erf(e), epsilon = 1e-12);
    }

    #[test]
    fn disjoint_windows_give_zero() {
        let t1 = GaussianTerm::normalized_peak(0.0, 0.3).with_window(-0.4, 0.4);
        let t2 = GaussianTerm::normalized_peak(1.0, 0.3).with_window(0.6, 1.4);
        assert_eq!(t1.overlap(&t2), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn translation_moves_support() {
        let t = GaussianTerm::normalized_peak(0.0, 0.1).with_window(-0.2, 0.2);
        let s = t.translated(1.0);
        assert_eq!(s.window, Some((0.8, 1.2)));
        assert_abs_diff_eq!(s.value(1.0).norm(), t.value(0.0).norm(), epsilon = 1e-14);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_term() -> impl Strategy<Value = GaussianTerm> {
            (
                -1.0f64..1.0,
                -1.0f64..1.0,
                -3.0f64..3.0,
                0.05f64..4.0,
                -4.0f64..4.0,
                proptest::option::of((-2.0f64..0.0, 0.0f64..2.0)),
            )
                .prop_map(|(re, im, mu, a, b, window)| {
                    let mut t = GaussianTerm::new(Complex64::new(re, im), mu, a, b);
                    if let Some((lo, hi)) = window {
                        t = t.with_window(mu + lo, mu + hi + 0.01);
                    }
                    t
                })
        }

        fn arb_sum() -> impl Strategy<Value = GaussianSum> {
            proptest::collection::vec(arb_term(), 1..4).prop_map(GaussianSum::new)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn overlap_is_conjugate_symmetric(a in arb_sum(), b in arb_sum()) {
                let ab = a.overlap(&b);
                let ba = b.overlap(&a);
                prop_assert!((ab - ba.conj()).norm() <= 1e-9 * (1.0 + ab.norm()));
            }

            #[test]
            fn norm_invariant_under_protocol_gates(
                s in arb_sum(),
                dx in -3.0f64..3.0,
                beta in -6.0f64..6.0,
                z in -1.0f64..1.0,
            ) {
                let n0 = s.norm_sq_uncached();
                prop_assert!((s.translated(dx).norm_sq_uncached() - n0).abs() <= 1e-9 * (1.0 + n0));
                prop_assert!((s.phased(beta).norm_sq_uncached() - n0).abs() <= 1e-9 * (1.0 + n0));
                prop_assert!((s.squeezed(z).norm_sq_uncached() - n0).abs() <= 1e-9 * (1.0 + n0));
            }

            #[test]
            fn fourier_preserves_norm_of_untruncated_sums(
                mut s in arb_sum(),
            ) {
                for t in &mut s.terms {
                    t.window = None;
                }
                let n0 = s.norm_sq_uncached();
                let f = s.fourier().unwrap();
                prop_assert!((f.norm_sq_uncached() - n0).abs() <= 1e-9 * (1.0 + n0));
            }

            #[test]
            fn cauchy_schwarz(a in arb_sum(), b in arb_sum()) {
                let o = a.overlap(&b).norm_sqr();
                let bound = a.norm_sq_uncached() * b.norm_sq_uncached();
                prop_assert!(o <= bound * (1.0 + 1e-9) + 1e-12);
            }
        }
    }
}
