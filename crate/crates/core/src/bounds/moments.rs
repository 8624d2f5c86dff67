//! Per-gate moment limits: first moments and energy cannot grow faster than
//! the bounded-strength structure of the gate set allows.

use super::{BoundReport, Verdict};
use crate::circuit::{Gate, GaussianKind, STRENGTH_LIMIT};
use crate::error::Result;
use crate::sim::{HybridGridState, Observable};
use std::f64::consts::PI;

/// First moments and energy of a one-mode (plus qubit) state.
#[derive(Debug, Clone, Copy)]
pub struct MomentVector {
    /// `(<Q>, <P>)`.
    pub s: (f64, f64),
    /// `tr((Q^2 + P^2) rho)`.
    pub energy: f64,
}

impl MomentVector {
    pub fn s_norm(&self) -> f64 {
        (self.s.0 * self.s.0 + self.s.1 * self.s.1).sqrt()
    }
}

/// Measure the moments of a simulator state.
pub fn measure_moments(state: &HybridGridState) -> Result<MomentVector> {
    let q = state.expectation(Observable::Q)?.re;
    let p = state.expectation(Observable::P)?.re;
    let e = state.expectation(Observable::H)?.re;
    Ok(MomentVector { s: (q, p), energy: e })
}

/// `E_m(T) = e^{8 pi T} (m + 2)`: energy ceiling after `t` gates with `m`
/// auxiliary modes.
pub fn energy_limit(t: usize, m: usize) -> f64 {
    super::closed::energy_limit_formula(t, m)
}

fn gate_norms(gate: &Gate) -> (Option<f64>, Option<f64>) {
    // (displacement norm, Hamiltonian-matrix norm)
    match gate {
        Gate::Displacement { dq, dp, .. } | Gate::CtrlDisplacement { dq, dp, .. } => {
            (Some((dq * dq + dp * dp).sqrt()), None)
        }
        Gate::GaussianUnitary { a, .. } => {
            let sym = nalgebra::SymmetricEigen::new(a.clone());
            let n = sym.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
            (None, Some(n))
        }
        _ => (None, None),
    }
}

/// Check the generic and gate-family moment inequalities for one gate
/// application, given moments measured before and after.
pub fn gate_moment_check(
    gate: &Gate,
    before: &MomentVector,
    after: &MomentVector,
) -> Vec<BoundReport> {
    let mut out = Vec::new();
    let params = format!("gate={gate:?}");
    let sb = before.s_norm();
    let sa = after.s_norm();
    let tol_rel = 1e-8 * (1.0 + before.energy.abs());

    // Generic bounds for any bounded-strength gate.
    out.push(BoundReport::upper(
        "moment.generic.displacement",
        params.clone(),
        sa,
        (2.0 * PI).exp() * sb + 2.0 * PI,
        f64::INFINITY,
        true,
    ));
    out.push(BoundReport::upper(
        "moment.generic.energy",
        params.clone(),
        after.energy,
        (4.0 * PI).exp() * before.energy + 4.0 * PI * sb + (2.0 * PI).powi(2),
        f64::INFINITY,
        true,
    ));

    let (d_norm, a_norm) = gate_norms(gate);
    match gate {
        Gate::Displacement { .. } => {
            let d = d_norm.unwrap();
            out.push(BoundReport::upper(
                "moment.displacement.s",
                params.clone(),
                sa,
                sb + d + 1e-9,
                f64::INFINITY,
                true,
            ));
            out.push(BoundReport::upper(
                "moment.displacement.energy",
                params.clone(),
                after.energy,
                before.energy + 2.0 * d * sb + d * d + tol_rel,
                f64::INFINITY,
                true,
            ));
        }
        Gate::CtrlDisplacement { .. } => {
            let d = d_norm.unwrap();
            out.push(BoundReport::upper(
                "moment.ctrl_displacement.s",
                params.clone(),
                sa,
                sb + d + 1e-9,
                f64::INFINITY,
                true,
            ));
            out.push(BoundReport::upper(
                "moment.ctrl_displacement.energy",
                params.clone(),
                after.energy,
                2.0 * before.energy + 2.0 * d * sb + d * d + tol_rel,
                f64::INFINITY,
                true,
            ));
        }
        Gate::GaussianUnitary { a, .. } => {
            let n = a_norm.unwrap().min(STRENGTH_LIMIT);
            out.push(BoundReport::upper(
                "moment.gaussian.s",
                params.clone(),
                sa,
                n.exp() * sb + 1e-9,
                f64::INFINITY,
                true,
            ));
            out.push(BoundReport::upper(
                "moment.gaussian.energy",
                params.clone(),
                after.energy,
                (2.0 * n).exp() * before.energy + tol_rel,
                f64::INFINITY,
                true,
            ));
            if let GaussianKind::PhaseShift { .. } = GaussianKind::classify(a) {
                let drift = (after.energy - before.energy).abs();
                out.push(BoundReport {
                    name: "moment.phaseshift.energy_preserved".to_string(),
                    parameters: params.clone(),
                    paper_rhs: tol_rel,
                    measured_lhs: Some(drift),
                    verdict: if drift <= tol_rel { Verdict::Holds } else { Verdict::Violated },
                });
            }
        }
        Gate::QubitUnitary { .. } | Gate::QubitUnitary2 { .. } => {
            let drift = (after.energy - before.energy).abs()
                + (after.s.0 - before.s.0).abs()
                + (after.s.1 - before.s.1).abs();
            out.push(BoundReport {
                name: "moment.qubit.moments_preserved".to_string(),
                parameters: params.clone(),
                paper_rhs: tol_rel,
                measured_lhs: Some(drift),
                verdict: if drift <= tol_rel { Verdict::Holds } else { Verdict::Violated },
            });
        }
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::GridAxis;
    use crate::states::{build_state, StateSpec};
    use approx::assert_abs_diff_eq;

    fn vacuum() -> HybridGridState {
        let axis = GridAxis::auto(20.0, 0.4).unwrap();
        let vac = build_state(StateSpec::Vacuum, 1e-12).unwrap();
        HybridGridState::from_sum(&vac, vec![axis], 1).unwrap()
    }

    #[test]
    fn energy_limit_values() {
        assert_abs_diff_eq!(energy_limit(0, 0), 2.0);
        assert_abs_diff_eq!(energy_limit(1, 0), 2.0 * (8.0 * PI).exp(), epsilon = 1e-3);
        assert!((energy_limit(1, 0) - 1.63e11).abs() / 1.63e11 < 0.02);
    }

    #[test]
    fn displacement_moment_bounds_hold() {
        let s0 = vacuum();
        let g = Gate::Displacement { mode: 0, dq: 2.0, dp: -1.0 };
        let s1 = s0.apply(&g).unwrap();
        let before = measure_moments(&s0).unwrap();
        let after = measure_moments(&s1).unwrap();
        // ||s_after|| = ||s_before + d|| <= ||s_before|| + ||d||
        assert_abs_diff_eq!(after.s_norm(), 5.0f64.sqrt(), epsilon = 1e-7);
        for r in gate_moment_check(&g, &before, &after) {
            assert!(r.is_ok(), "{r:?}");
        }
    }

    #[test]
    fn squeeze_energy_within_exponential() {
        let s0 = vacuum();
        let g = Gate::squeeze(0, 1.0);
        let s1 = s0.apply(&g).unwrap();
        let before = measure_moments(&s0).unwrap();
        let after = measure_moments(&s1).unwrap();
        // cosh-type growth: E = cosh(2z) for the vacuum, below e^{2|z|}.
        assert_abs_diff_eq!(after.energy, (2.0f64).cosh(), epsilon = 1e-6);
        assert!(after.energy <= (2.0f64).exp() * before.energy);
        for r in gate_moment_check(&g, &before, &after) {
            assert!(r.is_ok(), "{r:?}");
        }
    }

    #[test]
    fn phaseshift_preserves_energy() {
        let s0 = vacuum().apply(&Gate::Displacement { mode: 0, dq: 1.0, dp: 0.5 }).unwrap();
        let g = Gate::phase_shift(0, 0.8);
        let s1 = s0.apply(&g).unwrap();
        let before = measure_moments(&s0).unwrap();
        let after = measure_moments(&s1).unwrap();
        let checks = gate_moment_check(&g, &before, &after);
        assert!(checks.iter().any(|r| r.name == "moment.phaseshift.energy_preserved"));
        for r in checks {
            assert!(r.is_ok(), "{r:?}");
        }
    }
}
