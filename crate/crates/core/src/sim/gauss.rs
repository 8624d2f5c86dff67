//! Exact analytic backend: hybrid states whose mode wavefunction stays inside
//! the Gaussian-sum class under the protocol gate set.

use super::grid::{sample_on_axis, GridAxis, HybridGridState};
use crate::circuit::{Circuit, Gate, GaussianKind};
use crate::error::{Error, Result};
use crate::states::{GaussianSum, GaussianTerm};
use num_complex::Complex64;

/// Default cap on the number of Gaussian terms per branch.
pub const TERM_CAP: usize = 4096;

/// One oscillator mode and 0-1 qubits, each qubit branch an (unnormalized)
/// Gaussian sum; the joint norm is 1.
#[derive(Debug, Clone)]
pub struct GaussHybrid {
    pub branches: Vec<GaussianSum>,
    pub term_cap: usize,
}

impl GaussHybrid {
    pub fn new(mode: GaussianSum, qubits: usize) -> Result<GaussHybrid> {
        if qubits > 1 {
            return Err(Error::Usage("the exact backend carries at most one qubit".into()));
        }
        let mut branches = vec![mode];
        for _ in 1..(1 << qubits) {
            branches.push(GaussianSum::new(vec![]));
        }
        Ok(GaussHybrid { branches, term_cap: TERM_CAP })
    }

    pub fn qubits(&self) -> usize {
        self.branches.len().trailing_zeros() as usize
    }

    pub fn norm_sq(&self) -> f64 {
        self.branches.iter().map(|b| b.norm_sq_uncached()).sum()
    }

    /// Put the qubit into `|+>`; only valid while it is still in `|0>`.
    pub fn with_qubit_plus(mut self) -> Result<GaussHybrid> {
        if self.branches.len() != 2 {
            return Err(Error::Usage("state has no qubit register".into()));
        }
        if !self.branches[1].terms.is_empty() {
            return Err(Error::Usage("qubit is no longer in |0>; apply a Hadamard gate instead".into()));
        }
        let h = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
        let b0 = self.branches[0].scaled(h);
        self.branches[1] = b0.clone();
        self.branches[0] = b0;
        Ok(self)
    }

    pub fn apply(&self, gate: &Gate) -> Result<GaussHybrid> {
        let mut next = self.clone();
        next.apply_mut(gate)?;
        Ok(next)
    }

    pub fn apply_circuit(&self, circuit: &Circuit) -> Result<GaussHybrid> {
        let mut state = self.clone();
        for g in &circuit.gates {
            state.apply_mut(g)?;
        }
        Ok(state)
    }

    fn apply_mut(&mut self, gate: &Gate) -> Result<()> {
        match gate {
            Gate::Displacement { mode: 0, dq, dp } => {
                for b in &mut self.branches {
                    *b = displace_sum(b, *dq, *dp);
                }
                Ok(())
            }
            Gate::CtrlDisplacement { qubit: 0, mode: 0, dq, dp } => {
                if self.branches.len() != 2 {
                    return Err(Error::Usage("no qubit register".into()));
                }
                self.branches[1] = displace_sum(&self.branches[1], *dq, *dp);
                Ok(())
            }
            Gate::GaussianUnitary { modes, a } if modes == &[0] => {
                match GaussianKind::classify(a) {
                    GaussianKind::Squeeze { z } => {
                        for b in &mut self.branches {
                            *b = b.squeezed(z);
                        }
                        Ok(())
                    }
                    _ => Err(Error::Capability(
                        "the exact backend supports displacements, squeezers, qubit gates and controlled displacements"
                            .into(),
                    )),
                }
            }
            Gate::QubitUnitary { qubit: 0, matrix } => {
                if self.branches.len() != 2 {
                    return Err(Error::Usage("no qubit register".into()));
                }
                let b0 = self.branches[0].clone();
                let b1 = self.branches[1].clone();
                let mix = |u0: Complex64, a: &GaussianSum, u1: Complex64, b: &GaussianSum| {
                    a.scaled(u0).add(&b.scaled(u1))
                };
                self.branches[0] = mix(matrix[0][0], &b0, matrix[0][1], &b1);
                self.branches[1] = mix(matrix[1][0], &b0, matrix[1][1], &b1);
                for b in &self.branches {
                    if b.terms.len() > self.term_cap {
                        return Err(Error::Capacity(format!(
                            "branch grew to {} terms (cap {})",
                            b.terms.len(),
                            self.term_cap
                        )));
                    }
                }
                Ok(())
            }
            Gate::PrepVacuum { .. } | Gate::PrepQubit0 { .. } => Err(Error::Usage(
                "preparation gates initialize registers; use the constructors".into(),
            )),
            Gate::HomodyneQ { .. } | Gate::QubitMeasure { .. } => {
                Err(Error::Usage("measurements are not unitary gates".into()))
            }
            other => Err(Error::Capability(format!(
                "gate {other:?} is outside the exact backend's gate set"
            ))),
        }
    }

    /// Fidelity of the qubit-traced mode state against a pure target.
    pub fn reduce_fidelity(&self, target: &GaussianSum) -> f64 {
        self.branches.iter().map(|b| target.overlap(b).norm_sqr()).sum()
    }

    /// Branch weights `(||psi_0||^2, ||psi_1||^2)`.
    pub fn branch_weights(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.norm_sq_uncached()).collect()
    }

    /// Sample every branch on a grid axis.
    pub fn to_grid(&self, axis: GridAxis) -> Result<HybridGridState> {
        axis.validate()?;
        let branches: Vec<Vec<Complex64>> =
            self.branches.iter().map(|b| sample_on_axis(b, &axis)).collect();
        Ok(HybridGridState { axes: vec![axis], qubits: self.qubits(), branches })
    }

    /// `<grid, self>` with branch-wise sampling on the grid state's axis.
    pub fn overlap_with_grid(&self, grid: &HybridGridState) -> Result<Complex64> {
        if grid.axes.len() != 1 || grid.branches.len() != self.branches.len() {
            return Err(Error::Usage("register mismatch between backends".into()));
        }
        let dx = grid.axes[0].dx;
        let mut acc = Complex64::new(0.0, 0.0);
        for (gb, ab) in grid.branches.iter().zip(self.branches.iter()) {
            let samples = sample_on_axis(ab, &grid.axes[0]);
            for (g, a) in gb.iter().zip(samples.iter()) {
                acc += g.conj() * a * dx;
            }
        }
        Ok(acc)
    }
}

/// `D = e^{i dp Q} e^{-i dq P} e^{-i dp dq / 2}` applied to a sum.
pub fn displace_sum(sum: &GaussianSum, dq: f64, dp: f64) -> GaussianSum {
    let scalar = Complex64::new(0.0, -0.5 * dp * dq).exp();
    sum.translated(dq).phased(dp).scaled(scalar)
}

/// Run a circuit on the exact backend. Preparation gates must appear before
/// any unitary touching their register; the input sum seeds the mode.
pub fn run_on_gaussian_backend(circuit: &Circuit, input: GaussianSum) -> Result<GaussHybrid> {
    if circuit.modes != 1 {
        return Err(Error::Capability("the exact backend simulates one-mode circuits".into()));
    }
    let mut state = GaussHybrid::new(input, circuit.qubits)?;
    if circuit.qubits == 1 {
        // |0> on the qubit: branch 1 empty, as constructed.
    }
    for gate in &circuit.gates {
        match gate {
            Gate::PrepVacuum { .. } | Gate::PrepQubit0 { .. } => continue,
            g => state.apply_mut(g)?,
        }
    }
    Ok(state)
}

/// A two-mode product state `psi_1 (x) psi_2`, optionally sheared by
/// `e^{-i P_1 Q_2}`, supporting homodyne slicing of mode 1 (conditioning on a
/// position outcome of the first mode).
#[derive(Debug, Clone)]
pub struct TwoModeGauss {
    pub psi1: GaussianSum,
    pub psi2: GaussianSum,
    pub sheared: bool,
}

impl TwoModeGauss {
    pub fn product(psi1: GaussianSum, psi2: GaussianSum) -> TwoModeGauss {
        TwoModeGauss { psi1, psi2, sheared: false }
    }

    /// Apply `e^{-i P_1 Q_2}`: the wavefunction becomes `psi_1(x-y) psi_2(y)`.
    pub fn shear(&mut self) -> Result<()> {
        if self.sheared {
            return Err(Error::Capability("repeated shears are not representable".into()));
        }
        self.sheared = true;
        Ok(())
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let arg = if self.sheared { x - y } else { x };
        self.psi1.eval(arg) * self.psi2.eval(y)
    }

    /// Pointwise value with dimension checking (two-mode states take 2 coordinates).
    pub fn eval_at(&self, point: &[f64]) -> crate::error::Result<Complex64> {
        if point.len() != 2 {
            return Err(Error::Usage(format!(
                "state has 2 modes but point has {} coordinates",
                point.len()
            )));
        }
        Ok(self.eval(point[0], point[1]))
    }

    /// Unnormalized conditional state of mode 2 given outcome `x` on mode 1:
    /// `phi_x(y) = psi_1(x - y) psi_2(y)` (sheared) or `psi_1(x) psi_2(y)`.
    pub fn slice(&self, x: f64) -> GaussianSum {
        if !self.sheared {
            return self.psi2.scaled(self.psi1.eval(x));
        }
        let mut terms = Vec::new();
        for t1 in &self.psi1.terms {
            // psi_1(x - y) as a function of y: reflect, then move by x.
            let ty = t1.reflected().translated(x);
            for t2 in &self.psi2.terms {
                if let Some(p) = ty.product(t2) {
                    terms.push(p);
                }
            }
        }
        GaussianSum::new(terms)
    }

    /// Outcome density `p(x) = || slice(x) ||^2`.
    pub fn outcome_density(&self, x: f64) -> f64 {
        self.slice(x).norm_sq_uncached()
    }
}

/// Product of two terms' sums evaluated pointwise (used by tests).
pub fn pointwise_product(a: &GaussianSum, b: &GaussianTerm) -> GaussianSum {
    a.times_term(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{build_state, StateSpec};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn squeeze_transforms_single_term_exactly() {
        let vac = build_state(StateSpec::Vacuum, 1e-12).unwrap();
        let s = GaussHybrid::new(vac, 0).unwrap();
        let out = s.apply(&Gate::squeeze(0, 0.3)).unwrap();
        assert_eq!(out.branches[0].terms.len(), 1);
        let t = &out.branches[0].terms[0];
        assert_abs_diff_eq!(t.a, (0.6f64).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(out.norm_sq(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pos_phase_adds_linear_phase() {
        let vac = build_state(StateSpec::Vacuum, 1e-12).unwrap();
        let s = GaussHybrid::new(vac, 0).unwrap();
        let out = s.apply(&Gate::pos_phase(0, PI)).unwrap();
        assert_abs_diff_eq!(out.branches[0].terms[0].b, PI, epsilon = 1e-15);
    }

    #[test]
    fn slice_of_sheared_product_matches_pointwise() {
        let eta = build_state(StateSpec::SqueezedVacuum { delta: 5.0 }, 1e-12).unwrap();
        let comb = build_state(StateSpec::TruncatedComb { l: 4, delta: 0.1, eps: 0.3 }, 1e-12)
            .unwrap();
        let mut tm = TwoModeGauss::product(eta.clone(), comb.clone());
        tm.shear().unwrap();
        let x = 0.37;
        let sl = tm.slice(x);
        for y in [-1.8, -1.0, 0.05, 1.2] {
            let want = eta.eval(x - y) * comb.eval(y);
            let got = sl.eval(y);
            assert_abs_diff_eq!((want - got).norm(), 0.0, epsilon = 1e-12);
            let via_point = tm.eval_at(&[x, y]).unwrap();
            assert_abs_diff_eq!((want - via_point).norm(), 0.0, epsilon = 1e-14);
        }
        // Dimension checking on both state arities.
        assert!(tm.eval_at(&[x]).is_err());
        assert!(eta.eval_at(&[x, 0.0]).is_err());
        assert_abs_diff_eq!(
            (eta.eval_at(&[x]).unwrap() - eta.eval(x)).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn backend_agreement_on_displaced_squeezed_vacuum() {
        use crate::sim::grid::GridAxis;
        let vac = build_state(StateSpec::Vacuum, 1e-12).unwrap();
        let mut circ = Circuit::strict(1, 0);
        circ.push(Gate::squeeze(0, -0.4)).unwrap();
        circ.push(Gate::shift(0, -1.3)).unwrap();
        circ.push(Gate::pos_phase(0, 0.9)).unwrap();
        let exact = run_on_gaussian_backend(&circ, vac.clone()).unwrap();
        let axis = GridAxis::auto(14.0, 0.5).unwrap();
        let grid = HybridGridState::from_sum(&vac, vec![axis], 0)
            .unwrap()
            .apply_circuit(&circ)
            .unwrap();
        let o = exact.overlap_with_grid(&grid).unwrap();
        assert!(o.norm_sqr() > 1.0 - 1e-9, "overlap^2 = {}", o.norm_sqr());
    }
}
