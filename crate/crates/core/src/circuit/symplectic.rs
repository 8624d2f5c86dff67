//! Symplectic bookkeeping for Gaussian circuits.
//!
//! A Gaussian unitary `U` acts on the quadrature vector `R = (Q_1, P_1, ...)`
//! as `U^dag R U = S R + t`. Gates compose as `S <- S_g S`, `t <- S_g t + t_g`.

use super::gate::{Circuit, Gate};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// The affine phase-space action `(S, t)` of a Gaussian circuit.
#[derive(Debug, Clone)]
pub struct SymplecticAction {
    pub s: DMatrix<f64>,
    pub displacement: DVector<f64>,
}

impl SymplecticAction {
    pub fn identity(modes: usize) -> SymplecticAction {
        SymplecticAction {
            s: DMatrix::identity(2 * modes, 2 * modes),
            displacement: DVector::zeros(2 * modes),
        }
    }

    /// Canonical symplectic form `J` with blocks `[[0, 1], [-1, 0]]`.
    pub fn form(modes: usize) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(2 * modes, 2 * modes);
        for m in 0..modes {
            j[(2 * m, 2 * m + 1)] = 1.0;
            j[(2 * m + 1, 2 * m)] = -1.0;
        }
        j
    }

    /// Max-abs deviation of `S J S^T` from `J`.
    pub fn symplectic_defect(&self) -> f64 {
        let modes = self.s.nrows() / 2;
        let j = Self::form(modes);
        let d = &self.s * &j * self.s.transpose() - j;
        d.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub(crate) fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.iter().fold(0.0f64, |m, &v| m.max(v.abs())) * n as f64;
    let scale = norm.log2().ceil().max(0.0) as u32 + 1;
    let b = a / 2.0f64.powi(scale as i32);
    let mut term = DMatrix::identity(n, n);
    let mut acc = DMatrix::identity(n, n);
    for k in 1..=20 {
        term = &term * &b / k as f64;
        acc += &term;
    }
    for _ in 0..scale {
        acc = &acc * &acc;
    }
    acc
}

/// Embed a local `(S, t)` acting on `modes` into the full 2n phase space.
fn embed(
    full: &mut SymplecticAction,
    local_s: &DMatrix<f64>,
    local_t: &DVector<f64>,
    modes: &[usize],
    total_modes: usize,
) {
    let mut s_g = DMatrix::identity(2 * total_modes, 2 * total_modes);
    let mut t_g = DVector::zeros(2 * total_modes);
    for (bi, &mi) in modes.iter().enumerate() {
        for (bj, &mj) in modes.iter().enumerate() {
            for a in 0..2 {
                for b in 0..2 {
                    s_g[(2 * mi + a, 2 * mj + b)] = local_s[(2 * bi + a, 2 * bj + b)];
                }
            }
        }
        t_g[2 * mi] = local_t[2 * bi];
        t_g[2 * mi + 1] = local_t[2 * bi + 1];
    }
    full.displacement = &s_g * &full.displacement + t_g;
    full.s = s_g * &full.s;
}

/// Compose the phase-space action of a circuit containing only Gaussian
/// unitaries and displacements. Any other gate is a capability error.
pub fn symplectic_of(circuit: &Circuit) -> Result<SymplecticAction> {
    let n = circuit.modes;
    let mut action = SymplecticAction::identity(n);
    for gate in &circuit.gates {
        match gate {
            Gate::Displacement { mode, dq, dp } => {
                let local_s = DMatrix::identity(2, 2);
                let local_t = DVector::from_vec(vec![*dq, *dp]);
                embed(&mut action, &local_s, &local_t, &[*mode], n);
            }
            Gate::GaussianUnitary { modes, a } => {
                // U^dag R U = e^{-JA} R for U = e^{i R^T A R / 2}.
                let j = SymplecticAction::form(modes.len());
                let local_s = expm(&(-(&j * a)));
                let local_t = DVector::zeros(2 * modes.len());
                embed(&mut action, &local_s, &local_t, modes, n);
            }
            other => {
                return Err(Error::Capability(format!(
                    "symplectic action is defined only for Gaussian gates, found {other:?}"
                )))
            }
        }
    }
    Ok(action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::strict(2, 0);
        let a = symplectic_of(&c).unwrap();
        assert!(a.s.is_identity(0.0));
        assert_eq!(a.displacement.norm(), 0.0);
    }

    #[test]
    fn squeeze_action_is_diagonal() {
        let mut c = Circuit::strict(1, 0);
        c.push(Gate::squeeze(0, 0.7)).unwrap();
        let a = symplectic_of(&c).unwrap();
        assert_abs_diff_eq!(a.s[(0, 0)], (-0.7f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(a.s[(1, 1)], 0.7f64.exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(a.s[(0, 1)], 0.0, epsilon = 1e-14);
        assert!(a.symplectic_defect() < 1e-12);
    }

    #[test]
    fn phase_shift_rotates_quadratures() {
        // U(theta) = e^{-i theta (Q^2+P^2)/2} has U^dag R U = e^{theta J} R,
        // so at theta = pi/2: Q -> P, P -> -Q.
        let mut c = Circuit::strict(1, 0);
        c.push(Gate::rotation(0, PI / 2.0)).unwrap();
        let a = symplectic_of(&c).unwrap();
        assert_abs_diff_eq!(a.s[(0, 0)], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.s[(0, 1)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.s[(1, 0)], -1.0, epsilon = 1e-12);
        assert!(a.symplectic_defect() < 1e-12);
    }

    #[test]
    fn phase_shift_inverts_rotation() {
        let mut c = Circuit::strict(1, 0);
        c.push(Gate::rotation(0, 0.83)).unwrap();
        c.push(Gate::phase_shift(0, 0.83)).unwrap();
        let a = symplectic_of(&c).unwrap();
        assert!(a.s.is_identity(1e-12));
    }

    #[test]
    fn shear_mixes_modes() {
        // e^{-i P_1 Q_2}: psi(x, y) -> psi(x - y, y) shifts Q_1 by +Q_2.
        let mut c = Circuit::strict(2, 0);
        c.push(Gate::two_mode_shear(0, 1)).unwrap();
        let a = symplectic_of(&c).unwrap();
        assert_abs_diff_eq!(a.s[(0, 2)], 1.0, epsilon = 1e-12);
        assert!(a.symplectic_defect() < 1e-12);
    }

    #[test]
    fn displacement_composes_through_rotation() {
        // Rotating after displacing moves the displacement vector:
        // t <- e^{theta J} (1, 0) = (0, -1) at theta = pi/2.
        let mut c = Circuit::strict(1, 0);
        c.push(Gate::shift(0, -1.0)).unwrap(); // position +1
        c.push(Gate::rotation(0, PI / 2.0)).unwrap();
        let a = symplectic_of(&c).unwrap();
        assert_abs_diff_eq!(a.displacement[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.displacement[1], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn random_bounded_circuits_stay_symplectic() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut c = Circuit::strict(2, 0);
            let len = rng.gen_range(1..=20);
            for _ in 0..len {
                let gate = match rng.gen_range(0..5) {
                    0 => Gate::squeeze(rng.gen_range(0..2), rng.gen_range(-2.0..2.0)),
                    1 => Gate::rotation(rng.gen_range(0..2), rng.gen_range(-6.0..6.0)),
                    2 => Gate::beamsplitter(0, 1, rng.gen_range(-2.0..2.0)),
                    3 => Gate::Displacement {
                        mode: rng.gen_range(0..2),
                        dq: rng.gen_range(-3.0..3.0),
                        dp: rng.gen_range(-3.0..3.0),
                    },
                    _ => Gate::two_mode_shear(1, 0),
                };
                c.push(gate).unwrap();
            }
            let a = symplectic_of(&c).unwrap();
            assert!(a.symplectic_defect() < 1e-10, "defect {}", a.symplectic_defect());
        }
    }

    #[test]
    fn non_gaussian_gate_is_capability_error() {
        let mut c = Circuit::strict(1, 1);
        c.push(Gate::hadamard(0)).unwrap();
        assert!(symplectic_of(&c).is_err());
    }
}
