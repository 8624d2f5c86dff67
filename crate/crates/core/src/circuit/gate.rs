//! The elementary operation set and its bounded-strength validation.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Strength limit for Gaussian unitaries (operator norm of the Hamiltonian
/// matrix) and displacements (Euclidean norm of the shift vector).
pub const STRENGTH_LIMIT: f64 = 2.0 * PI;

/// One elementary operation.
///
/// Displacements are parameterized by their phase-space translation
/// `(dq, dp)`: the gate maps `<Q> -> <Q> + dq` and `<P> -> <P> + dp`
/// (as a unitary, `exp(i(dp Q - dq P))`). Gaussian unitaries carry the
/// symmetric Hamiltonian matrix `A` of `exp(i R^T A R / 2)` in the local
/// quadrature ordering `(Q_{m_1}, P_{m_1}, Q_{m_2}, P_{m_2})` of their
/// target modes.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    PrepVacuum { mode: usize },
    PrepQubit0 { qubit: usize },
    QubitUnitary { qubit: usize, matrix: [[Complex64; 2]; 2] },
    QubitUnitary2 { qubits: (usize, usize), matrix: Box<[[Complex64; 4]; 4]> },
    GaussianUnitary { modes: Vec<usize>, a: DMatrix<f64> },
    Displacement { mode: usize, dq: f64, dp: f64 },
    CtrlDisplacement { qubit: usize, mode: usize, dq: f64, dp: f64 },
    HomodyneQ { mode: usize },
    QubitMeasure { qubit: usize },
}

impl Gate {
    /// `e^{iaP}`: position translation by `-a`.
    pub fn shift(mode: usize, a: f64) -> Gate {
        Gate::Displacement { mode, dq: -a, dp: 0.0 }
    }

    /// `e^{iaQ}`: momentum translation by `a`.
    pub fn pos_phase(mode: usize, a: f64) -> Gate {
        Gate::Displacement { mode, dq: 0.0, dp: a }
    }

    /// `S(z) = e^{i z (QP + PQ)/2}`, acting as `psi(x) -> e^{z/2} psi(e^z x)`.
    pub fn squeeze(mode: usize, z: f64) -> Gate {
        let mut a = DMatrix::zeros(2, 2);
        a[(0, 1)] = z;
        a[(1, 0)] = z;
        Gate::GaussianUnitary { modes: vec![mode], a }
    }

    /// Phase shift `P(phi) = e^{i phi (Q^2+P^2)/2}`.
    pub fn phase_shift(mode: usize, phi: f64) -> Gate {
        let a = DMatrix::from_diagonal_element(2, 2, phi);
        Gate::GaussianUnitary { modes: vec![mode], a }
    }

    /// Rotation `U(theta) = e^{-i theta (Q^2+P^2)/2}`, the inverse phase shift;
    /// rotates `(Q, P) -> (cos Q - sin P, sin Q + cos P)`.
    pub fn rotation(mode: usize, theta: f64) -> Gate {
        Gate::phase_shift(mode, -theta)
    }

    /// Beamsplitter `B(omega) = e^{i omega (Q_1 Q_2 + P_1 P_2)}`.
    pub fn beamsplitter(mode1: usize, mode2: usize, omega: f64) -> Gate {
        let mut a = DMatrix::zeros(4, 4);
        a[(0, 2)] = omega;
        a[(2, 0)] = omega;
        a[(1, 3)] = omega;
        a[(3, 1)] = omega;
        Gate::GaussianUnitary { modes: vec![mode1, mode2], a }
    }

    /// Two-mode shear `e^{-i P_1 Q_2}` mapping `psi(x, y) -> psi(x - y, y)`.
    pub fn two_mode_shear(mode1: usize, mode2: usize) -> Gate {
        let mut a = DMatrix::zeros(4, 4);
        a[(1, 2)] = -1.0;
        a[(2, 1)] = -1.0;
        Gate::GaussianUnitary { modes: vec![mode1, mode2], a }
    }

    /// `ctrl e^{i theta P}`.
    pub fn ctrl_shift(qubit: usize, mode: usize, theta: f64) -> Gate {
        Gate::CtrlDisplacement { qubit, mode, dq: -theta, dp: 0.0 }
    }

    /// `ctrl e^{i theta Q}`.
    pub fn ctrl_pos_phase(qubit: usize, mode: usize, theta: f64) -> Gate {
        Gate::CtrlDisplacement { qubit, mode, dq: 0.0, dp: theta }
    }

    pub fn hadamard(qubit: usize) -> Gate {
        let h = 1.0 / 2.0f64.sqrt();
        let c = |x: f64| Complex64::new(x, 0.0);
        Gate::QubitUnitary { qubit, matrix: [[c(h), c(h)], [c(h), -c(h)]] }
    }

    /// Is this one of the unit-cost unitaries (rather than a prep/measurement)?
    pub fn is_unitary(&self) -> bool {
        matches!(
            self,
            Gate::QubitUnitary { .. }
                | Gate::QubitUnitary2 { .. }
                | Gate::GaussianUnitary { .. }
                | Gate::Displacement { .. }
                | Gate::CtrlDisplacement { .. }
        )
    }

    pub fn is_prep(&self) -> bool {
        matches!(self, Gate::PrepVacuum { .. } | Gate::PrepQubit0 { .. })
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Gate::HomodyneQ { .. } | Gate::QubitMeasure { .. })
    }
}

/// Structural classification of a Gaussian unitary's Hamiltonian matrix,
/// used by backends to dispatch to specialized implementations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussianKind {
    /// `S(z)`.
    Squeeze { z: f64 },
    /// `P(phi) = e^{i phi (Q^2+P^2)/2}` (the rotation `U(theta)` is `phi = -theta`).
    PhaseShift { phi: f64 },
    /// `e^{i c P_1 Q_2}` with coupling `c`.
    Shear { c: f64 },
    /// `B(omega)`.
    Beamsplitter { omega: f64 },
    /// Anything else.
    General,
}

impl GaussianKind {
    pub fn classify(a: &DMatrix<f64>) -> GaussianKind {
        let tol = 1e-14;
        if a.nrows() == 2 {
            if (a[(0, 0)]).abs() < tol && (a[(1, 1)]).abs() < tol {
                return GaussianKind::Squeeze { z: a[(0, 1)] };
            }
            if (a[(0, 0)] - a[(1, 1)]).abs() < tol && a[(0, 1)].abs() < tol {
                return GaussianKind::PhaseShift { phi: a[(0, 0)] };
            }
        } else if a.nrows() == 4 {
            let nonzero: Vec<(usize, usize)> = (0..4)
                .flat_map(|i| (i..4).map(move |j| (i, j)))
                .filter(|&(i, j)| a[(i, j)].abs() >= tol)
                .collect();
            if nonzero == vec![(1, 2)] {
                return GaussianKind::Shear { c: a[(1, 2)] };
            }
            if nonzero == vec![(0, 2), (1, 3)]
                && (a[(0, 2)] - a[(1, 3)]).abs() < tol
            {
                return GaussianKind::Beamsplitter { omega: a[(0, 2)] };
            }
        }
        GaussianKind::General
    }
}

/// Outcome of the bounded-strength check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundedVerdict {
    Ok,
    Violation { norm: f64, limit: f64 },
}

impl BoundedVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, BoundedVerdict::Ok)
    }
}

/// Check the strength of a gate: operator norm of `A` for Gaussian unitaries
/// (by symmetric eigendecomposition), Euclidean norm of the shift vector for
/// (controlled) displacements. Preps, measurements and qubit unitaries are
/// unit-cost and always pass.
pub fn validate_bounded(gate: &Gate) -> BoundedVerdict {
    // 1e-12 slack so gates constructed to sit exactly at the limit pass.
    let limit = STRENGTH_LIMIT + 1e-12;
    let norm = match gate {
        Gate::GaussianUnitary { a, .. } => {
            let sym = nalgebra::SymmetricEigen::new(a.clone());
            sym.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
        }
        Gate::Displacement { dq, dp, .. } | Gate::CtrlDisplacement { dq, dp, .. } => {
            (dq * dq + dp * dp).sqrt()
        }
        _ => return BoundedVerdict::Ok,
    };
    if norm <= limit {
        BoundedVerdict::Ok
    } else {
        BoundedVerdict::Violation { norm, limit: STRENGTH_LIMIT }
    }
}

/// An ordered gate list over `modes` oscillators and `qubits` qubits.
#[derive(Debug, Clone, Default)]
pub struct Circuit {
    pub modes: usize,
    pub qubits: usize,
    pub gates: Vec<Gate>,
    pub label: String,
    strict: bool,
}

impl Circuit {
    /// A circuit that rejects unbounded gates at construction time.
    pub fn strict(modes: usize, qubits: usize) -> Circuit {
        Circuit { modes, qubits, gates: Vec::new(), label: String::new(), strict: true }
    }

    /// A circuit without the strength check (targets are still validated).
    pub fn permissive(modes: usize, qubits: usize) -> Circuit {
        Circuit { modes, qubits, gates: Vec::new(), label: String::new(), strict: false }
    }

    pub fn with_label(mut self, label: &str) -> Circuit {
        self.label = label.to_string();
        self
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    fn check_targets(&self, gate: &Gate) -> Result<()> {
        let mode_ok = |m: usize| {
            if m < self.modes {
                Ok(())
            } else {
                Err(Error::Usage(format!("mode {m} out of range (circuit has {})", self.modes)))
            }
        };
        let qubit_ok = |q: usize| {
            if q < self.qubits {
                Ok(())
            } else {
                Err(Error::Usage(format!("qubit {q} out of range (circuit has {})", self.qubits)))
            }
        };
        match gate {
            Gate::PrepVacuum { mode } | Gate::HomodyneQ { mode } => mode_ok(*mode),
            Gate::PrepQubit0 { qubit } | Gate::QubitMeasure { qubit } => qubit_ok(*qubit),
            Gate::QubitUnitary { qubit, .. } => qubit_ok(*qubit),
            Gate::QubitUnitary2 { qubits, .. } => {
                qubit_ok(qubits.0)?;
                qubit_ok(qubits.1)?;
                if qubits.0 == qubits.1 {
                    return Err(Error::Usage("two-qubit gate targets must differ".into()));
                }
                Ok(())
            }
            Gate::GaussianUnitary { modes, a } => {
                for &m in modes {
                    mode_ok(m)?;
                }
                if a.nrows() != 2 * modes.len() || a.ncols() != 2 * modes.len() {
                    return Err(Error::Usage(format!(
                        "Hamiltonian matrix is {}x{} but gate targets {} mode(s)",
                        a.nrows(),
                        a.ncols(),
                        modes.len()
                    )));
                }
                if modes.len() > 2 {
                    return Err(Error::Usage("Gaussian gates act on one or two modes".into()));
                }
                if modes.len() == 2 && modes[0] == modes[1] {
                    return Err(Error::Usage("two-mode gate targets must differ".into()));
                }
                Ok(())
            }
            Gate::Displacement { mode, .. } => mode_ok(*mode),
            Gate::CtrlDisplacement { qubit, mode, .. } => {
                qubit_ok(*qubit)?;
                mode_ok(*mode)
            }
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        self.check_targets(&gate)?;
        if self.strict {
            if let BoundedVerdict::Violation { norm, limit } = validate_bounded(&gate) {
                return Err(Error::Parameter(format!(
                    "gate strength {norm:.6} exceeds the bounded-strength limit {limit:.6}"
                )));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn squeeze_at_limit_passes() {
        let g = Gate::squeeze(0, STRENGTH_LIMIT);
        assert!(validate_bounded(&g).is_ok());
        let g = Gate::squeeze(0, STRENGTH_LIMIT + 0.01);
        assert!(!validate_bounded(&g).is_ok());
    }

    #[test]
    fn displacement_violation_reports_norm() {
        let g = Gate::Displacement { mode: 0, dq: 7.0, dp: 0.0 };
        match validate_bounded(&g) {
            BoundedVerdict::Violation { norm, limit } => {
                assert_abs_diff_eq!(norm, 7.0);
                assert_abs_diff_eq!(limit, STRENGTH_LIMIT);
            }
            BoundedVerdict::Ok => panic!("7 > 2 pi should violate"),
        }
    }

    #[test]
    fn beamsplitter_unit_strength_ok() {
        assert!(validate_bounded(&Gate::beamsplitter(0, 1, 1.0)).is_ok());
    }

    #[test]
    fn classification_roundtrip() {
        let z = 0.37;
        match &Gate::squeeze(0, z) {
            Gate::GaussianUnitary { a, .. } => {
                assert_eq!(GaussianKind::classify(a), GaussianKind::Squeeze { z });
            }
            _ => unreachable!(),
        }
        match &Gate::rotation(0, 0.5) {
            Gate::GaussianUnitary { a, .. } => {
                assert_eq!(GaussianKind::classify(a), GaussianKind::PhaseShift { phi: -0.5 });
            }
            _ => unreachable!(),
        }
        match &Gate::two_mode_shear(0, 1) {
            Gate::GaussianUnitary { a, .. } => {
                assert_eq!(GaussianKind::classify(a), GaussianKind::Shear { c: -1.0 });
            }
            _ => unreachable!(),
        }
        match &Gate::beamsplitter(0, 1, 0.9) {
            Gate::GaussianUnitary { a, .. } => {
                assert_eq!(GaussianKind::classify(a), GaussianKind::Beamsplitter { omega: 0.9 });
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn strict_circuit_rejects_strong_gates() {
        let mut c = Circuit::strict(1, 0);
        assert!(c.push(Gate::shift(0, 1.0)).is_ok());
        assert!(c.push(Gate::Displacement { mode: 0, dq: 7.0, dp: 0.0 }).is_err());
        assert!(c.push(Gate::shift(1, 1.0)).is_err()); // bad target
        let mut p = Circuit::permissive(1, 0);
        assert!(p.push(Gate::Displacement { mode: 0, dq: 7.0, dp: 0.0 }).is_ok());
    }
}
