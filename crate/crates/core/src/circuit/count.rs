//! Elementary-operation accounting.
//!
//! Unitary protocols cost `T + (m+1) + m'` operations (gates plus one
//! preparation per register); heralded protocols cost
//! `T_1 + T_2 + (2m+1) + 2m'`, where `T_2` is the worst-case budget for the
//! classically controlled correction and every auxiliary register is also
//! measured.

use super::gate::Circuit;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    Unitary,
    /// Worst-case correction budget `T_2`.
    Heralded { t2: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpCountReport {
    pub modes: usize,
    pub qubits: usize,
    /// Preparation gates present in the circuit.
    pub preps: usize,
    /// Unit-cost unitaries (`T`, respectively `T_1`).
    pub unitaries: usize,
    /// Measurement gates present in the circuit.
    pub measurements: usize,
    /// Correction budget (heralded mode only).
    pub correction_budget: usize,
    /// Total elementary operations under the selected accounting.
    pub total: usize,
}

pub fn op_count(circuit: &Circuit, mode: CountMode) -> OpCountReport {
    let preps = circuit.gates.iter().filter(|g| g.is_prep()).count();
    let unitaries = circuit.gates.iter().filter(|g| g.is_unitary()).count();
    let measurements = circuit.gates.iter().filter(|g| g.is_measurement()).count();
    let m_aux = circuit.modes.saturating_sub(1);
    let (correction_budget, total) = match mode {
        CountMode::Unitary => (0, unitaries + circuit.modes + circuit.qubits),
        CountMode::Heralded { t2 } => {
            (t2, unitaries + t2 + (2 * m_aux + 1) + 2 * circuit.qubits)
        }
    };
    OpCountReport {
        modes: circuit.modes,
        qubits: circuit.qubits,
        preps,
        unitaries,
        measurements,
        correction_budget,
        total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::gate::Gate;

    #[test]
    fn empty_one_mode_circuit_costs_one() {
        let c = Circuit::strict(1, 0);
        let r = op_count(&c, CountMode::Unitary);
        assert_eq!(r.total, 1);
    }

    #[test]
    fn heralded_total_formula() {
        let mut c = Circuit::strict(2, 1);
        c.push(Gate::PrepVacuum { mode: 0 }).unwrap();
        c.push(Gate::PrepVacuum { mode: 1 }).unwrap();
        c.push(Gate::PrepQubit0 { qubit: 0 }).unwrap();
        c.push(Gate::hadamard(0)).unwrap();
        c.push(Gate::two_mode_shear(0, 1)).unwrap();
        c.push(Gate::HomodyneQ { mode: 0 }).unwrap();
        let r = op_count(&c, CountMode::Heralded { t2: 5 });
        // T1 = 2, T2 = 5, (2m+1) = 3, 2m' = 2
        assert_eq!(r.unitaries, 2);
        assert_eq!(r.total, 2 + 5 + 3 + 2);
        assert_eq!(r.measurements, 1);
        assert_eq!(r.preps, 3);
    }
}
