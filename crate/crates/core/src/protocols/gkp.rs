//! End-to-end heralded grid-state preparation: comb preparation followed by
//! envelope Gaussification, with the parameter rule `n = floor(4/3 log2 1/kappa)`.

use super::comb::{comb_circuit, run_comb, CombOutput};
use super::gaussify::{
    correction_budget, gaussify_circuit, run_gaussification, GaussifyInput, GaussifyOutput,
};
use super::{Backend, ProtocolReport};
use crate::circuit::{op_count, Circuit, CountMode, Gate};
use crate::error::{Error, Result};
use std::time::Instant;

/// Parameter rule: `n = floor(4/3 log2(1/kappa))`, `L = 2^n`.
pub fn gkp_rounds(kappa: f64) -> Result<(u32, u32)> {
    if !(kappa > 0.0 && kappa < 0.25) {
        return Err(Error::Parameter(format!("kappa must lie in (0, 1/4), got {kappa}")));
    }
    let n = ((4.0 / 3.0) * (1.0 / kappa).log2()).floor() as u32;
    if n >= 31 {
        return Err(Error::Capacity(format!("kappa = {kappa} would need 2^{n} peaks")));
    }
    Ok((n, 1u32 << n))
}

pub struct GkpOutput {
    pub comb: CombOutput,
    pub gaussify: GaussifyOutput,
    pub report: ProtocolReport,
    /// Comb-stage inaccuracy fed to the acceptance bound:
    /// the conservative `2 sqrt(1 - F_comb)`.
    pub xi: f64,
}

/// Remap a one-mode(+qubit) circuit onto system mode `mode` of a larger register.
fn remap_mode(circuit: &Circuit, mode: usize, modes: usize, qubits: usize) -> Result<Circuit> {
    let mut out = Circuit::strict(modes, qubits).with_label(&circuit.label);
    for g in &circuit.gates {
        let mapped = match g.clone() {
            Gate::PrepVacuum { .. } => Gate::PrepVacuum { mode },
            Gate::Displacement { dq, dp, .. } => Gate::Displacement { mode, dq, dp },
            Gate::CtrlDisplacement { qubit, dq, dp, .. } => {
                Gate::CtrlDisplacement { qubit, mode, dq, dp }
            }
            Gate::GaussianUnitary { a, modes: m } if m.len() == 1 => {
                Gate::GaussianUnitary { modes: vec![mode], a }
            }
            Gate::HomodyneQ { .. } => Gate::HomodyneQ { mode },
            other => other,
        };
        out.push(mapped)?;
    }
    Ok(out)
}

/// The full two-stage circuit on (measured envelope mode 0, system mode 1,
/// one catalyst qubit).
pub fn gkp_circuit(kappa: f64, delta: f64) -> Result<Circuit> {
    let (n, _) = gkp_rounds(kappa)?;
    let comb = comb_circuit(delta, n)?;
    let mut c = remap_mode(&comb, 1, 2, 1)?;
    c.label = "grid-state preparation".to_string();
    let stage2 = gaussify_circuit(kappa)?;
    c.extend(&stage2)?;
    Ok(c)
}

/// Run the full preparation protocol at `(kappa, delta)`.
pub fn run_gkp(kappa: f64, delta: f64, backend: Backend) -> Result<GkpOutput> {
    let start = Instant::now();
    let (n, l) = gkp_rounds(kappa)?;
    if l % 8 != 0 {
        return Err(Error::Precondition(format!(
            "kappa = {kappa} gives L = {l}, not a multiple of 8; the envelope stage needs L in 8N"
        )));
    }
    let comb = run_comb(delta, n, backend)?;
    let xi = 2.0 * (1.0 - comb.report.fidelity_to_target).max(0.0).sqrt();

    let input = GaussifyInput::from_hybrid(&comb.exact);
    let gaussify = run_gaussification(&input, kappa, delta, l, None)?;

    let circuit = gkp_circuit(kappa, delta)?;
    let counts = op_count(&circuit, CountMode::Heralded { t2: correction_budget(l) });

    let report = ProtocolReport {
        kappa: Some(kappa),
        delta,
        rounds: Some(n),
        peaks: Some(l),
        op_count: counts,
        correction_compiled_max: gaussify.report.correction_compiled_max,
        p_acc: gaussify.report.p_acc,
        fidelity_to_target: gaussify.report.fidelity_to_target,
        backend,
        runtime: start.elapsed(),
        delta_p: gaussify.report.delta_p,
        delta_q: gaussify.report.delta_q,
        qubit_plus_weight: comb.report.qubit_plus_weight,
    };
    Ok(GkpOutput { comb, gaussify, report, xi })
}
