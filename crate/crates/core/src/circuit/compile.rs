//! Compilation of unbounded displacements and squeezers into unit-cost gates.

use super::gate::{Circuit, Gate, STRENGTH_LIMIT};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Factor a phase-space translation `t = (dq, dp)` into bounded-strength
/// gates on one mode.
///
/// For `||t|| <= 2 pi` a single displacement gate is emitted. Otherwise the
/// translation is realized as a rotated, squeezer-amplified unit shift:
/// `Rot(-theta), S(z)^N, e^{-iP}, S(-z)^N, Rot(theta)` with
/// `z = log||t|| / ceil(log||t||)` and `theta = atan2(dp, dq)`. The gate count
/// is at most `2 ceil(log||t||) + 3`.
pub fn compile_displacement(dq: f64, dp: f64) -> Result<(Circuit, usize)> {
    if !dq.is_finite() || !dp.is_finite() {
        return Err(Error::Parameter("displacement components must be finite".into()));
    }
    let c = (dq * dq + dp * dp).sqrt();
    let mut circuit = Circuit::strict(1, 0).with_label("displacement");
    if c == 0.0 {
        return Ok((circuit, 0));
    }
    if c <= STRENGTH_LIMIT {
        circuit.push(Gate::Displacement { mode: 0, dq, dp })?;
        let count = circuit.len();
        return Ok((circuit, count));
    }

    let theta = dp.atan2(dq);
    let n = c.ln().abs().ceil() as usize; // c > 2 pi, so n >= 2
    let z = c.ln() / n as f64;

    // Rot(-theta) last maps the amplified position shift (c, 0) onto (dq, dp).
    if theta != 0.0 {
        circuit.push(Gate::rotation(0, theta))?;
    }
    for _ in 0..n {
        circuit.push(Gate::squeeze(0, z))?;
    }
    circuit.push(Gate::shift(0, -1.0))?; // e^{-iP}: position +1
    for _ in 0..n {
        circuit.push(Gate::squeeze(0, -z))?;
    }
    if theta != 0.0 {
        circuit.push(Gate::rotation(0, -theta))?;
    }
    let count = circuit.len();
    Ok((circuit, count))
}

/// Chain of unit squeezers realizing `S(z_total)` exactly:
/// `ceil(|z_total|)` gates with parameter `z_total / ceil(|z_total|)`.
pub fn compile_squeeze(z_total: f64) -> (Circuit, usize) {
    let mut circuit = Circuit::strict(1, 0).with_label("squeeze");
    if z_total == 0.0 {
        return (circuit, 0);
    }
    let n = z_total.abs().ceil() as usize;
    let z = z_total / n as f64;
    for _ in 0..n {
        circuit.push(Gate::squeeze(0, z)).expect("|z| <= 1 is bounded");
    }
    (circuit, n)
}

/// The protocol-specific split `S(n log 2 + log(1/delta))` as
/// `S(log 2)^n S(z_delta)^{ceil(log 1/delta)}` with `z_delta in (0, 1]`.
pub fn compile_squeeze_split(n: u32, delta: f64) -> Result<(Circuit, usize)> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    let mut circuit = Circuit::strict(1, 0).with_label("squeeze-split");
    let log_inv = (1.0 / delta).ln();
    let m = log_inv.ceil() as usize;
    let z_delta = log_inv / m as f64;
    for _ in 0..n {
        circuit.push(Gate::squeeze(0, 2.0f64.ln()))?;
    }
    for _ in 0..m {
        circuit.push(Gate::squeeze(0, z_delta))?;
    }
    Ok((circuit, n as usize + m))
}

/// Energy-based lower bounds on the gate count of a displacement by `t`:
/// the full form `(2 log||t|| + log(1 + 1/||t||^2)) / (8 pi)` and the
/// simplified `log||t|| / (4 pi) - 1`.
pub fn displacement_complexity_lower(dq: f64, dp: f64) -> Result<(f64, f64)> {
    let c = (dq * dq + dp * dp).sqrt();
    if c == 0.0 {
        return Err(Error::Parameter("displacement must be nonzero".into()));
    }
    let full = (2.0 * c.ln() + (1.0 + 1.0 / (c * c)).ln()) / (8.0 * PI);
    let simplified = c.ln() / (4.0 * PI) - 1.0;
    Ok((full, simplified))
}
