//! Line-oriented circuit text format.
//!
//! ```text
//! circuit v1
//! registers <modes> <qubits>
//! label <text>                     # optional
//! <gate> <targets...> <params...>  # one gate per line
//! ```
//!
//! Gate lines (sugar forms on the left parse to the IR on the right):
//!
//! ```text
//! prepvac m                        PrepVacuum
//! prepqubit q                      PrepQubit0
//! hadamard q                       QubitUnitary (Hadamard)
//! qubitu q re00 im00 ... im11      QubitUnitary (row-major 2x2)
//! squeeze m z                      S(z)
//! phaseshift m phi                 e^{i phi (Q^2+P^2)/2}
//! rot m theta                      e^{-i theta (Q^2+P^2)/2}
//! shift m a                        e^{iaP}
//! posphase m a                     e^{iaQ}
//! displace m dq dp                 translation (dq, dp)
//! ctrlshift q m theta              ctrl e^{i theta P}
//! ctrlposphase q m theta           ctrl e^{i theta Q}
//! ctrldisplace q m dq dp           controlled translation
//! beamsplitter m1 m2 omega         B(omega)
//! shear m1 m2                      e^{-i P_{m1} Q_{m2}}
//! gauss1 m a11 a12 a22             one-mode Gaussian, symmetric A
//! gauss2 m1 m2 u0 .. u9            two-mode Gaussian, upper triangle of A
//! homodyne m                       HomodyneQ
//! measureq q                       QubitMeasure
//! ```

use super::gate::{Circuit, Gate, GaussianKind};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::fmt::Write as _;

pub fn to_text(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("circuit v1\n");
    let _ = writeln!(out, "registers {} {}", circuit.modes, circuit.qubits);
    if !circuit.label.is_empty() {
        let _ = writeln!(out, "label {}", circuit.label);
    }
    for gate in &circuit.gates {
        let line = match gate {
            Gate::PrepVacuum { mode } => format!("prepvac {mode}"),
            Gate::PrepQubit0 { qubit } => format!("prepqubit {qubit}"),
            Gate::QubitUnitary { qubit, matrix } => {
                if *matrix == hadamard_matrix() {
                    format!("hadamard {qubit}")
                } else {
                    let mut s = format!("qubitu {qubit}");
                    for row in matrix {
                        for c in row {
                            let _ = write!(s, " {:e} {:e}", c.re, c.im);
                        }
                    }
                    s
                }
            }
            Gate::QubitUnitary2 { .. } => {
                // No protocol emits these; refuse rather than invent a format.
                return format!("# unserializable gate: {gate:?}");
            }
            Gate::GaussianUnitary { modes, a } => match GaussianKind::classify(a) {
                GaussianKind::Squeeze { z } => format!("squeeze {} {:e}", modes[0], z),
                GaussianKind::PhaseShift { phi } => format!("phaseshift {} {:e}", modes[0], phi),
                GaussianKind::Shear { c } if c == -1.0 => {
                    format!("shear {} {}", modes[0], modes[1])
                }
                GaussianKind::Beamsplitter { omega } => {
                    format!("beamsplitter {} {} {:e}", modes[0], modes[1], omega)
                }
                _ => {
                    let mut s = if modes.len() == 1 {
                        format!("gauss1 {}", modes[0])
                    } else {
                        format!("gauss2 {} {}", modes[0], modes[1])
                    };
                    let n = a.nrows();
                    for i in 0..n {
                        for j in i..n {
                            let _ = write!(s, " {:e}", a[(i, j)]);
                        }
                    }
                    s
                }
            },
            Gate::Displacement { mode, dq, dp } => format!("displace {mode} {dq:e} {dp:e}"),
            Gate::CtrlDisplacement { qubit, mode, dq, dp } => {
                format!("ctrldisplace {qubit} {mode} {dq:e} {dp:e}")
            }
            Gate::HomodyneQ { mode } => format!("homodyne {mode}"),
            Gate::QubitMeasure { qubit } => format!("measureq {qubit}"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn hadamard_matrix() -> [[Complex64; 2]; 2] {
    match Gate::hadamard(0) {
        Gate::QubitUnitary { matrix, .. } => matrix,
        _ => unreachable!(),
    }
}

pub fn from_text(text: &str) -> Result<Circuit> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());

    let header = lines.next().ok_or_else(|| Error::Parse("empty circuit file".into()))?;
    if header != "circuit v1" {
        return Err(Error::Parse(format!("unsupported header '{header}', expected 'circuit v1'")));
    }

    let reg = lines.next().ok_or_else(|| Error::Parse("missing registers line".into()))?;
    let mut parts = reg.split_whitespace();
    if parts.next() != Some("registers") {
        return Err(Error::Parse("second line must be 'registers <modes> <qubits>'".into()));
    }
    let modes: usize = parse(parts.next(), "mode count")?;
    let qubits: usize = parse(parts.next(), "qubit count")?;
    let mut circuit = Circuit::permissive(modes, qubits);

    for line in lines {
        let mut f = line.split_whitespace();
        let op = f.next().unwrap();
        if op == "label" {
            circuit.label = line["label".len()..].trim().to_string();
            continue;
        }
        let gate = match op {
            "prepvac" => Gate::PrepVacuum { mode: parse(f.next(), "mode")? },
            "prepqubit" => Gate::PrepQubit0 { qubit: parse(f.next(), "qubit")? },
            "hadamard" => Gate::hadamard(parse(f.next(), "qubit")?),
            "qubitu" => {
                let qubit = parse(f.next(), "qubit")?;
                let mut vals = [0.0f64; 8];
                for v in vals.iter_mut() {
                    *v = parse(f.next(), "matrix entry")?;
                }
                let c = |i: usize| Complex64::new(vals[2 * i], vals[2 * i + 1]);
                Gate::QubitUnitary { qubit, matrix: [[c(0), c(1)], [c(2), c(3)]] }
            }
            "squeeze" => Gate::squeeze(parse(f.next(), "mode")?, parse(f.next(), "z")?),
            "phaseshift" => Gate::phase_shift(parse(f.next(), "mode")?, parse(f.next(), "phi")?),
            "rot" => Gate::rotation(parse(f.next(), "mode")?, parse(f.next(), "theta")?),
            "shift" => Gate::shift(parse(f.next(), "mode")?, parse(f.next(), "a")?),
            "posphase" => Gate::pos_phase(parse(f.next(), "mode")?, parse(f.next(), "a")?),
            "displace" => Gate::Displacement {
                mode: parse(f.next(), "mode")?,
                dq: parse(f.next(), "dq")?,
                dp: parse(f.next(), "dp")?,
            },
            "ctrlshift" => Gate::ctrl_shift(
                parse(f.next(), "qubit")?,
                parse(f.next(), "mode")?,
                parse(f.next(), "theta")?,
            ),
            "ctrlposphase" => Gate::ctrl_pos_phase(
                parse(f.next(), "qubit")?,
                parse(f.next(), "mode")?,
                parse(f.next(), "theta")?,
            ),
            "ctrldisplace" => Gate::CtrlDisplacement {
                qubit: parse(f.next(), "qubit")?,
                mode: parse(f.next(), "mode")?,
                dq: parse(f.next(), "dq")?,
                dp: parse(f.next(), "dp")?,
            },
            "beamsplitter" => Gate::beamsplitter(
                parse(f.next(), "mode")?,
                parse(f.next(), "mode")?,
                parse(f.next(), "omega")?,
            ),
            "shear" => Gate::two_mode_shear(parse(f.next(), "mode")?, parse(f.next(), "mode")?),
            "gauss1" => {
                let mode: usize = parse(f.next(), "mode")?;
                let (a11, a12, a22) =
                    (parse(f.next(), "a11")?, parse(f.next(), "a12")?, parse(f.next(), "a22")?);
                let mut a = DMatrix::zeros(2, 2);
                a[(0, 0)] = a11;
                a[(0, 1)] = a12;
                a[(1, 0)] = a12;
                a[(1, 1)] = a22;
                Gate::GaussianUnitary { modes: vec![mode], a }
            }
            "gauss2" => {
                let m1: usize = parse(f.next(), "mode")?;
                let m2: usize = parse(f.next(), "mode")?;
                let mut a = DMatrix::zeros(4, 4);
                for i in 0..4 {
                    for j in i..4 {
                        let v: f64 = parse(f.next(), "matrix entry")?;
                        a[(i, j)] = v;
                        a[(j, i)] = v;
                    }
                }
                Gate::GaussianUnitary { modes: vec![m1, m2], a }
            }
            "homodyne" => Gate::HomodyneQ { mode: parse(f.next(), "mode")? },
            "measureq" => Gate::QubitMeasure { qubit: parse(f.next(), "qubit")? },
            other => return Err(Error::Parse(format!("unknown gate '{other}'"))),
        };
        if f.next().is_some() {
            return Err(Error::Parse(format!("trailing fields on line '{line}'")));
        }
        circuit.push(gate)?;
    }
    Ok(circuit)
}

fn parse<T: std::str::FromStr>(field: Option<&str>, what: &str) -> Result<T> {
    field
        .ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("malformed {what}: '{}'", field.unwrap())))
}
