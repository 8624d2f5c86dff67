//! Position-grid simulation of hybrid oscillator-qubit states.
//!
//! States are complex amplitude arrays over uniform position grids (one per
//! mode, power-of-two sizes), one array per qubit basis branch, normalized as
//! `sum_branches sum |psi|^2 dx_1..dx_k = 1`. Position phases act pointwise,
//! momentum operations through the FFT (exact on the periodic grid), and
//! squeezers through band-limited resampling.

use super::fourier;
use crate::circuit::{Circuit, Gate, GaussianKind};
use crate::error::{Error, Result};
use crate::states::{GaussianSum, StateSpec};
use num_complex::Complex64;
use std::sync::Arc;

/// Uniform position grid `x_j = x_min + j dx`, `n` a power of two straddling 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub x_min: f64,
    pub dx: f64,
    pub n: usize,
}

impl GridAxis {
    /// Symmetric axis covering `[-radius, radius]` with sample spacing at most
    /// `min_width / 6`, rounded up to a power-of-two point count.
    pub fn auto(radius: f64, min_width: f64) -> Result<GridAxis> {
        if !(radius > 0.0 && min_width > 0.0) {
            return Err(Error::Parameter("grid radius and feature width must be positive".into()));
        }
        let dx = min_width / 6.0;
        let raw = (2.0 * radius / dx).ceil() as usize;
        let n = raw.next_power_of_two();
        if n > 1 << 24 {
            return Err(Error::Capacity(format!(
                "grid would need {n} points; refusing beyond 2^24"
            )));
        }
        Ok(GridAxis { x_min: -(n as f64 / 2.0) * dx, dx, n })
    }

    pub fn point(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.point(self.n - 1)
    }

    pub fn extent(&self) -> f64 {
        self.n as f64 * self.dx
    }

    /// Signed momentum of DFT bin `m`: `2 pi m~ / (n dx)`.
    pub fn momentum(&self, m: usize) -> f64 {
        2.0 * std::f64::consts::PI * fourier::signed_index(m, self.n) as f64 / self.extent()
    }

    /// Index of the grid point closest to `x`.
    pub fn index_of(&self, x: f64) -> usize {
        (((x - self.x_min) / self.dx).round().max(0.0) as usize).min(self.n - 1)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n.is_power_of_two() {
            return Err(Error::Parameter("grid size must be a power of two".into()));
        }
        if !(self.x_min < 0.0 && self.x_max() > 0.0) {
            return Err(Error::Parameter("grid must straddle the origin".into()));
        }
        Ok(())
    }
}

/// Discretized pure state of 1-2 oscillators and 0-1 qubits.
#[derive(Debug, Clone)]
pub struct HybridGridState {
    pub axes: Vec<GridAxis>,
    pub qubits: usize,
    /// One amplitude array per qubit basis state; for two modes the layout is
    /// `index = i1 * n0 + i0` (mode 0 contiguous).
    pub branches: Vec<Vec<Complex64>>,
}

/// Deterministic homodyne outcome sweep over one mode: the full outcome
/// density plus on-demand conditional states of the unmeasured registers.
pub struct HomodyneSweep {
    pub outcome_axis: GridAxis,
    /// Probability density sampled at the outcome grid points.
    pub pdf: Vec<f64>,
    measured_mode: usize,
    source: Arc<HybridGridState>,
}

/// Single-mode observables for [`HybridGridState::expectation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Q,
    Q2,
    P,
    P2,
    /// `Q^2 + P^2`.
    H,
    /// `S_P = e^{-iP}`.
    ShiftP,
    /// `S_Q = e^{2 pi i Q}`.
    PhaseQ,
}

impl HybridGridState {
    #[allow(dead_code)]
    fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    fn measure(&self) -> f64 {
        self.axes.iter().map(|a| a.dx).product()
    }

    pub fn norm_sq(&self) -> f64 {
        let m = self.measure();
        self.branches
            .iter()
            .map(|b| b.iter().map(|v| v.norm_sqr()).sum::<f64>() * m)
            .sum()
    }

    fn renormalize(&mut self) {
        let s = 1.0 / self.norm_sq().sqrt();
        for b in &mut self.branches {
            for v in b.iter_mut() {
                *v *= s;
            }
        }
    }

    /// Vacuum on every mode, `|0>` on every qubit.
    pub fn vacuum(axes: Vec<GridAxis>, qubits: usize) -> Result<HybridGridState> {
        let spec = StateSpec::Vacuum;
        let sum = crate::states::build_state(spec, 1e-12)?;
        Self::from_sum(&sum, axes, qubits)
    }

    /// Sample a one-mode analytic state onto `axes[0]` (additional modes are
    /// set to the vacuum), with all qubits in `|0>`.
    pub fn from_sum(sum: &GaussianSum, axes: Vec<GridAxis>, qubits: usize) -> Result<HybridGridState> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::Usage("grid states carry one or two modes".into()));
        }
        if qubits > 1 {
            return Err(Error::Usage("grid states carry at most one qubit".into()));
        }
        for a in &axes {
            a.validate()?;
        }
        let mode0 = sample_on_axis(sum, &axes[0]);
        let data = if axes.len() == 1 {
            mode0
        } else {
            let vac = crate::states::build_state(StateSpec::Vacuum, 1e-12)?;
            let mode1 = sample_on_axis(&vac, &axes[1]);
            product_2d(&mode0, &mode1)
        };
        let mut branches = vec![data];
        for _ in 1..(1 << qubits) {
            branches.push(vec![Complex64::new(0.0, 0.0); branches[0].len()]);
        }
        let mut state = HybridGridState { axes, qubits, branches };
        let norm = state.norm_sq();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::Resolution(format!(
                "sampled norm deviates from 1 by {:.2e}; the grid under-resolves the state",
                (norm - 1.0).abs()
            )));
        }
        state.renormalize();
        Ok(state)
    }

    /// Two-mode product state from two one-mode analytic states.
    pub fn from_product(
        sum0: &GaussianSum,
        axis0: GridAxis,
        sum1: &GaussianSum,
        axis1: GridAxis,
    ) -> Result<HybridGridState> {
        axis0.validate()?;
        axis1.validate()?;
        let a = sample_on_axis(sum0, &axis0);
        let b = sample_on_axis(sum1, &axis1);
        let mut state = HybridGridState {
            axes: vec![axis0, axis1],
            qubits: 0,
            branches: vec![product_2d(&a, &b)],
        };
        let norm = state.norm_sq();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::Resolution(format!(
                "sampled product norm deviates from 1 by {:.2e}",
                (norm - 1.0).abs()
            )));
        }
        state.renormalize();
        Ok(state)
    }

    /// Put the single qubit into `|+>`.
    pub fn with_qubit_plus(mut self) -> Result<HybridGridState> {
        if self.qubits != 1 {
            return Err(Error::Usage("state has no qubit register".into()));
        }
        let h = 1.0 / 2.0f64.sqrt();
        let b0 = self.branches[0].clone();
        for (i, v) in self.branches[0].iter_mut().enumerate() {
            *v = b0[i] * h;
        }
        for (i, v) in self.branches[1].iter_mut().enumerate() {
            *v += b0[i] * h;
        }
        Ok(self)
    }

    /// Mass in the outermost `frac` of the grid along `mode` (wrap-around guard).
    pub fn boundary_mass(&self, mode: usize, frac: f64) -> f64 {
        let axis = &self.axes[mode];
        let edge = ((axis.n as f64 * frac) as usize).max(1);
        let m = self.measure();
        let mut acc = 0.0;
        self.for_each_amplitude(|idx, v| {
            let i = mode_index(idx, mode, &self.axes);
            if i < edge || i >= axis.n - edge {
                acc += v.norm_sqr() * m;
            }
        });
        acc
    }

    fn for_each_amplitude(&self, mut f: impl FnMut(usize, Complex64)) {
        for b in &self.branches {
            for (idx, &v) in b.iter().enumerate() {
                f(idx, v);
            }
        }
    }

    /// Apply one gate, returning the new state (value semantics).
    pub fn apply(&self, gate: &Gate) -> Result<HybridGridState> {
        let mut next = self.clone();
        next.apply_mut(gate)?;
        let drift = (next.norm_sq() - self.norm_sq()).abs();
        if drift > 1e-9 {
            return Err(Error::Numeric(format!(
                "gate application drifted the norm by {drift:.2e}"
            )));
        }
        Ok(next)
    }

    /// Apply all unitary gates of a circuit in order (preps and measurements
    /// are rejected; build initial states with the constructors).
    pub fn apply_circuit(&self, circuit: &Circuit) -> Result<HybridGridState> {
        let mut state = self.clone();
        for g in &circuit.gates {
            state = state.apply(g)?;
        }
        Ok(state)
    }

    fn apply_mut(&mut self, gate: &Gate) -> Result<()> {
        match gate {
            Gate::PrepVacuum { .. } | Gate::PrepQubit0 { .. } => Err(Error::Usage(
                "preparation gates initialize registers; use the state constructors".into(),
            )),
            Gate::HomodyneQ { .. } | Gate::QubitMeasure { .. } => Err(Error::Usage(
                "measurements are performed by homodyne_sweep, not apply".into(),
            )),
            Gate::QubitUnitary { qubit, matrix } => {
                if *qubit >= self.qubits {
                    return Err(Error::Usage(format!("qubit {qubit} out of range")));
                }
                let (b0, b1) = {
                    let (first, rest) = self.branches.split_at_mut(1);
                    (&mut first[0], &mut rest[0])
                };
                for (v0, v1) in b0.iter_mut().zip(b1.iter_mut()) {
                    let (a, b) = (*v0, *v1);
                    *v0 = matrix[0][0] * a + matrix[0][1] * b;
                    *v1 = matrix[1][0] * a + matrix[1][1] * b;
                }
                Ok(())
            }
            Gate::QubitUnitary2 { .. } => {
                Err(Error::Capability("grid states carry at most one qubit".into()))
            }
            Gate::Displacement { mode, dq, dp } => self.displace(*mode, *dq, *dp, None),
            Gate::CtrlDisplacement { qubit, mode, dq, dp } => {
                if *qubit >= self.qubits {
                    return Err(Error::Usage(format!("qubit {qubit} out of range")));
                }
                self.displace(*mode, *dq, *dp, Some(1))
            }
            Gate::GaussianUnitary { modes, a } => match GaussianKind::classify(a) {
                GaussianKind::Squeeze { z } => self.squeeze(modes[0], z),
                GaussianKind::PhaseShift { phi } => self.rotate(modes[0], -phi),
                GaussianKind::Shear { c } => self.shear(modes[0], modes[1], c),
                GaussianKind::Beamsplitter { .. } | GaussianKind::General => {
                    Err(Error::Capability(
                        "the grid backend implements phases, shifts, squeezers, rotations and the two-mode shear"
                            .into(),
                    ))
                }
            },
        }
    }

    /// `D = e^{i(dp Q - dq P)}`, optionally restricted to one qubit branch.
    fn displace(&mut self, mode: usize, dq: f64, dp: f64, branch: Option<usize>) -> Result<()> {
        self.check_mode(mode)?;
        if dq != 0.0 {
            let guard = self.edge_mass(mode, dq.abs());
            if guard > 1e-10 {
                return Err(Error::DomainOverflow(format!(
                    "shift by {dq} would wrap {guard:.2e} of probability mass"
                )));
            }
        }
        // Weyl ordering: D = e^{i dp Q} e^{-i dq P} e^{-i dp dq / 2}.
        let scalar = Complex64::new(0.0, -0.5 * dp * dq).exp();
        let axis = self.axes[mode];
        let branches: Vec<usize> = match branch {
            Some(b) => vec![b],
            None => (0..self.branches.len()).collect(),
        };
        for b in branches {
            if dq != 0.0 {
                // e^{-i dq P}: psi(x - dq), spectrum multiplied by e^{-i p dq}.
                self.momentum_phase(b, mode, |p| Complex64::new(0.0, -p * dq).exp());
            }
            let buf = &mut self.branches[b];
            apply_pointwise(buf, &self.axes, mode, |x| {
                Complex64::new(0.0, dp * x).exp() * scalar
            });
            let _ = buf;
            let _ = axis;
        }
        Ok(())
    }

    /// Multiply branch `b` in the momentum representation of `mode` by `g(p)`.
    fn momentum_phase(&mut self, b: usize, mode: usize, g: impl Fn(f64) -> Complex64) {
        let axes = self.axes.clone();
        let axis = axes[mode];
        let phases: Vec<Complex64> = (0..axis.n).map(|m| g(axis.momentum(m))).collect();
        let buf = &mut self.branches[b];
        if axes.len() == 1 {
            fourier::fft(buf);
            for (v, ph) in buf.iter_mut().zip(phases.iter()) {
                *v *= ph;
            }
            fourier::ifft(buf);
        } else if mode == 0 {
            let n0 = axes[0].n;
            for row in buf.chunks_mut(n0) {
                fourier::fft(row);
                for (v, ph) in row.iter_mut().zip(phases.iter()) {
                    *v *= ph;
                }
                fourier::ifft(row);
            }
        } else {
            // Mode 1 is strided; transpose, transform rows, transpose back.
            let (n0, n1) = (axes[0].n, axes[1].n);
            let mut col = vec![Complex64::new(0.0, 0.0); n1];
            for i0 in 0..n0 {
                for i1 in 0..n1 {
                    col[i1] = buf[i1 * n0 + i0];
                }
                fourier::fft(&mut col);
                for (v, ph) in col.iter_mut().zip(phases.iter()) {
                    *v *= ph;
                }
                fourier::ifft(&mut col);
                for i1 in 0..n1 {
                    buf[i1 * n0 + i0] = col[i1];
                }
            }
        }
    }

    /// `S(z)`: band-limited resampling `psi(x) -> e^{z/2} psi(e^z x)`.
    fn squeeze(&mut self, mode: usize, z: f64) -> Result<()> {
        self.check_mode(mode)?;
        if self.axes.len() != 1 {
            return Err(Error::Capability("squeeze is implemented for one-mode states".into()));
        }
        if z == 0.0 {
            return Ok(());
        }
        let alpha = z.exp();
        let axis = self.axes[mode];
        if alpha < 1.0 {
            // Support expands by 1/alpha: its current tail must fit.
            let inner = axis.x_max().min(-axis.x_min) * alpha;
            let outside = 1.0 - self.mass_within(mode, inner);
            if outside > 1e-10 {
                return Err(Error::DomainOverflow(format!(
                    "squeeze by z={z} would push {outside:.2e} of mass off the grid"
                )));
            }
        }
        let amp = (0.5 * z).exp();
        for b in &mut self.branches {
            let out = fourier::resample_scaled(b, axis.x_min, axis.dx, alpha);
            b.copy_from_slice(&out);
            for v in b.iter_mut() {
                *v *= amp;
            }
        }
        Ok(())
    }

    /// `U(theta) = e^{-i theta (Q^2+P^2)/2}` via the chirp decomposition
    /// `e^{icQ^2/2} e^{-isP^2/2} e^{icQ^2/2}` with `c = -tan(theta/2)`,
    /// `s = sin(theta)`; angles beyond pi/2 are halved recursively. Global
    /// phase is not tracked.
    fn rotate(&mut self, mode: usize, theta: f64) -> Result<()> {
        self.check_mode(mode)?;
        if self.axes.len() != 1 {
            return Err(Error::Capability("rotations are implemented for one-mode states".into()));
        }
        if theta == 0.0 {
            return Ok(());
        }
        if theta.abs() > std::f64::consts::FRAC_PI_2 + 1e-12 {
            self.rotate(mode, theta / 2.0)?;
            return self.rotate(mode, theta / 2.0);
        }
        let guard = self.boundary_mass(mode, 0.02);
        if guard > 1e-9 {
            return Err(Error::DomainOverflow(format!(
                "rotation with {guard:.2e} boundary mass would alias"
            )));
        }
        let c = -(theta / 2.0).tan();
        let s = theta.sin();
        let chirp = |state: &mut Self| {
            for b in 0..state.branches.len() {
                let axes = state.axes.clone();
                apply_pointwise(&mut state.branches[b], &axes, mode, |x| {
                    Complex64::new(0.0, 0.5 * c * x * x).exp()
                });
            }
        };
        chirp(self);
        for b in 0..self.branches.len() {
            self.momentum_phase(b, mode, |p| Complex64::new(0.0, -0.5 * s * p * p).exp());
        }
        chirp(self);
        Ok(())
    }

    /// `e^{i c P_a Q_b}`: translate mode `a` by `-c y` for each position `y`
    /// of mode `b` (exact per-row Fourier phases).
    fn shear(&mut self, mode_a: usize, mode_b: usize, c: f64) -> Result<()> {
        if self.axes.len() != 2 || mode_a != 0 || mode_b != 1 {
            return Err(Error::Capability(
                "the shear is implemented for (mode 0, mode 1) of a two-mode state".into(),
            ));
        }
        // Row y: psi(x + c y): spectrum x e^{i p c y}. Support moves by -c y;
        // guard with the worst-case shift.
        let axis1 = self.axes[1];
        let max_shift = c.abs() * axis1.x_min.abs().max(axis1.x_max());
        let guard = self.edge_mass(0, max_shift);
        if guard > 1e-10 {
            return Err(Error::DomainOverflow(format!(
                "shear would wrap {guard:.2e} of probability mass on mode 0"
            )));
        }
        let axis0 = self.axes[0];
        // Per-row phases e^{i p c y} advance by e^{i p c dx1} from row to row;
        // incremental rotation avoids an exp per amplitude (drift ~ n eps).
        let start: Vec<Complex64> = (0..axis0.n)
            .map(|m| Complex64::new(0.0, axis0.momentum(m) * c * axis1.x_min).exp())
            .collect();
        let step: Vec<Complex64> = (0..axis0.n)
            .map(|m| Complex64::new(0.0, axis0.momentum(m) * c * axis1.dx).exp())
            .collect();
        for b in &mut self.branches {
            let mut phases = start.clone();
            for row in b.chunks_mut(axis0.n) {
                fourier::fft(row);
                for ((v, ph), st) in row.iter_mut().zip(phases.iter_mut()).zip(step.iter()) {
                    *v *= *ph;
                    *ph *= st;
                }
                fourier::ifft(row);
            }
        }
        Ok(())
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.axes.len() {
            Ok(())
        } else {
            Err(Error::Usage(format!("mode {mode} out of range ({} modes)", self.axes.len())))
        }
    }

    /// Mass within `[-r, r]` along `mode`.
    pub fn mass_within(&self, mode: usize, r: f64) -> f64 {
        let m = self.measure();
        let mut acc = 0.0;
        self.for_each_amplitude(|idx, v| {
            let i = mode_index(idx, mode, &self.axes);
            let x = self.axes[mode].point(i);
            if x.abs() <= r {
                acc += v.norm_sqr() * m;
            }
        });
        acc
    }

    /// Mass that a shift of size `|shift|` would wrap around either edge.
    fn edge_mass(&self, mode: usize, shift: f64) -> f64 {
        let axis = &self.axes[mode];
        let width = shift.abs() + 2.0 * axis.dx;
        let m = self.measure();
        let mut acc = 0.0;
        self.for_each_amplitude(|idx, v| {
            let i = mode_index(idx, mode, &self.axes);
            let x = axis.point(i);
            if x < axis.x_min + width || x > axis.x_max() - width {
                acc += v.norm_sqr() * m;
            }
        });
        acc
    }

    /// `tr(O rho)` for the qubit-traced reduced state of a one-mode state.
    pub fn expectation(&self, obs: Observable) -> Result<Complex64> {
        if self.axes.len() != 1 {
            return Err(Error::Capability("expectations are implemented for one-mode states".into()));
        }
        let axis = self.axes[0];
        let dx = axis.dx;
        match obs {
            Observable::Q | Observable::Q2 | Observable::PhaseQ => {
                let mut acc = Complex64::new(0.0, 0.0);
                for b in &self.branches {
                    for (j, v) in b.iter().enumerate() {
                        let x = axis.point(j);
                        let w = match obs {
                            Observable::Q => Complex64::new(x, 0.0),
                            Observable::Q2 => Complex64::new(x * x, 0.0),
                            _ => Complex64::new(0.0, 2.0 * std::f64::consts::PI * x).exp(),
                        };
                        acc += w * v.norm_sqr() * dx;
                    }
                }
                Ok(acc)
            }
            Observable::P | Observable::P2 | Observable::ShiftP => {
                let mut acc = Complex64::new(0.0, 0.0);
                for b in &self.branches {
                    let mut spec = b.clone();
                    fourier::fft(&mut spec);
                    let s = dx / axis.n as f64; // Parseval measure
                    for (m, v) in spec.iter().enumerate() {
                        let p = axis.momentum(m);
                        let w = match obs {
                            Observable::P => Complex64::new(p, 0.0),
                            Observable::P2 => Complex64::new(p * p, 0.0),
                            _ => Complex64::new(0.0, -p).exp(),
                        };
                        acc += w * v.norm_sqr() * s;
                    }
                }
                Ok(acc)
            }
            Observable::H => {
                let q2 = self.expectation(Observable::Q2)?;
                let p2 = self.expectation(Observable::P2)?;
                Ok(q2 + p2)
            }
        }
    }

    /// Overlap with the qubit-traced first-mode reduction:
    /// `sum_branches |<target, psi_branch>|^2`.
    pub fn reduce_fidelity(&self, target: &GaussianSum) -> Result<f64> {
        if self.axes.len() != 1 {
            return Err(Error::Usage("reduce_fidelity expects a one-mode state".into()));
        }
        let samples = sample_on_axis(target, &self.axes[0]);
        let dx = self.axes[0].dx;
        let mut fid = 0.0;
        for b in &self.branches {
            let mut o = Complex64::new(0.0, 0.0);
            for (t, v) in samples.iter().zip(b.iter()) {
                o += t.conj() * v * dx;
            }
            fid += o.norm_sqr();
        }
        Ok(fid)
    }

    /// Full overlap `<other, self>` (matching registers required).
    pub fn overlap(&self, other: &HybridGridState) -> Result<Complex64> {
        if self.axes != other.axes || self.qubits != other.qubits {
            return Err(Error::Usage("overlap requires identical registers and grids".into()));
        }
        let m = self.measure();
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.branches.iter().zip(other.branches.iter()) {
            for (x, y) in a.iter().zip(b.iter()) {
                acc += y.conj() * x;
            }
        }
        Ok(acc * m)
    }

    /// Deterministic homodyne sweep of `mode` (two-mode states only).
    pub fn homodyne_sweep(self, mode: usize) -> Result<HomodyneSweep> {
        if self.axes.len() < 2 {
            return Err(Error::Usage(
                "measuring the only mode leaves no quantum register; homodyne needs two modes".into(),
            ));
        }
        self.check_mode(mode)?;
        let axis = self.axes[mode];
        let other_dx: f64 = self
            .axes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != mode)
            .map(|(_, a)| a.dx)
            .product();
        let mut pdf = vec![0.0; axis.n];
        self.for_each_amplitude(|idx, v| {
            let i = mode_index(idx, mode, &self.axes);
            pdf[i] += v.norm_sqr() * other_dx;
        });
        Ok(HomodyneSweep {
            outcome_axis: axis,
            pdf,
            measured_mode: mode,
            source: Arc::new(self),
        })
    }
}

impl HomodyneSweep {
    /// Total probability mass `sum pdf dx`.
    pub fn total_mass(&self) -> f64 {
        self.pdf.iter().sum::<f64>() * self.outcome_axis.dx
    }

    /// The normalized conditional state of the unmeasured mode at outcome
    /// index `i`, along with its outcome position and probability density.
    pub fn conditional(&self, i: usize) -> Result<(f64, f64, HybridGridState)> {
        let src = &self.source;
        let x = self.outcome_axis.point(i);
        let density = self.pdf[i];
        let other = 1 - self.measured_mode;
        let axis = src.axes[other];
        let n0 = src.axes[0].n;
        let mut branches = Vec::with_capacity(src.branches.len());
        for b in &src.branches {
            let mut out = Vec::with_capacity(axis.n);
            for k in 0..axis.n {
                let idx = if self.measured_mode == 0 { k * n0 + i } else { i * n0 + k };
                out.push(b[idx]);
            }
            branches.push(out);
        }
        let mut cond = HybridGridState { axes: vec![axis], qubits: src.qubits, branches };
        let norm = cond.norm_sq();
        if norm <= 0.0 {
            return Err(Error::Numeric(format!("conditional state at outcome {x} has no mass")));
        }
        cond.renormalize();
        Ok((x, density, cond))
    }

    /// Draw an outcome index from the pdf with a seeded generator.
    pub fn sample_outcome(&self, rng: &mut impl rand::Rng) -> usize {
        let total: f64 = self.pdf.iter().sum();
        let mut u = rng.gen_range(0.0..total);
        for (i, &p) in self.pdf.iter().enumerate() {
            if u < p {
                return i;
            }
            u -= p;
        }
        self.pdf.len() - 1
    }
}

/// Multiply a branch buffer pointwise by `f(x_mode)`.
fn apply_pointwise(
    buf: &mut [Complex64],
    axes: &[GridAxis],
    mode: usize,
    f: impl Fn(f64) -> Complex64,
) {
    let axis = &axes[mode];
    let weights: Vec<Complex64> = (0..axis.n).map(|j| f(axis.point(j))).collect();
    if axes.len() == 1 {
        for (v, w) in buf.iter_mut().zip(weights.iter()) {
            *v *= w;
        }
    } else if mode == 0 {
        let n0 = axes[0].n;
        for row in buf.chunks_mut(n0) {
            for (v, w) in row.iter_mut().zip(weights.iter()) {
                *v *= w;
            }
        }
    } else {
        let n0 = axes[0].n;
        for (i1, row) in buf.chunks_mut(n0).enumerate() {
            let w = weights[i1];
            for v in row.iter_mut() {
                *v *= w;
            }
        }
    }
}

/// Index of `mode`'s coordinate inside a flattened amplitude index.
fn mode_index(idx: usize, mode: usize, axes: &[GridAxis]) -> usize {
    if axes.len() == 1 {
        idx
    } else if mode == 0 {
        idx % axes[0].n
    } else {
        idx / axes[0].n
    }
}

/// Sample an analytic sum on an axis, filling only each term's support.
pub fn sample_on_axis(sum: &GaussianSum, axis: &GridAxis) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); axis.n];
    for t in &sum.terms {
        let sigma = 1.0 / t.a.sqrt();
        let mut lo = t.mu - 10.0 * sigma;
        let mut hi = t.mu + 10.0 * sigma;
        if let Some((wlo, whi)) = t.window {
            lo = lo.max(wlo);
            hi = hi.min(whi);
        }
        let j0 = ((lo - axis.x_min) / axis.dx).floor().max(0.0) as usize;
        let j1 = (((hi - axis.x_min) / axis.dx).ceil() as usize).min(axis.n - 1);
        for j in j0..=j1 {
            out[j] += t.value(axis.point(j));
        }
    }
    out
}

fn product_2d(mode0: &[Complex64], mode1: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(mode0.len() * mode1.len());
    for &b in mode1 {
        for &a in mode0 {
            out.push(a * b);
        }
    }
    out
}
