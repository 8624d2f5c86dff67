//! The three preparation pipelines and their measurement analysis.

pub mod comb;
pub mod gaussify;
pub mod gkp;
pub mod instrument;
pub mod stability;

pub use comb::{build_v, run_comb, CombOutput};
pub use gaussify::{run_gaussification, GaussifyInput, GaussifyOutput};
pub use gkp::{gkp_rounds, run_gkp, GkpOutput};
pub use instrument::{comb_conditional_overlap, instrument_profile, HeraldedEnsemble, InstrumentProfile};
pub use stability::{stability_audit, StabilityReport};

/// Which numerical backend executed a protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Grid,
    GaussianSum,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Grid => write!(f, "grid"),
            Backend::GaussianSum => write!(f, "gauss"),
        }
    }
}

/// Measured quantities of one protocol run.
#[derive(Debug, Clone)]
pub struct ProtocolReport {
    pub kappa: Option<f64>,
    pub delta: f64,
    pub rounds: Option<u32>,
    pub peaks: Option<u32>,
    pub op_count: crate::circuit::OpCountReport,
    /// Worst-case compiled correction size actually observed (heralded runs).
    pub correction_compiled_max: Option<usize>,
    pub p_acc: Option<f64>,
    pub fidelity_to_target: f64,
    pub backend: Backend,
    pub runtime: std::time::Duration,
    /// Effective squeezing parameters of the (accepted) output.
    pub delta_p: Option<f64>,
    pub delta_q: Option<f64>,
    /// Weight remaining on the |+> qubit branch (comb protocol only).
    pub qubit_plus_weight: Option<f64>,
}

impl ProtocolReport {
    /// `2 sqrt(1 - F)`: upper end of the trace-distance bracket.
    pub fn trace_distance_upper(&self) -> f64 {
        2.0 * (1.0 - self.fidelity_to_target).max(0.0).sqrt()
    }

    /// `2 (1 - F)`: lower end of the trace-distance bracket.
    pub fn trace_distance_lower(&self) -> f64 {
        2.0 * (1.0 - self.fidelity_to_target).max(0.0)
    }
}
