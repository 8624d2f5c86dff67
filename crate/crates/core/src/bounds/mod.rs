//! Closed-form evaluators for every inequality the toolkit checks, and the
//! moment-limit machinery behind the complexity lower bounds.

pub mod closed;
pub mod suites;
pub mod moments;

pub use closed::{
    comb_error_bound, effective_squeezing, effective_squeezing_bounds, gauss_bounds,
    gkp_bounds, gkp_distance_lower, gkp_tail_momentum_bound, gkp_tail_position_bound,
    lower_bounds, GaussBounds, GkpBounds, LowerBounds,
};
pub use suites::{formulas_suite, moments_suite, stability_suite, tails_suite};
pub use moments::{energy_limit, gate_moment_check, measure_moments, MomentVector};

/// Outcome of comparing a measured quantity with a closed-form bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    /// The bound is trivially true at these parameters (e.g. a negative
    /// probability floor); logged, never silently passed.
    Vacuous,
    /// The statement's preconditions fail at these parameters.
    PreconditionUnmet,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::Violated => write!(f, "violated"),
            Verdict::Vacuous => write!(f, "vacuous"),
            Verdict::PreconditionUnmet => write!(f, "precondition_unmet"),
        }
    }
}

/// A measured quantity paired with its closed-form bound and a verdict.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub name: String,
    pub parameters: String,
    pub paper_rhs: f64,
    pub measured_lhs: Option<f64>,
    pub verdict: Verdict,
}

/// Combined numerical slack used when comparing measured values to bounds.
pub const VERDICT_TOL: f64 = 1e-9;

impl BoundReport {
    /// Claim `measured <= rhs`; vacuous when `rhs >= trivial_ceiling`.
    pub fn upper(
        name: &str,
        parameters: String,
        measured: f64,
        rhs: f64,
        trivial_ceiling: f64,
        precondition_met: bool,
    ) -> BoundReport {
        let verdict = if !precondition_met {
            Verdict::PreconditionUnmet
        } else if measured > rhs + VERDICT_TOL {
            // Checked even when the bound is trivially satisfiable, so a wrong
            // vacuity ceiling can never mask a violation.
            Verdict::Violated
        } else if rhs >= trivial_ceiling {
            Verdict::Vacuous
        } else {
            Verdict::Holds
        };
        BoundReport {
            name: name.to_string(),
            parameters,
            paper_rhs: rhs,
            measured_lhs: Some(measured),
            verdict,
        }
    }

    /// Claim `measured >= rhs`; vacuous when `rhs <= trivial_floor`.
    pub fn lower(
        name: &str,
        parameters: String,
        measured: f64,
        rhs: f64,
        trivial_floor: f64,
        precondition_met: bool,
    ) -> BoundReport {
        let verdict = if !precondition_met {
            Verdict::PreconditionUnmet
        } else if measured < rhs - VERDICT_TOL {
            Verdict::Violated
        } else if rhs <= trivial_floor {
            Verdict::Vacuous
        } else {
            Verdict::Holds
        };
        BoundReport {
            name: name.to_string(),
            parameters,
            paper_rhs: rhs,
            measured_lhs: Some(measured),
            verdict,
        }
    }

    pub fn is_ok(&self) -> bool {
        !matches!(self.verdict, Verdict::Violated)
    }
}
