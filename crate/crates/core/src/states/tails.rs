//! Support masses on bounded intervals, in position or momentum space.

use super::gaussian::GaussianSum;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Position,
    Momentum,
}

/// `|| Pi_{[-R,R]} psi ||^2` for a normalized state, in the given domain.
///
/// The momentum variant transforms the state analytically and therefore
/// requires all terms to be untruncated; for grid states sampled from peaked
/// families, prefer building the momentum representation directly (see
/// [`super::spec::momentum_rep`]) and taking its position mass.
pub fn tail_mass(state: &GaussianSum, r: f64, domain: Domain) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("R must be positive, got {r}")));
    }
    let mass = match domain {
        Domain::Position => state.mass_on(-r, r),
        Domain::Momentum => state.fourier()?.mass_on(-r, r),
    };
    Ok(mass)
}

/// Trace distance between two pure states from their squared overlap
/// magnitude: `2 sqrt(1 - |<a,b>|^2)`.
pub fn pure_trace_distance(overlap_mag_sq: f64) -> Result<f64> {
    if overlap_mag_sq < -1e-12 || overlap_mag_sq > 1.0 + 1e-12 {
        return Err(Error::Numeric(format!(
            "squared overlap must lie in [0, 1], got {overlap_mag_sq}"
        )));
    }
    let clamped = overlap_mag_sq.clamp(0.0, 1.0);
    Ok(2.0 * (1.0 - clamped).sqrt())
}
