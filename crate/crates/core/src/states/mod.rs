//! Analytic wavefunction library: Gaussian sums, grid-state families,
//! lattice-sum bounds, convolution integrals and tail masses.

pub mod conv;
pub mod gaussian;
pub mod series;
pub mod spec;
pub mod tails;

pub use conv::{conv_quantities, ConvParams, ConvQuantities};
pub use gaussian::{GaussianSum, GaussianTerm};
pub use series::{gaussian_series, normalization_bounds, NormalizationBounds, SeriesMode, SeriesValue};
pub use spec::{build_state, comb_range, eta, eta_term, momentum_rep, truncated_peak, StateSpec};
pub use tails::{pure_trace_distance, tail_mass, Domain};
