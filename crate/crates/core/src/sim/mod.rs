//! Simulation backends: a position-grid/Fourier backend (general oracle) and
//! an exact Gaussian-sum backend (closed under the protocol gate set).

pub mod fourier;
pub mod gauss;
pub mod grid;

pub use gauss::{displace_sum, run_on_gaussian_backend, GaussHybrid, TwoModeGauss, TERM_CAP};
pub use grid::{sample_on_axis, GridAxis, HomodyneSweep, HybridGridState, Observable};
