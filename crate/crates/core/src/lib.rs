//! Hybrid qubit-oscillator simulation and verification toolkit for
//! grid-state preparation.
//!
//! The crate is organized around five subsystems:
//!
//! * [`states`] - exact wavefunction algebra (Gaussian sums), grid-state
//!   families, lattice-sum and normalization bounds, tail masses;
//! * [`sim`] - two simulation backends: a position-grid/Fourier backend and an
//!   exact Gaussian-sum backend, plus homodyne measurement as an instrument;
//! * [`circuit`] - the bounded-strength gate IR, symplectic bookkeeping, and
//!   compilers factoring large displacements/squeezers into unit-cost gates;
//! * [`protocols`] - the comb-preparation, envelope-Gaussification and
//!   grid-state preparation pipelines with heralding statistics;
//! * [`bounds`] - closed-form evaluators for every inequality the toolkit
//!   checks, and the moment-limit machinery for complexity lower bounds.

pub mod bounds;
pub mod circuit;
pub mod error;
pub mod protocols;
pub mod quad;
pub mod sim;
pub mod states;

pub use error::{Error, Result};
