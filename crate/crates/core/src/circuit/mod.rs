//! Gate IR with bounded-strength validation, symplectic bookkeeping,
//! displacement/squeeze compilation and operation counting.

pub mod compile;
pub mod count;
pub mod gate;
pub mod serialize;
pub mod symplectic;

pub use compile::{compile_displacement, compile_squeeze, compile_squeeze_split, displacement_complexity_lower};
pub use count::{op_count, CountMode, OpCountReport};
pub use gate::{validate_bounded, BoundedVerdict, Circuit, Gate, GaussianKind, STRENGTH_LIMIT};
pub use symplectic::{symplectic_of, SymplecticAction};
