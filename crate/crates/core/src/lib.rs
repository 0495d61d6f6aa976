//! Monotonicity testing of Boolean functions on the augmented hypergrid.

pub mod error;
pub mod experiments;
pub mod fourier;
pub mod func;
pub mod grid;
pub mod oracle;
pub mod reduce;
pub mod rng;
pub mod structure;
pub mod tester;
pub mod verify;

pub use error::{Error, Result};
pub use func::{generate, BoolFunc, Family};
pub use grid::{GridShape, MatchingId, Point};
