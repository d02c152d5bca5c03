//! Finite-dimensional operator algebras, completely positive maps and their
//! dilations, the effectus calculus on `op vN`, and exact checkers for the
//! abstract effect-algebra layer.
//!
//! Everything here is `no_std` with `alloc`. IO, JSON and the command line
//! live in the companion `effectus-lab` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cpmap;
pub mod dilation;
pub mod effect_structs;
pub mod effectus_ops;
mod error;
pub mod linalg;
pub mod report;
pub mod rng;
pub mod vnalg;

pub use cpmap::CpMap;
pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use report::{LawCheck, Report};
pub use rng::Rng;
pub use vnalg::{AlgElement, FdAlgebra, Subalgebra};

/// Default absolute tolerance for numerical comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Relative threshold for rank and support decisions.
pub const TOL_REL: f64 = 1e-9;
/// Default seed for every randomized routine.
pub const DEFAULT_SEED: u64 = 0xE77EC7;
