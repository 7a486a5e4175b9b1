//! Free Stein kernels, free Stein discrepancies and free Poincaré constants
//! for noncommutative distributions described by moments, free cumulants or
//! random-matrix sampling.
//!
//! - [`ncalg`]: exact noncommutative polynomial calculus.
//! - [`states`]: moment functionals and the pairings they induce.
//! - [`stein`]: Stein identities, the explicit kernel and discrepancy bounds.
//! - [`poincare`]: truncated free Poincaré constants.
//! - [`cltlab`]: free central limit experiments in cumulant space.

pub mod cltlab;
mod error;
mod forms;
pub mod linalg;
pub mod ncalg;
pub mod numfmt;
pub mod poincare;
pub mod states;
pub mod stein;
mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;
