//! Quantum states of a particle on a helicoid with anisotropic effective mass
//! in a harmonic trap.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod geometry;
pub mod heun;
pub mod model;
pub mod ode;
pub mod solver;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
