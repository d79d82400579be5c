//! Numerical laboratory for hedgehog solitons of the Skyrme model.
//!
//! Static profiles, B=2 masses, time evolution with an optional sixth-order
//! term, and sine-mode diagnostics of the resulting fluctuations.

pub mod config;
pub mod dynamics;
pub mod energy;
pub mod error;
pub mod grid;
pub mod io;
mod lattice;
pub mod model;
pub mod quadrature;
pub mod runner;
pub mod spectral;
pub mod static_solver;

pub use error::{Result, SkyrmeError};
