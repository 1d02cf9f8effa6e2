//! Pseudo-spectral simulation of the log-regularized 2D Euler vorticity
//! equation on the torus `[0, 2pi)^2`,
//!
//! ```text
//! d_t omega + u . grad omega = 0,   u = perp-grad psi,   Delta psi = T_gamma omega,
//! ```
//!
//! where `T_gamma` has symbol `1 / log^gamma(|k| + 10)`, together with a
//! numerical lab for the multiplier bounds and logarithmic interpolation
//! inequalities that control its solutions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod grid;
pub mod io;
pub mod lab;
pub mod multiplier;
pub mod norms;
pub mod solver;
pub mod spectral;
pub mod symbol_bound;

pub use error::{Error, Result};
pub use grid::{Grid, RealField, SpectralField};
