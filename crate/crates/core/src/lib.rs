//! Numerics for the regularized one-dimensional (fractional) Schrödinger
//! equation
//!
//! ```text
//! i ∂t u + (-Δ)^s u + p_ε(x) u = 0,    u(0, x) = u0(x)
//! ```
//!
//! with potentials that may be as singular as `δ` or `δ²`. Singular
//! potentials are replaced by a family `p_ε` obtained from a Friedrichs
//! mollifier, and every member of the family is solved by one of two
//! backends:
//!
//! * Crank–Nicolson finite differences with a tridiagonal sweep (`s = 1`),
//! * Strang splitting with a spectral free propagator (any `s > 0`).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and the ε-sweep experiments live in the `fschro` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod fft;
pub mod fit;
pub mod grid;
pub mod mollifier;
pub mod observables;
pub mod operators;
pub mod quadrature;
pub mod solver;
pub mod tridiag;

pub use error::{Error, Result};
pub use grid::{ComplexField, Grid, RealField};
pub use mollifier::{Epsilon, Mollifier, PotentialKind, PotentialSpec, RegularizedPotential};
pub use num_complex::Complex64;
pub use observables::{EnergyParts, ObservableRecord};
pub use operators::FractionalOrder;
pub use solver::{Backend, Boundary, SolverConfig, Trajectory};
