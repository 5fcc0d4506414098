//! Numerical ranges, K-spectral constants and their bounds.
//!
//! The crate computes the numerical range `W(A)` of a square complex matrix,
//! conformal maps of `W(A)` onto the unit disk, the constant `ψ(A)` obtained
//! by maximizing `‖g(a(A))‖` over Blaschke products `g`, the extremal constants
//! for strips and sectors, and closed-form upper and lower bounds.

pub mod bounds;
pub mod error;
pub mod extremal;
pub mod conformal;
pub mod disk_families;
pub mod linalg;
pub mod numrange;
pub mod optim;
pub mod psi;
pub mod quadrature;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenSystem};
pub use num_complex::Complex64;
