//! Weighted anisotropic Hölder seminorms on the half-space, the constructive operators
//! that act on them, and a lab of numerical checks for the associated estimates.

pub mod error;
pub mod field;
pub mod geometry;
pub mod lab;
pub mod operators;
pub mod seminorm;
pub mod xreal;

pub use error::{Error, Result};
