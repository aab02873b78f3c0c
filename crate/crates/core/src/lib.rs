//! Explicit constants and desk-scale numerics for the argument S(t, χ) of
//! Dirichlet L-functions to a prime modulus.

pub mod arith;
pub mod characters;
pub mod cli;
pub mod constants;
pub mod error;
pub mod experiments;
pub mod lfunc;
pub mod mollifier;
pub mod real;
pub mod report;

pub use error::{Error, Result};
