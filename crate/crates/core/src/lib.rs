//! Numerical laboratory for the non-local functionals
//! `F_{γ,λ}(u, Ω) = λ ν_γ({|u(x) - u(y)| > λ|x - y|^{1+γ}})` on exactly
//! represented BV functions.

pub mod bvcalc;
pub mod catalog;
pub mod error;
pub mod evaluator;
pub mod harness;
pub mod kernel;
pub mod quad;
pub mod recovery;
pub mod slicer;

pub use error::{Error, Result};
