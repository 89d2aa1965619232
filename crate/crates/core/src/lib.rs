//! Twisted Fox-calculus invariants: torsion polynomials, sutured product
//! certificates and character-variety loci.

pub mod charvar;
pub mod cli;
pub mod error;
pub mod freegroup;
pub mod linalg;
pub mod polynomial;
mod precise;
pub mod representation;
pub mod scalar;
pub mod suturedcert;
pub mod twisted;

pub use error::{Error, Result};
