//! Lie point symmetries of polynomial PDE systems.
//!
//! The crate computes infinitesimal symmetries by prolongation and a
//! polynomial ansatz for the determining equations, then analyzes the
//! resulting Lie algebra: structure constants, Killing form, derived
//! series, adjoint matrices, flows, monomial differential invariants and
//! adjoint orbit normal forms. Arithmetic is exact throughout.

// dense linear algebra reads better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod adjoint;
pub mod error;
pub mod invariants;
pub mod jet;
pub mod lie;
pub mod linalg;
pub mod optimal;
pub mod parallel;
pub mod parse;
pub mod prolong;
pub mod rational;
pub mod report;
pub mod symbolic;
#[cfg(test)]
mod test_support;

pub use error::{Error, Result};
pub use rational::Rational;
