//! Exact construction and verification of classical and classical *dynamical*
//! Yang-Baxter r-matrices on simple Lie algebras.
//!
//! The crate builds root systems and Chevalley-style bases with exact rational
//! structure constants, represents Belavin-Drinfeld triples (with or without
//! the nilpotency condition), assembles the associated constant and dynamical
//! r-matrices, and verifies the (dynamical) Yang-Baxter equation both
//! symbolically -- over an exact field of exponential-rational functions --
//! and numerically at sample points.
//!
//! Start from the `examples/` directory for runnable walkthroughs of each
//! capability, or use the `rmatrix` binary for the command-line interface.

pub mod rational;
pub mod rootsys;
pub mod coeff;
pub mod cartan;
pub mod chevalley;
pub mod tensor;
pub mod triples;
pub mod solve;
pub mod rmat;
pub mod verify;
pub mod report;
pub mod cli;

pub use rational::Q;
pub use rootsys::{RootSystem, Series};
