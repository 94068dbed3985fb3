//! Majorization-based uncertainty bounds for sets of quantum measurements,
//! and their use as EPR-steering and entanglement witnesses.
//!
//! The crate is organized bottom-up:
//!
//! * [`quantum`]: complex linear algebra, states, measurements, assemblages
//! * [`majorization`]: the vector order and the bound vectors built on it
//! * [`bounds`]: subset-norm ladders, steering/entanglement/overlap bounds
//! * [`functionals`]: quantum, LHS and separable functionals, witnesses,
//!   fine-grained ζ bounds, Werner thresholds
//! * [`oracle`]: brute-force and sampling checks for all of the above

pub mod bounds;
pub mod error;
pub mod functionals;
pub mod majorization;
pub mod numfmt;
pub mod oracle;
pub mod quantum;

pub use error::{Error, Result};
