//! Precision bounds for frequency estimation with dephasing qubits.
//!
//! The crate builds probe states and their purifications under uncorrelated,
//! maximally correlated and partially correlated dephasing, evaluates the
//! quantum Fisher information exactly, fits variational purification bounds,
//! and provides the closed-form resolutions these are compared against.

pub mod dephasing;
pub mod error;
pub mod linalg;
pub mod optimize;
pub mod purification;
pub mod qfi;
pub mod random;
pub mod report;
pub mod resolution;
pub mod verify;

pub use error::{Error, Result};
