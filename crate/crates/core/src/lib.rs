//! Quantum Fourier transform over `q^n` elements built from radix-`q` gates.
//!
//! The crate constructs the gate-level QFT circuit (one Chrestenson gate per
//! digit plus controlled phase shifts), simulates it on dense state vectors,
//! prunes small controlled phases to get an approximate transform, and
//! measures the resulting phase error against two analytic bounds.

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod gates;
pub mod numerics;

pub use circuit::{Circuit, GateOp, KeepDepth, Permutation};
pub use error::{QftError, Result};
pub use numerics::{Complex, ComplexMatrix, StateVector};
