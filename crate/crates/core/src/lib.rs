//! Ramsey interferometry with quantized cavity fields.
//!
//! An atom crosses two cavities ("Ramsey zones") separated by a free-flight
//! gap. Each zone is a Jaynes-Cummings interaction with its own quantized
//! mode, so the fringes depend on the joint photon statistics of the two
//! fields rather than on a prescribed classical drive.
//!
//! The crate is organised by experiment family:
//!
//! - [`fock`]: truncated Fock-space states, density matrices and diagnostics.
//! - [`jc`]: analytic zone propagation and the brute-force numeric oracle.
//! - [`ramsey`]: two-zone sequences, detection probabilities, closed forms
//!   and fringe scans.
//! - [`multi_atom`]: conditional field states, two-atom correlations and
//!   entangled-field preparation.
//! - [`decoherence`]: two-mode photon-loss master equation.
//! - [`dispersive`]: large-detuning phase shifts and entangled coherent states.
//! - [`linear_optics`]: beam-splitter mixing of two-mode Fock states.

pub mod decoherence;
pub mod dispersive;
mod error;
pub mod fock;
pub mod jc;
pub mod linear_optics;
pub mod multi_atom;
pub mod ramsey;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
