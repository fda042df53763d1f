//! Extraction of quantum states of a target qubit by repeated projective
//! measurements on an ancilla qubit, with Lindblad dissipation acting between
//! measurements.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`] dense complex matrices, matrix exponential, non-Hermitian
//!   eigendecomposition and Liouville-space vectorization;
//! * [`model`] the two-spin Hamiltonian, its triplet/singlet basis and the
//!   thermal Lindblad generator;
//! * [`channel`] the inter-measurement channel, either by exponentiation of
//!   the generator or from the closed-form zero-temperature Kraus operators;
//! * [`extraction`] the measurement-conditioned map on the target, its
//!   spectral analysis, purity, efficiency estimates and the weak-damping
//!   perturbative purity.

pub mod channel;
pub mod error;
pub mod extraction;
pub mod linalg;
pub mod model;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenSystem};
pub use model::ModelParams;
pub use num_complex::Complex64;
