//! Numerics for finite-dimensional quantum channels.
//!
//! A superoperator on `N×N` matrices can be written in many equivalent
//! matrix forms. This crate builds the ones that matter for complete
//! positivity and converts between them:
//!
//! - [`linalg`]: dense complex matrices, Hilbert–Schmidt products, partial
//!   traces, a Jacobi eigensolver for Hermitian matrices and `exp`.
//! - [`bases`]: orthonormal operator bases (matrix units, generalized
//!   Gell-Mann) with their change-of-basis unitaries and structure constants.
//! - [`channels`]: superoperators and their Choi, GKS, de Pillis–Jamiołkowski,
//!   PSKH and Frembs–Cavalcanti matrices, CP/TP verdicts and Kraus extraction.
//! - [`lindblad`]: GKS generator matrices, conversion to and from Lindblad
//!   form and the flow equation for the GKS matrix of the propagator.
//! - [`opensys`]: system + environment simulation and the second-order
//!   short-time expansion of the reduced dynamics.
//! - [`cli`]: the `cpkit` command-line front end.

pub mod bases;
pub mod channels;
pub mod cli;
mod error;
pub mod lindblad;
pub mod linalg;
pub mod opensys;

pub use error::{Error, Result};
pub use num_complex::Complex64;

#[cfg(test)]
mod testutil;
