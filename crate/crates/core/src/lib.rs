//! Numerical toolkit for the Su-Schrieffer-Heeger chain with PT-symmetric
//! gain and loss potentials and its spin-orbit-coupled extension.
//!
//! The crate is organised bottom-up:
//!
//! * [`matrix`] dense complex matrices,
//! * [`lattice`] model parameters and Hamiltonian builders,
//! * [`eigen`] a non-Hermitian eigensolver (Hessenberg + shifted QR),
//! * [`transfer`] closed-form transfer-matrix energies and profiles,
//! * [`topology`] symmetry checks and winding numbers,
//! * [`analysis`] mode classification, phase labels and parameter scans,
//! * [`cli`] the `pt-ssh-lab` command line front end.

pub mod analysis;
pub mod cli;
pub mod eigen;
pub mod lattice;
pub mod matrix;
pub mod topology;
pub mod transfer;

pub use num_complex::Complex64 as C64;

pub use eigen::{eigendecompose, eigenvalues, spectrum_statistics, Spectrum};
pub use lattice::{build_bloch, build_real_space, build_soc, ModelParams};
pub use matrix::ComplexMatrix;
