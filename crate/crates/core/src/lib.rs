//! Quantum Fisher information for SU(2) reference-frame alignment.
//!
//! A probe state of `N` spin-1/2 particles is rotated by an unknown
//! `U(alpha, beta, gamma) = exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz)`.
//! This crate computes the Fisher matrix of the three Euler angles, its Haar
//! average, the GHZ closed forms and comparison baselines, the effect of
//! dephasing and depolarizing noise, a finite-shot simulation of a concrete
//! variance-plus-parity estimation protocol, and a sphere-constrained optimizer
//! that searches for the probe maximizing the Haar-averaged trace.

pub mod cli;
pub mod density;
pub mod error;
pub mod estimation;
pub mod linalg;
pub mod noise;
pub mod optimizer;
pub mod qfi;
pub mod qubits;
pub mod rng;
pub mod spin_algebra;

pub use error::{Error, Result};
