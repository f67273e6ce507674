//! Toolkit for unconventional photon blockade (UPB) in a symmetrically driven
//! Kerr dimer: closed-form parameter loci and weak-drive correlators, full
//! Lindblad master-equation numerics on the truncated two-mode Fock space,
//! and the parameter scans built on top of both.
//!
//! The crate is generic over the underlying real scalar (any [`Scalar`],
//! in practice `f32` or `f64`); all physics is expressed in units of the
//! cavity decay rate `gamma`. Concrete `f64` aliases are re-exported at the
//! crate root for everyday use.

pub mod acceptance;
pub mod analytic;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod lindblad;
pub mod ode;
pub mod optim;
pub mod params;
pub mod scalar;
pub mod scan;
pub mod sparse;

pub use error::{Error, Result};
pub use params::{DimerParams, DriveSpec};
pub use scalar::Scalar;

/// Complex number over the crate's default `f64` scalar.
pub type C64 = num_complex::Complex<f64>;

/// Dimer parameters over `f64`.
pub type DimerParams64 = params::DimerParams<f64>;
/// Drive specification over `f64`.
pub type DriveSpec64 = params::DriveSpec<f64>;
/// Sparse two-mode Fock-space operator over `f64`.
pub type QuantumOperator64 = fock::QuantumOperator<f64>;
/// Dense density matrix over `f64`.
pub type DensityMatrix64 = fock::DensityMatrix<f64>;
/// Vectorized Liouvillian over `f64`.
pub type Liouvillian64 = lindblad::Liouvillian<f64>;
