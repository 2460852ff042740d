//! Spectral distribution functions, quantile functions, and trace-minmax
//! functionals of self-adjoint matrices, with empirical certification of the
//! classical minmax identities (Ky Fan, Courant-Fischer-Weyl, Wielandt) and
//! the Lidskii majorization bound at matrix scale.
//!
//! The crate is generic over the real scalar through [`scalar::Real`]
//! (`f32` or `f64`); the `*64` aliases below are the types the CLI and the
//! acceptance battery use.

pub mod error;
pub mod lattice;
pub mod linalg;
pub mod majorization;
pub mod measures;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod spectra;
pub mod suite;
pub mod tol;
pub mod verify;

pub type CompactMeasure64 = measures::CompactMeasure<f64>;
pub type Cdf64 = measures::Cdf<f64>;
pub type Quantile64 = measures::Quantile<f64>;
pub type Hermitian64 = spectra::Hermitian<f64>;
pub type Projection64 = spectra::Projection<f64>;
