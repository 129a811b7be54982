//! Thermal Casimir free energy, pressure and entropy between thick parallel
//! plates under competing dielectric-response models and reflection-
//! coefficient schemes, with numerical audits of each scheme against the
//! Nernst heat theorem.
//!
//! Layout:
//! - [`materials`]: permittivities along the imaginary frequency axis,
//!   carrier models, screening lengths, material description files.
//! - [`reflection`]: TM/TE coefficients for every scheme, zero-frequency
//!   branches, small-parameter expansions.
//! - [`lifshitz`]: Matsubara summation, free energy / pressure / entropy,
//!   zero-temperature extrapolation, proximity-force conversion.
//! - [`specfun`]: polylogarithms, ζ(3), closed-form entropy limits.
//! - [`harness`]: config-driven sweeps, audits and CSV emission behind the
//!   `casimir` binary.

pub mod constants;
pub mod error;
pub mod harness;
pub mod lifshitz;
pub mod materials;
pub mod quadrature;
pub mod reflection;
pub mod specfun;

pub use error::{CasimirError, Result};
