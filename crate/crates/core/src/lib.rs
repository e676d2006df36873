//! Desk-scale verification toolkit for intersecting families of permutations
//! and biased-cube analysis: exact cube families and measures, the biased
//! Fourier transform with one-sided noise, globalness certification, exact
//! extremal-family search, permutation embeddings with matching couplings,
//! and numeric auditors for the inequality chains behind the bounds.
//!
//! Everything runs at desk scale with explicit resource guards, and every
//! estimate is backed by an exhaustive or independent oracle wherever one is
//! tractable.

pub mod bump;
pub mod cube;
pub mod embed;
pub mod error;
pub mod families;
pub mod fourier;
pub mod globalness;

pub use cube::{BiasedMeasure, CubeFamily, CubePoint, Restriction};
pub use error::{Error, Result};
pub use families::{PermFamily, Permutation, UmvirateSpec};
pub use fourier::{FourierCoeffs, NoiseRho, RealFunctionOnCube};
