//! Generalized polarization tensors and exterior conformal maps of planar
//! domains.
//!
//! The pipeline: sample a smooth closed boundary ([`geometry`]), assemble the
//! Neumann–Poincaré and single-layer operators and solve the density
//! equation ([`potential`]), contract the solutions against harmonic
//! polynomials into polarization tensor tables ([`gpt`]), and run the
//! inductive Laurent-coefficient recursion that turns the first tensor
//! column into the exterior Riemann map ([`conformal`]). The [`spectral`]
//! module provides an independent eigendecomposition route to the same
//! tensors, and [`validate`] the cross-identities and geometric error
//! metrics used by the [`cli`].
//!
//! Every type is immutable after construction and all operations are pure,
//! so values can be shared freely across threads.

pub mod cli;
pub mod conformal;
pub mod error;
pub mod geometry;
pub mod gpt;
pub mod potential;
pub mod spectral;
pub mod validate;

pub use error::{Error, Result};
