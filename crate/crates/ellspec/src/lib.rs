//! Spectral perturbation analysis for ellipsoids near the unit sphere.
//!
//! The library computes first-order expansions `Λ(ε) = l(l+1) + λ₁ε` of
//! Laplace–Beltrami eigenvalues on the ellipsoid with semi-axes
//! `(1+αε, 1+βε, 1+γε)`, checks the Gaussian-curvature conditions under
//! which every perturbed eigenvalue dominates the corresponding eigenvalue
//! of the round sphere, and cross-validates the closed forms against a
//! spherical-harmonic Galerkin discretization of the actual surface.
//!
//! Modules:
//! - [`geometry`]: curvature of ellipsoids, extrema, admissibility regions.
//! - [`perturbation`]: closed-form biaxial coefficients and the four
//!   symmetric tridiagonal matrix families of the triaxial case.
//! - [`eigensolve`]: tridiagonal and dense generalized symmetric
//!   eigenvalue machinery plus positive-definiteness tests.
//! - [`oracle`]: Galerkin ground truth on the surface itself.
//! - [`comparison`]: sorted index-by-index comparison against the sphere.

pub mod comparison;
pub mod eigensolve;
mod error;
pub mod geometry;
mod harmonics;
pub mod oracle;
pub mod perturbation;
mod quadrature;

pub use error::{Error, Result};
