//! Neumann eigenvalues of the Gaussian-weighted Hermite (Ornstein–Uhlenbeck)
//! operator `−div(e^{−|x|²/2} Du) = μ e^{−|x|²/2} u` on convex domains.
//!
//! The crate provides Hermite polynomials and quadrature, convex-domain
//! geometry with the normal reflection across the boundary, P1 finite
//! elements weighted by the Gaussian measure, sparse and dense eigensolvers,
//! the reflection extension operator, and a catalog of reproducible
//! numerical scenarios.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discretize;
pub mod eigensolve;
mod error;
pub mod extension;
pub mod factor;
pub mod geometry;
pub mod hermite;
pub mod measure;
pub mod scenarios;
pub mod sparse;

pub use error::{Error, Result};
