//! Density-operator toolkit for pure bipartite quantum states.
//!
//! The crate covers four layers that build on each other:
//!
//! - [`linalg`]: dense complex matrices with a deterministic Hermitian
//!   eigensolver and a Gram-matrix SVD;
//! - [`bipartite`]: pure two-subsystem states, their reduced density
//!   operators, Schmidt decompositions, and entanglement measures;
//! - [`homogeneous`]: translation-invariant states on a periodic line,
//!   diagonal in the momentum basis, with spectral moments and boosts;
//! - [`hydrogen`] and [`lattice`]: a hydrogen-like reference model in the
//!   continuum and its two-particle lattice analog, used to cross-check the
//!   generic machinery against closed forms.

#![forbid(unsafe_code)]

pub mod bipartite;
pub mod error;
pub mod export;
pub mod homogeneous;
pub mod hydrogen;
pub mod lattice;
pub mod linalg;
pub mod quad;

pub use error::{Error, Result};
pub use linalg::{Complex64, ComplexMatrix};
