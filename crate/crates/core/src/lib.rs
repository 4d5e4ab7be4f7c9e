//! Exact computation of derivations of finite-dimensional Lie algebras over
//! the rationals, with certificates for outer derivations of solvable
//! extensions of maximal-rank nilpotent algebras.
//!
//! The crate is `no_std` (it needs `alloc`); enable the `std` feature to get
//! `std::error::Error` support in the dependencies.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod catalog;
pub mod certcheck;
pub mod derivation;
pub mod exactlin;
pub mod lie;
pub mod maxrank;
pub mod torus;

pub use derivation::{Branch, Derivation, OuterCertificate};
pub use exactlin::{Matrix, Rational, Subspace};
pub use lie::{BracketEntry, LieAlgebra};
pub use maxrank::{MaxRankSpec, SolvableExtension};
