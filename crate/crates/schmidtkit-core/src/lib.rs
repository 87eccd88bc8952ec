//! Numerical toolkit for finite-dimensional bipartite quantum systems.
//!
//! The crate provides, on top of a dense complex linear-algebra kernel:
//!
//! * Schmidt decompositions of pure bipartite vectors and the whole family of
//!   equivalent entanglement-dimension computations built on them
//!   (marginal ranks, order-interval dimensions, minimal compressions,
//!   factorizations through `M_k`),
//! * a completely positive map calculus (Choi matrices, Kraus lists, minimal
//!   Stinespring dilations, GNS data) together with the Radon–Nikodym
//!   bijection between dominated maps and commutant elements,
//! * a finitely-correlated-state engine for translation-invariant spin
//!   chains (window evaluation, conditioned-space dimensions, bond
//!   minimization),
//! * a summability-based type classifier for infinite tensor products of
//!   per-site Schmidt spectra,
//! * CHSH optimization by seesaw iteration and no-signalling correlation
//!   tables from finite models.
//!
//! Everything operates on immutable values and is safe for concurrent use.
//! The crate is `no_std`-compatible (allocation required); the companion
//! `schmidtkit` crate adds JSON/CSV serialization and a command-line front
//! end.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod linalg;
pub mod matrix;
pub mod rng;
pub mod tolerance;

pub mod cpmaps;
pub mod fcs;
pub mod itpfi;
pub mod nonlocality;
pub mod schmidt;
pub mod states;

pub use error::CoreError;
pub use matrix::{ComplexMatrix, C64};
pub use tolerance::Tolerance;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, CoreError>;
