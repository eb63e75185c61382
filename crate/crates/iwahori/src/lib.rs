//! Exact combinatorics of extended affine Weyl groups over local fields.
//!
//! The crate works with a datum `(Λ, Σ, W₀, Ω)`: a finite-rank lattice `Λ`,
//! a reduced root system `Σ` acting on it by integer covectors, the finite
//! Weyl group `W₀` generated by the reflections of `Σ`, and the stabilizer
//! `Ω` of the base alcove inside the extended affine Weyl group
//! `W = Λ ⋊ W₀`. On top of that it computes the Frobenius-twisted
//! invariants attached to such a datum: Kottwitz maps, Newton points,
//! σ-straight elements, μ-admissible sets and their parahoric images, the
//! stratification poset for very special parahorics, and exact loop-group
//! membership checks for SL₂ and SU₃ over Laurent-series fields.
//!
//! All arithmetic is exact: integers, rationals and finite fields. There is
//! no floating point anywhere in this crate.

#![forbid(unsafe_code)]

pub mod admissible;
pub mod affine_weyl;
pub mod datum;
pub mod error;
pub mod frobenius;
pub mod loop_group;
pub mod matrix;
pub mod root_system;
pub mod selftest;
pub mod sigma_conjugacy;

pub use affine_weyl::{ExtendedAffineElement, ParahoricType};
pub use datum::standard_datum;
pub use error::Error;
pub use frobenius::FrobeniusTwist;
pub use root_system::{AffineWeylDatum, RationalVector};
pub use sigma_conjugacy::BPoint;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
