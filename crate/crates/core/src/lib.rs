//! Li-Yorke chaos for composition operators `T_f : φ ↦ φ ∘ f` on `L^p`
//! spaces over countable atomic measure spaces.
//!
//! The crate is generic over the scalar type ([`Scalar`]); the exact
//! [`Rational`] instantiation is the one every certificate is checked with.

pub mod asymptotics;
pub mod atom;
pub mod audit;
pub mod conjugacy;
pub mod constructions;
pub mod criteria;
pub mod decide;
pub mod error;
pub mod gallery;
pub mod lp;
pub mod measure;
pub mod oracle;
pub mod profile;
pub mod report;
pub mod scalar;
pub mod sequence;
pub mod shift;
pub mod spec_file;
pub mod system;
pub mod verdict;
pub mod weight;

pub use atom::{Atom, AtomSet};
pub use scalar::{Exponent, Rational, Scalar};
pub use sequence::{Lim, SeqRule, Sequence};
pub use weight::ExtendedWeight;

/// Exact measure value.
pub type Weight = ExtendedWeight<Rational>;
