//! Variants of the partial transformation semigroup `PT_n`.
//!
//! For a fixed `a` in `PT_n` the sandwich product `x *_a y = x a y` makes
//! `PT_n` into a new semigroup, the variant `(PT_n, *_a)`. Two variants are
//! isomorphic exactly when their sandwich elements have the same type, so
//! `PT_n` has `p(0) + p(1) + ... + p(n)` variants up to isomorphism.
//!
//! - [`transform`]: partial transformations, their statistics and types.
//! - [`variant`]: sandwich product, annihilators, the relation `~_a`.
//! - [`classification`]: types, type recovery, explicit isomorphisms.
//! - [`oracle`]: Cayley tables and a backtracking isomorphism search that
//!   knows nothing about transformations.
//! - [`suite`]: the property suite behind `pt-variant verify`.

pub mod classification;
pub mod error;
pub mod multiset;
pub mod oracle;
pub mod partition;
pub mod suite;
pub mod transform;
pub mod variant;

pub use classification::{
    build_isomorphism, canonical_rep, count_variants, enumerate_types, reconstruct_type,
    Fingerprint, IsoWitness,
};
pub use error::{Error, Result};
pub use multiset::SizeMultiset;
pub use oracle::{
    cayley_table, find_isomorphism, fingerprint_of_table, verify_isomorphism, CayleyTable,
};
pub use partition::partition_count;
pub use transform::{enumerate_all, PartialTransformation, Permutation, TypeVector};
pub use variant::{predicted_class_multiset, VariantSemigroup};
