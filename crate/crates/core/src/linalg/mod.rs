//! Exact linear algebra over prime fields.

mod invariant;
mod matrix;
mod subspace;

pub use invariant::{common_invariant_subspaces, invariant_closure, is_simple};
pub use matrix::{inv_mod, is_prime, pow_mod, FpMatrix};
pub use subspace::{decode_vector, encode_vector, Subspace};

pub(crate) use matrix::check_prime;
pub(crate) use subspace::{add_vectors, sub_vectors};
