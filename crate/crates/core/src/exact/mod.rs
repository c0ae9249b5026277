//! Exact integer and rational linear algebra.

mod matrix;
mod perm;
mod rational;
mod snf;

pub use matrix::{primitive_integer_vector, vector_gcd, IntMatrix};
pub use perm::{permutation_conjugate, permute_vector, Permutation};
pub use rational::{rat, RationalMatrix};
pub use snf::{smith_normal_form, SmithForm};

/// Exact determinant of a square integer matrix.
pub fn det_exact(m: &IntMatrix) -> crate::Result<num_bigint::BigInt> {
    m.det()
}

/// Exact rational inverse of a nonsingular square integer matrix.
pub fn inverse_rational(m: &IntMatrix) -> crate::Result<RationalMatrix> {
    m.inverse_rational()
}
