//! Exact integer and rational linear algebra.

mod inertia;
mod integer;
mod lattice;
mod matrix;
mod normal_form;
pub mod vector;
mod volume;

pub use inertia::{inertia, InertiaTriple};
pub use integer::{integer_kernel_basis, integer_rank};
pub use lattice::{
    coordinates, lattice_index, primitive_quotient_generator, quotient_generator_saturated, saturation, to_rat_matrix,
};
pub use matrix::{inverse, kernel_basis, rank, rref, solve, Matrix, Scalar};
pub use normal_form::{hermite_normal_form, hermite_pivots, reduce_mod_hermite, smith_normal_form, SmithForm};
pub use volume::{affine_dimension, normalized_volume};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatlinError {
    #[error("matrix is not symmetric")]
    NonSymmetric,
    #[error("quotient lattice has rank {found}, expected 1")]
    BadCorank { found: isize },
    #[error("witness lies in the smaller span")]
    WitnessInTau,
    #[error("witness lies outside the larger span")]
    WitnessOutsideSpan,
    #[error("points span an affine space of dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: isize },
}
