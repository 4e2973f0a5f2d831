//! Exact construction and certification of tropical fans whose complements
//! fail higher convexity.
//!
//! The crate is layered bottom-up:
//!
//! - [`ratlin`]: exact integer/rational linear algebra (normal forms, kernels,
//!   lattice quotients, inertia, lattice volumes).
//! - [`polyhedra`]: rational polytopes, face lattices, normal fans,
//!   triangulations and Cayley polytopes.
//! - [`tropical`]: weighted fans, the balancing condition, corner-locus
//!   intersection with piecewise-linear functions, degrees.
//! - [`construction`]: the pipeline from `(k, n, seed)` to a balanced fan
//!   built from a twisted double cover.
//! - [`convexity`]: certificates (cover witness, graph homology, supporting
//!   caps, intersection-matrix inertia).
//!
//! Linear algebra in [`ratlin::Matrix`] is generic over [`ratlin::Scalar`], so
//! the same routines run over `f64`/`f32` for quick experiments; every
//! geometric layer above it works over the exact aliases below.

pub mod construction;
pub mod convexity;
pub mod lp;
pub mod polyhedra;
pub mod ratlin;
pub mod tropical;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Arbitrary-precision integer.
pub type Integer = BigInt;
/// Arbitrary-precision rational in lowest terms.
pub type Rational = BigRational;
/// Exact integer matrix.
pub type IntMatrix = ratlin::Matrix<Integer>;
/// Exact rational matrix.
pub type RatMatrix = ratlin::Matrix<Rational>;
/// Floating-point matrix, for experiments only.
pub type FloatMatrix = ratlin::Matrix<f64>;
/// Integer vector.
pub type IntVec = Vec<Integer>;
/// Rational vector.
pub type RatVec = Vec<Rational>;
