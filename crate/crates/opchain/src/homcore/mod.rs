//! Exact coefficient rings, sparse matrices, Smith normal form, and based
//! chain complexes with homology, duals, shifts, tensors and Hom complexes.

pub mod complex;
pub mod matrix;
pub mod ring;
pub mod summary;

pub use complex::{point_complex, BasedComplex, Label};
pub use matrix::{
    invariant_factors, rank, rank_mod_p, rank_over_q, smith_normal_form, solve_linear, SparseIntMat,
    SparseMat,
};
pub use ring::{CoefficientRing, Scalar};
pub use summary::{DegreeSummary, GradedSummary};
