//! Exact-arithmetic engine for chain-level operad computations: the
//! Barratt-Eccles operad and its complexity suboperads, dual cooperads and
//! operadic cobar constructions, quasi-free twisting data, and the
//! homotopy-classification layer built on exact Smith normal form homology.

pub mod homcore;
pub mod sigmaobj;
pub mod operadcore;
pub mod enoperads;
pub mod koszul;
pub mod tower;

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("coefficient rings do not match")]
    RingMismatch,
    #[error("matrix shapes are incompatible")]
    ShapeMismatch,
    #[error("differential does not square to zero at degree {0}")]
    DifferentialSquare(i64),
    #[error("map is not equivariant")]
    NotEquivariant,
    #[error("composition slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("composition exceeds the arity truncation {r_max}")]
    TruncationOverflow { r_max: usize },
    #[error("coinvariants are not free over the integers (orbit {0})")]
    NonFreeCoinvariants(String),
    #[error("obstruction unsolvable at arity {arity}")]
    ObstructionUnsolvable { arity: usize },
    #[error("generator map has nonzero residual")]
    NonzeroResidual,
    #[error("n = infinity is not supported")]
    UnsupportedInfinity,
    #[error("{0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
