//! Exact arithmetic over square-zero infinitesimals.
//!
//! A [`WeilElement`] is a polynomial in generators `d` with `d * d = 0`, with
//! rational coefficients. Every generator comes from a [`GeneratorContext`]
//! which never reuses an index, so nested computations can always allocate
//! fresh infinitesimals without capturing one another.

mod element;
mod matrix;

use thiserror::Error;

pub use element::{ring_combine, Generator, GeneratorContext, Monomial, RingOp, WeilElement};
pub use matrix::{rational_inverse, WeilMatrix};

/// Raised when a value is not a pure multiple of the monomial it is being
/// factored by.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("value is not a pure multiple of {target}; found a term on {residue}")]
pub struct ResidueError {
    pub target: Monomial,
    pub residue: Monomial,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum WeilError {
    #[error("generators of contexts {0} and {1} cannot be mixed")]
    ContextMismatch(u32, u32),
    #[error("image of generator d{0} does not square to zero")]
    NotSquareZero(u32),
    #[error("constant term of the matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Residue(#[from] ResidueError),
}
