//! Arithmetic in `F₂[u]/uᵏ` and linear algebra over `F₂`.
//!
//! Homology over the truncated polynomial ring is never computed with a
//! normal form over the ring itself. Matrices are flattened to `F₂`
//! ([`flatten`]), homology is taken there, and the module structure is
//! recovered from the induced nilpotent `u`-action
//! ([`nilpotent_block_multiplicities`]).

mod f2;
mod nilpotent;
mod ring;
mod sparse;

pub use f2::{BitVec, F2Mat, RankData, Span};
pub use nilpotent::nilpotent_block_multiplicities;
pub use ring::{RingElem, MAX_ORDER};
pub use sparse::{flatten, SparseMat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("dimension mismatch: {left:?} times {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("operator is not nilpotent of order {k}")]
    NotNilpotentAtOrderK { k: u32 },
}
