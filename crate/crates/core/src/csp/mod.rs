//! CSP 0/1/all Extension: constraints, instances, conflicting paths, the
//! half-integral relaxation and the reductions built on it.

mod bounds;
mod instance;
mod lifted;
mod packing;
mod persistence;
mod relation;

use thiserror::Error;

pub use bounds::{lb1, lb2, slack, Slack};
pub use instance::{find_assignment, CspBuilder, CspInstance};
pub use lifted::{enumerate_conflicting_paths, ImplPath, Lifted, DEAD};
pub use packing::{cover_is_valid, extract_cover, max_halfintegral_packing, HalfIntegralCover, HalfIntegralPacking, PackingState};
pub use persistence::{persistence_reduce, Reduction};
pub use relation::{validate_01all, Relation, Succ};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CspError {
    #[error("deletion budget exhausted")]
    BudgetExhausted,
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("two constraints between {0} and {1}")]
    DuplicateConstraint(usize, usize),
}
