//! Exact arithmetic on finite-rank abelian groups given as direct sums.

mod element;
mod spec;
mod subgroup;
mod sums;

use thiserror::Error;

pub use element::{Element, Order};
pub use spec::{
    int_valuation, is_prime, rational_valuation, smallest_prime_factor, Coord, FactorSpec, GroupSpec,
    ENUMERATION_LIMIT,
};
pub use subgroup::{first_dependence, independent_sequence, is_independent, subgroup_closure};
pub use sums::{
    fs_formal, fs_matrix, fs_matrix_formal, fs_set, fs_set_with_limit, FormalSum, IndexedMatrix, MatrixSum,
    DEFAULT_FS_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("elements belong to different groups")]
    SpecMismatch,
    #[error("{what} of size {size} exceeds limit {limit}")]
    SizeLimit { what: &'static str, size: u128, limit: u128 },
    #[error("duplicate element {0}")]
    Duplicate(String),
    #[error("subgroup closure exceeded {cap} elements")]
    ClosureOverflow { cap: usize },
    #[error("independent sequence stopped at {achieved} of {target} elements")]
    Shortfall { achieved: usize, target: usize },
}
