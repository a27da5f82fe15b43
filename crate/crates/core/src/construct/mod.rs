//! Deterministic constructions: prescribed-sum selections, zero-sum
//! partitions, simple `x*d` vectors, and core embeddings.
//!
//! Every search here runs over group elements in index order, so results
//! are reproducible. Existence arguments that need a large group are
//! replaced by exhaustive search with an explicit error on failure.

mod pipeline;
mod star;
mod sums;

use thiserror::Error;

use crate::cayley::CayleyError;
use crate::solve::SolveError;

pub use pipeline::{
    build_core_embedding, build_core_embedding_with, core_certificate_from_embedding, extend_to_pseudoembedding,
    CoreCertificate, CoreEmbeddingMethod, CoreEmbeddingResult,
};
pub use star::{find_simple_xast, xastd_cyclic, zero_sum_bipartition_z2k, StarMultiset};
pub use sums::{find_pair_sum, find_s_sum, find_triple_prescribed_sum, partition_zero_sum};

/// Node budget for the internal backtracking searches.
pub(crate) const SEARCH_BUDGET: u64 = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no triple with the prescribed sum exists")]
    NoTriple,
    #[error("no zero-sum partition with the requested sizes exists")]
    NoPartition,
    #[error("search exhausted: {0}")]
    Exhausted(String),
    #[error("search stopped at its node budget: {0}")]
    Budget(String),
    #[error("vertices {0} and {1} are adjacent with both degrees divisible by the exponent")]
    ExceptionalPair(usize, usize),
    #[error("instance is obstructed ({0})")]
    Obstructed(String),
    #[error("construction produced an invalid result: {0}")]
    Invalid(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
}
