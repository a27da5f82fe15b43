//! Rainbow embeddings of trees into the Cayley-sum colouring `K_G` of a
//! finite abelian group `G`, where the edge `xy` receives colour `x + y`.
//!
//! The crate covers group arithmetic ([`group`]), tree structure and
//! decompositions ([`tree`]), the coloured complete graph ([`cayley`]),
//! the obstruction classifier ([`classify`]), an exact backtracking oracle
//! ([`solve`]), deterministic constructions ([`construct`]), orthogonal
//! double covers ([`odc`]) and experiment plumbing ([`harness`]).

pub mod cayley;
pub mod classify;
pub mod construct;
pub mod group;
pub mod harness;
pub mod odc;
pub mod solve;
pub mod tree;

pub use cayley::{Embedding, TargetSets};
pub use classify::{classify, ObstructionReport};
pub use group::{GroupElement, GroupSpec};
pub use tree::{Core, Tree};
