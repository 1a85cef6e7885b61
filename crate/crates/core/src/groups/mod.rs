//! Finitely generated abelian groups, the Smith normal form, embedding
//! patterns into products of cyclic groups, and the trivial-intersection
//! predicate.

pub mod abelian;
pub mod pattern;
pub mod prufer;
pub mod snf;

pub use abelian::{canonical_decomposition, Decomposition, FgAbelianGroup, GroupElement};
pub use pattern::{
    diagonal_resequence, trivial_intersection, CoordinateRule, EmbeddingPattern, Eventual, IntersectionVerdict,
    DEFAULT_BOX_BOUND,
};
pub use prufer::{prufer_obstruction, ModulusCheck, PruferReport};
pub use snf::{smith_normal_form, IntMatrix, SmithDecomposition};
