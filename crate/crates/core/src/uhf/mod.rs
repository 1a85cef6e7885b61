//! Exact finite-stage model of a UHF algebra: factor sequences, supernatural
//! numbers, stage elements, permutation unitaries, the normalised trace and
//! operator-norm brackets.

pub mod matrix;
pub mod norm;
pub mod sequence;
pub mod stage;
pub mod supernatural;

pub use matrix::RatMatrix;
pub use norm::{op_norm_bracket, op_norm_bracket_matrix, NormBracket};
pub use sequence::{cantor_source, stage_dim, supernatural_of, FactorRule, FactorSequence, Stage, DEFAULT_STAGE_CAP};
pub use stage::{ad, embed_stage, global_permutation, normalized_trace, perm_unitary, StageElement};
pub use supernatural::{Exponent, SupernaturalNumber};
