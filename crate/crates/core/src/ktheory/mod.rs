//! Characters of finite abelian groups, Bratteli diagrams of finite-stage
//! crossed products, direct-limit invariants and closed-form K-groups.

pub mod bratteli;
pub mod characters;
pub mod cyclotomic;
pub mod invariants;
pub mod limits;

pub use bratteli::{
    bratteli_step, bratteli_step_from_fix, crossed_product_diagram, diagram_from_actions, entry, matrix_mul,
    BratteliDiagram, CrossedProductReport, DiagramVerdict, MultiplicityMatrix,
};
pub use characters::{characters, fixed_point_vector, multiplicities, perm_character_multiplicity, CharacterTable};
pub use cyclotomic::{cyclotomic_polynomial, RootSum};
pub use invariants::{k_invariants, k_invariants_infinite_rank, KGroup, KInvariants};
pub use limits::{
    direct_limit_invariants, DirectLimitSystem, Divisibility, LimitInvariants, MapSchedule, PrimeDivisibility,
    DEFAULT_PRIME_BOUND,
};
