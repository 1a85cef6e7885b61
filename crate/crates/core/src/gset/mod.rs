//! Finite G-sets, fixed-point counts, and induced actions `G ×_H X`.

pub mod action;
pub mod induce;
pub mod model;
pub mod word;

pub use action::{action_from_generators, fixed_points, ActionSummary, PermutationAction};
pub use induce::{
    conjugate_trace_set, induce, induced_fixed_points, klein_base_action, klein_induced, regrouped_levels,
    select_free_levels, translation_action, CocycleEntry, LevelSelection, SubgroupTransversal,
};
pub use model::{GroupModel, ModelElement, SubgroupModel};
pub use word::{Letter, Presentation, Relation, Word};
