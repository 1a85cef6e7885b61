//! Rokhlin towers, uniform-outerness witnesses and vanishing-trace profiles.

pub mod classify;
pub mod family;
pub mod tower;
pub mod witness;

pub use classify::{rokhlin_classify, PowerCertificate, RokhlinVerdict, DEFAULT_POWER_BOUND};
pub use family::{
    alpha_permutation, vanishing_trace_profile, ActionFamily, FreeLevels, KleinFamily, LevelTrace, ProfileVerdict,
    TraceProfile,
};
pub use tower::{tower_synthesize, tower_verify, CommutatorDefect, RokhlinTower, TowerDefects, TowerReport};
pub use witness::{outerness_witness, OuternessWitness};
