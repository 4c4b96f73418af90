//! Rank-one subgroups of ℚ, their Baer types, and orbit-closure descriptors.

pub mod baer;
pub mod module;
pub mod supernatural;

pub use baer::{baer_isomorphic, baer_to_qa, is_free, qa_to_baer, BaerType, SubgroupOfQ};
pub use module::{
    build_frequency_from_groups, classification_report, closures_homeomorphic, decompose_module,
    module_rank, orbit_closure, ClosureDescriptor, ClosureFactor, ModuleDescriptor,
};
pub use supernatural::{Exponent, PrimeSet, SupernaturalNumber};
