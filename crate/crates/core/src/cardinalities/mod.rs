//! Cardinality sets, cardinality profiles of closures, and semi-isolation.

mod profile;
mod set;
mod si;

pub use profile::{card_profile, complement_family, CardProfile};
pub use set::{
    chat_from_si_classes, recover_generators, semigroup_set, validate_complete_pinf, CardinalitySet,
    PinfValidation, Recovered, MAX_BOUND,
};
pub use si::{si_relation, SIRelation, Selector};
