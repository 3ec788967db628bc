mod family;
mod file;
mod ops;
mod spectrum;
mod theory;

pub use file::{load_family, parse_family};
pub use family::{iilu_limits, Count, FamilyDescriptor, Generator, Source, MAX_CUBE};
pub use ops::{
    build_prop33_family, classify, closure_disjoint, closure_e, closure_e_disjoint, finite_approximable,
    is_accumulation_point, least_generating_set, ClassReport, Decision, Finding, GeneratingSet, OpTag, Prop33Recipe,
};
pub use spectrum::{CardinalitySpectrum, Mult, SizeSet};
pub use theory::{linear_order, strict_order_no_max, Limit, TheoryRef, UnaryPattern, Verdict};
