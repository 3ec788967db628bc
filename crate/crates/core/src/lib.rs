//! Finite-model-theory workbench: relational structures, first-order logic,
//! E- and P-combinations, closure operators on theory families, spectra and
//! cardinality sets.

pub mod error;
pub mod cardinalities;
pub mod closure;
pub mod combinators;
pub mod logic;
pub mod model_finder;
mod refine;
pub mod spectra;
pub mod types_algebra;
pub mod structure;

pub use error::{Error, Result};
pub use structure::{
    parse_structure, rename_disjoint, render_structure, strip_suffix, CanonicalForm, Signature,
    Structure, Symbol,
};

/// All `k`-tuples over `{0..n-1}` in lexicographic order.
pub fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if k == 0 { 1 } else { n.checked_pow(k as u32).unwrap_or(usize::MAX) };
    (0..total).map(move |mut code| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = code % n.max(1);
            code /= n.max(1);
        }
        t
    })
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/structures.md")]
    struct Structures;
    #[doc = include_str!("../../../book/src/types.md")]
    struct Types;
    #[doc = include_str!("../../../book/src/combinations.md")]
    struct Combinations;
    #[doc = include_str!("../../../book/src/closures.md")]
    struct Closures;
    #[doc = include_str!("../../../book/src/spectra.md")]
    struct Spectra;
    #[doc = include_str!("../../../book/src/cardinalities.md")]
    struct Cardinalities;
}
