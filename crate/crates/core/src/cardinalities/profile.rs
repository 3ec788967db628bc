use std::fmt;

use super::set::CardinalitySet;
use crate::closure::{CardinalitySpectrum, FamilyDescriptor, Generator, Mult, OpTag, SizeSet, Source, TheoryRef};
use crate::error::{Error, Result};

/// Finite cardinalities attached to a family under one closure operator:
/// `c` for the closure, `cbar` for sizes new to the closure, `chat` for the
/// unassigned parts of P-combinations.
#[derive(Clone, Debug)]
pub struct CardProfile {
    pub op: OpTag,
    pub c: CardinalitySet,
    pub cbar: CardinalitySet,
    pub chat: CardinalitySet,
}

impl fmt::Display for CardProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "op {}", self.op)?;
        writeln!(f, "c    = {}", self.c)?;
        writeln!(f, "cbar = {}", self.cbar)?;
        write!(f, "chat = {}", self.chat)
    }
}

fn trivial_content(t: &TheoryRef) -> bool {
    match t {
        TheoryRef::Fin(s) => s.tables().iter().all(|t| t.is_empty()),
        TheoryRef::T0(_) | TheoryRef::T0Inf | TheoryRef::Unary { .. } => true,
        TheoryRef::Tagged(inner, _) => trivial_content(inner),
        TheoryRef::Limit(_) => false,
    }
}

/// Class sizes the unassigned part of a P-combination of the family is
/// built from.
fn unit_sizes(fam: &FamilyDescriptor) -> Result<Vec<u64>> {
    let unsupported = || Error::Unsupported(format!("unassigned sizes of '{}' are not described", fam.name));
    match &fam.source {
        Source::Generator(Generator::EkClasses { k, .. }) => Ok(vec![*k as u64]),
        Source::Generator(Generator::NcubeSeq { disjoint: false }) => Err(unsupported()),
        Source::Generator(_) => Ok(vec![1]),
        Source::Explicit(ms) if fam.languages_disjoint() || ms.iter().all(trivial_content) => Ok(vec![1]),
        Source::Explicit(_) => Err(unsupported()),
    }
}

/// Profile of `fam` under `op`. E-closures add no finite sizes; P and Pd
/// give nothing new for finite families; otherwise the unassigned parts
/// realize all sums of the class sizes.
pub fn card_profile(fam: &FamilyDescriptor, op: OpTag) -> Result<CardProfile> {
    let c_e = fam.spectrum().finite_sizes()?;
    let chat = match op {
        OpTag::E => CardinalitySet::Empty,
        OpTag::P | OpTag::Pd if fam.is_finite() => CardinalitySet::Empty,
        _ => CardinalitySet::sum_closure(unit_sizes(fam)?),
    };
    let cbar = chat.minus(&c_e);
    Ok(CardProfile { op, c: c_e.union(&chat), cbar, chat })
}

/// Empty-language family with model sizes `Y`, so that its P-profiles
/// have `cbar = Z+ \ Y`.
pub fn complement_family(y: &CardinalitySet) -> Result<FamilyDescriptor> {
    if !y.is_infinite() {
        return Err(Error::Precondition(format!("{y} is not infinite")));
    }
    FamilyDescriptor::generator(
        format!("sizes {y}"),
        Generator::EmptyLang {
            spectrum: CardinalitySpectrum::single(SizeSet::Set(y.clone()), Mult::Finite(1)),
            tagged: false,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty_lang(spec: &str) -> FamilyDescriptor {
        FamilyDescriptor::generator("f", Generator::EmptyLang { spectrum: spec.parse().unwrap(), tagged: false }).unwrap()
    }

    #[test]
    fn empty_language_profiles() {
        let fam = empty_lang("2Z+:1");
        let p = card_profile(&fam, OpTag::Pdr).unwrap();
        assert!(p.chat.same_as(&CardinalitySet::all()));
        assert!(p.cbar.same_as(&CardinalitySet::multiples(2).complement()));
        for op in [OpTag::E, OpTag::P, OpTag::Pd, OpTag::Pdr] {
            let p = card_profile(&fam, op).unwrap();
            assert!(p.cbar.is_subset_of(&p.chat));
            if op == OpTag::E {
                assert!(p.cbar.is_empty_set());
            }
        }
    }

    #[test]
    fn finite_families() {
        let fam = empty_lang("1,2:1");
        assert!(card_profile(&fam, OpTag::P).unwrap().chat.is_empty_set());
        let p = card_profile(&fam, OpTag::Pdr).unwrap();
        assert!(p.cbar.same_as(&CardinalitySet::at_least(3)));
    }

    #[test]
    fn ek_classes() {
        let fam = FamilyDescriptor::generator("ek", Generator::EkClasses { k: 3, disjoint: false }).unwrap();
        let p = card_profile(&fam, OpTag::Pdr).unwrap();
        assert!(p.chat.same_as(&CardinalitySet::multiples(3)));
        assert!(p.cbar.is_empty_set());
    }

    #[test]
    fn complements() {
        for (y, expect) in [
            (CardinalitySet::multiples(2), CardinalitySet::multiples(2).complement()),
            (CardinalitySet::all(), CardinalitySet::Empty),
            (CardinalitySet::at_least(5), CardinalitySet::finite([1, 2, 3, 4])),
        ] {
            let fam = complement_family(&y).unwrap();
            for op in [OpTag::P, OpTag::Pd, OpTag::Pdr] {
                assert!(card_profile(&fam, op).unwrap().cbar.same_as(&expect), "{y} {op}");
            }
        }
        assert!(complement_family(&CardinalitySet::finite([1, 2])).is_err());
    }
}
