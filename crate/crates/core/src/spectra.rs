//! e-spectra of families relative to classes of theories, the monotony
//! and additivity laws, and generator families with prescribed spectra.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::cardinalities::CardinalitySet;
use crate::closure::{
    closure_disjoint, closure_e, is_accumulation_point, FamilyDescriptor, Generator, Limit, Mult, OpTag, Source,
    TheoryRef, Verdict,
};
use crate::error::{Error, Result};
use crate::structure::{Signature, Structure, Symbol};
use crate::types_algebra::lu_check;

pub const MAX_POWER_SYMBOLS: usize = 10;

/// Number of predicate symbols of each arity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LanguageProfile {
    pub counts: BTreeMap<usize, Mult>,
}

impl LanguageProfile {
    pub fn of_signature(sig: &Signature) -> Self {
        let mut out = LanguageProfile::default();
        for s in sig.symbols() {
            out.add(s.arity, Mult::Finite(1));
        }
        out
    }

    pub fn of_theory(t: &TheoryRef) -> Self {
        match t {
            TheoryRef::Fin(s) => Self::of_signature(s.sig()),
            TheoryRef::T0(_) | TheoryRef::T0Inf => Self::default(),
            TheoryRef::Tagged(inner, _) => {
                let mut p = Self::of_theory(inner);
                p.add(1, Mult::Finite(1));
                p
            }
            TheoryRef::Unary { .. } => {
                let mut p = Self::default();
                p.add(1, Mult::Infinite);
                p
            }
            TheoryRef::Limit(_) => {
                let mut p = Self::default();
                p.add(2, Mult::Finite(1));
                p
            }
        }
    }

    fn add(&mut self, arity: usize, m: Mult) {
        let e = self.counts.entry(arity).or_insert(Mult::Finite(0));
        *e = *e + m;
    }

    pub fn support(&self) -> Vec<usize> {
        self.counts.iter().filter(|(_, m)| !m.is_zero()).map(|(&a, _)| a).collect()
    }

    pub fn is_finite_language(&self) -> bool {
        self.counts.values().all(|m| *m != Mult::Infinite)
    }
}

impl fmt::Display for LanguageProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(a, m)| format!("{a}={m}"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for LanguageProfile {
    type Err = Error;

    /// `arity=count` pairs separated by commas; an empty string is the
    /// empty language.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = LanguageProfile::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (a, m) = part
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("profile entry '{part}' is not arity=count")))?;
            let a: usize = a.trim().parse().map_err(|_| Error::Invalid(format!("bad arity '{a}'")))?;
            out.add(a, m.parse()?);
        }
        Ok(out)
    }
}

/// A class of theories a spectrum is taken relative to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelativeClass {
    All,
    Fin,
    FinN(u64),
    FinUpTo(u64),
    Inf,
    OmegaCategorical,
    Profile(LanguageProfile),
}

impl RelativeClass {
    pub fn admits(&self, t: &TheoryRef) -> bool {
        let size = t.model_size();
        match self {
            RelativeClass::All => true,
            RelativeClass::Fin => size.is_some(),
            RelativeClass::FinN(n) => size == Some(*n),
            RelativeClass::FinUpTo(n) => size.is_some_and(|s| s <= *n),
            RelativeClass::Inf => size.is_none(),
            RelativeClass::OmegaCategorical => {
                matches!(t, TheoryRef::T0Inf | TheoryRef::Limit(Limit::DenseOrder))
                    || matches!(t, TheoryRef::Tagged(inner, _) if RelativeClass::OmegaCategorical.admits(inner))
            }
            RelativeClass::Profile(p) => LanguageProfile::of_theory(t) == *p,
        }
    }

    /// How many `T0(n)` with `n` in `sizes` the class admits.
    fn count_t0(&self, sizes: &CardinalitySet) -> Mult {
        let count = |s: &CardinalitySet| {
            if s.is_infinite() {
                Mult::Infinite
            } else {
                Mult::Finite(s.members_up_to(s.max_finite().unwrap_or(0)).len() as u64)
            }
        };
        match self {
            RelativeClass::All | RelativeClass::Fin => count(sizes),
            RelativeClass::Profile(p) if p.support().is_empty() => count(sizes),
            RelativeClass::FinN(n) => Mult::Finite(sizes.contains(*n) as u64),
            RelativeClass::FinUpTo(n) => Mult::Finite(sizes.members_up_to(*n).len() as u64),
            _ => Mult::Finite(0),
        }
    }
}

impl fmt::Display for RelativeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelativeClass::All => write!(f, "all"),
            RelativeClass::Fin => write!(f, "fin"),
            RelativeClass::FinN(n) => write!(f, "fin:{n}"),
            RelativeClass::FinUpTo(n) => write!(f, "fin:<={n}"),
            RelativeClass::Inf => write!(f, "inf"),
            RelativeClass::OmegaCategorical => write!(f, "omega-cat"),
            RelativeClass::Profile(p) => write!(f, "profile:{p}"),
        }
    }
}

impl FromStr for RelativeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::Invalid(format!("bad class '{s}'")));
        Ok(match s {
            "all" => RelativeClass::All,
            "fin" => RelativeClass::Fin,
            "inf" => RelativeClass::Inf,
            "omega-cat" | "\u{3c9}-cat" => RelativeClass::OmegaCategorical,
            _ => {
                if let Some(p) = s.strip_prefix("profile:") {
                    RelativeClass::Profile(p.parse()?)
                } else if let Some(n) = s.strip_prefix("fin:<=").or_else(|| s.strip_prefix("fin:\u{2264}")) {
                    RelativeClass::FinUpTo(num(n)?)
                } else if let Some(n) = s.strip_prefix("fin:") {
                    RelativeClass::FinN(num(n)?)
                } else {
                    return Err(Error::Invalid(format!("unknown class '{s}'")));
                }
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectrumCount {
    Exact(Mult),
    AtLeast(u64),
}

#[derive(Clone, Debug)]
pub struct SpectrumValue {
    pub count: SpectrumCount,
    pub class: RelativeClass,
    /// New theories found, or candidates supported by bounded evidence.
    pub witnesses: Vec<TheoryRef>,
}

impl SpectrumValue {
    pub fn is_exact(&self) -> bool {
        matches!(self.count, SpectrumCount::Exact(_))
    }

    pub fn exact(&self) -> Option<Mult> {
        match self.count {
            SpectrumCount::Exact(m) => Some(m),
            SpectrumCount::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for SpectrumValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.count {
            SpectrumCount::Exact(m) => write!(f, "[{}] exact {m}", self.class)?,
            SpectrumCount::AtLeast(k) => write!(f, "[{}] at least {k}", self.class)?,
        }
        if !self.witnesses.is_empty() {
            let ws: Vec<String> = self.witnesses.iter().map(|w| w.to_string()).collect();
            write!(f, " ({})", ws.join(", "))?;
        }
        Ok(())
    }
}

/// Bounded-probing parameters for families without an exact closure.
#[derive(Clone, Copy, Debug)]
pub struct SpectrumOptions {
    pub bounded: bool,
    pub rank: usize,
    pub probe: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { bounded: false, rank: 3, probe: 6 }
    }
}

const WITNESS_BOUND: u64 = 16;

/// Counts the additions of a closed family inside `class`.
fn count_additions(closed: &FamilyDescriptor, class: &RelativeClass) -> SpectrumValue {
    let mut total = class.count_t0(&closed.added_t0);
    let mut witnesses: Vec<TheoryRef> = closed
        .added_t0
        .members_up_to(WITNESS_BOUND)
        .into_iter()
        .map(TheoryRef::T0)
        .filter(|t| class.admits(t))
        .collect();
    let mut rest: Vec<TheoryRef> = closed.added.clone();
    if closed.added_t0_inf {
        rest.insert(0, TheoryRef::T0Inf);
    }
    for t in rest.into_iter().filter(|t| class.admits(t)) {
        total = total + Mult::Finite(1);
        witnesses.push(t);
    }
    SpectrumValue { count: SpectrumCount::Exact(total), class: class.clone(), witnesses }
}

fn candidates(fam: &FamilyDescriptor) -> Vec<TheoryRef> {
    match fam.source_generator() {
        Some(Generator::NcubeSeq { disjoint: false }) => vec![TheoryRef::Limit(Limit::OmegaCube)],
        _ => Vec::new(),
    }
}

/// Number of theories the E-closure adds to `fam` inside `class`.
pub fn e_spectrum(fam: &FamilyDescriptor, class: &RelativeClass, opts: SpectrumOptions) -> Result<SpectrumValue> {
    match closure_e(fam) {
        Ok(closed) => Ok(count_additions(&closed, class)),
        Err(Error::Unsupported(msg)) if !opts.bounded => Err(Error::Unsupported(msg)),
        Err(Error::Unsupported(_)) => {
            let mut witnesses = Vec::new();
            for t in candidates(fam).into_iter().filter(|t| class.admits(t)) {
                if fam.contains(&t)? {
                    continue;
                }
                let d = is_accumulation_point(fam, &t, opts.rank, opts.probe)?;
                if matches!(d.verdict, Verdict::Yes | Verdict::BoundedYes { .. }) {
                    witnesses.push(t);
                }
            }
            Ok(SpectrumValue { count: SpectrumCount::AtLeast(witnesses.len() as u64), class: class.clone(), witnesses })
        }
        Err(e) => Err(e),
    }
}

/// Values of the disjoint P-closure: the unassigned part of a combination
/// of blocks in disjoint languages carries only the empty language, so each
/// `T0(n)` and `T0inf` is new exactly when there are infinitely many blocks
/// and no block already has that theory.
pub fn p_spectrum_disjoint(fam: &FamilyDescriptor, class: &RelativeClass) -> Result<SpectrumValue> {
    Ok(count_additions(&closure_disjoint(fam, OpTag::Pd)?, class))
}

#[derive(Clone, Debug)]
pub struct LawReport {
    pub total: SpectrumValue,
    pub cells: Vec<SpectrumValue>,
    /// `None` when some value is not exact.
    pub additivity: Option<bool>,
    pub monotony: Option<bool>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.additivity != Some(false) && self.monotony != Some(false)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |b: Option<bool>| match b {
            Some(true) => "holds",
            Some(false) => "FAILS",
            None => "not checked (inexact values)",
        };
        writeln!(f, "total {}", self.total)?;
        for c in &self.cells {
            writeln!(f, "cell  {c}")?;
        }
        let sum: Vec<String> = self.cells.iter().map(|c| c.count_text()).collect();
        writeln!(f, "additivity: {} = {} {}", sum.join(" + "), self.total.count_text(), show(self.additivity))?;
        write!(f, "monotony: {}", show(self.monotony))
    }
}

impl SpectrumValue {
    fn count_text(&self) -> String {
        match self.count {
            SpectrumCount::Exact(m) => m.to_string(),
            SpectrumCount::AtLeast(k) => format!(">={k}"),
        }
    }
}

/// Theories used to test that the cells partition the total class.
fn partition_sample(fam: &FamilyDescriptor) -> Vec<TheoryRef> {
    let mut out: Vec<TheoryRef> = (1..=WITNESS_BOUND).map(TheoryRef::T0).collect();
    out.push(TheoryRef::T0Inf);
    out.extend([Limit::OmegaCube, Limit::DiscreteOrder, Limit::DenseOrder].map(TheoryRef::Limit));
    if let Ok(ms) = fam.members(WITNESS_BOUND as usize) {
        out.extend(ms);
    }
    out
}

/// Checks additivity over the cells and monotony of each cell against the
/// total class.
pub fn check_spectrum_laws(
    fam: &FamilyDescriptor,
    total: &RelativeClass,
    cells: &[RelativeClass],
    opts: SpectrumOptions,
) -> Result<LawReport> {
    if cells.is_empty() {
        return Err(Error::Invalid("empty partition".into()));
    }
    for t in partition_sample(fam) {
        let n = cells.iter().filter(|c| c.admits(&t)).count();
        if n > 1 {
            return Err(Error::Invalid(format!("cells overlap at {t}")));
        }
        if total.admits(&t) != (n == 1) {
            return Err(Error::Invalid(format!("cells do not cover {total} exactly at {t}")));
        }
    }
    let total_v = e_spectrum(fam, total, opts)?;
    let cell_vs = cells.iter().map(|c| e_spectrum(fam, c, opts)).collect::<Result<Vec<_>>>()?;
    let exact: Option<Vec<Mult>> = cell_vs.iter().map(|c| c.exact()).collect();
    let (additivity, monotony) = match (total_v.exact(), exact) {
        (Some(t), Some(cs)) => {
            let sum = cs.iter().fold(Mult::Finite(0), |a, &b| a + b);
            (Some(sum == t), Some(cs.iter().all(|&c| le(c, t))))
        }
        _ => (None, None),
    };
    Ok(LawReport { total: total_v, cells: cell_vs, additivity, monotony })
}

fn le(a: Mult, b: Mult) -> bool {
    match (a, b) {
        (_, Mult::Infinite) => true,
        (Mult::Infinite, Mult::Finite(_)) => false,
        (Mult::Finite(a), Mult::Finite(b)) => a <= b,
    }
}

/// Family of `n`-element theories in infinitely many unary symbols whose
/// E-closure adds exactly `mu` theories.
pub fn iilu_family(n: usize, mu: usize) -> Result<FamilyDescriptor> {
    if n == 0 {
        return Err(Error::Precondition("model size must be at least 1".into()));
    }
    FamilyDescriptor::generator(format!("iilu n={n} mu={mu}"), Generator::Iilu { n, mu })
}

/// One `n`-element structure for each subset of `R0..R{l-1}`, with the
/// chosen symbols full and the others empty.
pub fn power_family(m: usize, l: usize, n: usize) -> Result<FamilyDescriptor> {
    if !(1..=2).contains(&m) {
        return Err(Error::Precondition(format!("arity {m} outside 1..=2")));
    }
    if l > MAX_POWER_SYMBOLS {
        return Err(Error::CapExceeded(format!("{l} symbols > {MAX_POWER_SYMBOLS}")));
    }
    if n == 0 {
        return Err(Error::Precondition("model size must be at least 1".into()));
    }
    let sig = Signature::new((0..l).map(|i| Symbol::new(format!("R{i}"), m)).collect())?;
    let full: Vec<Vec<usize>> = crate::tuples(n, m).collect();
    let members = (0..1usize << l)
        .map(|mask| {
            let rels: Vec<(String, Vec<Vec<usize>>)> =
                (0..l).filter(|i| mask >> i & 1 == 1).map(|i| (format!("R{i}"), full.clone())).collect();
            let rels: Vec<(&str, Vec<Vec<usize>>)> = rels.iter().map(|(s, t)| (s.as_str(), t.clone())).collect();
            Structure::from_tuples(format!("S{mask}"), sig.clone(), n, &rels).map(TheoryRef::Fin)
        })
        .collect::<Result<Vec<_>>>()?;
    FamilyDescriptor::explicit(format!("power m={m} l={l} n={n}"), members)
}

/// Whether every explicit finite member is language-uniform in each arity.
pub fn members_lu(fam: &FamilyDescriptor) -> Result<bool> {
    match &fam.source {
        Source::Explicit(ms) => Ok(ms.iter().all(|t| match t {
            TheoryRef::Fin(s) => lu_check(s).values().all(|&b| b),
            _ => true,
        })),
        Source::Generator(_) => Err(Error::Unsupported("members of a generator are checked by probing".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{CardinalitySpectrum, SizeSet};

    fn cubes(disjoint: bool) -> FamilyDescriptor {
        FamilyDescriptor::generator("cubes", Generator::NcubeSeq { disjoint }).unwrap()
    }

    fn bounded() -> SpectrumOptions {
        SpectrumOptions { bounded: true, ..Default::default() }
    }

    #[test]
    fn cube_spectra() {
        let v = e_spectrum(&cubes(true), &RelativeClass::All, SpectrumOptions::default()).unwrap();
        assert_eq!(v.count, SpectrumCount::Exact(Mult::Finite(1)));
        assert_eq!(v.witnesses, vec![TheoryRef::T0Inf]);
        assert!(e_spectrum(&cubes(false), &RelativeClass::All, SpectrumOptions::default()).is_err());
        let v = e_spectrum(&cubes(false), &RelativeClass::All, bounded()).unwrap();
        assert_eq!(v.count, SpectrumCount::AtLeast(1));
        assert_eq!(v.witnesses, vec![TheoryRef::Limit(Limit::OmegaCube)]);
    }

    #[test]
    fn explicit_finite_is_closed() {
        let fam = power_family(1, 2, 2).unwrap();
        let v = e_spectrum(&fam, &RelativeClass::All, SpectrumOptions::default()).unwrap();
        assert_eq!(v.count, SpectrumCount::Exact(Mult::Finite(0)));
    }

    #[test]
    fn laws_on_cubes() {
        let r = check_spectrum_laws(
            &cubes(true),
            &RelativeClass::All,
            &[RelativeClass::Fin, RelativeClass::Inf],
            SpectrumOptions::default(),
        )
        .unwrap();
        assert_eq!(r.additivity, Some(true));
        assert_eq!(r.monotony, Some(true));
        assert!(check_spectrum_laws(&cubes(true), &RelativeClass::All, &[RelativeClass::Fin], SpectrumOptions::default())
            .is_err());
        assert!(check_spectrum_laws(
            &cubes(true),
            &RelativeClass::All,
            &[RelativeClass::All, RelativeClass::Inf],
            SpectrumOptions::default()
        )
        .is_err());
    }

    #[test]
    fn p_values() {
        let fam = FamilyDescriptor::generator(
            "sizes",
            Generator::EmptyLang {
                spectrum: CardinalitySpectrum::single(SizeSet::Set(CardinalitySet::multiples(2)), Mult::Finite(1)),
                tagged: true,
            },
        )
        .unwrap();
        for n in 1..6 {
            let v = p_spectrum_disjoint(&fam, &RelativeClass::FinN(n)).unwrap();
            assert_eq!(v.count, SpectrumCount::Exact(Mult::Finite(1)));
        }
        let with_inf = FamilyDescriptor::explicit("w", vec![TheoryRef::T0Inf, TheoryRef::T0(1)]).unwrap();
        let v = p_spectrum_disjoint(&with_inf, &RelativeClass::Inf).unwrap();
        assert_eq!(v.count, SpectrumCount::Exact(Mult::Finite(0)));
    }

    #[test]
    fn power_family_members() {
        let fam = power_family(1, 3, 2).unwrap();
        assert_eq!(fam.members(100).unwrap().len(), 8);
        assert!(members_lu(&fam).unwrap());
        assert_eq!(power_family(2, 0, 3).unwrap().members(10).unwrap().len(), 1);
        assert!(power_family(1, 11, 2).is_err());
    }

    #[test]
    fn class_text() {
        for s in ["all", "fin", "fin:8", "fin:<=4", "inf", "omega-cat", "profile:1=inf,2=1"] {
            assert_eq!(s.parse::<RelativeClass>().unwrap().to_string(), s);
        }
        let p: LanguageProfile = "1=inf".parse().unwrap();
        assert!(!p.is_finite_language());
        assert_eq!(p.support(), vec![1]);
    }
}
