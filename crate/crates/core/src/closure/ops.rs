use std::fmt;
use std::str::FromStr;

use super::family::{iilu_limits, Count, FamilyDescriptor, Generator, Source};
use super::spectrum::Mult;
use super::theory::{Limit, TheoryRef, UnaryPattern, Verdict};
use crate::cardinalities::CardinalitySet;
use crate::error::{Error, Result};
use crate::logic::{characteristic_sentence, scott_sentence, Formula, TypeCaps};
use crate::model_finder::{find_models, forces_infinity, signature_of, FinderCaps, InfinityVerdict};
use crate::structure::{Signature, Structure, Symbol};
use crate::types_algebra::automorphism_orbits;

/// Closure operator: E-combinations and the three P-combination variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpTag {
    E,
    P,
    Pd,
    Pdr,
}

impl FromStr for OpTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E" | "e" => Ok(OpTag::E),
            "P" | "p" => Ok(OpTag::P),
            "Pd" | "pd" => Ok(OpTag::Pd),
            "Pdr" | "pdr" => Ok(OpTag::Pdr),
            _ => Err(Error::Invalid(format!("unknown operator '{s}' (expected E, P, Pd or Pdr)"))),
        }
    }
}

impl fmt::Display for OpTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpTag::E => "E",
            OpTag::P => "P",
            OpTag::Pd => "Pd",
            OpTag::Pdr => "Pdr",
        })
    }
}

/// A verdict with the sentence supporting it.
#[derive(Clone, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    pub witness: Option<Formula>,
    pub note: String,
}

impl Decision {
    fn new(verdict: Verdict, witness: Option<Formula>, note: impl Into<String>) -> Self {
        Decision { verdict, witness, note: note.into() }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)?;
        if !self.note.is_empty() {
            write!(f, ": {}", self.note)?;
        }
        if let Some(w) = &self.witness {
            write!(f, "\nwitness: {w}")?;
        }
        Ok(())
    }
}

/// Sizes `n` for which `T0(n)` already belongs to the family.
fn t0_sizes(fam: &FamilyDescriptor) -> CardinalitySet {
    let mut out = fam.added_t0.clone();
    match &fam.source {
        Source::Explicit(ms) => {
            let ns = ms.iter().filter_map(|t| match t {
                TheoryRef::T0(n) => Some(*n),
                _ => None,
            });
            out = out.union(&CardinalitySet::finite(ns));
        }
        Source::Generator(Generator::EmptyLang { spectrum, tagged: false }) => {
            if let Ok(s) = spectrum.finite_sizes() {
                out = out.union(&s);
            }
        }
        Source::Generator(_) => {}
    }
    out
}

/// Closure of a family in pairwise disjoint languages. Under `E` it adds
/// `T0(n)` for every size carried by infinitely many members and `T0inf`
/// when the sizes are unbounded or infinitely many members are infinite.
/// The P variants add every missing `T0(n)` and `T0inf` to an infinite
/// family and leave finite families unchanged.
pub fn closure_disjoint(fam: &FamilyDescriptor, op: OpTag) -> Result<FamilyDescriptor> {
    if !fam.languages_disjoint() {
        return Err(Error::Precondition(format!(
            "family '{}' is not declared with pairwise disjoint languages",
            fam.name
        )));
    }
    let sp = fam.spectrum();
    let present = t0_sizes(fam);
    let (new_t0, add_inf) = match op {
        OpTag::E => (
            sp.infinitely_repeated()?.minus(&present),
            sp.finite_sizes_unbounded() || sp.infinite == Mult::Infinite,
        ),
        _ if !sp.is_infinite() => (CardinalitySet::Empty, false),
        _ => (CardinalitySet::all().minus(&present), true),
    };
    let mut out = fam.clone();
    if !new_t0.is_empty_set() {
        out.added_t0 = out.added_t0.union(&new_t0);
    }
    if add_inf && !fam.contains(&TheoryRef::T0Inf)? {
        out.added_t0_inf = true;
    }
    Ok(out)
}

pub fn closure_e_disjoint(fam: &FamilyDescriptor) -> Result<FamilyDescriptor> {
    closure_disjoint(fam, OpTag::E)
}

/// Exact E-closure where a certificate is available: disjoint languages,
/// finite families, and `iilu` generators.
pub fn closure_e(fam: &FamilyDescriptor) -> Result<FamilyDescriptor> {
    if fam.languages_disjoint() {
        return closure_e_disjoint(fam);
    }
    if fam.is_finite() {
        return Ok(fam.clone());
    }
    if let Some(Generator::Iilu { n, mu }) = fam.source_generator() {
        let mut out = fam.clone();
        for t in iilu_limits(*n, *mu) {
            if !out.contains(&t)? {
                out.added.push(t);
            }
        }
        return Ok(out);
    }
    Err(Error::Unsupported(format!(
        "no exact closure for the same-language family '{}'",
        fam.name
    )))
}

/// The `n`-element structure over `R0..R{window-1}` for a unary pattern.
fn unary_window(n: usize, pattern: &UnaryPattern, window: usize) -> Result<Structure> {
    let sig = Signature::new((0..window).map(|j| Symbol::new(format!("R{j}"), 1)).collect())?;
    let mut s = Structure::empty_relations("window", sig, n);
    for j in 0..window {
        if pattern.contains(j as u64) {
            for e in 0..n {
                s.tables_mut()[j].insert(vec![e]);
            }
        }
    }
    Ok(s)
}

/// Characteristic sentences of `t` of ranks `0..=q`; unary patterns are
/// cut to the first `window` symbols.
fn sentences_of(t: &TheoryRef, q: usize, window: usize) -> Result<Vec<Formula>> {
    let caps = TypeCaps::default();
    let mut out = t.declared_axioms();
    for k in 0..=q {
        let rep = match t {
            TheoryRef::Unary { n, pattern } => Some(unary_window(*n, pattern, window)?),
            _ => t.representative(k)?,
        };
        if let Some(rep) = rep {
            out.push(characteristic_sentence(&rep, k, caps)?);
        }
    }
    if out.is_empty() {
        return Err(Error::Unsupported(format!("no sentences available for {t}")));
    }
    Ok(out)
}

/// Tests whether every sentence of `t` holds in infinitely many members,
/// over the characteristic sentences of rank at most `q`.
pub fn is_accumulation_point(fam: &FamilyDescriptor, t: &TheoryRef, q: usize, probe: usize) -> Result<Decision> {
    if fam.contains(t)? {
        return Err(Error::Precondition(format!("{t} already belongs to '{}'", fam.name)));
    }
    if fam.is_finite() {
        return Ok(Decision::new(Verdict::No, Some(Formula::True), "a finite family has no accumulation points"));
    }
    let mut uncertified = false;
    for f in sentences_of(t, q, probe)? {
        match fam.count_satisfying(&f, probe)? {
            Count::Exact(k) => {
                return Ok(Decision::new(Verdict::No, Some(f), format!("only {k} members contain the witness")));
            }
            Count::AtLeast(_) => uncertified = true,
            Count::Infinite => {}
        }
    }
    let window = if matches!(t, TheoryRef::Unary { .. }) {
        format!(", symbols R0..R{}", probe.saturating_sub(1))
    } else {
        String::new()
    };
    Ok(if uncertified {
        Decision::new(
            Verdict::BoundedYes { q, n: Some(probe) },
            None,
            format!("some counts rest on probing {probe} members{window}"),
        )
    } else {
        Decision::new(
            Verdict::BoundedYes { q, n: None },
            None,
            format!("every characteristic sentence of rank <= {q} holds in infinitely many members{window}"),
        )
    })
}

/// Least generating set, or a member that is not isolated.
#[derive(Clone, Debug)]
pub enum GeneratingSet {
    Least { family: FamilyDescriptor, isolators: Vec<(TheoryRef, Formula)> },
    NoneExists { member: TheoryRef, reason: String },
}

fn empty_all(syms: &[Symbol]) -> Formula {
    Formula::and(
        syms.iter()
            .map(|s| {
                let xs: Vec<String> = (0..s.arity).map(|i| format!("y{i}")).collect();
                let mut body = Formula::not(Formula::atom(&s.name, &xs.iter().map(|x| x.as_str()).collect::<Vec<_>>()));
                for x in xs.iter().rev() {
                    body = Formula::forall(x, body);
                }
                body
            })
            .collect(),
    )
}

fn with_empty(f: Formula, syms: &[Symbol]) -> Formula {
    if syms.is_empty() {
        f
    } else {
        Formula::and(vec![f, empty_all(syms)])
    }
}

/// Sentence meant to single out `t` inside the family.
fn isolator(t: &TheoryRef, fam: &FamilyDescriptor, probe: usize) -> Result<Option<Formula>> {
    let mut syms: Vec<Symbol> = Vec::new();
    for m in fam.source_members(probe)? {
        if let TheoryRef::Fin(s) = m {
            for sym in s.sig().symbols() {
                if !syms.contains(sym) {
                    syms.push(sym.clone());
                }
            }
        }
    }
    Ok(Some(match t {
        TheoryRef::Fin(s) => scott_sentence(s),
        TheoryRef::T0(n) => with_empty(TheoryRef::exactly(*n), &syms),
        TheoryRef::T0Inf => {
            let top = fam.spectrum().max_size().unwrap_or(0);
            with_empty(TheoryRef::at_least(top + 1), &syms)
        }
        TheoryRef::Unary { pattern, .. } => {
            let top = pattern.plus.iter().chain(&pattern.minus).max().copied().unwrap_or(0);
            let parts = (0..=top)
                .map(|j| {
                    let a = Formula::exists("x", Formula::atom(&format!("R{j}"), &["x"]));
                    if pattern.contains(j) {
                        a
                    } else {
                        Formula::not(a)
                    }
                })
                .collect();
            Formula::and(parts)
        }
        _ => return Ok(None),
    }))
}

/// Members isolated by a sentence, checked on the first `probe` members of
/// generated families.
pub fn least_generating_set(fam: &FamilyDescriptor, probe: usize) -> Result<GeneratingSet> {
    let source_only = |fam: &FamilyDescriptor| {
        let mut f = fam.clone();
        f.added_t0 = CardinalitySet::Empty;
        f.added_t0_inf = false;
        f.added.clear();
        f
    };
    let least = match fam.source_generator() {
        Some(Generator::Perfect { n }) => {
            return Ok(GeneratingSet::NoneExists {
                member: TheoryRef::Unary { n: *n, pattern: UnaryPattern::finite([]) },
                reason: "every sentence true in it also holds in the members with one more full predicate beyond its symbols".into(),
            });
        }
        Some(Generator::NcubeSeq { disjoint: false }) | Some(Generator::EkClasses { disjoint: false, .. }) => {
            return Err(Error::Precondition(format!(
                "the closure of '{}' is not computed exactly",
                fam.name
            )));
        }
        Some(Generator::Iilu { n, mu: 0 }) => FamilyDescriptor::generator(format!("{}-isolated", fam.name), Generator::Iilu { n: *n, mu: 1 })?,
        Some(Generator::EmptyLang { spectrum, tagged: false })
            if !spectrum.infinite.is_zero() && spectrum.finite_sizes_unbounded() =>
        {
            let mut finite = spectrum.clone();
            finite.infinite = Mult::Finite(0);
            FamilyDescriptor::generator(
                format!("{}-finite", fam.name),
                Generator::EmptyLang { spectrum: finite, tagged: false },
            )?
        }
        Some(_) => source_only(fam),
        None if fam.is_finite() => source_only(fam),
        None => return Err(Error::Precondition("infinite explicit family".into())),
    };
    let mut isolators = Vec::new();
    for t in least.source_members(probe)? {
        let phi = isolator(&t, &least, probe)?;
        let Some(phi) = phi.filter(|phi| fam.count_satisfying(phi, probe).ok() == Some(Count::Exact(1))) else {
            return Ok(GeneratingSet::NoneExists {
                member: t,
                reason: "no isolating sentence found among Scott sentences and size sentences".into(),
            });
        };
        isolators.push((t, phi));
    }
    Ok(GeneratingSet::Least { family: least, isolators })
}

/// One line of a classification report.
#[derive(Clone, Debug)]
pub struct Finding {
    pub rule: &'static str,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ClassReport {
    pub family: String,
    pub findings: Vec<Finding>,
}

impl ClassReport {
    pub fn get(&self, rule: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.rule == rule)
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family {}", self.family)?;
        for x in &self.findings {
            writeln!(f, "  [{}] {}: {}", x.rule, x.verdict, x.detail)?;
        }
        Ok(())
    }
}

fn omega_categorical(t: &TheoryRef) -> bool {
    match t {
        TheoryRef::T0Inf | TheoryRef::Limit(Limit::DenseOrder) => true,
        TheoryRef::Tagged(inner, _) => omega_categorical(inner),
        _ => t.model_size().is_some(),
    }
}

/// Rule-by-rule classification of a family and its E-closure.
pub fn classify(fam: &FamilyDescriptor, probe: usize) -> Result<ClassReport> {
    let sp = fam.spectrum();
    let mut findings = Vec::new();
    let mut push = |rule, verdict, detail: String| findings.push(Finding { rule, verdict, detail });
    let finite = !sp.is_infinite();
    push(
        "finite-family",
        if finite { Verdict::Yes } else { Verdict::No },
        if finite {
            "finitely many members, so the family is E-closed".into()
        } else {
            format!("spectrum {sp}")
        },
    );
    let has_inf = !sp.infinite.is_zero();
    let unbounded = sp.finite_sizes_unbounded();
    push(
        "escapes-fin",
        if has_inf || unbounded { Verdict::Yes } else { Verdict::No },
        if unbounded {
            "finite sizes are unbounded, so the closure contains a theory with infinite models".into()
        } else if has_inf {
            "some member has infinite models".into()
        } else {
            format!("every member satisfies 'at most {} elements'", sp.max_size().unwrap_or(0))
        },
    );
    let fin_members = sp.has_finite_members();
    push(
        "closure-avoids-fin",
        if fin_members { Verdict::No } else { Verdict::Yes },
        if fin_members {
            "members with finite models lie in the closure".into()
        } else {
            "no member has finite models, so no closure member does".into()
        },
    );
    if fam.languages_disjoint() && !has_inf && !unbounded {
        let n = sp.max_size().unwrap_or(0);
        push(
            "size-bound",
            Verdict::Yes,
            format!("closure inside fin,<={n}; no n-categorical members for n > {n}"),
        );
    }
    let (verdict, detail) = if !has_inf && !unbounded {
        (Verdict::Yes, "bounded sizes keep the closure among finite-model theories".to_string())
    } else if fam.languages_disjoint() {
        let members = fam.source_members(probe)?;
        if members.iter().all(omega_categorical) {
            (Verdict::Yes, "closure adds only T0(n) and T0inf".to_string())
        } else {
            (Verdict::No, "a member is neither finite-model nor omega-categorical".to_string())
        }
    } else {
        let mut m2 = Vec::new();
        for t in fam.source_members(probe)? {
            if let TheoryRef::Fin(s) = t {
                if s.size() <= 16 {
                    m2.push(automorphism_orbits(&s, 2)?.len());
                }
            }
        }
        let grows = m2.windows(2).filter(|w| w[1] > w[0]).count();
        let text = m2.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if m2.len() >= 3 && grows + 1 >= m2.len() {
            (Verdict::BoundedNo { q: 2, n: Some(probe) }, format!("pair-orbit counts {text} keep growing"))
        } else {
            (Verdict::BoundedYes { q: 2, n: Some(probe) }, format!("pair-orbit counts {text} stay bounded"))
        }
    };
    push("fin-or-omega-categorical", verdict, detail);
    Ok(ClassReport { family: fam.name.clone(), findings })
}

/// Whether every sentence of `t` has a finite model, checked for rank `q`
/// and sizes up to `n`.
pub fn finite_approximable(t: &TheoryRef, q: usize, n: usize, caps: FinderCaps) -> Result<Decision> {
    if t.model_size().is_some() {
        return Ok(Decision::new(Verdict::Yes, None, "the theory has a finite model"));
    }
    if let Some(ax) = t.declared_axioms().into_iter().next().filter(|_| t.axioms_force_infinity()) {
        let sig = signature_of(&ax)?;
        return match forces_infinity(&ax, &sig, n, caps)? {
            InfinityVerdict::NoFiniteModelUpTo(k) => Ok(Decision::new(
                Verdict::No,
                Some(ax),
                format!("certified infinity axiom; no model of size <= {k}"),
            )),
            InfinityVerdict::RefutedBySize(k, _) => Err(Error::Invalid(format!(
                "declared infinity axiom of {t} has a model of size {k}"
            ))),
        };
    }
    let rep = t
        .representative(q)?
        .ok_or_else(|| Error::Unsupported(format!("no finite approximation available for {t}")))?;
    if rep.size() <= n {
        return Ok(Decision::new(
            Verdict::BoundedYes { q, n: Some(n) },
            None,
            format!("a {}-element structure satisfies every rank-{q} sentence", rep.size()),
        ));
    }
    let chi = characteristic_sentence(&rep, q, TypeCaps::default())?;
    let sig = rep.sig().clone();
    for size in 1..=n.min(caps.max_size) {
        if let Some(m) = find_models(&chi, &sig, size, 1, caps)?.into_iter().next() {
            return Ok(Decision::new(
                Verdict::BoundedYes { q, n: Some(n) },
                Some(chi),
                format!("a {}-element model satisfies every rank-{q} sentence", m.size()),
            ));
        }
    }
    Ok(Decision::new(Verdict::BoundedNo { q, n: Some(n) }, Some(chi), "no small model of the rank-q theory"))
}

/// Family of `count` structures built from copies of `base`, with the
/// P-combination recipe whose unassigned part is a copy of `base`.
#[derive(Clone, Debug)]
pub struct Prop33Recipe {
    pub base: Structure,
    pub blocks: Vec<Structure>,
}

const PROP33_MAX_SIZE: usize = 4096;

pub fn build_prop33_family(base: &Structure, count: usize) -> Result<(FamilyDescriptor, Prop33Recipe)> {
    if count < 2 {
        return Err(Error::Precondition("count must be at least 2".into()));
    }
    let n = base.size();
    if n == 0 || count * n > PROP33_MAX_SIZE || count * count * n > PROP33_MAX_SIZE {
        return Err(Error::CapExceeded(format!("{count} copies of a {n}-element base")));
    }
    let es: Vec<Symbol> = (0..count).map(|j| Symbol::new(format!("E{j}"), 2)).collect();
    if es.iter().any(|e| base.sig().get(&e.name).is_some()) {
        return Err(Error::Invalid("the base must not use the names E<j>".into()));
    }
    let mut blocks = Vec::new();
    for i in 0..count {
        let mut s = Structure::empty_relations(format!("A{i}"), base.sig().clone(), count * n);
        for c in 0..count {
            for (k, table) in base.tables().iter().enumerate() {
                for t in table {
                    s.tables_mut()[k].insert(t.iter().map(|&e| c * n + e).collect());
                }
            }
        }
        let mut extra = Vec::new();
        for (j, e) in es.iter().enumerate() {
            let table = crate::tuples(count * n, 2)
                .filter(|t| j != i || t[0] / n == t[1] / n)
                .collect();
            extra.push((e.clone(), table));
        }
        blocks.push(s.expand(extra)?);
    }
    let fam = FamilyDescriptor::explicit(
        format!("prop33-{}x{count}", base.name()),
        blocks.iter().cloned().map(TheoryRef::Fin).collect(),
    )?;
    Ok((fam, Prop33Recipe { base: base.clone(), blocks }))
}

impl Prop33Recipe {
    /// Disjoint P-combination of the blocks with `copies` unassigned copies
    /// of the base, whose symbols carry the suffix `_inf`.
    pub fn assemble(&self, copies: usize) -> Result<crate::combinators::PCombined> {
        let n = self.base.size();
        let renamed = self.base.rename_symbols(|s| format!("{s}_inf"))?;
        let mut extra = Structure::empty_relations("p_infty", renamed.sig().clone(), copies * n);
        for c in 0..copies {
            for (k, table) in renamed.tables().iter().enumerate() {
                for t in table {
                    extra.tables_mut()[k].insert(t.iter().map(|&e| c * n + e).collect());
                }
            }
        }
        crate::combinators::p_combination(&self.blocks, crate::combinators::PMode::Disjoint, &[], Some(&extra))
    }

    /// The unassigned part of `assemble(copies)` in the base language.
    pub fn extent(&self, copies: usize) -> Result<Structure> {
        let pc = self.assemble(copies)?;
        let ext = crate::combinators::p_infty_extent(&pc);
        ext.rename_symbols(|s| s.strip_suffix("_inf").unwrap_or(s).to_string())
    }

    /// Sizes of the unassigned parts realizable with up to `max_copies` copies.
    pub fn chat_probe(&self, max_copies: usize) -> Result<Vec<u64>> {
        (1..=max_copies).map(|m| Ok(self.assemble(m)?.unassigned().len() as u64)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::CanonicalForm;
    use crate::types_algebra::make_ncube;

    fn cubes(disjoint: bool) -> FamilyDescriptor {
        FamilyDescriptor::generator("cubes", Generator::NcubeSeq { disjoint }).unwrap()
    }

    fn pair() -> FamilyDescriptor {
        FamilyDescriptor::explicit(
            "pair",
            vec![TheoryRef::Fin(make_ncube(2).unwrap()), TheoryRef::Fin(make_ncube(3).unwrap())],
        )
        .unwrap()
    }

    #[test]
    fn accumulation_examples() {
        let d = is_accumulation_point(&cubes(true), &TheoryRef::T0Inf, 3, 6).unwrap();
        assert_eq!(d.verdict, Verdict::BoundedYes { q: 3, n: None });
        let d = is_accumulation_point(&cubes(false), &TheoryRef::Limit(Limit::OmegaCube), 3, 6).unwrap();
        assert_eq!(d.verdict, Verdict::BoundedYes { q: 3, n: None });
        let d = is_accumulation_point(&pair(), &TheoryRef::T0(5), 3, 6).unwrap();
        assert_eq!(d.verdict, Verdict::No);
        assert!(is_accumulation_point(&pair(), &TheoryRef::Fin(make_ncube(2).unwrap()), 2, 6).is_err());
    }

    #[test]
    fn finite_members_are_not_limits() {
        let d = is_accumulation_point(&cubes(false), &TheoryRef::T0(1), 2, 6).unwrap();
        assert_eq!(d.verdict, Verdict::No);
        assert!(d.witness.is_some());
    }

    #[test]
    fn closure_examples() {
        let c = closure_e_disjoint(&cubes(true)).unwrap();
        assert!(c.added_t0_inf && c.added_t0.is_empty_set());
        let fives = FamilyDescriptor::generator(
            "fives",
            Generator::EmptyLang { spectrum: "5:inf".parse().unwrap(), tagged: true },
        )
        .unwrap();
        let c = closure_e_disjoint(&fives).unwrap();
        assert!(c.added_t0.same_as(&CardinalitySet::finite([5])) && !c.added_t0_inf);
        let p = closure_e_disjoint(&pair());
        assert!(p.is_err(), "cubes share the symbol R");
        let sets = FamilyDescriptor::explicit("sets", vec![TheoryRef::T0(1), TheoryRef::T0(2)]).unwrap();
        let c = closure_e_disjoint(&sets).unwrap();
        assert!(c.additions(10).is_empty());
        assert!(closure_e_disjoint(&cubes(false)).is_err());
    }

    #[test]
    fn closure_is_idempotent() {
        for fam in [cubes(true), FamilyDescriptor::generator("all", Generator::EmptyLang { spectrum: "all:1".parse().unwrap(), tagged: false }).unwrap()] {
            let once = closure_e_disjoint(&fam).unwrap();
            let twice = closure_e_disjoint(&once).unwrap();
            assert_eq!(once.additions(50), twice.additions(50));
            assert!(once.spectrum().agrees_with(&twice.spectrum(), 50));
        }
    }

    #[test]
    fn least_sets() {
        let all = FamilyDescriptor::generator("all", Generator::EmptyLang { spectrum: "all:1".parse().unwrap(), tagged: false }).unwrap();
        let closed = closure_e_disjoint(&all).unwrap();
        assert!(closed.added_t0_inf);
        match least_generating_set(&closed, 5).unwrap() {
            GeneratingSet::Least { family, isolators } => {
                assert!(!family.added_t0_inf);
                assert_eq!(isolators.len(), 5);
            }
            other => panic!("{other:?}"),
        }
        match least_generating_set(&pair(), 5).unwrap() {
            GeneratingSet::Least { isolators, .. } => assert_eq!(isolators.len(), 2),
            other => panic!("{other:?}"),
        }
        let closed = closure_e_disjoint(&cubes(true)).unwrap();
        assert!(matches!(least_generating_set(&closed, 4).unwrap(), GeneratingSet::Least { .. }));
        let perfect = FamilyDescriptor::generator("perfect", Generator::Perfect { n: 1 }).unwrap();
        assert!(matches!(least_generating_set(&perfect, 4).unwrap(), GeneratingSet::NoneExists { .. }));
    }

    #[test]
    fn classification_examples() {
        let r = classify(&cubes(false), 6).unwrap();
        assert_eq!(r.get("escapes-fin").unwrap().verdict, Verdict::Yes);
        assert!(matches!(r.get("fin-or-omega-categorical").unwrap().verdict, Verdict::BoundedNo { .. }));
        let inf_only = FamilyDescriptor::generator(
            "inf",
            Generator::EmptyLang { spectrum: "inf:inf".parse().unwrap(), tagged: true },
        )
        .unwrap();
        let r = classify(&inf_only, 6).unwrap();
        assert_eq!(r.get("closure-avoids-fin").unwrap().verdict, Verdict::Yes);
        let r = classify(&pair(), 6).unwrap();
        assert_eq!(r.get("finite-family").unwrap().verdict, Verdict::Yes);
        assert_eq!(r.get("escapes-fin").unwrap().verdict, Verdict::No);
    }

    #[test]
    fn approximation_examples() {
        let caps = FinderCaps::default();
        let d = finite_approximable(&TheoryRef::T0Inf, 3, 6, caps).unwrap();
        assert_eq!(d.verdict, Verdict::BoundedYes { q: 3, n: Some(6) });
        let d = finite_approximable(&TheoryRef::Limit(Limit::DiscreteOrder), 2, 6, caps).unwrap();
        assert_eq!(d.verdict, Verdict::BoundedYes { q: 2, n: Some(6) });
        let d = finite_approximable(&TheoryRef::Limit(Limit::DenseOrder), 2, 6, caps).unwrap();
        assert_eq!(d.verdict, Verdict::No);
        assert!(d.witness.is_some());
    }

    #[test]
    fn prop33_family() {
        let q2 = make_ncube(2).unwrap();
        let (fam, recipe) = build_prop33_family(&q2, 3).unwrap();
        let ms = fam.source_members(10).unwrap();
        assert_eq!(ms.len(), 3);
        assert!(ms.iter().all(|t| t.model_size() == Some(12)));
        let ext = recipe.extent(1).unwrap();
        assert_eq!(CanonicalForm::of(&ext).unwrap(), CanonicalForm::of(&q2).unwrap());
        assert_eq!(recipe.chat_probe(3).unwrap(), vec![4, 8, 12]);
        let one = Structure::empty_relations("one", Signature::empty(), 1);
        let (fam, _) = build_prop33_family(&one, 2).unwrap();
        assert_eq!(fam.source_members(5).unwrap().len(), 2);
    }
}
