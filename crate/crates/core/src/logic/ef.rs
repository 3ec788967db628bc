//! Ehrenfeucht–Fraïssé types, Hintikka (characteristic) formulas and Scott
//! sentences of finite structures.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::formula::Formula;
use crate::error::{Error, Result};
use crate::structure::{CanonicalForm, Signature, Structure};

/// Resource limits for type computations.
#[derive(Clone, Copy, Debug)]
pub struct TypeCaps {
    /// Largest number of tuples materialized at any level of the recursion.
    pub max_tuples: usize,
}

impl Default for TypeCaps {
    fn default() -> Self {
        TypeCaps {
            max_tuples: 100_000,
        }
    }
}

/// Shared naming of rank-q types, so that keys from different structures
/// over the same signature can be compared.
#[derive(Default, Debug)]
pub struct TypeInterner {
    atomic: HashMap<Vec<u8>, u32>,
    compound: HashMap<(u32, Vec<u32>), u32>,
    next: u32,
}

impl TypeInterner {
    pub fn new() -> Self {
        Self::default()
    }

    fn atomic_id(&mut self, code: Vec<u8>) -> u32 {
        let next = &mut self.next;
        *self.atomic.entry(code).or_insert_with(|| {
            *next += 1;
            *next - 1
        })
    }

    fn compound_id(&mut self, atomic: u32, children: Vec<u32>) -> u32 {
        let next = &mut self.next;
        *self.compound.entry((atomic, children)).or_insert_with(|| {
            *next += 1;
            *next - 1
        })
    }
}

fn decode(code: usize, n: usize, len: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    let mut c = code;
    for slot in t.iter_mut().rev() {
        *slot = c % n;
        c /= n;
    }
    t
}

/// Equality pattern followed by the truth of every atom over the tuple.
fn atomic_code(s: &Structure, t: &[usize]) -> Vec<u8> {
    let m = t.len();
    let mut code = vec![m as u8];
    for i in 0..m {
        for j in i + 1..m {
            code.push((t[i] == t[j]) as u8);
        }
    }
    let mut args = Vec::new();
    for (sym, symbol) in s.sig().symbols().iter().enumerate() {
        for p in crate::tuples(m, symbol.arity) {
            args.clear();
            args.extend(p.iter().map(|&i| t[i]));
            code.push(s.holds(sym, &args) as u8);
        }
    }
    code
}

/// Type ids of all tuples of lengths `n..=n+q`; `levels[k]` holds the
/// rank-k ids of the tuples of length `n+q-k`, indexed by base-size code.
fn type_levels(
    s: &Structure,
    n: usize,
    q: usize,
    caps: TypeCaps,
    interner: &mut TypeInterner,
) -> Result<Vec<Vec<u32>>> {
    let size = s.size();
    let len = n + q;
    let total = (size as u128).pow(len as u32);
    if total > caps.max_tuples as u128 {
        return Err(Error::CapExceeded(format!(
            "rank-{q} types of {n}-tuples need {size}^{len} tuples (cap {})",
            caps.max_tuples
        )));
    }
    let mut levels: Vec<Vec<u32>> = Vec::with_capacity(q + 1);
    let leaf: Vec<u32> = (0..total as usize)
        .map(|c| interner.atomic_id(atomic_code(s, &decode(c, size, len))))
        .collect();
    levels.push(leaf);
    for k in 1..=q {
        let m = len - k;
        let count = size.pow(m as u32);
        let below = &levels[k - 1];
        let mut ids = Vec::with_capacity(count);
        for c in 0..count {
            let mut children: Vec<u32> = below[c * size..(c + 1) * size].to_vec();
            children.sort_unstable();
            children.dedup();
            let atomic = interner.atomic_id(atomic_code(s, &decode(c, size, m)));
            ids.push(interner.compound_id(atomic, children));
        }
        levels.push(ids);
    }
    Ok(levels)
}

/// Partition of the `n`-tuples of a structure into rank-`q` EF classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTypePartition {
    pub size: usize,
    pub n: usize,
    pub q: usize,
    /// Class index of each tuple, indexed by lexicographic tuple position.
    class_of: Vec<usize>,
    classes: usize,
}

impl RankTypePartition {
    fn from_labels<T: Ord + Clone>(size: usize, n: usize, q: usize, labels: &[T]) -> Self {
        // classes numbered by first occurrence in lexicographic tuple order
        let mut seen: BTreeMap<T, usize> = BTreeMap::new();
        let class_of = labels
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(l.clone()).or_insert(next)
            })
            .collect();
        RankTypePartition {
            size,
            n,
            q,
            class_of,
            classes: seen.len(),
        }
    }

    pub fn num_classes(&self) -> usize {
        self.classes
    }

    pub fn class_of(&self, tuple: &[usize]) -> usize {
        let code = tuple.iter().fold(0, |acc, &e| acc * self.size + e);
        self.class_of[code]
    }

    /// The classes as sorted tuple lists, ordered by least member.
    pub fn classes(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out = vec![Vec::new(); self.classes];
        for (code, &c) in self.class_of.iter().enumerate() {
            out[c].push(decode(code, self.size, self.n));
        }
        out
    }

    /// True when every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &RankTypePartition) -> bool {
        let mut map: HashMap<usize, usize> = HashMap::new();
        self.class_of.len() == coarser.class_of.len()
            && self
                .class_of
                .iter()
                .zip(&coarser.class_of)
                .all(|(&a, &b)| *map.entry(a).or_insert(b) == b)
    }

    /// Same partition, ignoring the rank label.
    pub fn same_classes(&self, other: &RankTypePartition) -> bool {
        self.class_of == other.class_of
    }
}

fn check_pre(s: &Structure, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("tuple length must be at least 1".into()));
    }
    if s.size() == 0 {
        return Err(Error::Precondition("structure must be nonempty".into()));
    }
    Ok(())
}

/// Rank-`q` EF partition of `n`-tuples with the default caps.
pub fn rank_types(s: &Structure, n: usize, q: usize) -> Result<RankTypePartition> {
    rank_types_with(s, n, q, TypeCaps::default())
}

/// Rank-`q` EF partition of `n`-tuples. When the direct recursion exceeds
/// the cap and `q ≥ size`, the partition is the automorphism-orbit
/// partition, which is computed instead.
pub fn rank_types_with(s: &Structure, n: usize, q: usize, caps: TypeCaps) -> Result<RankTypePartition> {
    check_pre(s, n)?;
    match rank_types_exact(s, n, q, caps) {
        Err(e) if e.is_cap() && q >= s.size() => {
            if (s.size() as u128).pow(n as u32) > caps.max_tuples as u128 {
                return Err(e);
            }
            let orbits = crate::types_algebra::orbit_labels(s, n)?;
            Ok(RankTypePartition::from_labels(s.size(), n, q, &orbits))
        }
        r => r,
    }
}

/// Rank-`q` EF partition computed by the back-and-forth recursion only.
pub fn rank_types_exact(s: &Structure, n: usize, q: usize, caps: TypeCaps) -> Result<RankTypePartition> {
    check_pre(s, n)?;
    let mut interner = TypeInterner::new();
    let levels = type_levels(s, n, q, caps, &mut interner)?;
    Ok(RankTypePartition::from_labels(s.size(), n, q, &levels[q]))
}

/// Identifier of the rank-`q` theory of `s` under `interner`.
pub fn theory_key(s: &Structure, q: usize, caps: TypeCaps, interner: &mut TypeInterner) -> Result<u32> {
    let levels = type_levels(s, 0, q, caps, interner)?;
    Ok(levels[q][0])
}

/// Whether `a` and `b` satisfy the same sentences of rank at most `q`.
pub fn rank_equivalent(a: &Structure, b: &Structure, q: usize, caps: TypeCaps) -> Result<bool> {
    if a.sig() != b.sig() {
        return Err(Error::SignatureMismatch(format!("{} vs {}", a.sig(), b.sig())));
    }
    // beyond the Scott rank of the smaller structure equivalence is isomorphism
    if q > a.size().min(b.size()) {
        return Ok(a.size() == b.size()
            && crate::refine::find_isomorphism(a, &[], b, &[]).is_some());
    }
    let mut interner = TypeInterner::new();
    Ok(theory_key(a, q, caps, &mut interner)? == theory_key(b, q, caps, &mut interner)?)
}

pub(crate) fn var(i: usize) -> String {
    format!("x{i}")
}

fn literals(s: &Structure, t: &[usize], all: bool) -> Vec<Formula> {
    let m = t.len();
    let mut out = Vec::new();
    let last = m.wrapping_sub(1);
    for j in 0..m {
        if !all && j != last {
            continue;
        }
        for i in 0..j {
            let e = Formula::eq(&var(i), &var(j));
            out.push(if t[i] == t[j] { e } else { Formula::not(e) });
        }
    }
    let mut args = Vec::new();
    for (sym, symbol) in s.sig().symbols().iter().enumerate() {
        for p in crate::tuples(m, symbol.arity) {
            if !all && !p.contains(&last) {
                continue;
            }
            args.clear();
            args.extend(p.iter().map(|&i| t[i]));
            let a = Formula::Atom(symbol.name.clone(), p.iter().map(|&i| var(i)).collect());
            out.push(if s.holds(sym, &args) { a } else { Formula::not(a) });
        }
    }
    out
}

struct Hintikka<'a> {
    s: &'a Structure,
    levels: Vec<Vec<u32>>,
    memo: HashMap<(usize, u32), Formula>,
}

impl Hintikka<'_> {
    /// Formula for tuple `t` (code `code`) at remaining rank `k`, listing only
    /// the literals that mention its last variable unless `root`.
    fn build(&mut self, t: &mut Vec<usize>, code: usize, k: usize, root: bool) -> Formula {
        let id = self.levels[k][code];
        if !root {
            if let Some(f) = self.memo.get(&(k, id)) {
                return f.clone();
            }
        }
        let mut parts = literals(self.s, t, root);
        if k > 0 {
            let size = self.s.size();
            let mut reps: BTreeMap<u32, usize> = BTreeMap::new();
            for b in 0..size {
                reps.entry(self.levels[k - 1][code * size + b]).or_insert(b);
            }
            let mut children: Vec<Formula> = reps
                .values()
                .map(|&b| {
                    t.push(b);
                    let f = self.build(t, code * size + b, k - 1, false);
                    t.pop();
                    f
                })
                .collect();
            children.sort();
            children.dedup();
            let v = var(t.len());
            for c in &children {
                parts.push(Formula::exists(&v, c.clone()));
            }
            parts.push(Formula::forall(&v, Formula::or(children)));
        }
        let f = Formula::and(parts);
        if !root {
            self.memo.insert((k, id), f.clone());
        }
        f
    }
}

/// Characteristic formula of rank `q` of `tuple` in `s`, in the variables
/// `x0, x1, ...`: satisfied by `b̄` in a structure `B` iff `(B, b̄)` and
/// `(s, tuple)` agree on all formulas of rank at most `q`.
pub fn characteristic_formula(s: &Structure, tuple: &[usize], q: usize, caps: TypeCaps) -> Result<Formula> {
    if let Some(&e) = tuple.iter().find(|&&e| e >= s.size()) {
        return Err(Error::OutOfRange {
            entry: e,
            size: s.size(),
        });
    }
    let n = tuple.len();
    let mut interner = TypeInterner::new();
    let levels = type_levels(s, n, q, caps, &mut interner)?;
    let code = tuple.iter().fold(0, |acc, &e| acc * s.size() + e);
    let mut h = Hintikka {
        s,
        levels,
        memo: HashMap::new(),
    };
    let mut t = tuple.to_vec();
    Ok(h.build(&mut t, code, q, true))
}

/// Characteristic sentence of rank `q`: axiomatizes the rank-`q` theory of `s`.
pub fn characteristic_sentence(s: &Structure, q: usize, caps: TypeCaps) -> Result<Formula> {
    characteristic_formula(s, &[], q, caps)
}

/// Scott sentence of a finite structure: true exactly in its isomorphic copies.
/// Its quantifier rank is `size + 1`.
pub fn scott_sentence(s: &Structure) -> Formula {
    let n = s.size();
    let xs: Vec<String> = (0..n).map(var).collect();
    let all: Vec<usize> = (0..n).collect();
    let mut body = literals(s, &all, true);
    let y = var(n);
    body.push(Formula::forall(
        &y,
        Formula::or(xs.iter().map(|x| Formula::eq(&y, x)).collect()),
    ));
    Formula::exists_many(&xs, Formula::and(body))
}

/// Limits for [`sentences_up_to`].
#[derive(Clone, Copy, Debug)]
pub struct SentenceBudget {
    pub max_rank: usize,
    pub max_sentences: usize,
    /// Structures of at most this size are used as type sources.
    pub max_structure_size: usize,
    pub caps: TypeCaps,
}

impl Default for SentenceBudget {
    fn default() -> Self {
        SentenceBudget {
            max_rank: 3,
            max_sentences: 10_000,
            max_structure_size: 3,
            caps: TypeCaps::default(),
        }
    }
}

/// All structures over `sig` with universe of the given size, one per
/// isomorphism class, in a deterministic order.
pub fn structures_up_to_iso(sig: &Signature, size: usize, max_raw: usize) -> Result<Vec<Structure>> {
    let cells: Vec<Vec<Vec<usize>>> = sig
        .symbols()
        .iter()
        .map(|s| crate::tuples(size, s.arity).collect())
        .collect();
    let bits: usize = cells.iter().map(|c| c.len()).sum();
    if bits >= 63 || (1u64 << bits) > max_raw as u64 {
        return Err(Error::CapExceeded(format!(
            "enumerating size-{size} structures over {sig} needs 2^{bits} candidates"
        )));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << bits) {
        let mut s = Structure::empty_relations("s", sig.clone(), size);
        let mut bit = 0;
        for (sym, cs) in cells.iter().enumerate() {
            for c in cs {
                if mask >> bit & 1 == 1 {
                    s.tables_mut()[sym].insert(c.clone());
                }
                bit += 1;
            }
        }
        if seen.insert(CanonicalForm::unbounded(&s)) {
            out.push(s.with_name(format!("s{size}_{}", out.len())));
        }
    }
    Ok(out)
}

/// Rank-`q` sentences over `sig` in Hintikka normal form: the characteristic
/// sentences of every structure up to `budget.max_structure_size`, and
/// `∃x τ(x)`, `∀x τ(x)` for each realized rank-`(q-1)` one-type `τ`.
/// Deduplicated up to renaming of bound variables.
pub fn sentences_up_to(sig: &Signature, q: usize, budget: SentenceBudget) -> Result<Vec<Formula>> {
    if q > budget.max_rank {
        return Err(Error::Precondition(format!(
            "rank {q} above the configured maximum {}",
            budget.max_rank
        )));
    }
    let mut keys = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |f: Formula, out: &mut Vec<Formula>| -> Result<()> {
        if keys.insert(f.alpha_key()) {
            if out.len() == budget.max_sentences {
                return Err(Error::BudgetExhausted(out.len()));
            }
            out.push(f);
        }
        Ok(())
    };
    let mut blocks = BTreeSet::new();
    for size in 1..=budget.max_structure_size {
        for s in structures_up_to_iso(sig, size, 1 << 20)? {
            push(characteristic_sentence(&s, q, budget.caps)?, &mut out)?;
            if q > 0 {
                for e in 0..size {
                    blocks.insert(characteristic_formula(&s, &[e], q - 1, budget.caps)?);
                }
            }
        }
    }
    let x = var(0);
    for tau in blocks {
        push(Formula::exists(&x, tau.clone()), &mut out)?;
        push(Formula::forall(&x, tau), &mut out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{holds, parse_formula};

    fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
        let mut t = Vec::new();
        for &(a, b) in edges {
            t.push(vec![a, b]);
            t.push(vec![b, a]);
        }
        let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
        Structure::from_tuples("g", sig, n, &[("R", t)]).unwrap()
    }

    fn square() -> Structure {
        graph(4, &[(0, 1), (1, 3), (3, 2), (2, 0)])
    }

    #[test]
    fn rank_zero_is_atomic() {
        let p = rank_types(&graph(3, &[(0, 1)]), 1, 0).unwrap();
        assert_eq!(p.num_classes(), 1);
        let p = rank_types(&graph(3, &[(0, 1)]), 2, 0).unwrap();
        assert_eq!(p.num_classes(), 3);
    }

    #[test]
    fn refinement_chain() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let p0 = rank_types(&g, 1, 0).unwrap();
        let p1 = rank_types(&g, 1, 1).unwrap();
        let p2 = rank_types(&g, 1, 2).unwrap();
        assert!(p1.refines(&p0) && p2.refines(&p1));
        assert_eq!(p1.num_classes(), 1);
        assert_eq!(p2.num_classes(), 2);
        assert_eq!(p2.classes()[0], vec![vec![0], vec![3]]);
    }

    #[test]
    fn characteristic_formula_defines_its_type() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        for q in 0..3 {
            let p = rank_types(&g, 1, q).unwrap();
            for a in 0..4 {
                let f = characteristic_formula(&g, &[a], q, TypeCaps::default()).unwrap();
                assert_eq!(f.quantifier_rank(), q);
                let sol = crate::logic::solution_set(&g, &f, &[var(0)]).unwrap();
                let class: BTreeSet<Vec<usize>> =
                    (0..4).filter(|&b| p.class_of(&[b]) == p.class_of(&[a])).map(|b| vec![b]).collect();
                assert_eq!(sol, class);
            }
        }
    }

    #[test]
    fn scott_sentence_pins_down_square() {
        let f = scott_sentence(&square());
        assert_eq!(f.quantifier_rank(), 5);
        assert!(holds(&square(), &f).unwrap());
        assert!(!holds(&graph(4, &[(0, 1), (1, 2), (2, 3)]), &f).unwrap());
    }

    #[test]
    fn rank_equivalence_of_paths() {
        let caps = TypeCaps::default();
        let a = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let b = graph(4, &[(0, 1), (1, 2), (2, 3)]).permuted(&[2, 0, 3, 1]);
        assert!(rank_equivalent(&a, &b, 5, caps).unwrap());
        assert!(rank_equivalent(&a, &square(), 2, caps).unwrap());
        assert!(!rank_equivalent(&a, &square(), 3, caps).unwrap());
    }

    #[test]
    fn unary_sentences_include_basic_quantified_atoms() {
        let sig = Signature::from_pairs(&[("P", 1)]).unwrap();
        let fs = sentences_up_to(&sig, 1, SentenceBudget::default()).unwrap();
        let keys: BTreeSet<_> = fs.iter().map(|f| f.alpha_key()).collect();
        for text in ["exists y. P(y)", "forall x. P(x)"] {
            let f = parse_formula(text, &sig).unwrap();
            assert!(keys.contains(&f.alpha_key()), "{text} missing");
        }
        assert_eq!(keys.len(), fs.len());
    }

    #[test]
    fn budget_is_reported() {
        let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
        let budget = SentenceBudget {
            max_sentences: 5,
            ..SentenceBudget::default()
        };
        assert_eq!(sentences_up_to(&sig, 2, budget), Err(Error::BudgetExhausted(5)));
        assert!(matches!(
            sentences_up_to(&sig, 4, SentenceBudget::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn rank_two_sentences_separate_square_from_edgeless() {
        let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
        let fs = sentences_up_to(&sig, 2, SentenceBudget::default()).unwrap();
        let edgeless = graph(4, &[]);
        assert!(fs
            .iter()
            .any(|f| holds(&square(), f).unwrap() != holds(&edgeless, f).unwrap()));
    }
}
