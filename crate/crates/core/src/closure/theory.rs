use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::logic::{evaluate_in, holds_lenient, Formula, Interpretation};
use crate::structure::{CanonicalForm, Signature, Structure, Symbol};
use crate::types_algebra::make_ncube;

/// A set of indices `j` given by residues modulo `modulus`, corrected by
/// finitely many additions and removals.
#[derive(Clone, Debug, Eq)]
pub struct UnaryPattern {
    pub modulus: u64,
    pub residues: BTreeSet<u64>,
    pub plus: BTreeSet<u64>,
    pub minus: BTreeSet<u64>,
}

impl UnaryPattern {
    pub fn finite(js: impl IntoIterator<Item = u64>) -> Self {
        UnaryPattern {
            modulus: 1,
            residues: BTreeSet::new(),
            plus: js.into_iter().collect(),
            minus: BTreeSet::new(),
        }
    }

    pub fn residue(modulus: u64, r: u64) -> Self {
        UnaryPattern {
            modulus,
            residues: [r].into_iter().collect(),
            plus: BTreeSet::new(),
            minus: BTreeSet::new(),
        }
    }

    pub fn with(mut self, j: u64) -> Self {
        self.minus.remove(&j);
        if !self.contains(j) {
            self.plus.insert(j);
        }
        self
    }

    pub fn contains(&self, j: u64) -> bool {
        if self.minus.contains(&j) {
            return false;
        }
        self.plus.contains(&j) || self.residues.contains(&(j % self.modulus))
    }

    fn horizon(&self, other: &Self) -> u64 {
        let tail = self
            .plus
            .iter()
            .chain(&self.minus)
            .chain(&other.plus)
            .chain(&other.minus)
            .max()
            .map_or(0, |m| m + 1);
        tail + self.modulus * other.modulus
    }
}

impl PartialEq for UnaryPattern {
    fn eq(&self, other: &Self) -> bool {
        (0..self.horizon(other)).all(|j| self.contains(j) == other.contains(j))
    }
}

impl fmt::Display for UnaryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for r in &self.residues {
            parts.push(if self.modulus == 1 {
                "all".to_string()
            } else {
                format!("{r} mod {}", self.modulus)
            });
        }
        let list = |s: &BTreeSet<u64>| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if !self.plus.is_empty() {
            parts.push(format!("+{{{}}}", list(&self.plus)));
        }
        if !self.minus.is_empty() {
            parts.push(format!("-{{{}}}", list(&self.minus)));
        }
        if parts.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Index of a unary-pattern symbol `R<j>`.
pub(crate) fn pattern_index(name: &str) -> Option<u64> {
    name.strip_prefix('R')?.parse().ok()
}

/// Theories given by a limit construction rather than a finite structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    /// Limit of the hypercubes `Q_n` in the language `{R/2}`.
    OmegaCube,
    /// Limit of the finite strict linear orders `{</2}`: a discrete order
    /// with both endpoints.
    DiscreteOrder,
    /// Dense linear order without endpoints, language `{</2}`.
    DenseOrder,
}

/// A theory handle with a sentence-membership oracle.
#[derive(Clone, Debug)]
pub enum TheoryRef {
    Fin(Structure),
    /// Theory of the `n`-element set in the empty language.
    T0(u64),
    /// Theory of an infinite set in the empty language.
    T0Inf,
    /// A copy of a theory in the language extended by an empty unary `Z<tag>`.
    Tagged(Box<TheoryRef>, usize),
    /// `n` elements with unary `R<j>` full for `j` in the pattern, empty otherwise.
    Unary { n: usize, pattern: UnaryPattern },
    Limit(Limit),
}

impl PartialEq for TheoryRef {
    fn eq(&self, other: &Self) -> bool {
        use TheoryRef::*;
        match (self, other) {
            (Fin(a), Fin(b)) => {
                let syms = |s: &Structure| -> BTreeSet<Symbol> { s.sig().symbols().iter().cloned().collect() };
                syms(a) == syms(b)
                    && a.size() == b.size()
                    && b.reduct(a.sig())
                        .map(|b| CanonicalForm::unbounded(a) == CanonicalForm::unbounded(&b))
                        .unwrap_or(false)
            }
            (T0(a), T0(b)) => a == b,
            (T0Inf, T0Inf) => true,
            (Tagged(a, i), Tagged(b, j)) => i == j && a == b,
            (Unary { n: a, pattern: p }, Unary { n: b, pattern: q }) => a == b && p == q,
            (Limit(a), Limit(b)) => a == b,
            _ => false,
        }
    }
}

/// The dense order on gap representatives: between any two chosen values
/// a fresh midpoint, and one value beyond each end.
struct DenseOrderModel;

impl Interpretation for DenseOrderModel {
    type Elem = f64;

    fn candidates(&self, bound: &[f64]) -> Vec<f64> {
        let mut vals: Vec<f64> = bound.to_vec();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals.dedup();
        if vals.is_empty() {
            return vec![0.0];
        }
        let mut out = vec![vals[0] - 1.0];
        for w in vals.windows(2) {
            out.push(w[0]);
            out.push((w[0] + w[1]) / 2.0);
        }
        out.push(*vals.last().unwrap());
        out.push(vals.last().unwrap() + 1.0);
        out
    }

    fn relation(&self, sym: &str, args: &[f64]) -> Result<bool> {
        Ok(sym == "L" && args.len() == 2 && args[0] < args[1])
    }
}

pub(crate) fn order_signature() -> Signature {
    Signature::from_pairs(&[("L", 2)]).expect("valid")
}

/// The strict linear order on `n` elements, symbol `L`.
pub fn linear_order(n: usize) -> Structure {
    let t: Vec<Vec<usize>> = crate::tuples(n, 2).filter(|t| t[0] < t[1]).collect();
    Structure::from_tuples(format!("order{n}"), order_signature(), n, &[("L", t)]).expect("valid")
}

/// Strict order without a maximal element; it has no finite model.
pub fn strict_order_no_max() -> Formula {
    crate::logic::parse_formula_untyped(
        "(forall x. !L(x,x)) & (forall x. forall y. forall z. L(x,y) & L(y,z) -> L(x,z)) & (forall x. exists y. L(x,y))",
    )
    .expect("valid axiom")
}

fn empty_set(n: usize) -> Structure {
    Structure::empty_relations(format!("set{n}"), Signature::empty(), n)
}

/// The `n`-element structure over the symbols `R<j>` occurring in `f`.
fn unary_model(n: usize, pattern: &UnaryPattern, f: &Formula) -> Result<Structure> {
    let mut syms = Vec::new();
    let mut full = Vec::new();
    for (name, arity) in f.symbols() {
        if arity == 1 {
            if let Some(j) = pattern_index(&name) {
                syms.push(Symbol::new(name.clone(), 1));
                full.push(pattern.contains(j));
            }
        }
    }
    let sig = Signature::new(syms)?;
    let mut s = Structure::empty_relations("pattern", sig, n);
    for (i, &on) in full.iter().enumerate() {
        if on {
            for e in 0..n {
                s.tables_mut()[i].insert(vec![e]);
            }
        }
    }
    Ok(s)
}

impl TheoryRef {
    /// Decides `f ∈ T` for a sentence `f`; symbols outside the theory's
    /// language denote empty relations.
    pub fn holds(&self, f: &Formula) -> Result<bool> {
        f.require_sentence()?;
        match self {
            TheoryRef::Fin(s) => holds_lenient(s, f),
            TheoryRef::T0(n) => holds_lenient(&empty_set(*n as usize), f),
            TheoryRef::T0Inf => holds_lenient(&empty_set(f.quantifier_rank().max(1)), f),
            TheoryRef::Tagged(inner, _) => inner.holds(f),
            TheoryRef::Unary { n, pattern } => holds_lenient(&unary_model(*n, pattern, f)?, f),
            TheoryRef::Limit(Limit::DenseOrder) => evaluate_in(&DenseOrderModel, &drop_foreign(f), &[]),
            TheoryRef::Limit(lim) => {
                let rep = self
                    .representative(f.quantifier_rank())?
                    .ok_or_else(|| Error::Unsupported(format!("no oracle for {lim:?}")))?;
                holds_lenient(&rep, f)
            }
        }
    }

    /// A finite structure with the same sentences of rank at most `q`, when
    /// one is available.
    pub fn representative(&self, q: usize) -> Result<Option<Structure>> {
        Ok(match self {
            TheoryRef::Fin(s) => Some(s.clone()),
            TheoryRef::T0(n) => Some(empty_set(*n as usize)),
            TheoryRef::T0Inf => Some(empty_set(q.max(1))),
            TheoryRef::Tagged(inner, tag) => match inner.representative(q)? {
                Some(s) => Some(s.expand(vec![(Symbol::new(format!("Z{tag}"), 1), BTreeSet::new())])?),
                None => None,
            },
            TheoryRef::Unary { .. } => None,
            TheoryRef::Limit(Limit::OmegaCube) => Some(make_ncube(q + 2)?),
            TheoryRef::Limit(Limit::DiscreteOrder) => Some(linear_order(1 << q.min(10))),
            TheoryRef::Limit(Limit::DenseOrder) => None,
        })
    }

    /// Sentences known to belong to the theory independently of rank.
    pub fn declared_axioms(&self) -> Vec<Formula> {
        match self {
            TheoryRef::Limit(Limit::DenseOrder) => vec![strict_order_no_max()],
            _ => Vec::new(),
        }
    }

    /// Whether the declared axioms are certified to have no finite model.
    pub fn axioms_force_infinity(&self) -> bool {
        matches!(self, TheoryRef::Limit(Limit::DenseOrder))
    }

    /// Size of the models, `None` for infinite ones.
    pub fn model_size(&self) -> Option<u64> {
        match self {
            TheoryRef::Fin(s) => Some(s.size() as u64),
            TheoryRef::T0(n) => Some(*n),
            TheoryRef::Tagged(inner, _) => inner.model_size(),
            TheoryRef::Unary { n, .. } => Some(*n as u64),
            TheoryRef::T0Inf | TheoryRef::Limit(_) => None,
        }
    }

    /// Sentence true exactly in the structures with `n` elements.
    pub fn exactly(n: u64) -> Formula {
        let xs: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let mut parts = Vec::new();
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                parts.push(Formula::not(Formula::eq(&xs[i], &xs[j])));
            }
        }
        let y = format!("x{n}");
        parts.push(Formula::forall(
            &y,
            Formula::or(xs.iter().map(|x| Formula::eq(&y, x)).collect()),
        ));
        Formula::exists_many(&xs, Formula::and(parts))
    }

    /// Sentence true exactly in the structures with at least `n` elements.
    pub fn at_least(n: u64) -> Formula {
        let xs: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let mut parts = Vec::new();
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                parts.push(Formula::not(Formula::eq(&xs[i], &xs[j])));
            }
        }
        Formula::exists_many(&xs, Formula::and(parts))
    }
}

fn drop_foreign(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Atom(s, args) if !(s == "L" && args.len() == 2) => False,
        True | False | Atom(..) | Eq(..) => f.clone(),
        Not(g) => Formula::not(drop_foreign(g)),
        And(gs) => And(gs.iter().map(drop_foreign).collect()),
        Or(gs) => Or(gs.iter().map(drop_foreign).collect()),
        Implies(a, b) => Formula::implies(drop_foreign(a), drop_foreign(b)),
        Iff(a, b) => Formula::iff(drop_foreign(a), drop_foreign(b)),
        Forall(v, g) => Formula::forall(v, drop_foreign(g)),
        Exists(v, g) => Formula::exists(v, drop_foreign(g)),
    }
}

impl fmt::Display for TheoryRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryRef::Fin(s) => write!(f, "Th({})", s.name()),
            TheoryRef::T0(n) => write!(f, "T0({n})"),
            TheoryRef::T0Inf => f.write_str("T0inf"),
            TheoryRef::Tagged(inner, tag) => write!(f, "{inner}[Z{tag}]"),
            TheoryRef::Unary { n, pattern } => write!(f, "U{n}[{pattern}]"),
            TheoryRef::Limit(Limit::OmegaCube) => f.write_str("Limit(omega-cube)"),
            TheoryRef::Limit(Limit::DiscreteOrder) => f.write_str("Limit(discrete-order)"),
            TheoryRef::Limit(Limit::DenseOrder) => f.write_str("Limit(dense-order)"),
        }
    }
}

/// Three-valued answer; the bounded variants record the bounds used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    BoundedYes { q: usize, n: Option<usize> },
    BoundedNo { q: usize, n: Option<usize> },
}

impl Verdict {
    pub fn is_definite(&self) -> bool {
        matches!(self, Verdict::Yes | Verdict::No)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bound = |q: &usize, n: &Option<usize>| match n {
            Some(n) => format!("q={q}, N={n}"),
            None => format!("q={q}"),
        };
        match self {
            Verdict::Yes => f.write_str("yes"),
            Verdict::No => f.write_str("no"),
            Verdict::BoundedYes { q, n } => write!(f, "bounded yes ({})", bound(q, n)),
            Verdict::BoundedNo { q, n } => write!(f, "bounded no ({})", bound(q, n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula_untyped;

    #[test]
    fn empty_language_oracles() {
        let two = parse_formula_untyped("exists x. exists y. !(x = y)").unwrap();
        assert!(!TheoryRef::T0(1).holds(&two).unwrap());
        assert!(TheoryRef::T0(2).holds(&two).unwrap());
        assert!(TheoryRef::T0Inf.holds(&two).unwrap());
        assert!(TheoryRef::T0(3).holds(&TheoryRef::exactly(3)).unwrap());
        assert!(!TheoryRef::T0Inf.holds(&TheoryRef::exactly(3)).unwrap());
        let foreign = parse_formula_untyped("exists x. P(x)").unwrap();
        assert!(!TheoryRef::T0Inf.holds(&foreign).unwrap());
    }

    #[test]
    fn dense_order_oracle() {
        let dlo = TheoryRef::Limit(Limit::DenseOrder);
        for (text, expect) in [
            ("forall x. forall y. L(x,y) -> exists z. L(x,z) & L(z,y)", true),
            ("forall x. exists y. L(x,y)", true),
            ("exists x. forall y. !L(y,x)", false),
            ("forall x. forall y. L(x,y) | L(y,x) | x = y", true),
        ] {
            let f = parse_formula_untyped(text).unwrap();
            assert_eq!(dlo.holds(&f).unwrap(), expect, "{text}");
        }
        assert!(dlo.holds(&strict_order_no_max()).unwrap());
    }

    #[test]
    fn unary_patterns() {
        let p = UnaryPattern::residue(2, 0).with(5);
        assert!(p.contains(4) && p.contains(5) && !p.contains(7));
        let mut q = UnaryPattern::residue(4, 0);
        q.residues.insert(2);
        assert_eq!(p, q.with(5));
        assert_ne!(p, UnaryPattern::residue(4, 0).with(5).with(2).with(6));
        let t = TheoryRef::Unary { n: 2, pattern: p };
        assert!(t.holds(&parse_formula_untyped("forall x. R5(x) & !R3(x)").unwrap()).unwrap());
    }

    #[test]
    fn fin_identity_ignores_symbol_order() {
        let sig_ab = Signature::from_pairs(&[("A", 1), ("B", 1)]).unwrap();
        let sig_ba = Signature::from_pairs(&[("B", 1), ("A", 1)]).unwrap();
        let a = Structure::from_tuples("a", sig_ab, 2, &[("A", vec![vec![0]])]).unwrap();
        let b = Structure::from_tuples("b", sig_ba, 2, &[("A", vec![vec![1]])]).unwrap();
        assert_eq!(TheoryRef::Fin(a), TheoryRef::Fin(b));
    }
}
