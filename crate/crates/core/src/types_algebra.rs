//! Isomorphism, automorphism orbits, the type algebra of a finite structure,
//! hypercubes and language-uniformity analysis.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::logic::{solution_set, Formula};
use crate::refine::{find_isomorphism, pointed_invariant};
use crate::structure::{Signature, Structure};

/// Largest number of tuples whose orbits are computed.
pub const ORBIT_TUPLE_CAP: usize = 100_000;

fn same_symbols(a: &Signature, b: &Signature) -> bool {
    let key = |s: &Signature| -> BTreeSet<(String, usize)> {
        s.symbols().iter().map(|x| (x.name.clone(), x.arity)).collect()
    };
    key(a) == key(b)
}

/// An isomorphism `a → b` as an element map, if one exists. Symbols are
/// matched by name; their order in the signatures is irrelevant.
pub fn isomorphic(a: &Structure, b: &Structure) -> Result<Option<Vec<usize>>> {
    if !same_symbols(a.sig(), b.sig()) {
        return Err(Error::SignatureMismatch(format!("{} vs {}", a.sig(), b.sig())));
    }
    let b = b.reduct(a.sig())?;
    Ok(find_isomorphism(a, &[], &b, &[]))
}

/// Orbit label of every `n`-tuple, indexed by lexicographic position; labels
/// number orbits by their least tuple.
pub(crate) fn orbit_labels(s: &Structure, n: usize) -> Result<Vec<usize>> {
    let total = (s.size() as u128).pow(n as u32);
    if total > ORBIT_TUPLE_CAP as u128 {
        return Err(Error::CapExceeded(format!(
            "{}^{n} tuples exceed the orbit cap {ORBIT_TUPLE_CAP}",
            s.size()
        )));
    }
    let mut groups: HashMap<Vec<u32>, Vec<(Vec<usize>, usize)>> = HashMap::new();
    let mut labels = Vec::with_capacity(total as usize);
    let mut next = 0;
    for t in crate::tuples(s.size(), n) {
        let reps = groups.entry(pointed_invariant(s, &t)).or_default();
        let found = reps
            .iter()
            .find(|(r, _)| find_isomorphism(s, r, s, &t).is_some())
            .map(|&(_, l)| l);
        let label = found.unwrap_or_else(|| {
            reps.push((t.clone(), next));
            next += 1;
            next - 1
        });
        labels.push(label);
    }
    Ok(labels)
}

/// One automorphism orbit of `n`-tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Members in lexicographic order; the first is the representative.
    pub tuples: Vec<Vec<usize>>,
}

impl Orbit {
    pub fn representative(&self) -> &[usize] {
        &self.tuples[0]
    }

    /// A formula in `x0..x(n-1)` defining this orbit in `s`.
    pub fn defining_formula(&self, s: &Structure) -> Formula {
        orbit_formula(s, self.representative())
    }
}

/// Defines the orbit of `tuple` in `s`: the variables name a copy of `s`
/// exhausting the universe, and `x_i` is equal to the copy of `tuple[i]`.
pub fn orbit_formula(s: &Structure, tuple: &[usize]) -> Formula {
    let scott = crate::logic::scott_sentence(s);
    // scott = ∃y0..y(k-1) body, with ys named x0.. ; shift them past the tuple
    let k = s.size();
    let ys: Vec<String> = (0..k).map(|i| format!("y{i}")).collect();
    let mut body = strip_exists(&scott, k);
    body = rename_vars(&body, &|v: &str| {
        let i: usize = v[1..].parse().unwrap();
        if i < k {
            ys[i].clone()
        } else {
            format!("z{}", i - k)
        }
    });
    let links: Vec<Formula> = tuple
        .iter()
        .enumerate()
        .map(|(i, &e)| Formula::eq(&format!("x{i}"), &ys[e]))
        .collect();
    Formula::exists_many(&ys, Formula::and([vec![body], links].concat()))
}

fn strip_exists(f: &Formula, k: usize) -> Formula {
    let mut cur = f;
    for _ in 0..k {
        match cur {
            Formula::Exists(_, b) => cur = b,
            _ => unreachable!("scott sentence prefix"),
        }
    }
    cur.clone()
}

fn rename_vars(f: &Formula, r: &dyn Fn(&str) -> String) -> Formula {
    use Formula::*;
    match f {
        True | False => f.clone(),
        Atom(s, args) => Atom(s.clone(), args.iter().map(|a| r(a)).collect()),
        Eq(a, b) => Eq(r(a), r(b)),
        Not(g) => Formula::not(rename_vars(g, r)),
        And(gs) => And(gs.iter().map(|g| rename_vars(g, r)).collect()),
        Or(gs) => Or(gs.iter().map(|g| rename_vars(g, r)).collect()),
        Implies(a, b) => Formula::implies(rename_vars(a, r), rename_vars(b, r)),
        Iff(a, b) => Formula::iff(rename_vars(a, r), rename_vars(b, r)),
        Forall(v, g) => Forall(r(v), Box::new(rename_vars(g, r))),
        Exists(v, g) => Exists(r(v), Box::new(rename_vars(g, r))),
    }
}

/// Automorphism orbits of `n`-tuples, ordered by least member.
pub fn automorphism_orbits(s: &Structure, n: usize) -> Result<Vec<Orbit>> {
    if s.size() == 0 {
        return Err(Error::Precondition("structure must be nonempty".into()));
    }
    let labels = orbit_labels(s, n)?;
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut orbits = vec![Orbit { tuples: Vec::new() }; count];
    for (t, &l) in crate::tuples(s.size(), n).zip(&labels) {
        orbits[l].tuples.push(t);
    }
    Ok(orbits)
}

/// Element of a [`TypeAlgebra`]: a set of type indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeSet(pub BTreeSet<usize>);

impl TypeSet {
    pub fn of(types: impl IntoIterator<Item = usize>) -> Self {
        TypeSet(types.into_iter().collect())
    }
}

/// The Boolean algebra of sets of `n`-types of a finite structure, i.e. of
/// its definable `n`-ary relations.
#[derive(Clone, Debug)]
pub struct TypeAlgebra {
    pub n: usize,
    pub orbits: Vec<Orbit>,
}

impl TypeAlgebra {
    /// Number of types, `m_n`.
    pub fn m(&self) -> usize {
        self.orbits.len()
    }

    /// `2^m`, when it fits.
    pub fn element_count(&self) -> Option<u128> {
        1u128.checked_shl(self.m() as u32)
    }

    pub fn bottom(&self) -> TypeSet {
        TypeSet::default()
    }

    pub fn top(&self) -> TypeSet {
        TypeSet::of(0..self.m())
    }

    fn check(&self, u: &TypeSet) -> Result<()> {
        match u.0.iter().find(|&&t| t >= self.m()) {
            Some(t) => Err(Error::Invalid(format!(
                "type {t} is not among the {} types of the algebra",
                self.m()
            ))),
            None => Ok(()),
        }
    }

    pub fn meet(&self, u: &TypeSet, v: &TypeSet) -> Result<TypeSet> {
        self.check(u)?;
        self.check(v)?;
        Ok(TypeSet(u.0.intersection(&v.0).copied().collect()))
    }

    pub fn join(&self, u: &TypeSet, v: &TypeSet) -> Result<TypeSet> {
        self.check(u)?;
        self.check(v)?;
        Ok(TypeSet(u.0.union(&v.0).copied().collect()))
    }

    pub fn complement(&self, u: &TypeSet) -> Result<TypeSet> {
        self.check(u)?;
        Ok(TypeSet((0..self.m()).filter(|t| !u.0.contains(t)).collect()))
    }

    pub fn le(&self, u: &TypeSet, v: &TypeSet) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.0.is_subset(&v.0))
    }

    /// Label `⌈φ⌉` of an element.
    pub fn label(&self, u: &TypeSet) -> String {
        if u.0.is_empty() {
            "\u{2308}\u{ac}x\u{304}\u{2248}x\u{304}\u{2309}".to_string()
        } else if u.0.len() == self.m() {
            "\u{2308}x\u{304}\u{2248}x\u{304}\u{2309}".to_string()
        } else {
            let parts: Vec<String> = u.0.iter().map(|t| format!("t{t}")).collect();
            format!("\u{2308}{}\u{2309}", parts.join(" \u{2228} "))
        }
    }

    /// The tuples of `s` satisfying the relation an element stands for.
    pub fn extent(&self, u: &TypeSet) -> Result<BTreeSet<Vec<usize>>> {
        self.check(u)?;
        Ok(u.0
            .iter()
            .flat_map(|&t| self.orbits[t].tuples.iter().cloned())
            .collect())
    }

    /// All `2^m` elements; refuses when `m > 20`.
    pub fn elements(&self) -> Result<Vec<TypeSet>> {
        if self.m() > 20 {
            return Err(Error::CapExceeded(format!("2^{} algebra elements", self.m())));
        }
        Ok((0u64..1 << self.m())
            .map(|mask| TypeSet((0..self.m()).filter(|&t| mask >> t & 1 == 1).collect()))
            .collect())
    }

    pub fn cube(&self) -> Cube {
        Cube { m: self.m() }
    }
}

pub fn type_algebra(s: &Structure, n: usize) -> Result<TypeAlgebra> {
    Ok(TypeAlgebra {
        n,
        orbits: automorphism_orbits(s, n)?,
    })
}

/// Distance of two elements in the cube realization of the algebra.
pub fn rho(ta: &TypeAlgebra, u: &TypeSet, v: &TypeSet) -> Result<usize> {
    ta.check(u)?;
    ta.check(v)?;
    Ok(u.0.symmetric_difference(&v.0).count())
}

/// The `m`-dimensional cube: subsets of `{0..m-1}`, adjacent when they
/// differ in one element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cube {
    pub m: usize,
}

impl Cube {
    pub fn vertex_count(&self) -> u128 {
        1u128 << self.m
    }

    pub fn edge_count(&self) -> u128 {
        if self.m == 0 {
            0
        } else {
            self.m as u128 * (1u128 << (self.m - 1))
        }
    }

    /// Hamming distance of two vertices given as bit masks.
    pub fn distance(&self, u: u64, v: u64) -> usize {
        (u ^ v).count_ones() as usize
    }

    pub fn adjacent(&self, u: u64, v: u64) -> bool {
        self.distance(u, v) == 1
    }
}

/// The `n`-cube graph on `{0,1}^n`; vertex `i` is the binary word of `i`.
pub fn make_ncube(n: usize) -> Result<Structure> {
    if n > 12 {
        return Err(Error::Precondition(format!("cube dimension {n} above 12")));
    }
    let size = 1usize << n;
    let mut edges = Vec::new();
    for v in 0..size {
        for k in 0..n {
            edges.push(vec![v, v ^ (1 << k)]);
        }
    }
    let sig = Signature::from_pairs(&[("R", 2)]).expect("valid signature");
    Structure::from_tuples(format!("Q{n}"), sig, size, &[("R", edges)])
}

/// Whether in `t2` the relation defined by `phi` is strictly contained in the
/// one defined by `psi`, both read as `n`-ary in their sorted free variables.
pub fn witnesses(t2: &Structure, phi: &Formula, psi: &Formula, n: usize) -> Result<bool> {
    let vars: Vec<String> = phi.free_vars().union(&psi.free_vars()).cloned().collect();
    if vars.len() != n {
        return Err(Error::Invalid(format!(
            "expected {n} free variables, found {}: {vars:?}",
            vars.len()
        )));
    }
    let a = solution_set(t2, phi, &vars)?;
    let b = solution_set(t2, psi, &vars)?;
    Ok(a.len() < b.len() && a.is_subset(&b))
}

fn swapped(s: &Structure, i: usize, j: usize) -> Structure {
    let mut t = s.clone();
    t.tables_mut().swap(i, j);
    t
}

/// Whether exchanging the tables of symbols `i` and `j` (same arity) gives
/// a structure isomorphic to `s`.
fn interchangeable(s: &Structure, i: usize, j: usize) -> bool {
    s.table(i) == s.table(j) || find_isomorphism(s, &[], &swapped(s, i, j), &[]).is_some()
}

fn symbols_by_arity(s: &Structure) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, sym) in s.sig().symbols().iter().enumerate() {
        out.entry(sym.arity).or_default().push(i);
    }
    out
}

/// For each arity, whether every permutation of the nonempty tables of
/// that arity yields a structure isomorphic to `s`.
pub fn lu_check(s: &Structure) -> BTreeMap<usize, bool> {
    symbols_by_arity(s)
        .into_iter()
        .map(|(arity, syms)| {
            let nonempty: Vec<usize> = syms.into_iter().filter(|&i| !s.table(i).is_empty()).collect();
            // adjacent transpositions generate every permutation
            let ok = nonempty.windows(2).all(|w| interchangeable(s, w[0], w[1]));
            (arity, ok)
        })
        .collect()
}

/// For each arity, the coarsest partition of its symbols such that every
/// class-preserving substitution of tables yields a structure isomorphic
/// to `s`. Classes and their members follow signature order.
pub fn alu_partition(s: &Structure) -> BTreeMap<usize, Vec<Vec<String>>> {
    let name = |i: usize| s.sig().symbols()[i].name.clone();
    symbols_by_arity(s)
        .into_iter()
        .map(|(arity, syms)| {
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for i in syms {
                match classes.iter_mut().find(|c| interchangeable(s, c[0], i)) {
                    Some(c) => c.push(i),
                    None => classes.push(vec![i]),
                }
            }
            let named = classes
                .into_iter()
                .map(|c| c.into_iter().map(name).collect())
                .collect();
            (arity, named)
        })
        .collect()
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, parse_formula_untyped};

    fn cycle(n: usize) -> Structure {
        let mut t = Vec::new();
        for i in 0..n {
            t.push(vec![i, (i + 1) % n]);
            t.push(vec![(i + 1) % n, i]);
        }
        let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
        Structure::from_tuples("c", sig, n, &[("R", t)]).unwrap()
    }

    #[test]
    fn square_is_four_cycle() {
        let q2 = make_ncube(2).unwrap();
        let map = isomorphic(&q2, &cycle(4)).unwrap().unwrap();
        assert!(crate::refine::is_isomorphism(&q2, &cycle(4), &map));
        assert_eq!(isomorphic(&q2, &q2).unwrap(), Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn cube_counts() {
        let q3 = make_ncube(3).unwrap();
        assert_eq!((q3.size(), q3.table(0).len() / 2), (8, 12));
        assert_eq!(make_ncube(0).unwrap().size(), 1);
        assert!(make_ncube(13).is_err());
    }

    #[test]
    fn edgeless_pairs() {
        let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
        let e = Structure::empty_relations("e", sig, 3);
        let orbits = automorphism_orbits(&e, 2).unwrap();
        assert_eq!(orbits.len(), 2);
        assert_eq!(orbits[0].tuples.len(), 3);
    }

    #[test]
    fn orbit_formulas_define_orbits() {
        let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
        let path = Structure::from_tuples("p", sig, 3, &[("R", vec![vec![0, 1], vec![1, 2]])]).unwrap();
        let orbits = automorphism_orbits(&path, 1).unwrap();
        assert_eq!(orbits.len(), 3);
        for o in &orbits {
            let sol = solution_set(&path, &o.defining_formula(&path), &["x0".into()]).unwrap();
            assert_eq!(sol, o.tuples.iter().cloned().collect());
        }
    }

    #[test]
    fn algebra_lattice() {
        let ta = type_algebra(&cycle(5), 2).unwrap();
        assert_eq!(ta.m(), 3);
        assert_eq!(ta.element_count(), Some(8));
        assert_eq!(rho(&ta, &ta.bottom(), &ta.top()).unwrap(), 3);
        let u = TypeSet::of([1]);
        assert_eq!(ta.complement(&ta.complement(&u).unwrap()).unwrap(), u);
        assert!(rho(&ta, &TypeSet::of([7]), &u).is_err());
        assert_eq!(ta.label(&ta.top()), "\u{2308}x\u{304}\u{2248}x\u{304}\u{2309}");
    }

    #[test]
    fn witnessing_on_cube() {
        let q3 = make_ncube(3).unwrap();
        let phi = parse_formula("R(x,y)", q3.sig()).unwrap();
        let psi = parse_formula("exists z.(R(x,z)&R(z,y)) | R(x,y) | x=y", q3.sig()).unwrap();
        assert!(witnesses(&q3, &phi, &psi, 2).unwrap());
        assert!(!witnesses(&q3, &phi, &phi, 2).unwrap());
        let bot = parse_formula_untyped("!(x = x)").unwrap();
        let top = parse_formula_untyped("x = x").unwrap();
        assert!(witnesses(&q3, &bot, &top, 1).unwrap());
        assert!(witnesses(&q3, &phi, &psi, 3).is_err());
    }

    #[test]
    fn uniformity() {
        let sig = Signature::from_pairs(&[("R1", 1), ("R2", 1), ("R3", 1)]).unwrap();
        let all: Vec<Vec<usize>> = (0..3).map(|i| vec![i]).collect();
        let s = Structure::from_tuples("u", sig, 3, &[("R1", all.clone()), ("R3", all)]).unwrap();
        assert!(lu_check(&s)[&1]);
        assert_eq!(
            alu_partition(&s)[&1],
            vec![vec!["R1".to_string(), "R3".into()], vec!["R2".into()]]
        );

        let sig = Signature::from_pairs(&[("R1", 2), ("R2", 2)]).unwrap();
        let full: Vec<Vec<usize>> = crate::tuples(2, 2).collect();
        let s = Structure::from_tuples("v", sig, 2, &[("R1", full), ("R2", vec![vec![0, 1]])]).unwrap();
        assert!(!lu_check(&s)[&2]);
        assert_eq!(alu_partition(&s)[&2].len(), 2);
    }
}
