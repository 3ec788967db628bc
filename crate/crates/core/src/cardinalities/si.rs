use std::collections::{BTreeMap, BTreeSet};

use crate::combinators::PInftySelector;
use crate::error::{Error, Result};
use crate::logic::{rank_types, solution_set};
use crate::structure::Structure;
use crate::types_algebra::orbit_labels;

/// Which elements the relation is taken over.
#[derive(Clone, Debug)]
pub enum Selector {
    All,
    Elements(Vec<usize>),
    PInfty(PInftySelector),
}

impl Selector {
    fn pick(&self, s: &Structure) -> Result<Vec<usize>> {
        let out: Vec<usize> = match self {
            Selector::All => (0..s.size()).collect(),
            Selector::Elements(es) => {
                if let Some(&e) = es.iter().find(|&&e| e >= s.size()) {
                    return Err(Error::OutOfRange { entry: e, size: s.size() });
                }
                es.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
            }
            Selector::PInfty(sel) => solution_set(s, &sel.formula("x"), &["x".to_string()])?
                .into_iter()
                .map(|t| t[0])
                .collect(),
        };
        if out.is_empty() {
            return Err(Error::Precondition("the selector picks no element".into()));
        }
        Ok(out)
    }
}

/// Bounded-rank semi-isolation on selected elements.
#[derive(Clone, Debug)]
pub struct SIRelation {
    pub q: usize,
    pub elements: Vec<usize>,
    pub pairs: BTreeSet<(usize, usize)>,
}

impl SIRelation {
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn is_reflexive(&self) -> bool {
        self.elements.iter().all(|&a| self.contains(a, a))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| self.contains(b, a))
    }

    pub fn is_transitive(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| {
            self.pairs
                .range((b, 0)..=(b, usize::MAX))
                .all(|&(_, c)| self.contains(a, c))
        })
    }

    /// Classes of a symmetric relation, ordered by least member.
    pub fn classes(&self) -> Result<Vec<Vec<usize>>> {
        if !self.is_symmetric() {
            return Err(Error::Precondition("the relation is not symmetric".into()));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &a in &self.elements {
            if seen.insert(a) {
                let class: Vec<usize> = self.elements.iter().copied().filter(|&b| self.contains(a, b)).collect();
                seen.extend(class.iter().copied());
                out.push(class);
            }
        }
        Ok(out)
    }

    pub fn class_sizes(&self) -> Result<Vec<u64>> {
        Ok(self.classes()?.iter().map(|c| c.len() as u64).collect())
    }
}

/// `b` is semi-isolated over `a` at rank `q` when every element with the
/// same rank-`q` type over `a` as `b` lies in the connected component of
/// `a` and in the automorphism orbit of `b`. The relation returned is the
/// reflexive-transitive closure of these pairs on the selected elements.
pub fn si_relation(s: &Structure, selector: &Selector, q: usize) -> Result<SIRelation> {
    let elements = selector.pick(s)?;
    let pairs_types = rank_types(s, 2, q)?;
    let orbit = orbit_labels(s, 1)?;
    let mut component = vec![0; s.size()];
    for (i, c) in s.components().iter().enumerate() {
        for &e in c {
            component[e] = i;
        }
    }
    let mut pairs = BTreeSet::new();
    for &a in &elements {
        let mut by_type: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for y in 0..s.size() {
            by_type.entry(pairs_types.class_of(&[a, y])).or_default().push(y);
        }
        for &b in &elements {
            let same = &by_type[&pairs_types.class_of(&[a, b])];
            if same.iter().all(|&y| component[y] == component[a] && orbit[y] == orbit[b]) {
                pairs.insert((a, b));
            }
        }
    }
    for &a in &elements {
        pairs.insert((a, a));
    }
    // transitive closure
    loop {
        let extra: Vec<(usize, usize)> = pairs
            .iter()
            .flat_map(|&(a, b)| {
                pairs
                    .range((b, 0)..=(b, usize::MAX))
                    .map(move |&(_, c)| (a, c))
            })
            .filter(|p| !pairs.contains(p))
            .collect();
        if extra.is_empty() {
            break;
        }
        pairs.extend(extra);
    }
    Ok(SIRelation { q, elements, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Signature;

    fn blocks(sizes: &[usize]) -> Structure {
        let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
        let mut t = Vec::new();
        let mut off = 0;
        for &k in sizes {
            for a in 0..k {
                for b in 0..k {
                    if a != b {
                        t.push(vec![off + a, off + b]);
                    }
                }
            }
            off += k;
        }
        Structure::from_tuples("blocks", sig, off, &[("R", t)]).unwrap()
    }

    #[test]
    fn unlinked_blocks_give_classes() {
        let si = si_relation(&blocks(&[2, 3]), &Selector::All, 2).unwrap();
        assert!(si.is_reflexive() && si.is_transitive() && si.is_symmetric());
        assert_eq!(si.classes().unwrap(), vec![vec![0, 1], vec![2, 3, 4]]);
    }

    #[test]
    fn unique_neighbour() {
        let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
        let s = Structure::from_tuples("edge", sig, 3, &[("R", vec![vec![0, 1]])]).unwrap();
        let si = si_relation(&s, &Selector::All, 1).unwrap();
        assert!(si.contains(0, 1));
        assert!(!si.contains(0, 2));
    }

    #[test]
    fn full_rank_gives_components() {
        let s = blocks(&[1, 2, 2]);
        let si = si_relation(&s, &Selector::All, s.size()).unwrap();
        let comps: Vec<Vec<usize>> = s.components();
        assert_eq!(si.classes().unwrap(), comps);
    }
}
