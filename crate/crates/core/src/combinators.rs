//! E-combinations and P-combinations of finite structures.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::logic::Formula;
use crate::structure::{rename_disjoint, strip_suffix, CanonicalForm, Signature, Structure, Symbol};

/// Disjoint sum of structures in pairwise disjoint languages, with `E`
/// holding exactly inside each summand.
#[derive(Clone, Debug, PartialEq)]
pub struct ECombined {
    pub base: Structure,
    pub classes: Vec<Vec<usize>>,
}

fn require_inputs(ss: &[Structure]) -> Result<()> {
    if ss.is_empty() {
        return Err(Error::Precondition("at least one structure is required".into()));
    }
    if let Some(s) = ss.iter().find(|s| s.size() == 0) {
        return Err(Error::Precondition(format!("structure {} is empty", s.name())));
    }
    Ok(())
}

/// Copies the tables of `s` into `into`, shifting elements by `offset`.
fn copy_tables(into: &mut Structure, s: &Structure, offset: usize) {
    for (sym, table) in s.sig().symbols().iter().zip(s.tables()) {
        let target = into.sig().index_of(&sym.name).expect("symbol present");
        let tables = into.tables_mut();
        for t in table {
            tables[target].insert(t.iter().map(|&e| e + offset).collect());
        }
    }
}

fn blocks_of(sizes: impl IntoIterator<Item = usize>) -> Vec<Vec<usize>> {
    let mut offset = 0;
    sizes
        .into_iter()
        .map(|n| {
            let b = (offset..offset + n).collect();
            offset += n;
            b
        })
        .collect()
}

/// The E-union of `ss`; input languages are made disjoint by suffixing
/// every symbol with `_i`, where `i` is the input position.
pub fn e_combination(ss: &[Structure]) -> Result<ECombined> {
    require_inputs(ss)?;
    let renamed = rename_disjoint(ss);
    let mut symbols: Vec<Symbol> = renamed
        .iter()
        .flat_map(|s| s.sig().symbols().iter().cloned())
        .collect();
    symbols.push(Symbol::new("E", 2));
    let sig = Signature::new(symbols)?;
    let classes = blocks_of(ss.iter().map(|s| s.size()));
    let size = classes.iter().map(|c| c.len()).sum();
    let mut base = Structure::empty_relations("e_union", sig, size);
    for (s, class) in renamed.iter().zip(&classes) {
        copy_tables(&mut base, s, class[0]);
    }
    let e = base.sig().index_of("E").expect("E present");
    for class in &classes {
        for &a in class {
            for &b in class {
                base.tables_mut()[e].insert(vec![a, b]);
            }
        }
    }
    Ok(ECombined { base, classes })
}

impl ECombined {
    /// The `i`-th summand in its own (unsuffixed) language.
    pub fn component(&self, i: usize) -> Result<Structure> {
        let class = self
            .classes
            .get(i)
            .ok_or_else(|| Error::Invalid(format!("no class {i}")))?;
        let suffix = format!("_{i}");
        let own: Vec<Symbol> = self
            .base
            .sig()
            .symbols()
            .iter()
            .filter(|s| s.name.ends_with(&suffix) && s.name != "E")
            .cloned()
            .collect();
        let induced = self.base.induced(class).reduct(&Signature::new(own)?)?;
        strip_suffix(&induced, i)
    }
}

/// How the blocks of a P-combination may relate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PMode {
    /// Pairwise disjoint blocks hosting pairwise non-isomorphic structures.
    Disjoint,
    /// Disjoint blocks; isomorphic structures may repeat.
    Repeat,
    /// Blocks may share elements listed in an overlap map.
    General,
}

impl std::str::FromStr for PMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<PMode> {
        match s {
            "disjoint" => Ok(PMode::Disjoint),
            "repeat" => Ok(PMode::Repeat),
            "general" => Ok(PMode::General),
            _ => Err(Error::Invalid(format!("unknown mode {s}"))),
        }
    }
}

/// Identification of element `.0.1` of block `.0.0` with element `.1.1` of
/// block `.1.0`.
pub type Overlap = ((usize, usize), (usize, usize));

/// A P-combination: the union of the inputs expanded by unary `P0, P1, ...`
/// marking the blocks, possibly followed by unassigned elements.
#[derive(Clone, Debug, PartialEq)]
pub struct PCombined {
    pub base: Structure,
    pub mode: PMode,
    pub blocks: Vec<Vec<usize>>,
}

fn predicate(i: usize) -> String {
    format!("P{i}")
}

fn merged_signature(ss: &[Structure], extra: Option<&Structure>) -> Result<Signature> {
    let mut sig = Signature::empty();
    for s in ss {
        sig = sig.union(s.sig())?;
    }
    let preds = Signature::new((0..ss.len()).map(|i| Symbol::new(predicate(i), 1)).collect())?;
    if !sig.is_disjoint_from(&preds) {
        return Err(Error::Invalid("input signatures use a reserved name P<i>".into()));
    }
    sig = sig.union(&preds)?;
    if let Some(x) = extra {
        if !sig.is_disjoint_from(x.sig()) {
            return Err(Error::Invalid(
                "the extra extent must use a fresh auxiliary signature".into(),
            ));
        }
        sig = sig.union(x.sig())?;
    }
    Ok(sig)
}

/// Builds the P-combination of `ss`. `overlap` is only allowed in general
/// mode; `extra` appends elements outside every block, related only among
/// themselves.
pub fn p_combination(
    ss: &[Structure],
    mode: PMode,
    overlap: &[Overlap],
    extra: Option<&Structure>,
) -> Result<PCombined> {
    require_inputs(ss)?;
    if mode != PMode::General && !overlap.is_empty() {
        return Err(Error::Invalid("an overlap map requires mode general".into()));
    }
    if mode == PMode::Disjoint {
        let mut seen = BTreeSet::new();
        for s in ss {
            if !seen.insert((s.sig().to_string(), CanonicalForm::unbounded(s))) {
                return Err(Error::Invalid("repetition requires mode repeat".into()));
            }
        }
    }
    let sig = merged_signature(ss, extra)?;
    let offsets = blocks_of(ss.iter().map(|s| s.size()));
    let raw_size: usize = offsets.iter().map(|b| b.len()).sum();

    // merge identified elements, then renumber densely
    let mut parent: Vec<usize> = (0..raw_size).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &((bi, a), (bj, b)) in overlap {
        let get = |blk: usize, e: usize| -> Result<usize> {
            offsets
                .get(blk)
                .and_then(|o| o.get(e))
                .copied()
                .ok_or_else(|| Error::Invalid(format!("no element {e} in block {blk}")))
        };
        let (x, y) = (get(bi, a)?, get(bj, b)?);
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        parent[rx.max(ry)] = rx.min(ry);
    }
    let mut index = vec![usize::MAX; raw_size];
    let mut next = 0;
    for x in 0..raw_size {
        let r = find(&mut parent, x);
        if index[r] == usize::MAX {
            index[r] = next;
            next += 1;
        }
        index[x] = index[r];
    }
    let merged = next;
    let extra_size = extra.map_or(0, |x| x.size());
    let mut base = Structure::empty_relations("p_union", sig, merged + extra_size);
    let mut blocks = Vec::new();
    for (i, (s, block)) in ss.iter().zip(&offsets).enumerate() {
        let image: Vec<usize> = block.iter().map(|&x| index[x]).collect();
        if image.iter().collect::<BTreeSet<_>>().len() != image.len() {
            return Err(Error::Invalid(format!(
                "overlap map identifies two elements of block {i}"
            )));
        }
        for (sym, table) in s.sig().symbols().iter().zip(s.tables()) {
            let target = base.sig().index_of(&sym.name).expect("merged symbol");
            for t in table {
                base.tables_mut()[target].insert(t.iter().map(|&e| image[e]).collect());
            }
        }
        let p = base.sig().index_of(&predicate(i)).expect("predicate");
        for &e in &image {
            base.tables_mut()[p].insert(vec![e]);
        }
        blocks.push(image);
    }
    for (i, (s, image)) in ss.iter().zip(&blocks).enumerate() {
        let restricted = base.induced(image).reduct(s.sig())?;
        if restricted.tables() != s.tables() {
            return Err(Error::Invalid(format!(
                "overlap map is inconsistent with the relations of block {i}"
            )));
        }
    }
    if let Some(x) = extra {
        copy_tables(&mut base, x, merged);
    }
    Ok(PCombined { base, mode, blocks })
}

/// The type `p_∞(x) = {¬P_i(x) | i}` of elements outside every block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PInftySelector {
    pub predicates: Vec<String>,
}

impl PInftySelector {
    pub fn formula(&self, var: &str) -> Formula {
        Formula::and(
            self.predicates
                .iter()
                .map(|p| Formula::not(Formula::atom(p, &[var])))
                .collect(),
        )
    }
}

impl PCombined {
    pub fn selector(&self) -> PInftySelector {
        PInftySelector {
            predicates: (0..self.blocks.len()).map(predicate).collect(),
        }
    }

    /// Elements realizing `p_∞`.
    pub fn unassigned(&self) -> Vec<usize> {
        let covered: BTreeSet<usize> = self.blocks.iter().flatten().copied().collect();
        (0..self.base.size()).filter(|e| !covered.contains(e)).collect()
    }

    /// Block `i` restricted to the language of the structure it hosts.
    pub fn block(&self, i: usize, sig: &Signature) -> Result<Structure> {
        let b = self
            .blocks
            .get(i)
            .ok_or_else(|| Error::Invalid(format!("no block {i}")))?;
        self.base.induced(b).reduct(sig)
    }
}

/// The substructure on the realizations of `p_∞`, reduced to the symbols
/// having a tuple inside it.
pub fn p_infty_extent(pc: &PCombined) -> Structure {
    let elems = pc.unassigned();
    if elems.is_empty() {
        return Structure::empty_structure(Signature::empty()).with_name("p_infty");
    }
    let induced = pc.base.induced(&elems);
    let used: Vec<Symbol> = induced
        .sig()
        .symbols()
        .iter()
        .zip(induced.tables())
        .filter(|(_, t)| !t.is_empty())
        .map(|(s, _)| s.clone())
        .collect();
    induced
        .reduct(&Signature::new(used).expect("subset of a signature"))
        .expect("subsignature")
        .with_name("p_infty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types_algebra::{isomorphic, make_ncube};

    fn equivalence(k: usize, classes: usize) -> Structure {
        let sig = Signature::from_pairs(&[("E2", 2)]).unwrap();
        let n = k * classes;
        let t = crate::tuples(n, 2).filter(|t| t[0] / k == t[1] / k).collect();
        Structure::from_tuples("eq", sig, n, &[("E2", t)]).unwrap()
    }

    #[test]
    fn e_union_of_cubes() {
        let (q2, q3) = (make_ncube(2).unwrap(), make_ncube(3).unwrap());
        let ec = e_combination(&[q2.clone(), q3.clone()]).unwrap();
        assert_eq!(ec.base.size(), 12);
        assert_eq!(ec.classes.iter().map(|c| c.len()).collect::<Vec<_>>(), vec![4, 8]);
        assert!(isomorphic(&ec.component(1).unwrap(), &q3).unwrap().is_some());
        assert!(isomorphic(&ec.component(0).unwrap(), &q2).unwrap().is_some());
        let single = e_combination(&[q2]).unwrap();
        assert_eq!(single.base.table_by_name("E").unwrap().len(), 16);
        assert!(e_combination(&[]).is_err());
    }

    #[test]
    fn p_union_modes() {
        let q2 = make_ncube(2).unwrap();
        let pc = p_combination(&[q2.clone(), q2.clone()], PMode::Repeat, &[], None).unwrap();
        assert_eq!(pc.blocks.len(), 2);
        assert!(isomorphic(&pc.block(1, q2.sig()).unwrap(), &q2).unwrap().is_some());
        let err = p_combination(&[q2.clone(), q2.clone()], PMode::Disjoint, &[], None).unwrap_err();
        assert_eq!(err.to_string(), "invalid input: repetition requires mode repeat");
        assert_eq!(p_infty_extent(&pc).size(), 0);
    }

    #[test]
    fn loose_elements_form_the_extent() {
        let q2 = make_ncube(2).unwrap();
        let q3 = make_ncube(3).unwrap();
        let loose = Structure::empty_relations("x", Signature::empty(), 3);
        let pc = p_combination(&[q2, q3], PMode::Disjoint, &[], Some(&loose)).unwrap();
        let ext = p_infty_extent(&pc);
        assert_eq!(ext.size(), 3);
        assert!(ext.sig().is_empty());

        let classes = equivalence(2, 2);
        let pc = p_combination(&[make_ncube(1).unwrap()], PMode::Disjoint, &[], Some(&classes)).unwrap();
        assert!(isomorphic(&p_infty_extent(&pc), &classes).unwrap().is_some());
    }

    #[test]
    fn overlap_must_respect_relations() {
        let edge = make_ncube(1).unwrap();
        let sig = edge.sig().clone();
        let pair = Structure::empty_relations("two", sig, 2);
        let ok = p_combination(&[edge.clone(), edge.clone()], PMode::General, &[((0, 1), (1, 0))], None)
            .unwrap();
        assert_eq!(ok.base.size(), 3);
        let bad = p_combination(&[edge, pair], PMode::General, &[((0, 0), (1, 0)), ((0, 1), (1, 1))], None);
        assert!(bad.is_err());
    }
}
