//! Bounded finite model search by backtracking over relation-table bits.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::logic::{eval_node, holds, Compiled, Formula, Oracle, Tri};
use crate::structure::{CanonicalForm, Signature, Structure};

/// Limits of the search.
#[derive(Clone, Copy, Debug)]
pub struct FinderCaps {
    pub max_size: usize,
    pub max_nodes: u64,
}

impl Default for FinderCaps {
    fn default() -> Self {
        FinderCaps {
            max_size: 8,
            max_nodes: 10_000_000,
        }
    }
}

/// Outcome of an infinity-forcing check.
#[derive(Clone, Debug, PartialEq)]
pub enum InfinityVerdict {
    /// A model of the given size exists.
    RefutedBySize(usize, Structure),
    /// No model of any size up to the bound.
    NoFiniteModelUpTo(usize),
}

/// The signature of the symbols occurring in `f`, sorted by name.
pub fn signature_of(f: &Formula) -> Result<Signature> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (name, arity) in f.symbols() {
        if let Some(&a) = seen.get(&name) {
            return Err(Error::Arity {
                symbol: name,
                expected: a,
                got: arity,
            });
        }
        seen.insert(name, arity);
    }
    let pairs: Vec<(&str, usize)> = seen.iter().map(|(n, &a)| (n.as_str(), a)).collect();
    Signature::from_pairs(&pairs)
}

struct Partial {
    n: usize,
    /// Per symbol, per tuple code: -1 unknown, 0 false, 1 true.
    cells: Vec<Vec<i8>>,
}

impl Oracle for Partial {
    fn size(&self) -> usize {
        self.n
    }

    fn atom(&self, sym: usize, args: &[usize]) -> Tri {
        let code = args.iter().fold(0, |acc, &e| acc * self.n + e);
        match self.cells[sym][code] {
            -1 => Tri::U,
            0 => Tri::F,
            _ => Tri::T,
        }
    }
}

/// Top-level `∃x1..xk` whose matrix asserts the `xi` pairwise distinct: the
/// witnesses can be fixed to elements `0..k`.
fn distinct_witness_prefix(f: &Formula) -> Option<(Vec<String>, &Formula)> {
    let mut vars = Vec::new();
    let mut cur = f;
    while let Formula::Exists(v, body) = cur {
        if vars.contains(v) {
            return None;
        }
        vars.push(v.clone());
        cur = body;
    }
    let Formula::And(parts) = cur else {
        return None;
    };
    if vars.len() < 2 {
        return None;
    }
    let distinct = |a: &String, b: &String| {
        parts.iter().any(|p| match p {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Eq(x, y) => (x == a && y == b) || (x == b && y == a),
                _ => false,
            },
            _ => false,
        })
    };
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            if !distinct(&vars[i], &vars[j]) {
                return None;
            }
        }
    }
    Some((vars, cur))
}

struct Search<'a> {
    sig: &'a Signature,
    compiled: Compiled,
    env0: Vec<usize>,
    order: Vec<(usize, usize)>,
    /// Cell-index images under each adjacent transposition (lex-leader).
    swaps: Vec<Vec<usize>>,
    nodes: u64,
    caps: FinderCaps,
    limit: usize,
    found: BTreeMap<CanonicalForm, Structure>,
}

impl Search<'_> {
    fn value(&self, p: &Partial, cell: usize) -> i8 {
        let (sym, code) = self.order[cell];
        p.cells[sym][code]
    }

    fn lex_ok(&self, p: &Partial) -> bool {
        self.swaps.iter().all(|img| {
            for (c, &d) in img.iter().enumerate() {
                let (a, b) = (self.value(p, c), self.value(p, d));
                if a < 0 || b < 0 {
                    return true;
                }
                if a != b {
                    return a < b;
                }
            }
            true
        })
    }

    fn dfs(&mut self, p: &mut Partial, depth: usize, known_true: bool) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.caps.max_nodes {
            return Err(Error::CapExceeded(format!(
                "search exceeded {} nodes",
                self.caps.max_nodes
            )));
        }
        let mut truth = known_true;
        if !known_true {
            let mut env = self.env0.clone();
            match eval_node(&self.compiled.root, p, &mut env, &mut Vec::new()) {
                Tri::F => return Ok(()),
                Tri::T => truth = true,
                Tri::U => {}
            }
        }
        if !self.lex_ok(p) {
            return Ok(());
        }
        if depth == self.order.len() {
            debug_assert!(truth);
            let mut s = Structure::empty_relations("model", self.sig.clone(), p.n);
            for (sym, cells) in p.cells.iter().enumerate() {
                for (code, &v) in cells.iter().enumerate() {
                    if v == 1 {
                        let t = decode(code, p.n, self.sig.symbols()[sym].arity);
                        s.tables_mut()[sym].insert(t);
                    }
                }
            }
            self.found.entry(CanonicalForm::unbounded(&s)).or_insert(s);
            return Ok(());
        }
        let (sym, code) = self.order[depth];
        for v in [0, 1] {
            if self.found.len() >= self.limit {
                break;
            }
            p.cells[sym][code] = v;
            self.dfs(p, depth + 1, truth)?;
        }
        p.cells[sym][code] = -1;
        Ok(())
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

/// Up to `limit` pairwise non-isomorphic models of `f` over `sig` with
/// universe size `n`, sorted by canonical form.
pub fn find_models(f: &Formula, sig: &Signature, n: usize, limit: usize, caps: FinderCaps) -> Result<Vec<Structure>> {
    f.require_sentence()?;
    f.typecheck(sig)?;
    if n == 0 {
        return Err(Error::Precondition("model size must be at least 1".into()));
    }
    if n > caps.max_size {
        return Err(Error::CapExceeded(format!(
            "model size {n} above the cap {}",
            caps.max_size
        )));
    }
    let (compiled, env0, symmetric) = match distinct_witness_prefix(f) {
        Some((vars, _)) if vars.len() > n => return Ok(Vec::new()),
        Some((vars, body)) => {
            let c = Compiled::new(body, sig, false)?;
            let mut env = vec![0; c.slots.max(1)];
            for (i, v) in vars.iter().enumerate() {
                if let Some(slot) = c.free.iter().position(|w| w == v) {
                    env[slot] = i;
                }
            }
            (c, env, false)
        }
        None => {
            let c = Compiled::new(f, sig, false)?;
            let env = vec![0; c.slots.max(1)];
            (c, env, true)
        }
    };
    let mut order = Vec::new();
    let mut cells = Vec::new();
    for (sym, s) in sig.symbols().iter().enumerate() {
        let count = n.pow(s.arity as u32);
        cells.push(vec![-1i8; count]);
        order.extend((0..count).map(|code| (sym, code)));
    }
    let index: BTreeMap<(usize, usize), usize> =
        order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut swaps = Vec::new();
    if symmetric {
        for i in 0..n.saturating_sub(1) {
            let img = order
                .iter()
                .map(|&(sym, code)| {
                    let arity = sig.symbols()[sym].arity;
                    let t: Vec<usize> = decode(code, n, arity)
                        .into_iter()
                        .map(|e| if e == i { i + 1 } else if e == i + 1 { i } else { e })
                        .collect();
                    index[&(sym, t.iter().fold(0, |acc, &e| acc * n + e))]
                })
                .collect();
            swaps.push(img);
        }
    }
    let mut search = Search {
        sig,
        compiled,
        env0,
        order,
        swaps,
        nodes: 0,
        caps,
        limit: limit.max(1),
        found: BTreeMap::new(),
    };
    let mut p = Partial { n, cells };
    search.dfs(&mut p, 0, false)?;
    let models: Vec<Structure> = search
        .found
        .into_values()
        .take(limit)
        .enumerate()
        .map(|(i, s)| s.with_name(format!("model{i}")))
        .collect();
    for m in &models {
        assert!(holds(m, f)?, "model finder returned a non-model");
    }
    Ok(models)
}

/// Sizes `1..=max` at which `f` has a model.
pub fn fin_spectrum(f: &Formula, sig: &Signature, max: usize, caps: FinderCaps) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for n in 1..=max {
        if !find_models(f, sig, n, 1, caps)?.is_empty() {
            out.insert(n);
        }
    }
    Ok(out)
}

/// Least model size up to `max`, or the bounded negative verdict.
pub fn forces_infinity(f: &Formula, sig: &Signature, max: usize, caps: FinderCaps) -> Result<InfinityVerdict> {
    for n in 1..=max {
        if let Some(m) = find_models(f, sig, n, 1, caps)?.into_iter().next() {
            return Ok(InfinityVerdict::RefutedBySize(n, m));
        }
    }
    Ok(InfinityVerdict::NoFiniteModelUpTo(max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_sentence, scott_sentence};
    use crate::types_algebra::make_ncube;

    fn r2() -> Signature {
        Signature::from_pairs(&[("R", 2)]).unwrap()
    }

    const NO_MAX: &str = "(forall x. !R(x,x)) & (forall x. forall y. forall z. R(x,y) & R(y,z) -> R(x,z)) & (forall x. exists y. R(x,y))";

    #[test]
    fn one_element_models() {
        let f = parse_sentence("exists x. x = x", &r2()).unwrap();
        assert_eq!(find_models(&f, &r2(), 1, 10, FinderCaps::default()).unwrap().len(), 2);
    }

    #[test]
    fn full_relation_forced() {
        let f = parse_sentence("forall x. forall y. R(x,y)", &r2()).unwrap();
        let ms = find_models(&f, &r2(), 2, 10, FinderCaps::default()).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].tuple_count(), 4);
    }

    #[test]
    fn strict_order_without_maximum() {
        let f = parse_sentence(NO_MAX, &r2()).unwrap();
        assert_eq!(
            forces_infinity(&f, &r2(), 6, FinderCaps::default()).unwrap(),
            InfinityVerdict::NoFiniteModelUpTo(6)
        );
    }

    #[test]
    fn scott_sentence_spectrum() {
        let q2 = make_ncube(2).unwrap();
        let f = scott_sentence(&q2);
        match forces_infinity(&f, &r2(), 4, FinderCaps::default()).unwrap() {
            InfinityVerdict::RefutedBySize(4, m) => {
                assert!(crate::types_algebra::isomorphic(&m, &q2).unwrap().is_some())
            }
            other => panic!("{other:?}"),
        }
        let caps = FinderCaps {
            max_size: 10,
            ..FinderCaps::default()
        };
        let q3 = make_ncube(3).unwrap();
        let spec = fin_spectrum(&scott_sentence(&q3), &r2(), 10, caps).unwrap();
        assert_eq!(spec, [8].into_iter().collect());
    }

    #[test]
    fn caps_are_errors() {
        let f = parse_sentence("exists x. R(x,x)", &r2()).unwrap();
        assert!(find_models(&f, &r2(), 9, 1, FinderCaps::default()).unwrap_err().is_cap());
        let tiny = FinderCaps {
            max_nodes: 3,
            ..FinderCaps::default()
        };
        assert!(find_models(&f, &r2(), 3, 100, tiny).unwrap_err().is_cap());
    }

    #[test]
    fn inferred_signature() {
        let f = crate::logic::parse_formula_untyped("exists x. P(x) & R(x,x)").unwrap();
        let sig = signature_of(&f).unwrap();
        assert_eq!(sig.to_string(), Signature::from_pairs(&[("P", 1), ("R", 2)]).unwrap().to_string());
        let bad = crate::logic::parse_formula_untyped("exists x. P(x) & P(x,x)").unwrap();
        assert!(signature_of(&bad).is_err());
    }
}
