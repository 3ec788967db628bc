//! Finite relational structures and their on-disk text format.
//!
//! A structure has universe `{0..size-1}`. Named elements are accepted by the
//! parser but erased: only their positions survive.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::refine;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Symbol {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// Ordered list of relation symbols with distinct names and positive arities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if s.arity == 0 {
                return Err(Error::ZeroArity(s.name.clone()));
            }
            if !seen.insert(s.name.as_str()) {
                return Err(Error::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn empty() -> Self {
        Signature::default()
    }

    /// Convenience constructor from `(name, arity)` pairs.
    pub fn from_pairs(pairs: &[(&str, usize)]) -> Result<Self> {
        Signature::new(pairs.iter().map(|&(n, a)| Symbol::new(n, a)).collect())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.name == name)
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    pub fn is_disjoint_from(&self, other: &Signature) -> bool {
        self.symbols.iter().all(|s| other.index_of(&s.name).is_none())
    }

    /// Union of two signatures; shared names must agree on arity.
    pub fn union(&self, other: &Signature) -> Result<Signature> {
        let mut out = self.symbols.clone();
        for s in &other.symbols {
            match self.get(&s.name) {
                Some(t) if t.arity != s.arity => {
                    return Err(Error::Arity {
                        symbol: s.name.clone(),
                        expected: t.arity,
                        got: s.arity,
                    })
                }
                Some(_) => {}
                None => out.push(s.clone()),
            }
        }
        Signature::new(out)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A finite relational structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    name: String,
    sig: Signature,
    size: usize,
    tables: Vec<BTreeSet<Vec<usize>>>,
}

impl Structure {
    /// Builds a structure, checking tuple lengths and ranges.
    pub fn new(
        name: impl Into<String>,
        sig: Signature,
        size: usize,
        tables: Vec<BTreeSet<Vec<usize>>>,
    ) -> Result<Self> {
        if tables.len() != sig.len() {
            return Err(Error::Invalid(format!(
                "{} tables for {} symbols",
                tables.len(),
                sig.len()
            )));
        }
        for (sym, table) in sig.symbols().iter().zip(&tables) {
            for t in table {
                if t.len() != sym.arity {
                    return Err(Error::Arity {
                        symbol: sym.name.clone(),
                        expected: sym.arity,
                        got: t.len(),
                    });
                }
                if let Some(&e) = t.iter().find(|&&e| e >= size) {
                    return Err(Error::OutOfRange { entry: e, size });
                }
            }
        }
        Ok(Structure {
            name: name.into(),
            sig,
            size,
            tables,
        })
    }

    /// Structure with all relations empty.
    pub fn empty_relations(name: impl Into<String>, sig: Signature, size: usize) -> Self {
        let tables = vec![BTreeSet::new(); sig.len()];
        Structure {
            name: name.into(),
            sig,
            size,
            tables,
        }
    }

    /// Builds from `(symbol, tuples)` pairs; symbols not mentioned stay empty.
    pub fn from_tuples(
        name: impl Into<String>,
        sig: Signature,
        size: usize,
        rels: &[(&str, Vec<Vec<usize>>)],
    ) -> Result<Self> {
        let mut tables = vec![BTreeSet::new(); sig.len()];
        for (sym, tuples) in rels {
            let i = sig
                .index_of(sym)
                .ok_or_else(|| Error::UnknownSymbol(sym.to_string()))?;
            tables[i].extend(tuples.iter().cloned());
        }
        Structure::new(name, sig, size, tables)
    }

    /// The designated empty structure (universe of size 0).
    pub fn empty_structure(sig: Signature) -> Self {
        Structure::empty_relations("empty", sig, 0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn tables(&self) -> &[BTreeSet<Vec<usize>>] {
        &self.tables
    }

    pub fn table(&self, sym: usize) -> &BTreeSet<Vec<usize>> {
        &self.tables[sym]
    }

    pub fn table_by_name(&self, name: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.sig.index_of(name).map(|i| &self.tables[i])
    }

    pub fn holds(&self, sym: usize, tuple: &[usize]) -> bool {
        self.tables[sym].contains(tuple)
    }

    pub(crate) fn tables_mut(&mut self) -> &mut Vec<BTreeSet<Vec<usize>>> {
        &mut self.tables
    }

    pub fn tuple_count(&self) -> usize {
        self.tables.iter().map(|t| t.len()).sum()
    }

    /// Restriction of the signature to `sub`; the universe is unchanged.
    pub fn reduct(&self, sub: &Signature) -> Result<Structure> {
        let mut tables = Vec::with_capacity(sub.len());
        for sym in sub.symbols() {
            let i = self
                .sig
                .index_of(&sym.name)
                .ok_or_else(|| Error::UnknownSymbol(sym.name.clone()))?;
            let own = &self.sig.symbols()[i];
            if own.arity != sym.arity {
                return Err(Error::Arity {
                    symbol: sym.name.clone(),
                    expected: own.arity,
                    got: sym.arity,
                });
            }
            tables.push(self.tables[i].clone());
        }
        Ok(Structure {
            name: self.name.clone(),
            sig: sub.clone(),
            size: self.size,
            tables,
        })
    }

    /// Induced substructure on `elems` (renumbered in the given order).
    pub fn induced(&self, elems: &[usize]) -> Structure {
        let mut pos = vec![usize::MAX; self.size];
        for (i, &e) in elems.iter().enumerate() {
            pos[e] = i;
        }
        let tables = self
            .tables
            .iter()
            .map(|t| {
                t.iter()
                    .filter(|tu| tu.iter().all(|&e| pos[e] != usize::MAX))
                    .map(|tu| tu.iter().map(|&e| pos[e]).collect())
                    .collect()
            })
            .collect();
        Structure {
            name: self.name.clone(),
            sig: self.sig.clone(),
            size: elems.len(),
            tables,
        }
    }

    /// Image under a universe bijection `perm` (old element -> new element).
    pub fn permuted(&self, perm: &[usize]) -> Structure {
        let tables = self
            .tables
            .iter()
            .map(|t| {
                t.iter()
                    .map(|tu| tu.iter().map(|&e| perm[e]).collect())
                    .collect()
            })
            .collect();
        Structure {
            name: self.name.clone(),
            sig: self.sig.clone(),
            size: self.size,
            tables,
        }
    }

    /// Renames symbols; `f` must be injective on the signature.
    pub fn rename_symbols(&self, f: impl Fn(&str) -> String) -> Result<Structure> {
        let sig = Signature::new(
            self.sig
                .symbols()
                .iter()
                .map(|s| Symbol::new(f(&s.name), s.arity))
                .collect(),
        )?;
        Ok(Structure {
            name: self.name.clone(),
            sig,
            size: self.size,
            tables: self.tables.clone(),
        })
    }

    /// Expansion by new symbols with the given tables.
    pub fn expand(&self, extra: Vec<(Symbol, BTreeSet<Vec<usize>>)>) -> Result<Structure> {
        let mut syms = self.sig.symbols().to_vec();
        let mut tables = self.tables.clone();
        for (s, t) in extra {
            syms.push(s);
            tables.push(t);
        }
        Structure::new(self.name.clone(), Signature::new(syms)?, self.size, tables)
    }

    /// Elements grouped into connected components of the Gaifman graph,
    /// each sorted, components ordered by least element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.size).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let n = p[c];
                p[c] = r;
                c = n;
            }
            r
        }
        for t in &self.tables {
            for tu in t {
                for w in tu.windows(2) {
                    let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.size {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// Isomorphism-invariant encoding; see [`CanonicalForm`].
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        CanonicalForm::of(self)
    }
}

/// Lexicographically least encoding of a structure over all relabellings of
/// its universe. Equal forms exactly when the structures are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    /// Largest universe accepted by canonicalization.
    pub const MAX_SIZE: usize = 10;

    pub fn of(s: &Structure) -> Result<Self> {
        if s.size() > Self::MAX_SIZE {
            return Err(Error::CapExceeded(format!(
                "canonical form limited to size {}, got {}",
                Self::MAX_SIZE,
                s.size()
            )));
        }
        Ok(Self::unbounded(s))
    }

    /// Canonical form without the size cap, for internal use on structures
    /// whose refinement is known to be effective.
    pub(crate) fn unbounded(s: &Structure) -> Self {
        let perm = refine::canonical_labeling(s, &[]);
        let mut bytes = Vec::new();
        for sym in s.sig().symbols() {
            bytes.extend(sym.name.as_bytes());
            bytes.push(0);
            bytes.extend((sym.arity as u32).to_be_bytes());
        }
        bytes.push(0xff);
        bytes.extend((s.size() as u32).to_be_bytes());
        for code in refine::encode(s, &perm) {
            bytes.extend(code.to_be_bytes());
        }
        CanonicalForm(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

/// Suffixes every symbol of the `i`-th structure with `_i`.
pub fn rename_disjoint(ss: &[Structure]) -> Vec<Structure> {
    ss.iter()
        .enumerate()
        .map(|(i, s)| {
            s.rename_symbols(|n| format!("{n}_{i}"))
                .expect("suffixing preserves distinctness")
        })
        .collect()
}

/// Inverse of [`rename_disjoint`] for a single structure.
pub fn strip_suffix(s: &Structure, index: usize) -> Result<Structure> {
    let suffix = format!("_{index}");
    s.rename_symbols(|n| n.strip_suffix(&suffix).unwrap_or(n).to_string())
}

// ---------------------------------------------------------------------------
// text format

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line with comments removed: (line number, column offset, text).
    fn next_line(&mut self) -> Option<(usize, usize, &'a str)> {
        for (i, raw) in self.iter.by_ref() {
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim_start();
            let offset = line.len() - trimmed.len();
            let trimmed = trimmed.trim_end();
            if !trimmed.is_empty() {
                return Some((i + 1, offset + 1, trimmed));
            }
        }
        None
    }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

fn parse_symbol_decl(tok: &str, line: usize, col: usize) -> Result<Symbol> {
    let (name, arity) = tok
        .split_once('/')
        .ok_or_else(|| Error::syntax(line, col, format!("expected Sym/arity, found `{tok}`")))?;
    if !is_ident(name) {
        return Err(Error::syntax(line, col, format!("bad symbol name `{name}`")));
    }
    let arity: usize = arity
        .parse()
        .map_err(|_| Error::syntax(line, col, format!("bad arity `{arity}`")))?;
    Ok(Symbol::new(name, arity))
}

/// Parses a single structure document.
pub fn parse_structure(text: &str) -> Result<Structure> {
    let mut lines = Lines {
        iter: text.lines().enumerate(),
    };
    let (ln, col, first) = lines
        .next_line()
        .ok_or_else(|| Error::syntax(1, 1, "empty document"))?;
    let name = match first.strip_prefix("structure") {
        Some(rest) if rest.starts_with(char::is_whitespace) && is_ident(rest.trim()) => {
            rest.trim().to_string()
        }
        _ => return Err(Error::syntax(ln, col, "expected `structure <name>`")),
    };

    let mut sig: Option<Signature> = None;
    let mut size: Option<usize> = None;
    let mut names: BTreeMap<String, usize> = BTreeMap::new();
    let mut tables: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    let mut ended = false;

    while let Some((ln, col, line)) = lines.next_line() {
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest_col = col + kw.len() + 1;
        match kw {
            "signature" => {
                if sig.is_some() {
                    return Err(Error::syntax(ln, col, "signature declared twice"));
                }
                let mut syms = Vec::new();
                for tok in rest.split_whitespace() {
                    syms.push(parse_symbol_decl(tok, ln, rest_col)?);
                }
                let s = Signature::new(syms)?;
                tables = vec![BTreeSet::new(); s.len()];
                sig = Some(s);
            }
            "universe" => {
                if sig.is_none() {
                    return Err(Error::syntax(ln, col, "universe before signature"));
                }
                let toks: Vec<&str> = rest.split_whitespace().collect();
                match toks.as_slice() {
                    [n] if n.chars().all(|c| c.is_ascii_digit()) => {
                        size = Some(n.parse().map_err(|_| {
                            Error::syntax(ln, rest_col, format!("bad universe size `{n}`"))
                        })?)
                    }
                    named => {
                        for (i, t) in named.iter().enumerate() {
                            if !is_ident(t) || names.insert(t.to_string(), i).is_some() {
                                return Err(Error::syntax(
                                    ln,
                                    rest_col,
                                    format!("bad or repeated element name `{t}`"),
                                ));
                            }
                        }
                        size = Some(named.len());
                    }
                }
            }
            "rel" => {
                let sig = sig
                    .as_ref()
                    .ok_or_else(|| Error::syntax(ln, col, "rel before signature"))?;
                let size =
                    size.ok_or_else(|| Error::syntax(ln, col, "rel before universe"))?;
                let (sym, tuples) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::syntax(ln, rest_col, "expected `rel Sym: ...`"))?;
                let sym = sym.trim();
                let idx = sig
                    .index_of(sym)
                    .ok_or_else(|| Error::UnknownSymbol(sym.to_string()))?;
                let arity = sig.symbols()[idx].arity;
                let tuple_col = rest_col + rest.find(':').unwrap_or(0) + 1;
                for tuple in parse_tuples(tuples, ln, tuple_col, &names)? {
                    if tuple.len() != arity {
                        return Err(Error::Arity {
                            symbol: sym.to_string(),
                            expected: arity,
                            got: tuple.len(),
                        });
                    }
                    if let Some(&e) = tuple.iter().find(|&&e| e >= size) {
                        return Err(Error::OutOfRange { entry: e, size });
                    }
                    tables[idx].insert(tuple);
                }
            }
            "end" => {
                ended = true;
                break;
            }
            other => {
                return Err(Error::syntax(ln, col, format!("unknown keyword `{other}`")));
            }
        }
    }
    if !ended {
        return Err(Error::syntax(text.lines().count().max(1), 1, "missing `end`"));
    }
    if let Some((ln, col, _)) = lines.next_line() {
        return Err(Error::syntax(ln, col, "text after `end`"));
    }
    let sig = sig.ok_or_else(|| Error::syntax(1, 1, "missing signature"))?;
    let size = size.ok_or_else(|| Error::syntax(1, 1, "missing universe"))?;
    Structure::new(name, sig, size, tables)
}

fn parse_tuples(
    text: &str,
    line: usize,
    col: usize,
    names: &BTreeMap<String, usize>,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' | b',' => i += 1,
            b'(' => {
                let close = text[i..]
                    .find(')')
                    .ok_or_else(|| Error::syntax(line, col + i, "unclosed tuple"))?;
                let inner = &text[i + 1..i + close];
                let mut tuple = Vec::new();
                for part in inner.split(',') {
                    let part = part.trim();
                    let v = if let Ok(v) = part.parse::<usize>() {
                        v
                    } else if let Some(&v) = names.get(part) {
                        v
                    } else {
                        return Err(Error::syntax(
                            line,
                            col + i + 1,
                            format!("bad tuple entry `{part}`"),
                        ));
                    };
                    tuple.push(v);
                }
                out.push(tuple);
                i += close + 1;
            }
            _ => return Err(Error::syntax(line, col + i, "expected `(`")),
        }
    }
    Ok(out)
}

/// Renders a structure in the text format; `parse_structure` inverts it.
pub fn render_structure(s: &Structure) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "structure {}", s.name());
    let decls: Vec<String> = s.sig().symbols().iter().map(|x| x.to_string()).collect();
    if decls.is_empty() {
        out.push_str("signature\n");
    } else {
        let _ = writeln!(out, "signature {}", decls.join(" "));
    }
    let _ = writeln!(out, "universe {}", s.size());
    for (sym, table) in s.sig().symbols().iter().zip(s.tables()) {
        if table.is_empty() {
            continue;
        }
        let tuples: Vec<String> = table
            .iter()
            .map(|t| {
                let parts: Vec<String> = t.iter().map(|e| e.to_string()).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let _ = writeln!(out, "rel {}: {}", sym.name, tuples.join(" "));
    }
    out.push_str("end\n");
    out
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_structure(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
        let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
        let mut t = BTreeSet::new();
        for &(a, b) in edges {
            t.insert(vec![a, b]);
            t.insert(vec![b, a]);
        }
        Structure::new("g", sig, n, vec![t]).unwrap()
    }

    #[test]
    fn parses_minimal_document() {
        let s = parse_structure("structure a\nsignature R/2\nuniverse 2\nrel R: (0,1)\nend\n")
            .unwrap();
        assert_eq!(s.size(), 2);
        assert_eq!(s.table(0).iter().cloned().collect::<Vec<_>>(), vec![vec![0, 1]]);
    }

    #[test]
    fn rejects_out_of_range_entry() {
        let err = parse_structure("structure a\nsignature R/2\nuniverse 2\nrel R: (0,5)\nend")
            .unwrap_err();
        assert_eq!(err, Error::OutOfRange { entry: 5, size: 2 });
        assert_eq!(err.to_string(), "tuple entry 5 \u{2265} universe 2");
    }

    #[test]
    fn rejects_arity_mismatch_and_duplicates() {
        let e = parse_structure("structure a\nsignature R/2\nuniverse 2\nrel R: (0)\nend");
        assert!(matches!(e, Err(Error::Arity { .. })));
        let e = parse_structure("structure a\nsignature R/2 R/1\nuniverse 2\nend");
        assert_eq!(e.unwrap_err(), Error::DuplicateSymbol("R".into()));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse_structure("structure a\nsignature R/2\n  frobnicate\nend").unwrap_err();
        match e {
            Error::Syntax { pos, .. } => assert_eq!((pos.line, pos.col), (3, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_structure("structure a\nsignature R/2\nuniverse 1"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn comments_and_named_elements() {
        let s = parse_structure(
            "# a path\nstructure p\nsignature E/2\nuniverse a b c # three\nrel E: (a,b) (b,c)\nend",
        )
        .unwrap();
        assert_eq!(s.size(), 3);
        assert!(s.holds(0, &[1, 2]));
    }

    #[test]
    fn reduct_drops_tables() {
        let sig = Signature::from_pairs(&[("R", 2), ("C", 1)]).unwrap();
        let s = Structure::from_tuples("gc", sig, 3, &[("R", vec![vec![0, 1]]), ("C", vec![vec![2]])])
            .unwrap();
        let bare = s.reduct(&Signature::from_pairs(&[("R", 2)]).unwrap()).unwrap();
        assert_eq!(bare.sig().len(), 1);
        assert_eq!(bare.tuple_count(), 1);
        assert_eq!(s.reduct(s.sig()).unwrap(), s);
        assert!(matches!(
            s.reduct(&Signature::from_pairs(&[("Q", 2)]).unwrap()),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(
            s.reduct(&Signature::from_pairs(&[("R", 3)]).unwrap()),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn rename_disjoint_suffixes_everything() {
        let g = graph(2, &[(0, 1)]);
        let out = rename_disjoint(&[g.clone(), g.clone()]);
        assert_eq!(out[0].sig().symbols()[0].name, "R_0");
        assert_eq!(out[1].sig().symbols()[0].name, "R_1");
        assert!(out[0].sig().is_disjoint_from(out[1].sig()));
        assert_eq!(strip_suffix(&out[1], 1).unwrap(), g);
    }

    #[test]
    fn canonical_form_identifies_relabellings() {
        let a = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let b = graph(4, &[(3, 0), (0, 2), (2, 1)]);
        let c = graph(4, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(a.canonical_form().unwrap(), b.canonical_form().unwrap());
        assert_ne!(a.canonical_form().unwrap(), c.canonical_form().unwrap());
    }

    #[test]
    fn canonical_form_rejects_large_structures() {
        let s = graph(11, &[]);
        assert!(matches!(s.canonical_form(), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn components_of_disjoint_edges() {
        let g = graph(5, &[(0, 3), (1, 4)]);
        assert_eq!(g.components(), vec![vec![0, 3], vec![1, 4], vec![2]]);
    }
}
