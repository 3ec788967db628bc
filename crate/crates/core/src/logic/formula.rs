use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::structure::Signature;

/// First-order formula over a relational signature with equality.
///
/// Variables carry their surface names; [`Formula::alpha_key`] gives the
/// nameless form used to compare formulas up to renaming of bound variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<String>),
    Eq(String, String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn atom(sym: &str, args: &[&str]) -> Formula {
        Atom(sym.to_string(), args.iter().map(|a| a.to_string()).collect())
    }

    pub fn eq(a: &str, b: &str) -> Formula {
        Eq(a.to_string(), b.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Forall(v.to_string(), Box::new(f))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Exists(v.to_string(), Box::new(f))
    }

    /// Conjunction, collapsing the empty and singleton cases.
    pub fn and(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => True,
            1 => fs.pop().unwrap(),
            _ => And(fs),
        }
    }

    pub fn or(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => False,
            1 => fs.pop().unwrap(),
            _ => Or(fs),
        }
    }

    pub fn exists_many(vars: &[String], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Exists(v.clone(), Box::new(acc)))
    }

    /// Maximum nesting depth of quantifiers.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            True | False | Atom(..) | Eq(..) => 0,
            Not(f) => f.quantifier_rank(),
            And(fs) | Or(fs) => fs.iter().map(|f| f.quantifier_rank()).max().unwrap_or(0),
            Implies(a, b) | Iff(a, b) => a.quantifier_rank().max(b.quantifier_rank()),
            Forall(_, f) | Exists(_, f) => 1 + f.quantifier_rank(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            True | False => {}
            Atom(_, args) => args.iter().for_each(|a| note(a, bound)),
            Eq(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Not(f) => f.collect_free(bound, out),
            And(fs) | Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Implies(a, b) | Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Forall(v, f) | Exists(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Relation symbols with the arity they are used at.
    pub fn symbols(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Atom(s, args) = f {
                out.insert((s.clone(), args.len()));
            }
        });
        out
    }

    fn visit(&self, cb: &mut impl FnMut(&Formula)) {
        cb(self);
        match self {
            Not(f) | Forall(_, f) | Exists(_, f) => f.visit(cb),
            And(fs) | Or(fs) => fs.iter().for_each(|f| f.visit(cb)),
            Implies(a, b) | Iff(a, b) => {
                a.visit(cb);
                b.visit(cb);
            }
            _ => {}
        }
    }

    /// Checks every atom against `sig`.
    pub fn typecheck(&self, sig: &Signature) -> Result<()> {
        for (name, arity) in self.symbols() {
            match sig.get(&name) {
                None => return Err(Error::UnknownSymbol(name)),
                Some(s) if s.arity != arity => {
                    return Err(Error::Arity {
                        symbol: name,
                        expected: s.arity,
                        got: arity,
                    })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// Fails with the free variables when the formula is not a sentence.
    pub fn require_sentence(&self) -> Result<()> {
        let free = self.free_vars();
        if free.is_empty() {
            Ok(())
        } else {
            Err(Error::NotASentence(free.into_iter().collect()))
        }
    }

    /// Number of nodes; used to bound generated formulas.
    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Nameless form: bound variables replaced by binder depth.
    pub fn alpha_key(&self) -> Nameless {
        self.nameless(&mut Vec::new())
    }

    fn nameless(&self, bound: &mut Vec<String>) -> Nameless {
        let var = |v: &String, bound: &Vec<String>| match bound.iter().rposition(|b| b == v) {
            Some(i) => NVar::Bound(i),
            None => NVar::Free(v.clone()),
        };
        match self {
            True => Nameless::True,
            False => Nameless::False,
            Atom(s, args) => Nameless::Atom(s.clone(), args.iter().map(|a| var(a, bound)).collect()),
            Eq(a, b) => Nameless::Eq(var(a, bound), var(b, bound)),
            Not(f) => Nameless::Not(Box::new(f.nameless(bound))),
            And(fs) => Nameless::And(fs.iter().map(|f| f.nameless(bound)).collect()),
            Or(fs) => Nameless::Or(fs.iter().map(|f| f.nameless(bound)).collect()),
            Implies(a, b) => {
                Nameless::Implies(Box::new(a.nameless(bound)), Box::new(b.nameless(bound)))
            }
            Iff(a, b) => Nameless::Iff(Box::new(a.nameless(bound)), Box::new(b.nameless(bound))),
            Forall(v, f) | Exists(v, f) => {
                bound.push(v.clone());
                let body = Box::new(f.nameless(bound));
                bound.pop();
                if matches!(self, Forall(..)) {
                    Nameless::Forall(body)
                } else {
                    Nameless::Exists(body)
                }
            }
        }
    }

    /// Flattens nested conjunctions/disjunctions and removes singleton ones.
    pub fn normalize(&self) -> Formula {
        match self {
            True | False | Atom(..) | Eq(..) => self.clone(),
            Not(f) => Formula::not(f.normalize()),
            And(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match f.normalize() {
                        And(inner) => out.extend(inner),
                        g => out.push(g),
                    }
                }
                if out.is_empty() {
                    True
                } else {
                    Formula::and(out)
                }
            }
            Or(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match f.normalize() {
                        Or(inner) => out.extend(inner),
                        g => out.push(g),
                    }
                }
                if out.is_empty() {
                    False
                } else {
                    Formula::or(out)
                }
            }
            Implies(a, b) => Formula::implies(a.normalize(), b.normalize()),
            Iff(a, b) => Formula::iff(a.normalize(), b.normalize()),
            Forall(v, f) => Formula::forall(v, f.normalize()),
            Exists(v, f) => Formula::exists(v, f.normalize()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NVar {
    Bound(usize),
    Free(String),
}

/// Formula with bound variables identified by binder depth.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nameless {
    True,
    False,
    Atom(String, Vec<NVar>),
    Eq(NVar, NVar),
    Not(Box<Nameless>),
    And(Vec<Nameless>),
    Or(Vec<Nameless>),
    Implies(Box<Nameless>, Box<Nameless>),
    Iff(Box<Nameless>, Box<Nameless>),
    Forall(Box<Nameless>),
    Exists(Box<Nameless>),
}

// Binding strength used by the renderer; larger binds tighter.
fn prec(f: &Formula) -> u8 {
    match f {
        Iff(..) => 1,
        Implies(..) => 2,
        Or(..) => 3,
        And(..) => 4,
        Not(..) => 5,
        Forall(..) | Exists(..) => 0,
        _ => 6,
    }
}

impl Formula {
    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = prec(self);
        if p == 0 || p < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            True => f.write_str("true"),
            False => f.write_str("false"),
            Atom(s, args) => write!(f, "{s}({})", args.join(",")),
            Eq(a, b) => write!(f, "{a} = {b}"),
            Not(g) => {
                f.write_str("!")?;
                g.fmt_child(f, 6)
            }
            And(gs) | Or(gs) => {
                if gs.is_empty() {
                    return f.write_str(if matches!(self, And(_)) { "true" } else { "false" });
                }
                let op = if matches!(self, And(_)) { " & " } else { " | " };
                // nested same-operator children keep their parentheses
                let min = prec(self) + 1;
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    g.fmt_child(f, min)?;
                }
                Ok(())
            }
            Implies(a, b) => {
                a.fmt_child(f, 3)?;
                f.write_str(" -> ")?;
                b.fmt_child(f, 2)
            }
            Iff(a, b) => {
                a.fmt_child(f, 2)?;
                f.write_str(" <-> ")?;
                b.fmt_child(f, 1)
            }
            Forall(v, g) => write!(f, "forall {v}. {g}"),
            Exists(v, g) => write!(f, "exists {v}. {g}"),
        }
    }
}
