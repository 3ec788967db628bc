use std::collections::{BTreeMap, BTreeSet};

use super::formula::Formula;
use crate::error::{Error, Result};
use crate::structure::{Signature, Structure};

/// Variable assignment used by [`evaluate`].
pub type Assignment = BTreeMap<String, usize>;

/// Kleene truth value; `U` only arises when evaluating over partial tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Tri {
    F,
    U,
    T,
}

impl Tri {
    fn from_bool(b: bool) -> Tri {
        if b {
            Tri::T
        } else {
            Tri::F
        }
    }

    fn not(self) -> Tri {
        match self {
            Tri::F => Tri::T,
            Tri::U => Tri::U,
            Tri::T => Tri::F,
        }
    }
}

/// Formula compiled to slot-indexed variables and symbol indices.
#[derive(Clone, Debug)]
pub(crate) enum Node {
    Const(bool),
    Atom(usize, Vec<usize>),
    Eq(usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub(crate) root: Node,
    /// Free variables, occupying slots `0..free.len()`.
    pub(crate) free: Vec<String>,
    pub(crate) slots: usize,
}

impl Compiled {
    /// Compiles against `sig`. In lenient mode atoms over symbols outside `sig`
    /// are constantly false (their relation is taken to be empty).
    pub(crate) fn new(f: &Formula, sig: &Signature, lenient: bool) -> Result<Compiled> {
        if !lenient {
            f.typecheck(sig)?;
        }
        let free: Vec<String> = f.free_vars().into_iter().collect();
        let mut scope: Vec<String> = free.clone();
        let mut slots = scope.len();
        let root = fold(compile(&miniscope(f), sig, &mut scope, &mut slots)?);
        Ok(Compiled { root, free, slots })
    }
}

fn flatten(gs: Vec<Formula>, conj: bool) -> Vec<Formula> {
    let mut out = Vec::new();
    for g in gs {
        match g {
            Formula::And(hs) if conj => out.extend(hs),
            Formula::Or(hs) if !conj => out.extend(hs),
            g => out.push(g),
        }
    }
    out
}

/// Moves conjuncts out of existentials and disjuncts out of universals when
/// they do not mention the bound variable.
fn miniscope(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => Formula::Not(Box::new(miniscope(g))),
        Formula::And(gs) => Formula::And(flatten(gs.iter().map(miniscope).collect(), true)),
        Formula::Or(gs) => Formula::Or(flatten(gs.iter().map(miniscope).collect(), false)),
        Formula::Implies(a, b) => Formula::Implies(Box::new(miniscope(a)), Box::new(miniscope(b))),
        Formula::Iff(a, b) => Formula::Iff(Box::new(miniscope(a)), Box::new(miniscope(b))),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let conj = matches!(f, Formula::Exists(..));
            let body = miniscope(g);
            let parts = match body {
                Formula::And(hs) if conj => hs,
                Formula::Or(hs) if !conj => hs,
                other => vec![other],
            };
            let (inner, outer): (Vec<Formula>, Vec<Formula>) =
                parts.into_iter().partition(|h| h.free_vars().contains(v));
            let join = |hs: Vec<Formula>| if conj { Formula::And(hs) } else { Formula::Or(hs) };
            let inner = match inner.len() {
                1 => inner.into_iter().next().unwrap(),
                _ => join(inner),
            };
            let q = if conj {
                Formula::Exists(v.clone(), Box::new(inner))
            } else {
                Formula::Forall(v.clone(), Box::new(inner))
            };
            if outer.is_empty() {
                q
            } else {
                let mut all = outer;
                all.push(q);
                join(all)
            }
        }
        _ => f.clone(),
    }
}

/// Propagates constants through the connectives.
fn fold(n: Node) -> Node {
    match n {
        Node::Not(g) => match fold(*g) {
            Node::Const(b) => Node::Const(!b),
            g => Node::Not(Box::new(g)),
        },
        Node::And(_) | Node::Or(_) => {
            let conj = matches!(n, Node::And(_));
            let (Node::And(gs) | Node::Or(gs)) = n else { unreachable!() };
            let mut out = Vec::new();
            for g in gs {
                match fold(g) {
                    Node::Const(b) if b == conj => {}
                    Node::Const(b) => return Node::Const(b),
                    g => out.push(g),
                }
            }
            match out.len() {
                0 => Node::Const(conj),
                1 => out.pop().unwrap(),
                _ if conj => Node::And(out),
                _ => Node::Or(out),
            }
        }
        Node::Implies(a, b) => match (fold(*a), fold(*b)) {
            (Node::Const(false), _) | (_, Node::Const(true)) => Node::Const(true),
            (Node::Const(true), b) => b,
            (a, Node::Const(false)) => fold(Node::Not(Box::new(a))),
            (a, b) => Node::Implies(Box::new(a), Box::new(b)),
        },
        Node::Iff(a, b) => match (fold(*a), fold(*b)) {
            (Node::Const(x), Node::Const(y)) => Node::Const(x == y),
            (a, b) => Node::Iff(Box::new(a), Box::new(b)),
        },
        Node::Forall(s, g) => Node::Forall(s, Box::new(fold(*g))),
        Node::Exists(s, g) => Node::Exists(s, Box::new(fold(*g))),
        other => other,
    }
}

fn compile(f: &Formula, sig: &Signature, scope: &mut Vec<String>, slots: &mut usize) -> Result<Node> {
    let slot = |v: &String, scope: &Vec<String>| {
        scope
            .iter()
            .rposition(|s| s == v)
            .ok_or_else(|| Error::Unbound(v.clone()))
    };
    Ok(match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::Atom(s, args) => match sig.index_of(s) {
            Some(i) if sig.symbols()[i].arity == args.len() => Node::Atom(
                i,
                args.iter().map(|a| slot(a, scope)).collect::<Result<_>>()?,
            ),
            Some(i) => {
                return Err(Error::Arity {
                    symbol: s.clone(),
                    expected: sig.symbols()[i].arity,
                    got: args.len(),
                })
            }
            None => Node::Const(false),
        },
        Formula::Eq(a, b) => Node::Eq(slot(a, scope)?, slot(b, scope)?),
        Formula::Not(g) => Node::Not(Box::new(compile(g, sig, scope, slots)?)),
        Formula::And(gs) => Node::And(
            gs.iter()
                .map(|g| compile(g, sig, scope, slots))
                .collect::<Result<_>>()?,
        ),
        Formula::Or(gs) => Node::Or(
            gs.iter()
                .map(|g| compile(g, sig, scope, slots))
                .collect::<Result<_>>()?,
        ),
        Formula::Implies(a, b) => Node::Implies(
            Box::new(compile(a, sig, scope, slots)?),
            Box::new(compile(b, sig, scope, slots)?),
        ),
        Formula::Iff(a, b) => Node::Iff(
            Box::new(compile(a, sig, scope, slots)?),
            Box::new(compile(b, sig, scope, slots)?),
        ),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let s = scope.len();
            *slots = (*slots).max(s + 1);
            scope.push(v.clone());
            let body = Box::new(compile(g, sig, scope, slots)?);
            scope.pop();
            if matches!(f, Formula::Forall(..)) {
                Node::Forall(s, body)
            } else {
                Node::Exists(s, body)
            }
        }
    })
}

/// Source of atomic truth values for the compiled evaluator.
pub(crate) trait Oracle {
    fn size(&self) -> usize;
    fn atom(&self, sym: usize, args: &[usize]) -> Tri;
}

/// Dense bit tables of a concrete structure.
pub(crate) struct Dense<'a> {
    s: &'a Structure,
    bits: Vec<Option<Vec<bool>>>,
}

const DENSE_LIMIT: usize = 1 << 22;

impl<'a> Dense<'a> {
    pub(crate) fn new(s: &'a Structure) -> Self {
        let n = s.size();
        let bits = s
            .sig()
            .symbols()
            .iter()
            .zip(s.tables())
            .map(|(sym, table)| {
                let cells = n.checked_pow(sym.arity as u32)?;
                if cells > DENSE_LIMIT {
                    return None;
                }
                let mut v = vec![false; cells];
                for t in table {
                    v[t.iter().fold(0, |acc, &e| acc * n + e)] = true;
                }
                Some(v)
            })
            .collect();
        Dense { s, bits }
    }
}

impl Oracle for Dense<'_> {
    fn size(&self) -> usize {
        self.s.size()
    }

    fn atom(&self, sym: usize, args: &[usize]) -> Tri {
        let n = self.s.size();
        Tri::from_bool(match &self.bits[sym] {
            Some(v) => v[args.iter().fold(0, |acc, &e| acc * n + e)],
            None => self.s.holds(sym, args),
        })
    }
}

pub(crate) fn eval_node<O: Oracle>(node: &Node, o: &O, env: &mut [usize], buf: &mut Vec<usize>) -> Tri {
    match node {
        Node::Const(b) => Tri::from_bool(*b),
        Node::Atom(sym, args) => {
            let start = buf.len();
            buf.extend(args.iter().map(|&a| env[a]));
            let r = o.atom(*sym, &buf[start..]);
            buf.truncate(start);
            r
        }
        Node::Eq(a, b) => Tri::from_bool(env[*a] == env[*b]),
        Node::Not(g) => eval_node(g, o, env, buf).not(),
        Node::And(gs) => {
            let mut acc = Tri::T;
            for g in gs {
                match eval_node(g, o, env, buf) {
                    Tri::F => return Tri::F,
                    Tri::U => acc = Tri::U,
                    Tri::T => {}
                }
            }
            acc
        }
        Node::Or(gs) => {
            let mut acc = Tri::F;
            for g in gs {
                match eval_node(g, o, env, buf) {
                    Tri::T => return Tri::T,
                    Tri::U => acc = Tri::U,
                    Tri::F => {}
                }
            }
            acc
        }
        Node::Implies(a, b) => match eval_node(a, o, env, buf) {
            Tri::F => Tri::T,
            av => match (av, eval_node(b, o, env, buf)) {
                (_, Tri::T) => Tri::T,
                (Tri::T, bv) => bv,
                _ => Tri::U,
            },
        },
        Node::Iff(a, b) => match (eval_node(a, o, env, buf), eval_node(b, o, env, buf)) {
            (Tri::U, _) | (_, Tri::U) => Tri::U,
            (x, y) => Tri::from_bool(x == y),
        },
        Node::Forall(_, g) | Node::Exists(_, g) if matches!(**g, Node::Const(_)) => {
            let Node::Const(b) = **g else { unreachable!() };
            if o.size() == 0 {
                Tri::from_bool(matches!(node, Node::Forall(..)))
            } else {
                Tri::from_bool(b)
            }
        }
        Node::Forall(slot, g) => {
            let mut acc = Tri::T;
            for e in 0..o.size() {
                env[*slot] = e;
                match eval_node(g, o, env, buf) {
                    Tri::F => return Tri::F,
                    Tri::U => acc = Tri::U,
                    Tri::T => {}
                }
            }
            acc
        }
        Node::Exists(slot, g) => {
            let mut acc = Tri::F;
            for e in 0..o.size() {
                env[*slot] = e;
                match eval_node(g, o, env, buf) {
                    Tri::T => return Tri::T,
                    Tri::U => acc = Tri::U,
                    Tri::F => {}
                }
            }
            acc
        }
    }
}

/// A formula prepared for repeated evaluation in one structure.
pub struct Evaluator<'a> {
    dense: Dense<'a>,
    compiled: Compiled,
}

impl<'a> Evaluator<'a> {
    pub fn new(s: &'a Structure, f: &Formula) -> Result<Self> {
        Ok(Evaluator {
            dense: Dense::new(s),
            compiled: Compiled::new(f, s.sig(), false)?,
        })
    }

    /// Like [`Evaluator::new`], but symbols missing from the structure's
    /// signature denote empty relations.
    pub fn lenient(s: &'a Structure, f: &Formula) -> Result<Self> {
        Ok(Evaluator {
            dense: Dense::new(s),
            compiled: Compiled::new(f, s.sig(), true)?,
        })
    }

    /// Free variables in the order expected by [`Evaluator::eval_slots`].
    pub fn free_vars(&self) -> &[String] {
        &self.compiled.free
    }

    /// Evaluates with the free variables bound positionally.
    pub fn eval_slots(&self, values: &[usize]) -> bool {
        assert_eq!(values.len(), self.compiled.free.len());
        let mut env = vec![0; self.compiled.slots.max(1)];
        env[..values.len()].copy_from_slice(values);
        eval_node(&self.compiled.root, &self.dense, &mut env, &mut Vec::new()) == Tri::T
    }

    pub fn eval(&self, asg: &Assignment) -> Result<bool> {
        let size = self.dense.size();
        let values = self
            .compiled
            .free
            .iter()
            .map(|v| match asg.get(v) {
                None => Err(Error::Unbound(v.clone())),
                Some(&e) if e >= size => Err(Error::OutOfRange { entry: e, size }),
                Some(&e) => Ok(e),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.eval_slots(&values))
    }
}

/// Tarskian satisfaction `s ⊨ f[asg]`.
pub fn evaluate(s: &Structure, f: &Formula, asg: &Assignment) -> Result<bool> {
    Evaluator::new(s, f)?.eval(asg)
}

/// Truth of a sentence, reading unknown symbols as empty relations.
pub fn holds_lenient(s: &Structure, f: &Formula) -> Result<bool> {
    f.require_sentence()?;
    Ok(Evaluator::lenient(s, f)?.eval_slots(&[]))
}

/// Truth of a sentence in `s`.
pub fn holds(s: &Structure, f: &Formula) -> Result<bool> {
    f.require_sentence()?;
    evaluate(s, f, &Assignment::new())
}

/// All tuples `ā` (indexed by `vars`) with `s ⊨ f[ā]`.
pub fn solution_set(s: &Structure, f: &Formula, vars: &[String]) -> Result<BTreeSet<Vec<usize>>> {
    let free = f.free_vars();
    if let Some(v) = free.iter().find(|v| !vars.contains(v)) {
        return Err(Error::Unbound(v.clone()));
    }
    let closed = vars.iter().rev().fold(f.clone(), |acc, v| {
        if free.contains(v) {
            acc
        } else {
            // keep unused variables positional by a trivially true guard
            Formula::and(vec![acc, Formula::eq(v, v)])
        }
    });
    let ev = Evaluator::new(s, &closed)?;
    let order: Vec<usize> = ev
        .free_vars()
        .iter()
        .map(|v| vars.iter().position(|w| w == v).unwrap())
        .collect();
    let mut out = BTreeSet::new();
    for t in crate::tuples(s.size(), vars.len()) {
        let vals: Vec<usize> = order.iter().map(|&i| t[i]).collect();
        if ev.eval_slots(&vals) {
            out.insert(t);
        }
    }
    Ok(out)
}

/// A possibly infinite interpretation with a finite set of relevant
/// quantifier candidates at every stage (e.g. gap representatives of a
/// dense order).
pub trait Interpretation {
    type Elem: Clone + PartialEq;
    /// Elements a quantifier must range over, given the values already bound.
    fn candidates(&self, bound: &[Self::Elem]) -> Vec<Self::Elem>;
    fn relation(&self, sym: &str, args: &[Self::Elem]) -> Result<bool>;
}

/// Evaluates `f` in an [`Interpretation`] by structural recursion.
pub fn evaluate_in<I: Interpretation>(i: &I, f: &Formula, asg: &[(String, I::Elem)]) -> Result<bool> {
    let mut env: Vec<(String, I::Elem)> = asg.to_vec();
    eval_in(i, f, &mut env)
}

fn eval_in<I: Interpretation>(i: &I, f: &Formula, env: &mut Vec<(String, I::Elem)>) -> Result<bool> {
    let look = |v: &String, env: &Vec<(String, I::Elem)>| {
        env.iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|(_, e)| e.clone())
            .ok_or_else(|| Error::Unbound(v.clone()))
    };
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(s, args) => {
            let vals = args.iter().map(|a| look(a, env)).collect::<Result<Vec<_>>>()?;
            i.relation(s, &vals)?
        }
        Formula::Eq(a, b) => look(a, env)? == look(b, env)?,
        Formula::Not(g) => !eval_in(i, g, env)?,
        Formula::And(gs) => {
            for g in gs {
                if !eval_in(i, g, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_in(i, g, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !eval_in(i, a, env)? || eval_in(i, b, env)?,
        Formula::Iff(a, b) => eval_in(i, a, env)? == eval_in(i, b, env)?,
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let universal = matches!(f, Formula::Forall(..));
            let bound: Vec<I::Elem> = env.iter().map(|(_, e)| e.clone()).collect();
            for c in i.candidates(&bound) {
                env.push((v.clone(), c));
                let r = eval_in(i, g, env);
                env.pop();
                if r? != universal {
                    return Ok(!universal);
                }
            }
            universal
        }
    })
}

impl Interpretation for Structure {
    type Elem = usize;

    fn candidates(&self, _bound: &[usize]) -> Vec<usize> {
        (0..self.size()).collect()
    }

    fn relation(&self, sym: &str, args: &[usize]) -> Result<bool> {
        let i = self
            .sig()
            .index_of(sym)
            .ok_or_else(|| Error::UnknownSymbol(sym.to_string()))?;
        Ok(self.holds(i, args))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
        let mut t = Vec::new();
        for &(a, b) in edges {
            t.push(vec![a, b]);
            t.push(vec![b, a]);
        }
        let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
        Structure::from_tuples("g", sig, n, &[("R", t)]).unwrap()
    }

    #[test]
    fn square_has_neighbours() {
        let q2 = graph(4, &[(0, 1), (1, 3), (3, 2), (2, 0)]);
        let f = parse_formula("forall x. exists y. R(x,y)", q2.sig()).unwrap();
        assert!(holds(&q2, &f).unwrap());
        assert!(evaluate_in(&q2, &f, &[]).unwrap());
    }

    #[test]
    fn loopless_point() {
        let g = graph(1, &[]);
        let f = parse_formula("exists x. exists y. R(x,y)", g.sig()).unwrap();
        assert!(!holds(&g, &f).unwrap());
    }

    #[test]
    fn uncovered_variable() {
        let g = graph(2, &[(0, 1)]);
        let f = parse_formula("R(x,y)", g.sig()).unwrap();
        let mut asg = Assignment::new();
        asg.insert("x".into(), 0);
        assert_eq!(evaluate(&g, &f, &asg), Err(Error::Unbound("y".into())));
        asg.insert("y".into(), 1);
        assert!(evaluate(&g, &f, &asg).unwrap());
    }

    #[test]
    fn unknown_symbol_is_error_unless_lenient() {
        let g = graph(2, &[(0, 1)]);
        let f = crate::logic::parse_formula_untyped("exists x. P(x)").unwrap();
        assert_eq!(holds(&g, &f), Err(Error::UnknownSymbol("P".into())));
        assert!(!holds_lenient(&g, &f).unwrap());
    }

    #[test]
    fn shadowing() {
        let g = graph(2, &[(0, 1)]);
        let f = parse_formula("exists x. exists x. R(x,x)", g.sig()).unwrap();
        assert!(!holds(&g, &f).unwrap());
        let f = parse_formula("exists x. (exists y. R(x,y)) & (exists x. x = x)", g.sig()).unwrap();
        assert!(holds(&g, &f).unwrap());
    }

    #[test]
    fn solution_sets() {
        let g = graph(3, &[(0, 1)]);
        let f = parse_formula("R(x,y)", g.sig()).unwrap();
        let vars = vec!["y".to_string(), "x".to_string()];
        let sol = solution_set(&g, &f, &vars).unwrap();
        assert_eq!(sol, [vec![0, 1], vec![1, 0]].into_iter().collect());
        let top = solution_set(&g, &Formula::True, &vars).unwrap();
        assert_eq!(top.len(), 9);
    }
}
