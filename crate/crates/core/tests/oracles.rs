//! Library results against naive re-implementations.

use std::collections::{BTreeMap, BTreeSet};

use ecomb::combinators::e_combination;
use ecomb::logic::{evaluate, parse_sentence, rank_equivalent, rank_types_exact, Assignment, Formula, TypeCaps};
use ecomb::model_finder::{fin_spectrum, FinderCaps};
use ecomb::types_algebra::{isomorphic, type_algebra};
use ecomb::{Signature, Structure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn naive_eval(s: &Structure, f: &Formula, env: &mut BTreeMap<String, usize>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(r, args) => {
            let t: Vec<usize> = args.iter().map(|a| env[a]).collect();
            s.table_by_name(r).unwrap().contains(&t)
        }
        Formula::Eq(a, b) => env[a] == env[b],
        Formula::Not(g) => !naive_eval(s, g, env),
        Formula::And(gs) => gs.iter().all(|g| naive_eval(s, g, env)),
        Formula::Or(gs) => gs.iter().any(|g| naive_eval(s, g, env)),
        Formula::Implies(a, b) => !naive_eval(s, a, env) || naive_eval(s, b, env),
        Formula::Iff(a, b) => naive_eval(s, a, env) == naive_eval(s, b, env),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let old = env.get(v).copied();
            let want = matches!(f, Formula::Exists(..));
            let mut found = !want;
            for e in 0..s.size() {
                env.insert(v.clone(), e);
                if naive_eval(s, g, env) == want {
                    found = want;
                    break;
                }
            }
            match old {
                Some(o) => env.insert(v.clone(), o),
                None => env.remove(v),
            };
            found
        }
    }
}

fn all_structures(sig: &Signature, n: usize) -> Vec<Structure> {
    let slots: Vec<(usize, Vec<usize>)> = sig
        .symbols()
        .iter()
        .enumerate()
        .flat_map(|(i, sym)| ecomb::tuples(n, sym.arity).map(move |t| (i, t)))
        .collect();
    (0u64..1 << slots.len())
        .map(|mask| {
            let rels: Vec<(&str, Vec<Vec<usize>>)> = sig
                .symbols()
                .iter()
                .enumerate()
                .map(|(i, sym)| {
                    let chosen = slots.iter().enumerate().filter(|(j, (k, _))| *k == i && mask >> j & 1 == 1);
                    (sym.name.as_str(), chosen.map(|(_, (_, t))| t.clone()).collect())
                })
                .collect();
            Structure::from_tuples("b", sig.clone(), n, &rels).unwrap()
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn naive_iso(a: &Structure, b: &Structure) -> bool {
    a.size() == b.size() && permutations(a.size()).iter().any(|p| a.permuted(p).tables() == b.tables())
}

fn random_graph(rng: &mut ChaCha8Rng, max: usize) -> Structure {
    let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
    let n = rng.gen_range(1..=max);
    let edges: Vec<Vec<usize>> = ecomb::tuples(n, 2).filter(|_| rng.gen_bool(0.35)).collect();
    Structure::from_tuples("g", sig, n, &[("R", edges)]).unwrap()
}

const SENTENCES: &[&str] = &[
    "forall x. exists y. R(x,y)",
    "exists x. forall y. !R(y,x)",
    "forall x. forall y. R(x,y) -> R(y,x)",
    "exists x. exists y. exists z. R(x,y) & R(y,z) & !R(x,z)",
    "forall x. !R(x,x) | exists y. !y = x & R(y,y)",
    "forall x. forall y. (R(x,y) <-> !R(y,x)) | x = y",
];

#[test]
fn evaluator_agrees_with_naive_recursion() {
    let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
    let fs: Vec<Formula> = SENTENCES.iter().map(|t| parse_sentence(t, &sig).unwrap()).collect();
    for n in 1..=3 {
        for s in all_structures(&sig, n) {
            for f in &fs {
                let lib = evaluate(&s, f, &Assignment::new()).unwrap();
                assert_eq!(lib, naive_eval(&s, f, &mut BTreeMap::new()), "{f} on {s:?}");
            }
        }
    }
}

#[test]
fn isomorphism_agrees_with_permutation_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let a = random_graph(&mut rng, 4);
        let b = if rng.gen_bool(0.5) {
            let mut p: Vec<usize> = (0..a.size()).collect();
            for i in (1..p.len()).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            a.permuted(&p)
        } else {
            random_graph(&mut rng, 4)
        };
        let expect = naive_iso(&a, &b);
        let map = isomorphic(&a, &b).unwrap();
        assert_eq!(map.is_some(), expect);
        if let Some(p) = map {
            assert_eq!(a.permuted(&p).tables(), b.tables());
        }
        assert_eq!(a.canonical_form().unwrap() == b.canonical_form().unwrap(), expect);
    }
}

#[test]
fn high_rank_equivalence_is_isomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..60 {
        let a = random_graph(&mut rng, 3);
        let b = random_graph(&mut rng, 3);
        let q = a.size().max(b.size()) + 1;
        assert_eq!(rank_equivalent(&a, &b, q, TypeCaps::default()).unwrap(), naive_iso(&a, &b));
    }
}

fn orbit_classes(s: &Structure) -> BTreeSet<BTreeSet<usize>> {
    let autos: Vec<Vec<usize>> =
        permutations(s.size()).into_iter().filter(|p| s.permuted(p).tables() == s.tables()).collect();
    (0..s.size()).map(|e| autos.iter().map(|p| p[e]).collect()).collect()
}

fn ef_classes(s: &Structure, q: usize) -> BTreeSet<BTreeSet<usize>> {
    let p = rank_types_exact(s, 1, q, TypeCaps::default()).unwrap();
    p.classes().into_iter().map(|c| c.into_iter().map(|t| t[0]).collect()).collect()
}

#[test]
fn recursive_ef_types_at_full_rank_are_orbits() {
    let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
    for n in 1..=3 {
        for s in all_structures(&sig, n) {
            assert_eq!(ef_classes(&s, n), orbit_classes(&s), "{s:?}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let n = 4;
        let edges: Vec<Vec<usize>> = ecomb::tuples(n, 2).filter(|_| rng.gen_bool(0.35)).collect();
        let s = Structure::from_tuples("g", sig.clone(), n, &[("R", edges)]).unwrap();
        assert_eq!(ef_classes(&s, n), orbit_classes(&s), "{s:?}");
    }
}

#[test]
fn finite_spectrum_agrees_with_exhaustive_search() {
    let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
    let by_size: Vec<Vec<Structure>> = (1..=3).map(|n| all_structures(&sig, n)).collect();
    for text in SENTENCES {
        let f = parse_sentence(text, &sig).unwrap();
        let expect: BTreeSet<usize> = (1..=3)
            .filter(|&n| by_size[n - 1].iter().any(|s| naive_eval(s, &f, &mut BTreeMap::new())))
            .collect();
        assert_eq!(fin_spectrum(&f, &sig, 3, FinderCaps::default()).unwrap(), expect, "{text}");
    }
}

#[test]
fn one_types_of_graphs_count_orbits() {
    let sig = Signature::from_pairs(&[("R", 2)]).unwrap();
    for s in all_structures(&sig, 3) {
        let autos: Vec<Vec<usize>> =
            permutations(3).into_iter().filter(|p| s.permuted(p).tables() == s.tables()).collect();
        let orbits: BTreeSet<BTreeSet<usize>> =
            (0..3).map(|e| autos.iter().map(|p| p[e]).collect()).collect();
        assert_eq!(type_algebra(&s, 1).unwrap().m(), orbits.len());
    }
}

#[test]
fn e_combination_components_are_the_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let parts: Vec<Structure> = (0..rng.gen_range(1..4)).map(|_| random_graph(&mut rng, 3)).collect();
        let ec = e_combination(&parts).unwrap();
        assert_eq!(ec.classes.len(), parts.len());
        for (i, p) in parts.iter().enumerate() {
            let c = ec.component(i).unwrap();
            assert!(naive_iso(&c, p), "component {i}");
        }
    }
}
