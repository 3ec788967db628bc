use std::collections::BTreeSet;

use ecomb::cardinalities::{card_profile, semigroup_set, si_relation, CardinalitySet, Selector};
use ecomb::closure::{
    closure_disjoint, closure_e, CardinalitySpectrum, FamilyDescriptor, Generator, Mult, OpTag, TheoryRef,
};
use ecomb::logic::{parse_formula, rank_types, Formula};
use ecomb::spectra::{p_spectrum_disjoint, RelativeClass, SpectrumCount};
use ecomb::{parse_structure, render_structure, Signature, Structure};
use proptest::prelude::*;

fn sig() -> Signature {
    Signature::from_pairs(&[("R", 2), ("P", 1)]).unwrap()
}

fn structure() -> impl Strategy<Value = Structure> {
    (1usize..=4).prop_flat_map(|n| {
        (Just(n), proptest::collection::vec(any::<bool>(), n * n), proptest::collection::vec(any::<bool>(), n))
    })
    .prop_map(|(n, r, p)| {
        let edges = ecomb::tuples(n, 2).zip(r).filter(|(_, b)| *b).map(|(t, _)| t).collect();
        let marks = (0..n).zip(p).filter(|(_, b)| *b).map(|(e, _)| vec![e]).collect();
        Structure::from_tuples("s", sig(), n, &[("R", edges), ("P", marks)]).unwrap()
    })
}

fn var() -> impl Strategy<Value = String> {
    prop_oneof![Just("x".to_string()), Just("y".to_string()), Just("z".to_string())]
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (var(), var()).prop_map(|(a, b)| Formula::atom("R", &[&a, &b])),
        var().prop_map(|a| Formula::atom("P", &[&a])),
        (var(), var()).prop_map(|(a, b)| Formula::eq(&a, &b)),
        Just(Formula::True),
        Just(Formula::False),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Formula::and),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Formula::or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (var(), inner.clone()).prop_map(|(v, f)| Formula::forall(&v, f)),
            (var(), inner).prop_map(|(v, f)| Formula::exists(&v, f)),
        ]
    })
}

fn generators() -> impl Strategy<Value = BTreeSet<u64>> {
    proptest::collection::btree_set(1u64..12, 1..4)
}

fn empty_language_family() -> impl Strategy<Value = FamilyDescriptor> {
    let size_set = prop_oneof![
        (1u64..8).prop_map(|k| format!("{k}Z+")),
        (1u64..8).prop_map(|k| format!(">={k}")),
        proptest::collection::btree_set(1u64..10, 1..4)
            .prop_map(|xs| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
    ];
    (size_set, prop_oneof![Just("1"), Just("2"), Just("inf")], any::<bool>(), any::<bool>()).prop_map(
        |(sizes, mult, inf, tagged)| {
            let mut text = format!("{sizes}:{mult}");
            if inf {
                text.push_str("; inf:1");
            }
            let spectrum: CardinalitySpectrum = text.parse().unwrap();
            let tagged = tagged || mult != "1";
            FamilyDescriptor::generator("p", Generator::EmptyLang { spectrum, tagged }).unwrap()
        },
    )
}

proptest! {
    #[test]
    fn structures_round_trip(s in structure()) {
        let back = parse_structure(&render_structure(&s)).unwrap();
        prop_assert_eq!(back.size(), s.size());
        prop_assert_eq!(back.tables(), s.tables());
    }

    #[test]
    fn formulas_round_trip(f in formula()) {
        let back = parse_formula(&f.to_string(), &sig()).unwrap();
        prop_assert_eq!(back.alpha_key(), f.alpha_key());
    }

    #[test]
    fn rank_types_refine_with_rank(s in structure()) {
        let coarse = rank_types(&s, 1, 1).unwrap();
        let fine = rank_types(&s, 1, 2).unwrap();
        prop_assert!(fine.refines(&coarse));
    }

    #[test]
    fn sum_closure_membership(k in generators(), m in 1u64..150) {
        let dp = semigroup_set(&k, 150).unwrap();
        prop_assert_eq!(CardinalitySet::sum_closure(k.iter().copied()).contains(m), dp.contains(&m));
    }

    #[test]
    fn set_operations_are_pointwise(a in generators(), b in 1u64..9, m in 1u64..100) {
        let x = CardinalitySet::sum_closure(a.iter().copied());
        let y = CardinalitySet::at_least(b);
        prop_assert_eq!(x.union(&y).contains(m), x.contains(m) || y.contains(m));
        prop_assert_eq!(x.intersection(&y).contains(m), x.contains(m) && y.contains(m));
        prop_assert_eq!(x.complement().contains(m), !x.contains(m));
        prop_assert_eq!(x.minus(&y).contains(m), x.contains(m) && !y.contains(m));
    }

    #[test]
    fn cardinality_sets_reparse(a in generators(), b in 1u64..9) {
        let x = CardinalitySet::sum_closure(a.iter().copied()).union(&CardinalitySet::finite([b]));
        let back: CardinalitySet = x.to_string().parse().unwrap();
        prop_assert!(back.same_as(&x), "{} vs {}", back, x);
    }

    #[test]
    fn si_is_reflexive_and_transitive(s in structure()) {
        let si = si_relation(&s, &Selector::All, 2).unwrap();
        prop_assert!(si.is_reflexive());
        prop_assert!(si.is_transitive());
    }

    #[test]
    fn e_profiles_have_no_new_sizes(fam in empty_language_family()) {
        let p = card_profile(&fam, OpTag::E).unwrap();
        prop_assert!(p.cbar.is_empty_set());
    }

    #[test]
    fn p_spectrum_values_are_zero_or_one(fam in empty_language_family(), n in 1u64..12) {
        for class in [RelativeClass::FinN(n), RelativeClass::Inf] {
            let v = p_spectrum_disjoint(&fam, &class).unwrap();
            prop_assert!(matches!(v.count, SpectrumCount::Exact(Mult::Finite(0 | 1))), "{}", v);
        }
    }

    #[test]
    fn closures_are_idempotent(fam in empty_language_family()) {
        let once = closure_e(&fam).unwrap();
        prop_assert_eq!(closure_e(&once).unwrap().additions(40), once.additions(40));
        for op in [OpTag::P, OpTag::Pd, OpTag::Pdr] {
            let once = closure_disjoint(&fam, op).unwrap();
            prop_assert_eq!(closure_disjoint(&once, op).unwrap().additions(40), once.additions(40));
        }
    }

    #[test]
    fn closures_contain_their_family(sizes in proptest::collection::btree_set(1u64..9, 1..5)) {
        let fam = FamilyDescriptor::explicit("x", sizes.iter().map(|&n| TheoryRef::T0(n)).collect()).unwrap();
        let closed = closure_e(&fam).unwrap();
        for n in sizes {
            prop_assert!(closed.contains(&TheoryRef::T0(n)).unwrap());
        }
    }
}
