mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use pt_variant::classification::{build_isomorphism, canonical_rep, enumerate_types, Fingerprint};
use pt_variant::oracle::{
    cayley_table, find_isomorphism, fingerprint_of_table, verify_isomorphism, DEFAULT_SEARCH_BUDGET,
};
use pt_variant::{
    predicted_class_multiset, PartialTransformation, Permutation, TypeVector, VariantSemigroup,
};

use common::*;

fn transformation(n: usize) -> impl Strategy<Value = PartialTransformation> {
    prop::collection::vec(prop::option::weighted(0.8, 1..=n), n)
        .prop_map(|images| PartialTransformation::new(images).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::new(images).unwrap())
}

fn triple() -> impl Strategy<
    Value = (
        PartialTransformation,
        PartialTransformation,
        PartialTransformation,
    ),
> {
    (1usize..=6).prop_flat_map(|n| (transformation(n), transformation(n), transformation(n)))
}

fn type_vector() -> impl Strategy<Value = TypeVector> {
    (1usize..=8).prop_flat_map(|n| {
        prop::collection::vec(1..=n, 0..=n).prop_map(move |parts| {
            // keep a prefix that fits in n points
            let mut used = 0;
            let kept: Vec<usize> = parts
                .into_iter()
                .take_while(|p| {
                    used += p;
                    used <= n
                })
                .collect();
            TypeVector::from_parts(n, &kept).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn literal_round_trip(x in (1usize..=9).prop_flat_map(transformation)) {
        let text = x.to_string();
        prop_assert_eq!(PartialTransformation::parse(&text, x.degree()).unwrap(), x.clone());
        prop_assert_eq!(PartialTransformation::from_index(x.degree(), x.index()).unwrap(), x);
    }

    #[test]
    fn composition_is_associative((x, y, z) in triple()) {
        let left = x.compose(&y).unwrap().compose(&z).unwrap();
        let right = x.compose(&y.compose(&z).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left, compose(&compose(&x, &y), &z));
    }

    #[test]
    fn sandwich_is_associative((a, x, y) in triple(), z_seed in any::<u64>()) {
        let n = a.degree();
        let z = PartialTransformation::from_index(n, z_seed % (n as u64 + 1).pow(n as u32)).unwrap();
        let v = VariantSemigroup::new(a);
        let left = v.product(&v.product(&x, &y).unwrap(), &z).unwrap();
        let right = v.product(&x, &v.product(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn statistics_are_consistent(a in (1usize..=9).prop_flat_map(transformation)) {
        let s = a.analyze();
        let t = a.type_vector();
        prop_assert_eq!(t.domain_size(), s.domain.len());
        prop_assert_eq!(t.rank(), s.rank);
        prop_assert_eq!(t.undefined_count(), s.z);
        prop_assert!(s.domain.is_disjoint(&s.zset));
        prop_assert_eq!(s.domain.len() + s.zset.len(), a.degree());
        let union: BTreeSet<usize> = s.fibers.values().flatten().copied().collect();
        prop_assert_eq!(&union, &s.domain);
        prop_assert_eq!(s.fiber_size.values().sum::<usize>(), s.domain.len());
        prop_assert!(s.fiber_size.values().all(|k| *k >= 1));
    }

    #[test]
    fn predicted_multiset_totals(t in type_vector()) {
        let n = t.degree() as u32;
        let m = predicted_class_multiset(&t).unwrap();
        prop_assert_eq!(m.cardinality(), (t.rank() as u128 + 1).pow(n));
        prop_assert_eq!(m.sum(), (t.degree() as u128 + 1).pow(n));
        let rep = canonical_rep(&t).unwrap();
        prop_assert_eq!(rep.type_vector(), t.clone());
        Fingerprint::predicted(&t).unwrap().validate().unwrap();
    }

    #[test]
    fn conjugates_get_valid_witnesses(
        (a, tau, pi, x, y) in (1usize..=7).prop_flat_map(|n| {
            (transformation(n), permutation(n), permutation(n), transformation(n), transformation(n))
        })
    ) {
        // b = tau a pi has the same type as a
        let b = compose(&compose(&tau.as_transformation(), &a), &pi.as_transformation());
        prop_assert_eq!(b.type_vector(), a.type_vector());
        let w = build_isomorphism(&a, &b).unwrap();
        prop_assert!(w.is_valid());
        let lhs = w.apply(&sandwich(&a, &x, &y)).unwrap();
        let rhs = sandwich(&b, &w.apply(&x).unwrap(), &w.apply(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn oracle_recovers_relabelings(
        a in transformation(2),
        relabel in Just((0..9).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let table = cayley_table(&VariantSemigroup::new(a)).unwrap();
        let moved = table.relabeled(&relabel).unwrap();
        prop_assert_eq!(verify_isomorphism(&table, &moved, &relabel), Ok(true));
        let w = find_isomorphism(&table, &moved, DEFAULT_SEARCH_BUDGET).unwrap().unwrap();
        prop_assert_eq!(verify_isomorphism(&table, &moved, &w), Ok(true));
        prop_assert_eq!(fingerprint_of_table(&table).class_sizes, fingerprint_of_table(&moved).class_sizes);
        prop_assert_eq!(fingerprint_of_table(&table).annihilators, fingerprint_of_table(&moved).annihilators);
    }
}

#[test]
fn enumeration_is_complete_and_distinct() {
    for n in 1..=4 {
        let elements = all(n);
        let distinct: BTreeSet<_> = elements.iter().cloned().collect();
        assert_eq!(elements.len(), (n + 1).pow(n as u32));
        assert_eq!(distinct.len(), elements.len());
    }
}

#[test]
fn zero_absorbs() {
    for n in 1..=3 {
        let zero = PartialTransformation::zero(n).unwrap();
        for x in all(n) {
            assert_eq!(x.compose(&zero).unwrap(), zero);
            assert_eq!(zero.compose(&x).unwrap(), zero);
        }
    }
}

#[test]
fn compose_matches_pointwise_definition() {
    let carrier = all(2);
    for x in &carrier {
        for y in &carrier {
            assert_eq!(x.compose(y).unwrap(), compose(x, y));
        }
    }
    assert_eq!(pt("2,-").compose(&pt("-,1")).unwrap(), pt("1,-"));
}

#[test]
fn sim_classes_match_definition() {
    for n in 1..=3 {
        let carrier = all(n);
        for a in &carrier {
            let expected: BTreeSet<Vec<PartialTransformation>> =
                classes_by_definition(a, &carrier).into_iter().collect();
            let observed: BTreeSet<Vec<PartialTransformation>> = VariantSemigroup::new(a.clone())
                .sim_classes()
                .unwrap()
                .iter()
                .map(|(_, m)| m.to_vec())
                .collect();
            assert_eq!(observed, expected, "a = {a}");
        }
    }
}

#[test]
fn table_fingerprints_match_variant_fingerprints() {
    let mut sandwiches = all(1);
    sandwiches.extend(all(2));
    sandwiches.extend(
        enumerate_types(3)
            .unwrap()
            .iter()
            .map(|t| canonical_rep(t).unwrap()),
    );
    for a in sandwiches {
        let v = VariantSemigroup::new(a.clone());
        let table = fingerprint_of_table(&cayley_table(&v).unwrap());
        assert!(
            table.matches(&Fingerprint::of_variant(&v).unwrap()),
            "a = {a}"
        );
        assert_eq!(table.zero, Some(v.zero().index() as usize));
    }
}

#[test]
fn separation_of_pt3_fingerprints() {
    let carrier = all(3);
    let fps: Vec<_> = carrier
        .iter()
        .map(|a| Fingerprint::of_variant(&VariantSemigroup::new(a.clone())).unwrap())
        .collect();
    for i in 0..carrier.len() {
        for j in i + 1..carrier.len() {
            let same_type = carrier[i].type_vector() == carrier[j].type_vector();
            let same_key = (&fps[i].class_sizes, fps[i].annihilators.left)
                == (&fps[j].class_sizes, fps[j].annihilators.left);
            assert_eq!(same_type, same_key, "{} vs {}", carrier[i], carrier[j]);
        }
    }
}

#[test]
fn worked_example_n2() {
    // x a y for a = (1->1, 2->1), x = (1->2, 2->2), y = (1->2, 2->1)
    let v = VariantSemigroup::new(pt("1,1"));
    assert_eq!(v.product(&pt("2,2"), &pt("2,1")).unwrap(), pt("2,2"));
    assert_eq!(sandwich(&pt("1,1"), &pt("2,2"), &pt("2,1")), pt("2,2"));

    let w = build_isomorphism(&pt("1,1"), &pt("2,2")).unwrap();
    let ta = cayley_table(&v).unwrap();
    let tb = cayley_table(&VariantSemigroup::new(pt("2,2"))).unwrap();
    let map: Vec<usize> = all(2)
        .iter()
        .map(|x| w.apply(x).unwrap().index() as usize)
        .collect();
    assert_eq!(verify_isomorphism(&ta, &tb, &map), Ok(true));
}
