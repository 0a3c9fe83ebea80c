use std::collections::BTreeSet;

use proptest::prelude::*;

use coarse_rigidity::coarse::{CoarseFiltration, Relation};
use coarse_rigidity::combinatorics::{decompose_partial_bijections, hall_selector};
use coarse_rigidity::rigidity::{cantor_bernstein, PointMap};

fn relation(max_n: usize) -> impl Strategy<Value = Relation> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n)
            .prop_map(move |pairs| Relation::from_pairs(n, pairs).unwrap())
    })
}

fn relation_triple(max_n: usize) -> impl Strategy<Value = (Relation, Relation, Relation)> {
    (1..=max_n).prop_flat_map(|n| {
        let r = move || proptest::collection::vec((0..n, 0..n), 0..2 * n).prop_map(move |p| Relation::from_pairs(n, p).unwrap());
        (r(), r(), r())
    })
}

proptest! {
    #[test]
    fn composition_is_associative((a, b, c) in relation_triple(12)) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_reverses_composition((a, b, _c) in relation_triple(12)) {
        let lhs = a.compose(&b).unwrap().inverse();
        let rhs = b.inverse().compose(&a.inverse()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn splitting_points_contain_zero_and_are_inverse_invariant(e in relation(20)) {
        let s = e.splitting_points();
        prop_assert!(s.contains(&0));
        prop_assert_eq!(s, e.inverse().splitting_points());
    }

    #[test]
    fn decomposition_is_exact(e in relation(20)) {
        let pieces = decompose_partial_bijections(&e);
        let (rb, cb) = e.section_bounds();
        prop_assert_eq!(pieces.len(), rb.max(cb));
        let union: BTreeSet<(usize, usize)> = pieces.iter().flat_map(|p| p.pairs().iter().copied()).collect();
        prop_assert_eq!(union.len(), pieces.iter().map(|p| p.len()).sum::<usize>());
        prop_assert_eq!(&union, e.pairs());
    }

    #[test]
    fn membership_level_is_least_level(e in relation(10), r in 1usize..3) {
        let f = CoarseFiltration::band(e.size(), r, 32).unwrap();
        let cert = f.membership_level(&e).unwrap();
        let k = cert.level().expect("everything on a connected line is bounded");
        prop_assert!(e.is_subset(&f.level(k).unwrap()));
        if k > 0 {
            prop_assert!(!e.is_subset(&f.level(k - 1).unwrap()));
        }
    }

    #[test]
    fn hall_selectors_are_injective_choices(
        family in proptest::collection::vec(proptest::collection::btree_set(0usize..8, 0..4), 1..8)
    ) {
        if let Some(sel) = hall_selector(&family).selector() {
            prop_assert!(sel.iter().zip(&family).all(|(e, s)| s.contains(e)));
            prop_assert_eq!(sel.iter().collect::<BTreeSet<_>>().len(), family.len());
        }
    }

    #[test]
    fn cantor_bernstein_yields_a_bijection(
        a in Just((0..12usize).collect::<Vec<_>>()).prop_shuffle(),
        b in Just((0..12usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let f = PointMap::total(12, &a).unwrap();
        let g = PointMap::total(12, &b).unwrap();
        let h = cantor_bernstein(&f, &g).unwrap();
        prop_assert!(h.is_total());
        prop_assert!(h.collision().is_none());
    }
}
