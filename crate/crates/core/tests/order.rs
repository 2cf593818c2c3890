mod common;

use std::sync::{Arc, OnceLock};

use cutilde_core::fragment::Fragment;
use cutilde_core::samples;
use cutilde_core::{Element, FiberedSemigroup};
use proptest::prelude::*;

fn gallery() -> Vec<Arc<FiberedSemigroup>> {
    vec![
        samples::counterexample(),
        samples::circle(),
        samples::positive_line(),
        samples::torsion_pair(),
        samples::half_plane(),
        samples::double_cover(),
        FiberedSemigroup::positive_cone(2),
    ]
    .into_iter()
    .map(Arc::new)
    .collect()
}

#[test]
fn way_below_agrees_with_chain_definition() {
    for s in gallery().into_iter().filter(|s| s.rank() <= 2) {
        let frag = Fragment::with_fiber_bound(&s, 2, 1);
        let chains = frag.chains(s.rank());
        for a in frag.elements() {
            for b in frag.elements() {
                let oracle = common::way_below_by_chains(&s, &chains, a, b, 4);
                assert_eq!(s.way_below(a, b), oracle, "{a} << {b}\n{s}");
            }
        }
    }
}

#[test]
fn finite_elements_are_compact_in_the_plane() {
    let s = FiberedSemigroup::positive_cone(2);
    let frag = Fragment::new(&s, 3);
    let chains = Fragment::new(&s, 2).chains(2);
    for a in frag.elements().iter().filter(|a| a.x.is_finite()) {
        for b in frag.elements().iter().filter(|b| s.leq(a, b)) {
            assert!(s.way_below(a, b));
            assert!(common::way_below_by_chains(&s, &chains, a, b, 8));
        }
    }
}

#[test]
fn supremum_of_chain_is_least_upper_bound() {
    for s in gallery() {
        let frag = Fragment::with_fiber_bound(&s, 2, 1);
        for c in frag.chains(s.rank()).iter().step_by(7) {
            let sup = s.sup_chain(c);
            for j in 0..4 {
                assert!(s.leq(&s.chain_term(c, j), &sup));
            }
            for u in frag.elements() {
                let upper = (0..6).all(|j| s.leq(&s.chain_term(c, j), u));
                if upper {
                    assert!(s.leq(&sup, u), "sup {sup} not below upper bound {u}");
                }
            }
        }
    }
}

fn fragments() -> &'static [(Arc<FiberedSemigroup>, Vec<Element>)] {
    static CACHE: OnceLock<Vec<(Arc<FiberedSemigroup>, Vec<Element>)>> = OnceLock::new();
    CACHE.get_or_init(|| {
        gallery()
            .into_iter()
            .map(|s| {
                let els = Fragment::new(&s, 3).elements().to_vec();
                (s, els)
            })
            .collect()
    })
}

fn triples() -> impl Strategy<Value = (Arc<FiberedSemigroup>, Element, Element, Element)> {
    proptest::sample::select(fragments()).prop_flat_map(|(s, els)| {
        let p = proptest::sample::select(els.clone());
        (Just(s.clone()), p.clone(), p.clone(), p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_is_an_ordered_commutative_monoid((s, a, b, c) in triples()) {
        prop_assert_eq!(s.add(&s.add(&a, &b), &c), s.add(&a, &s.add(&b, &c)));
        prop_assert_eq!(s.add(&a, &b), s.add(&b, &a));
        prop_assert_eq!(s.add(&a, &s.zero()), a.clone());
        prop_assert!(s.is_element(&s.add(&a, &b)));
        if s.leq(&a, &b) {
            prop_assert!(s.leq(&s.add(&a, &c), &s.add(&b, &c)));
        }
    }

    #[test]
    fn order_is_a_partial_order((s, a, b, c) in triples()) {
        prop_assert!(s.leq(&a, &a));
        if s.leq(&a, &b) && s.leq(&b, &a) {
            prop_assert_eq!(&a, &b);
        }
        if s.leq(&a, &b) && s.leq(&b, &c) {
            prop_assert!(s.leq(&a, &c));
        }
    }

    #[test]
    fn way_below_is_compatible((s, a, b, c) in triples()) {
        if s.way_below(&a, &b) {
            prop_assert!(s.leq(&a, &b));
            if s.leq(&b, &c) {
                prop_assert!(s.way_below(&a, &c));
            }
            if s.way_below(&c, &c) {
                prop_assert!(s.way_below(&s.add(&a, &c), &s.add(&b, &c)));
            }
        }
    }

    #[test]
    fn maximal_witness_dominates_every_witness((s, a, p, _c) in triples()) {
        if s.leq(&s.zero(), &s.add(&a, &p)) {
            let top = s.maximal_pd_witness(&a).expect("a witness exists");
            prop_assert!(s.leq(&p, &top));
            prop_assert!(s.pd_witness(&a).is_some());
        }
        if let Some(w) = s.pd_witness(&a) {
            prop_assert!(s.is_positive(&s.add(&a, &w)));
        }
    }
}

#[test]
fn pd_characterizations_agree() {
    for s in gallery() {
        let frag = Fragment::new(&s, 2);
        let total = frag.elements().iter().all(|a| s.pd_witness(a).is_some());
        let maximal = frag.elements().iter().all(|a| s.maximal_pd_witness(a).is_some());
        let m = s.maximal_elements();
        assert_eq!(total, s.pd_status().holds());
        assert_eq!(maximal, total);
        assert_eq!(m.is_group, total);
    }
}
