//! Randomized laws over small lattices.

use std::sync::Arc;

use proptest::prelude::*;

use pframe::congruence::{congruences_by_partition_filter, generate};
use pframe::format::StructureFile;
use pframe::freeframe::sideal_closure;
use pframe::search::{canonical_key, enumerate_lattices, Atom, Predicate};
use pframe::{ElementSet, MeetSemilattice, Poset, SFrame, SelectionKind};

fn lattices() -> Vec<MeetSemilattice> {
    (1..=6).flat_map(|n| enumerate_lattices(n).unwrap()).collect()
}

fn sframe(index: usize, finite: bool) -> SFrame {
    let all = lattices();
    let l = all[index % all.len()].clone();
    let kind = if finite { SelectionKind::Finite } else { SelectionKind::Singletons };
    SFrame::new("t", l.clone(), kind).unwrap_or_else(|_| SFrame::new("t", l, SelectionKind::Singletons).unwrap())
}

fn subset(l: &SFrame, mask: u64) -> ElementSet {
    ElementSet::from_indices(l.size(), (0..l.size()).filter(|i| mask >> i & 1 == 1))
}

fn predicate() -> impl Strategy<Value = Predicate> {
    let leaf = prop_oneof![
        prop::sample::select(vec!['a', 'b', 'c', 'd']).prop_map(|c| Predicate::Atom(Atom::Ladder(c))),
        Just(Predicate::Atom(Atom::Distributive)),
        Just(Predicate::Atom(Atom::Full)),
        Just(Predicate::Atom(Atom::Holds("boolean-ladder".into()))),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|p| Predicate::Not(Box::new(p))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Predicate::And),
            prop::collection::vec(inner, 2..4).prop_map(Predicate::Or),
        ]
    })
}

proptest! {
    #[test]
    fn ideal_closure_is_a_closure_operator(i in 0usize..64, finite: bool, m1: u64, m2: u64) {
        let l = sframe(i, finite);
        let (a, b) = (subset(&l, m1), subset(&l, m2));
        let ca = sideal_closure(&l, &a);
        prop_assert!(a.is_subset(&ca));
        prop_assert_eq!(&sideal_closure(&l, &ca), &ca);
        let ab = a.union(&b);
        prop_assert!(ca.is_subset(&sideal_closure(&l, &ab)));
    }

    #[test]
    fn generated_congruence_is_least(i in 0usize..64, finite: bool, raw in prop::collection::vec((0usize..8, 0usize..8), 0..3)) {
        let l = sframe(i, finite);
        let n = l.size();
        let pairs: Vec<(usize, usize)> = raw.into_iter().map(|(x, y)| (x % n, y % n)).collect();
        let g = generate(&l, &pairs);
        let all = congruences_by_partition_filter(&l);
        prop_assert!(all.contains(&g));
        for &(x, y) in &pairs {
            prop_assert!(g.related(x, y));
        }
        for t in all.iter().filter(|t| pairs.iter().all(|&(x, y)| t.related(x, y))) {
            prop_assert!(g.refines(t));
        }
    }

    #[test]
    fn canonical_key_ignores_labels(i in 0usize..64, seed in any::<u64>()) {
        let all = lattices();
        let l = &all[i % all.len()];
        let n = l.size();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for k in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (s >> 33) as usize % (k + 1));
        }
        let names: Vec<String> = (0..n).map(|k| format!("e{k}")).collect();
        let relabelled = MeetSemilattice::new(Poset::from_relation(names, |x, y| l.le(perm[x], perm[y])).unwrap()).unwrap();
        prop_assert_eq!(canonical_key(&relabelled), canonical_key(l));
    }

    #[test]
    fn structure_files_round_trip(i in 0usize..64, finite: bool) {
        let l = Arc::new(sframe(i, finite));
        let file = StructureFile::from_sframe(&l);
        let back = StructureFile::parse(&file.to_json()).unwrap().to_sframe().unwrap();
        prop_assert_eq!(back.kind(), l.kind());
        prop_assert_eq!(canonical_key(back.carrier()), canonical_key(l.carrier()));
        prop_assert!(l.elements().all(|x| l.elements().all(|y| l.le(x, y) == back.le(x, y))));
    }

    #[test]
    fn predicates_print_and_parse_back(p in predicate()) {
        let text = p.to_string();
        let back: Predicate = text.parse().unwrap();
        prop_assert_eq!(back.to_string(), text);
    }
}
