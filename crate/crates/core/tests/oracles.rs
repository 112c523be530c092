//! Enumerations checked against brute-force definitions on every lattice
//! with at most six elements.

use std::sync::Arc;

use pframe::analysis::{preimage_cong, preserves_joins, preserves_meets, Analysis};
use pframe::congruence::{congruences_by_partition_filter, SCongruence};
use pframe::search::enumerate_lattices;
use pframe::set::all_subsets;
use pframe::sframe::{enumerate_maps, is_right_galois};
use pframe::{Capacity, SFrame, SelectionKind};

fn small_sframes(max: usize) -> Vec<Arc<SFrame>> {
    let mut out = Vec::new();
    for n in 1..=max {
        for (i, l) in enumerate_lattices(n).unwrap().into_iter().enumerate() {
            for kind in [SelectionKind::Singletons, SelectionKind::Finite] {
                if let Ok(s) = SFrame::new(&format!("L{n}.{i}-{kind:?}"), l.clone(), kind) {
                    out.push(Arc::new(s));
                }
            }
        }
    }
    out
}

/// Down-sets containing the bottom, closed under the joins the selection
/// designates: every down-set for singletons, binary joins for finite.
fn ideal_by_definition(l: &SFrame, xs: &pframe::ElementSet) -> bool {
    let down = xs.iter().all(|x| l.elements().all(|y| !l.le(y, x) || xs.contains(y)));
    let closed = match l.kind() {
        SelectionKind::Finite => xs.iter().all(|x| xs.iter().all(|y| xs.contains(l.join(x, y)))),
        _ => true,
    };
    xs.contains(l.bottom()) && down && closed
}

fn congruence_by_definition(l: &SFrame, t: &SCongruence) -> bool {
    let n = l.size();
    (0..n).all(|x| {
        (0..n).all(|y| {
            !t.related(x, y)
                || l.elements().all(|z| {
                    t.related(l.meet(x, z), l.meet(y, z))
                        && (l.kind() != SelectionKind::Finite || t.related(l.join(x, z), l.join(y, z)))
                })
        })
    })
}

#[test]
fn free_frames_match_the_definition() {
    for l in small_sframes(6) {
        let a = Analysis::new(l.clone(), Capacity::default()).unwrap();
        let mut brute: Vec<_> = all_subsets(l.size()).filter(|s| ideal_by_definition(&l, s)).collect();
        brute.sort();
        let mut got = a.free.ideals().to_vec();
        got.sort();
        assert_eq!(got, brute, "{}", l.name());
        if l.kind() == SelectionKind::Finite {
            assert!(a.down.is_iso(), "{}", l.name());
        }
    }
}

#[test]
fn congruences_match_the_definition() {
    for l in small_sframes(6) {
        let a = Analysis::new(l.clone(), Capacity::default()).unwrap();
        let filtered = congruences_by_partition_filter(&l);
        assert_eq!(a.congruences.congruences(), filtered.as_slice(), "{}", l.name());
        assert!(filtered.iter().all(|t| congruence_by_definition(&l, t)), "{}", l.name());
    }
}

#[test]
fn comparison_maps_form_a_galois_connection() {
    for l in small_sframes(6) {
        let a = Analysis::new(l.clone(), Capacity::default()).unwrap();
        let d: Vec<usize> = a.big_d.iter().map(|d| d.expect("preimages are congruences")).collect();
        let (fl, fh) = (a.congruences.frame().carrier(), a.free_congruences.frame().carrier());
        assert!(is_right_galois(fl, fh, &a.big_e, &d), "{}", l.name());
        assert!(preserves_joins(fl, fh, &a.big_e), "{}", l.name());
        assert!(preserves_meets(fh, fl, &d), "{}", l.name());
    }
}

#[test]
fn preimages_of_congruences_are_congruences() {
    let frames = small_sframes(4);
    for l in &frames {
        for m in frames.iter().filter(|m| m.kind() == l.kind()) {
            let cf_m = Analysis::new(m.clone(), Capacity::default()).unwrap().congruences;
            for h in enumerate_maps(l, m) {
                for phi in cf_m.congruences() {
                    assert!(congruence_by_definition(l, &preimage_cong(&h, phi)));
                }
            }
        }
    }
}
