//! The built-in catalog of small structures.
//!
//! Every carrier ships under the singleton and the finite selection; the
//! non-distributive carriers (M3, N5) are not S-frames under the finite one.

use crate::error::{Error, Result};
use crate::format::{SelectionSpec, StructureFile};
use crate::order::MeetSemilattice;
use crate::selection::SelectionKind;
use crate::sframe::SFrame;

fn lattice(elements: &[&str], pairs: &[(&str, &str)]) -> MeetSemilattice {
    MeetSemilattice::from_pairs(elements, pairs).expect("catalog carriers are lattices")
}

/// The `n`-element chain `0 < a < b < ... < 1`.
pub fn chain(n: usize) -> MeetSemilattice {
    assert!((1..=26).contains(&n));
    let mut names = vec!["0".to_string()];
    for i in 0..n.saturating_sub(2) {
        names.push(((b'a' + i as u8) as char).to_string());
    }
    if n > 1 {
        names.push("1".into());
    }
    let pairs: Vec<(String, String)> = names.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    MeetSemilattice::from_pairs(&names, &pairs).expect("chains are lattices")
}

/// The four-element Boolean algebra.
pub fn d4() -> MeetSemilattice {
    lattice(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
}

/// Three pairwise incomparable atoms between a bottom and a top.
pub fn m3() -> MeetSemilattice {
    lattice(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
    )
}

/// The pentagon `0 < a < c < 1`, `0 < b < 1`.
pub fn n5() -> MeetSemilattice {
    lattice(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
    )
}

/// Two diamonds stacked along a shared edge (the product of a 2-chain and a
/// 3-chain).
pub fn two_diamonds() -> MeetSemilattice {
    lattice(
        &["0", "a", "b", "c", "d", "1"],
        &[
            ("0", "a"),
            ("0", "b"),
            ("a", "c"),
            ("b", "c"),
            ("b", "d"),
            ("c", "1"),
            ("d", "1"),
        ],
    )
}

/// The catalog carriers by name.
pub fn carriers() -> Vec<(&'static str, MeetSemilattice)> {
    vec![
        ("C2", chain(2)),
        ("C3", chain(3)),
        ("D4", d4()),
        ("M3", m3()),
        ("N5", n5()),
        ("TwoDiamonds", two_diamonds()),
    ]
}

pub const KINDS: [SelectionKind; 2] = [SelectionKind::Singletons, SelectionKind::Finite];

/// Every catalog structure file: each carrier under each symbolic selection,
/// named `<carrier>-<kind>`.
pub fn structure_files() -> Vec<StructureFile> {
    let mut out = Vec::new();
    for (name, l) in carriers() {
        for kind in KINDS {
            let sf = SFrame::new(name, l.clone(), SelectionKind::Singletons).expect("valid");
            let mut file = StructureFile::from_sframe(&sf);
            file.name = format!("{name}-{kind}");
            file.selection = SelectionSpec { kind, sets: None };
            out.push(file);
        }
    }
    out
}

/// Looks up and validates one catalog structure.
pub fn entry(name: &str) -> Result<SFrame> {
    structure_files()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownElement(name.to_string()))?
        .to_sframe()
}

/// The catalog structures that validate as S-frames, with the rejected ones
/// and their errors listed separately.
pub fn valid_entries() -> (Vec<SFrame>, Vec<(String, Error)>) {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for f in structure_files() {
        match f.to_sframe() {
            Ok(l) => ok.push(l),
            Err(e) => bad.push((f.name.clone(), e)),
        }
    }
    (ok, bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shapes() {
        assert_eq!(chain(3).poset().names(), &["0", "a", "1"]);
        let (ok, bad) = valid_entries();
        assert_eq!(ok.len(), 10);
        let rejected: Vec<&str> = bad.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(rejected, vec!["M3-finite", "N5-finite"]);
    }

    #[test]
    fn structure_files_round_trip() {
        for f in structure_files() {
            let again = StructureFile::parse(&f.to_json()).unwrap();
            assert_eq!(f, again);
        }
    }
}
