//! Validated partial frames and their maps; right and left adjoints.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::{check_lattice_hom, MeetSemilattice, MAX_CARRIER};
use crate::selection::{make_selection, Regime, SelectionFunction, SelectionKind};
use crate::set::ElementSet;

/// A meet-semilattice together with a selection function, in which every
/// designated subset has a join and binary meets distribute over those joins.
#[derive(Clone, Debug)]
pub struct SFrame {
    name: String,
    selection: SelectionFunction,
    regime: Regime,
    bottom: usize,
}

/// Validates `selection`'s carrier as an S-frame.
pub fn validate_sframe(name: &str, selection: SelectionFunction) -> Result<SFrame> {
    let l = selection.carrier().clone();
    let n = l.size();
    let names = |xs: &[usize]| xs.iter().map(|&x| l.name(x).to_string()).collect::<Vec<_>>();
    let bottom = l.bottom().ok_or_else(|| Error::MissingJoin(Vec::new()))?;
    match selection.kind() {
        SelectionKind::Singletons => {}
        SelectionKind::Finite => {
            for x in 0..n {
                for y in x + 1..n {
                    if l.join(x, y).is_none() {
                        return Err(Error::MissingJoin(names(&[x, y])));
                    }
                }
            }
            for a in 0..n {
                for x in 0..n {
                    for y in x + 1..n {
                        let lhs = l.meet(a, l.join(x, y).unwrap());
                        let rhs = l.join(l.meet(a, x), l.meet(a, y)).unwrap();
                        if lhs != rhs {
                            return Err(Error::DistributivityFailure {
                                a: l.name(a).into(),
                                set: names(&[x, y]),
                            });
                        }
                    }
                }
            }
        }
        SelectionKind::Explicit => {
            for b in selection.explicit_family() {
                let Some(j) = l.join_all(b) else {
                    return Err(Error::MissingJoin(l.poset().names_of(b)));
                };
                for a in 0..n {
                    let meets = ElementSet::from_indices(n, b.iter().map(|x| l.meet(a, x)));
                    if l.join_all(&meets) != Some(l.meet(a, j)) {
                        return Err(Error::DistributivityFailure {
                            a: l.name(a).into(),
                            set: l.poset().names_of(b),
                        });
                    }
                }
            }
        }
    }
    let regime = selection.regime();
    Ok(SFrame {
        name: name.to_string(),
        selection,
        regime,
        bottom,
    })
}

impl SFrame {
    /// Builds an S-frame from a carrier and a symbolic selection kind.
    pub fn new(name: &str, carrier: MeetSemilattice, kind: SelectionKind) -> Result<SFrame> {
        let sel = make_selection(Arc::new(carrier), kind, None)?;
        validate_sframe(name, sel)
    }

    /// Wraps a finite distributive lattice as a full frame (every subset
    /// designated).
    pub fn full_frame(name: &str, carrier: Arc<MeetSemilattice>) -> Result<SFrame> {
        validate_sframe(name, make_selection(carrier, SelectionKind::Finite, None)?)
    }

    /// The same carrier under another symbolic selection.
    pub fn reselect(&self, kind: SelectionKind) -> Result<SFrame> {
        let sel = make_selection(self.carrier_arc().clone(), kind, None)?;
        validate_sframe(&self.name, sel)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn selection(&self) -> &SelectionFunction {
        &self.selection
    }

    pub fn kind(&self) -> SelectionKind {
        self.selection.kind()
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn carrier(&self) -> &MeetSemilattice {
        self.selection.carrier()
    }

    pub fn carrier_arc(&self) -> &Arc<MeetSemilattice> {
        self.selection.carrier()
    }

    pub fn size(&self) -> usize {
        self.carrier().size()
    }

    pub fn elem(&self, x: usize) -> &str {
        self.carrier().name(x)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.carrier().index_of(name)
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.carrier().le(x, y)
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.carrier().meet(x, y)
    }

    /// Binary join. A finite S-frame has a top and a bottom, hence all
    /// binary joins.
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.carrier()
            .join(x, y)
            .expect("finite S-frames are lattices")
    }

    pub fn join_all(&self, xs: &ElementSet) -> usize {
        xs.iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, xs: &ElementSet) -> usize {
        self.carrier().meet_all(xs)
    }

    pub fn top(&self) -> usize {
        self.carrier().top()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn is_designated(&self, xs: &ElementSet) -> bool {
        self.selection.is_designated(xs)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn names_of(&self, xs: &ElementSet) -> Vec<String> {
        self.carrier().poset().names_of(xs)
    }

    pub fn complement(&self, x: usize) -> Option<usize> {
        self.carrier().complement(x)
    }
}

/// A structure-preserving map between S-frames, stored as an index table.
#[derive(Clone, Debug)]
pub struct SFrameMap {
    domain: Arc<SFrame>,
    codomain: Arc<SFrame>,
    table: Vec<usize>,
}

/// Validates a raw table as an S-frame map: finite meets, top, and joins of
/// designated subsets of the domain are preserved.
pub fn validate_map(table: Vec<usize>, domain: &Arc<SFrame>, codomain: &Arc<SFrame>) -> Result<SFrameMap> {
    let (l, m) = (domain.as_ref(), codomain.as_ref());
    if table.len() != l.size() {
        return Err(Error::TableNotTotal(
            l.elem(table.len().min(l.size().saturating_sub(1))).into(),
        ));
    }
    if let Some(x) = table.iter().position(|&y| y >= m.size()) {
        return Err(Error::TableNotTotal(l.elem(x).into()));
    }
    let f = |x: usize| table[x];
    for x in l.elements() {
        for y in x..l.size() {
            if f(l.meet(x, y)) != m.meet(f(x), f(y)) {
                return Err(Error::MeetViolation(l.elem(x).into(), l.elem(y).into()));
            }
        }
    }
    if f(l.top()) != m.top() {
        return Err(Error::TopViolation);
    }
    if f(l.bottom()) != m.bottom() {
        return Err(Error::JoinViolation(Vec::new()));
    }
    let n = l.size();
    match l.kind() {
        SelectionKind::Singletons => {}
        SelectionKind::Finite => {
            for x in l.elements() {
                for y in x + 1..n {
                    if f(l.join(x, y)) != m.join(f(x), f(y)) {
                        return Err(Error::JoinViolation(vec![
                            l.elem(x).into(),
                            l.elem(y).into(),
                        ]));
                    }
                }
            }
        }
        SelectionKind::Explicit => {
            for b in l.selection().explicit_family() {
                let image = ElementSet::from_indices(m.size(), b.iter().map(f));
                if f(l.join_all(b)) != m.join_all(&image) {
                    return Err(Error::JoinViolation(l.names_of(b)));
                }
            }
        }
    }
    Ok(SFrameMap {
        domain: domain.clone(),
        codomain: codomain.clone(),
        table,
    })
}

/// Validates a table as a lattice homomorphism (binary meets and joins, top
/// and bottom) that is also an S-frame map.
pub fn validate_lattice_map(table: Vec<usize>, domain: &Arc<SFrame>, codomain: &Arc<SFrame>) -> Result<SFrameMap> {
    if table.len() == domain.size() && table.iter().all(|&y| y < codomain.size()) {
        check_lattice_hom(domain.carrier(), codomain.carrier(), &table)?;
    }
    validate_map(table, domain, codomain)
}

impl SFrameMap {
    pub fn identity(l: &Arc<SFrame>) -> SFrameMap {
        SFrameMap {
            domain: l.clone(),
            codomain: l.clone(),
            table: l.elements().collect(),
        }
    }

    pub fn domain(&self) -> &Arc<SFrame> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<SFrame> {
        &self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SFrameMap) -> Result<SFrameMap> {
        if !Arc::ptr_eq(&self.codomain, &other.domain) {
            return Err(Error::NotComposable);
        }
        Ok(SFrameMap {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            table: self.table.iter().map(|&y| other.table[y]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.size()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain.size()];
        for &y in &self.table {
            seen[y] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Element-name rendering of the table.
    pub fn describe(&self) -> Vec<(String, String)> {
        self.domain
            .elements()
            .map(|x| (self.domain.elem(x).into(), self.codomain.elem(self.table[x]).into()))
            .collect()
    }
}

/// Outcome of an adjoint computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Adjoint {
    Present(Vec<usize>),
    /// No adjoint; `witness` is a codomain element whose defining set has no
    /// maximum (right) or minimum (left).
    Absent { witness: usize },
}

impl Adjoint {
    pub fn table(&self) -> Option<&[usize]> {
        match self {
            Adjoint::Present(t) => Some(t),
            Adjoint::Absent { .. } => None,
        }
    }

    pub fn is_present(&self) -> bool {
        matches!(self, Adjoint::Present(_))
    }
}

/// Right adjoint of a monotone table `h : dom -> cod`:
/// `r(m) = max {x : h(x) <= m}` whenever every such maximum exists.
pub fn right_adjoint_of(dom: &MeetSemilattice, cod: &MeetSemilattice, h: &[usize]) -> Adjoint {
    let n = dom.size();
    let mut r = Vec::with_capacity(cod.size());
    for m in 0..cod.size() {
        let below = ElementSet::from_indices(n, (0..n).filter(|&x| cod.le(h[x], m)));
        match dom.poset().maximum(&below) {
            Some(x) => r.push(x),
            None => return Adjoint::Absent { witness: m },
        }
    }
    Adjoint::Present(r)
}

/// Left adjoint: `l(m) = min {x : m <= h(x)}`.
pub fn left_adjoint_of(dom: &MeetSemilattice, cod: &MeetSemilattice, h: &[usize]) -> Adjoint {
    let n = dom.size();
    let mut l = Vec::with_capacity(cod.size());
    for m in 0..cod.size() {
        let above = ElementSet::from_indices(n, (0..n).filter(|&x| cod.le(m, h[x])));
        match dom.poset().minimum(&above) {
            Some(x) => l.push(x),
            None => return Adjoint::Absent { witness: m },
        }
    }
    Adjoint::Present(l)
}

/// `h(x) <= m  <=>  x <= r(m)` for all `x, m`.
pub fn is_right_galois(dom: &MeetSemilattice, cod: &MeetSemilattice, h: &[usize], r: &[usize]) -> bool {
    (0..dom.size()).all(|x| (0..cod.size()).all(|m| cod.le(h[x], m) == dom.le(x, r[m])))
}

/// `l(m) <= x  <=>  m <= h(x)` for all `x, m`.
pub fn is_left_galois(dom: &MeetSemilattice, cod: &MeetSemilattice, h: &[usize], l: &[usize]) -> bool {
    (0..dom.size()).all(|x| (0..cod.size()).all(|m| dom.le(l[m], x) == cod.le(m, h[x])))
}

pub fn right_adjoint(h: &SFrameMap) -> Adjoint {
    let adj = right_adjoint_of(h.domain.carrier(), h.codomain.carrier(), &h.table);
    if let Adjoint::Present(r) = &adj {
        debug_assert!(is_right_galois(h.domain.carrier(), h.codomain.carrier(), &h.table, r));
    }
    adj
}

pub fn left_adjoint(h: &SFrameMap) -> Adjoint {
    let adj = left_adjoint_of(h.domain.carrier(), h.codomain.carrier(), &h.table);
    if let Adjoint::Present(l) = &adj {
        debug_assert!(is_left_galois(h.domain.carrier(), h.codomain.carrier(), &h.table, l));
    }
    adj
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DensityProfile {
    pub dense: bool,
    pub codense: bool,
    pub injective: bool,
    pub surjective: bool,
}

pub fn density_profile(h: &SFrameMap) -> DensityProfile {
    let (l, m) = (h.domain.as_ref(), h.codomain.as_ref());
    DensityProfile {
        dense: l.elements().all(|x| h.apply(x) != m.bottom() || x == l.bottom()),
        codense: l.elements().all(|x| h.apply(x) != m.top() || x == l.top()),
        injective: h.is_injective(),
        surjective: h.is_surjective(),
    }
}

/// Every S-frame map `l -> m`, found by enumerating monotone, meet- and
/// top-preserving tables and filtering them through [`validate_map`].
pub fn enumerate_maps(l: &Arc<SFrame>, m: &Arc<SFrame>) -> Vec<SFrameMap> {
    let n = l.size();
    assert!(n <= MAX_CARRIER);
    // Visit domain elements bottom-up so every meet x∧y of visited
    // elements is already assigned.
    let mut order: Vec<usize> = l.elements().collect();
    order.sort_by_key(|&x| (l.carrier().poset().down_set(x).len(), x));
    let mut table = vec![usize::MAX; n];
    let mut out = Vec::new();
    extend_table(l, m, &order, 0, &mut table, &mut out);
    out
}

fn extend_table(
    l: &Arc<SFrame>,
    m: &Arc<SFrame>,
    order: &[usize],
    depth: usize,
    table: &mut Vec<usize>,
    out: &mut Vec<SFrameMap>,
) {
    if depth == order.len() {
        if let Ok(map) = validate_map(table.clone(), l, m) {
            out.push(map);
        }
        return;
    }
    let x = order[depth];
    let candidates: Vec<usize> = if x == l.top() {
        vec![m.top()]
    } else if x == l.bottom() {
        vec![m.bottom()]
    } else {
        m.elements().collect()
    };
    for y in candidates {
        let consistent = order[..depth].iter().all(|&z| {
            let fz = table[z];
            (!l.le(z, x) || m.le(fz, y)) && table[l.meet(x, z)] == m.meet(y, fz)
        });
        if consistent {
            table[x] = y;
            extend_table(l, m, order, depth + 1, table, out);
            table[x] = usize::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn sf(l: MeetSemilattice, kind: SelectionKind) -> Arc<SFrame> {
        Arc::new(SFrame::new("t", l, kind).unwrap())
    }

    #[test]
    fn validation_examples() {
        assert_eq!(SFrame::new("d4", catalog::d4(), SelectionKind::Finite).unwrap().regime(), Regime::Full);
        assert_eq!(SFrame::new("m3", catalog::m3(), SelectionKind::Singletons).unwrap().regime(), Regime::Base);
        assert_eq!(
            SFrame::new("m3", catalog::m3(), SelectionKind::Finite).unwrap_err(),
            Error::DistributivityFailure {
                a: "a".into(),
                set: vec!["b".into(), "c".into()]
            }
        );
    }

    #[test]
    fn explicit_family_validation() {
        // x and y have no meet, so this is not even a meet-semilattice.
        let l = MeetSemilattice::from_pairs(&["x", "y", "1"], &[("x", "1"), ("y", "1")]);
        assert!(l.is_err());
        let v = MeetSemilattice::from_pairs(&["0", "x", "y", "1"], &[("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")])
            .unwrap();
        let sel = make_selection(
            Arc::new(v),
            SelectionKind::Explicit,
            Some(vec![ElementSet::from_indices(4, [1, 2])]),
        )
        .unwrap();
        assert!(validate_sframe("v", sel).is_ok());
    }

    #[test]
    fn collapse_map_examples() {
        let table = vec![0, 0, 0, 1];
        let d4s = sf(catalog::d4(), SelectionKind::Singletons);
        let c2s = sf(catalog::chain(2), SelectionKind::Singletons);
        let h = validate_map(table.clone(), &d4s, &c2s).unwrap();
        assert_eq!(right_adjoint(&h), Adjoint::Absent { witness: 0 });

        let d4f = sf(catalog::d4(), SelectionKind::Finite);
        let c2f = sf(catalog::chain(2), SelectionKind::Finite);
        assert_eq!(
            validate_map(table, &d4f, &c2f).unwrap_err(),
            Error::JoinViolation(vec!["a".into(), "b".into()])
        );
    }

    #[test]
    fn identity_adjoints() {
        let d4 = sf(catalog::d4(), SelectionKind::Finite);
        let id = SFrameMap::identity(&d4);
        assert_eq!(right_adjoint(&id), Adjoint::Present(vec![0, 1, 2, 3]));
        assert_eq!(left_adjoint(&id), Adjoint::Present(vec![0, 1, 2, 3]));
        let p = density_profile(&id);
        assert!(p.dense && p.codense && p.injective && p.surjective);
    }

    #[test]
    fn left_adjoint_of_chain_collapse() {
        let c3 = sf(catalog::chain(3), SelectionKind::Finite);
        let c2 = sf(catalog::chain(2), SelectionKind::Finite);
        let h = validate_map(vec![0, 1, 1], &c3, &c2).unwrap();
        assert_eq!(left_adjoint(&h), Adjoint::Present(vec![0, 1]));
        let g = validate_map(vec![0, 0, 1], &c3, &c2).unwrap();
        assert!(!density_profile(&g).dense);
    }

    #[test]
    fn enumerated_maps_are_exactly_the_valid_tables() {
        for kind in [SelectionKind::Singletons, SelectionKind::Finite] {
            let c3 = sf(catalog::chain(3), kind);
            let d4 = sf(catalog::d4(), kind);
            let found: Vec<Vec<usize>> = enumerate_maps(&c3, &d4).iter().map(|f| f.table().to_vec()).collect();
            let mut brute = Vec::new();
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        let t = vec![a, b, c];
                        if validate_map(t.clone(), &c3, &d4).is_ok() {
                            brute.push(t);
                        }
                    }
                }
            }
            let mut found_sorted = found.clone();
            found_sorted.sort();
            brute.sort();
            assert_eq!(found_sorted, brute);
        }
    }

    #[test]
    fn composition_of_right_adjoints() {
        for kind in [SelectionKind::Singletons, SelectionKind::Finite] {
            let objs = [
                sf(catalog::chain(2), kind),
                sf(catalog::chain(3), kind),
                sf(catalog::d4(), kind),
            ];
            for a in &objs {
                for b in &objs {
                    for c in &objs {
                        for f in enumerate_maps(a, b) {
                            for g in enumerate_maps(b, c) {
                                let gf = f.then(&g).unwrap();
                                if let (Adjoint::Present(rf), Adjoint::Present(rg)) = (right_adjoint(&f), right_adjoint(&g)) {
                                    let composed: Vec<usize> = rg.iter().map(|&y| rf[y]).collect();
                                    assert_eq!(right_adjoint(&gf), Adjoint::Present(composed));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
