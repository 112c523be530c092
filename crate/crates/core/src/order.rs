//! Finite posets, meet-semilattices and lattices.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Largest carrier accepted from user input (structure files, witness search).
///
/// Derived frames (free frames, congruence frames) are bounded separately by
/// [`crate::Capacity`].
pub const MAX_CARRIER: usize = 64;

/// Sentinel used in join tables for pairs without a least upper bound.
const NO_JOIN: u32 = u32::MAX;

/// A finite partial order with named elements.
#[derive(Clone, Debug)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    // up[x] = {y : x <= y}, down[x] = {y : y <= x}
    up: Vec<ElementSet>,
    down: Vec<ElementSet>,
    // upper covers of each element
    covers: Vec<ElementSet>,
}

fn index_names(names: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(Error::DuplicateElement(n.clone()));
        }
    }
    Ok(index)
}

/// Builds a poset from element names and `(lesser, greater)` pairs; the
/// reflexive-transitive closure of the pairs is taken.
pub fn build_poset<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<Poset> {
    let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
    let index = index_names(&names)?;
    let n = names.len();
    let lookup = |s: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| Error::UnknownElement(s.to_string()))
    };
    let mut up: Vec<ElementSet> = (0..n).map(|i| ElementSet::singleton(n, i)).collect();
    for (lo, hi) in pairs {
        let (lo, hi) = (lookup(lo.as_ref())?, lookup(hi.as_ref())?);
        up[lo].insert(hi);
    }
    // Warshall over bitset rows.
    for k in 0..n {
        let row_k = up[k].clone();
        for row in up.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
    Poset::from_up_sets(names, index, up)
}

impl Poset {
    /// Builds a poset from an explicit order relation, `le(x, y)` meaning
    /// `x <= y`. The relation must already be reflexive and transitive.
    pub fn from_relation<F>(names: Vec<String>, le: F) -> Result<Poset>
    where
        F: Fn(usize, usize) -> bool,
    {
        let index = index_names(&names)?;
        let n = names.len();
        let up: Vec<ElementSet> = (0..n)
            .map(|x| ElementSet::from_indices(n, (0..n).filter(|&y| le(x, y))))
            .collect();
        for x in 0..n {
            if !up[x].contains(x) {
                return Err(Error::Parse(format!("relation not reflexive at `{}`", names[x])));
            }
            for y in up[x].iter() {
                if !up[y].is_subset(&up[x]) {
                    return Err(Error::Parse(format!(
                        "relation not transitive through `{}`",
                        names[y]
                    )));
                }
            }
        }
        Poset::from_up_sets(names, index, up)
    }

    fn from_up_sets(
        names: Vec<String>,
        index: HashMap<String, usize>,
        up: Vec<ElementSet>,
    ) -> Result<Poset> {
        let n = names.len();
        let mut down: Vec<ElementSet> = (0..n).map(|_| ElementSet::empty(n)).collect();
        for x in 0..n {
            for y in up[x].iter() {
                if x != y && up[y].contains(x) {
                    return Err(Error::CycleDetected(names[x].clone(), names[y].clone()));
                }
                down[y].insert(x);
            }
        }
        let covers = (0..n)
            .map(|x| {
                let mut strict = up[x].clone();
                strict.remove(x);
                let mut above = ElementSet::empty(n);
                for z in strict.iter() {
                    let mut s = up[z].clone();
                    s.remove(z);
                    above.union_with(&s);
                }
                strict.difference(&above)
            })
            .collect();
        Ok(Poset {
            names,
            index,
            up,
            down,
            covers,
        })
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.le(x, y)
    }

    pub fn up_set(&self, x: usize) -> &ElementSet {
        &self.up[x]
    }

    pub fn down_set(&self, x: usize) -> &ElementSet {
        &self.down[x]
    }

    /// Upper covers of `x`.
    pub fn covers_of(&self, x: usize) -> &ElementSet {
        &self.covers[x]
    }

    /// All cover pairs `(lower, upper)` in index order.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size())
            .flat_map(|x| self.covers[x].iter().map(move |y| (x, y)))
            .collect()
    }

    /// Set of lower bounds common to every member of `xs` (the whole carrier
    /// for the empty set).
    pub fn lower_bounds(&self, xs: &ElementSet) -> ElementSet {
        let mut acc = ElementSet::full(self.size());
        for x in xs.iter() {
            acc.intersect_with(&self.down[x]);
        }
        acc
    }

    pub fn upper_bounds(&self, xs: &ElementSet) -> ElementSet {
        let mut acc = ElementSet::full(self.size());
        for x in xs.iter() {
            acc.intersect_with(&self.up[x]);
        }
        acc
    }

    /// The maximum of `xs`, if it has one.
    pub fn maximum(&self, xs: &ElementSet) -> Option<usize> {
        xs.iter().find(|&m| xs.is_subset(&self.down[m]))
    }

    pub fn minimum(&self, xs: &ElementSet) -> Option<usize> {
        xs.iter().find(|&m| xs.is_subset(&self.up[m]))
    }

    pub fn maximal_elements(&self, xs: &ElementSet) -> Vec<usize> {
        xs.iter()
            .filter(|&m| xs.iter().all(|y| !self.lt(m, y)))
            .collect()
    }

    pub fn top(&self) -> Option<usize> {
        self.maximum(&ElementSet::full(self.size()))
    }

    pub fn bottom(&self) -> Option<usize> {
        self.minimum(&ElementSet::full(self.size()))
    }

    pub fn is_downset(&self, xs: &ElementSet) -> bool {
        xs.iter().all(|x| self.down[x].is_subset(xs))
    }

    pub fn downset_of(&self, xs: &ElementSet) -> ElementSet {
        let mut acc = ElementSet::empty(self.size());
        for x in xs.iter() {
            acc.union_with(&self.down[x]);
        }
        acc
    }

    pub fn names_of(&self, xs: &ElementSet) -> Vec<String> {
        xs.iter().map(|x| self.names[x].clone()).collect()
    }

    /// `le` as a dense boolean matrix, row-major.
    pub fn le_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.size())
            .map(|x| (0..self.size()).map(|y| self.le(x, y)).collect())
            .collect()
    }
}

/// Greatest lower bound of `xs`; the empty set's glb is the top, if any.
pub fn glb(p: &Poset, xs: &ElementSet) -> Option<usize> {
    p.maximum(&p.lower_bounds(xs))
}

/// Least upper bound of `xs`; the empty set's lub is the bottom, if any.
pub fn lub(p: &Poset, xs: &ElementSet) -> Option<usize> {
    p.minimum(&p.upper_bounds(xs))
}

/// A finite meet-semilattice with top, with tabulated binary meets and
/// (partial) binary joins.
#[derive(Clone, Debug)]
pub struct MeetSemilattice {
    poset: Poset,
    meet: Vec<u32>,
    join: Vec<u32>,
    top: usize,
    bottom: Option<usize>,
}

impl MeetSemilattice {
    pub fn new(poset: Poset) -> Result<MeetSemilattice> {
        let n = poset.size();
        let top = poset.top().ok_or(Error::NoTop)?;
        let bottom = poset.bottom();
        let mut meet = vec![0u32; n * n];
        let mut join = vec![NO_JOIN; n * n];
        for x in 0..n {
            for y in x..n {
                let pair = ElementSet::from_indices(n, [x, y]);
                let m = glb(&poset, &pair).ok_or_else(|| {
                    Error::NotMeetSemilattice(poset.name(x).into(), poset.name(y).into())
                })?;
                meet[x * n + y] = m as u32;
                meet[y * n + x] = m as u32;
                if let Some(j) = lub(&poset, &pair) {
                    join[x * n + y] = j as u32;
                    join[y * n + x] = j as u32;
                }
            }
        }
        Ok(MeetSemilattice {
            poset,
            meet,
            join,
            top,
            bottom,
        })
    }

    pub fn from_pairs<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<MeetSemilattice> {
        MeetSemilattice::new(build_poset(elements, pairs)?)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn name(&self, x: usize) -> &str {
        self.poset.name(x)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.poset.index_of(name)
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.poset.le(x, y)
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.size() + y] as usize
    }

    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        match self.join[x * self.size() + y] {
            NO_JOIN => None,
            j => Some(j as usize),
        }
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    pub fn meet_all(&self, xs: &ElementSet) -> usize {
        xs.iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, xs: &ElementSet) -> Option<usize> {
        lub(&self.poset, xs)
    }

    pub fn is_lattice(&self) -> bool {
        self.join.iter().all(|&j| j != NO_JOIN) && self.bottom.is_some()
    }

    /// Some `x'` with `x ∧ x' = 0` and `x ∨ x' = 1`.
    pub fn complement(&self, x: usize) -> Option<usize> {
        let bottom = self.bottom?;
        (0..self.size()).find(|&y| self.meet(x, y) == bottom && self.join(x, y) == Some(self.top))
    }

    pub fn all_elements(&self) -> ElementSet {
        ElementSet::full(self.size())
    }
}

/// Checks that `table` preserves binary meets, binary joins, top and bottom
/// between two finite lattices.
pub fn check_lattice_hom(dom: &MeetSemilattice, cod: &MeetSemilattice, table: &[usize]) -> Result<()> {
    let f = |x: usize| table[x];
    let n = dom.size();
    for x in 0..n {
        for y in x + 1..n {
            if f(dom.meet(x, y)) != cod.meet(f(x), f(y)) {
                return Err(Error::MeetViolation(dom.name(x).into(), dom.name(y).into()));
            }
            let (Some(j), Some(k)) = (dom.join(x, y), cod.join(f(x), f(y))) else {
                return Err(Error::JoinUndefined(dom.name(x).into(), dom.name(y).into()));
            };
            if f(j) != k {
                return Err(Error::JoinViolation(vec![dom.name(x).into(), dom.name(y).into()]));
            }
        }
    }
    if f(dom.top()) != cod.top() {
        return Err(Error::TopViolation);
    }
    if dom.bottom().map(f) != cod.bottom() {
        return Err(Error::JoinViolation(Vec::new()));
    }
    Ok(())
}

/// Structural flags of a finite poset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LatticeProfile {
    pub is_meet_semilattice: bool,
    pub is_lattice: bool,
    pub is_distributive: bool,
    pub all_complemented: bool,
    pub is_boolean_algebra: bool,
    pub is_frame_finite: bool,
}

pub fn lattice_profile(p: &Poset) -> LatticeProfile {
    let Ok(l) = MeetSemilattice::new(p.clone()) else {
        return LatticeProfile::default();
    };
    lattice_profile_of(&l)
}

pub fn lattice_profile_of(l: &MeetSemilattice) -> LatticeProfile {
    let is_lattice = l.is_lattice();
    let n = l.size();
    let is_distributive = is_lattice
        && (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    let lhs = l.meet(x, l.join(y, z).unwrap());
                    let rhs = l.join(l.meet(x, y), l.meet(x, z)).unwrap();
                    lhs == rhs
                })
            })
        });
    let all_complemented = is_lattice && (0..n).all(|x| l.complement(x).is_some());
    LatticeProfile {
        is_meet_semilattice: true,
        is_lattice,
        is_distributive,
        all_complemented,
        is_boolean_algebra: is_lattice && is_distributive && all_complemented,
        is_frame_finite: is_lattice && is_distributive,
    }
}

/// Searches for a sublattice isomorphic to N5 or M3 (the classical
/// obstruction to distributivity). Returns the five elements found, listed
/// bottom, three middle elements, top.
pub fn find_n5_or_m3(l: &MeetSemilattice) -> Option<[usize; 5]> {
    if !l.is_lattice() {
        return None;
    }
    let n = l.size();
    let join = |x, y| l.join(x, y).unwrap();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                let (u, v) = (join(x, y), l.meet(x, y));
                // M3: x, y, z pairwise with the same join and meet.
                if x < y
                    && y < z
                    && u == join(x, z)
                    && u == join(y, z)
                    && v == l.meet(x, z)
                    && v == l.meet(y, z)
                    && ![u, v].iter().any(|w| [x, y, z].contains(w))
                {
                    return Some([v, x, y, z, u]);
                }
                // N5: x < y, z incomparable to both, x∨z = y∨z, x∧z = y∧z.
                if l.poset().lt(x, y)
                    && !l.le(z, y)
                    && !l.le(x, z)
                    && join(x, z) == join(y, z)
                    && l.meet(x, z) == l.meet(y, z)
                {
                    return Some([l.meet(x, z), x, y, z, join(x, z)]);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn two_chain_and_diamond() {
        let c2 = build_poset(&["0", "1"], &[("0", "1")]).unwrap();
        assert!(c2.le(0, 1) && !c2.le(1, 0));
        assert_eq!(c2.cover_pairs(), vec![(0, 1)]);
        let d4 = build_poset(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap();
        assert!(d4.le(0, 3));
        assert_eq!(d4.cover_pairs(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn cycle_and_bad_names() {
        assert_eq!(
            build_poset(&["x", "y"], &[("x", "y"), ("y", "x")]).unwrap_err(),
            Error::CycleDetected("x".into(), "y".into())
        );
        assert_eq!(
            build_poset(&["x", "x"], &[]).unwrap_err(),
            Error::DuplicateElement("x".into())
        );
        assert_eq!(
            build_poset(&["x"], &[("x", "z")]).unwrap_err(),
            Error::UnknownElement("z".into())
        );
    }

    #[test]
    fn bounds() {
        let d4 = catalog::d4().poset().clone();
        let ab = ElementSet::from_indices(4, [1, 2]);
        assert_eq!(glb(&d4, &ab), Some(0));
        assert_eq!(lub(&d4, &ab), Some(3));
        let c2 = catalog::chain(2).poset().clone();
        assert_eq!(glb(&c2, &ElementSet::empty(2)), Some(1));
        assert_eq!(lub(&c2, &ElementSet::empty(2)), Some(0));
        let c3 = catalog::chain(3).poset().clone();
        assert_eq!(lub(&c3, &ElementSet::from_indices(3, [0, 1])), Some(1));

        let anti = build_poset(&["x", "y"], &[]).unwrap();
        assert_eq!(glb(&anti, &ElementSet::full(2)), None);
        // x, y below two incomparable upper bounds p, q.
        let bowtie = build_poset(
            &["x", "y", "p", "q"],
            &[("x", "p"), ("x", "q"), ("y", "p"), ("y", "q")],
        )
        .unwrap();
        assert_eq!(lub(&bowtie, &ElementSet::from_indices(4, [0, 1])), None);
    }

    #[test]
    fn profiles() {
        let d4 = lattice_profile_of(&catalog::d4());
        assert!(d4.is_lattice && d4.is_distributive && d4.all_complemented && d4.is_boolean_algebra);
        let m3 = lattice_profile_of(&catalog::m3());
        assert!(m3.is_lattice && !m3.is_distributive && m3.all_complemented && !m3.is_boolean_algebra);
        let c3 = lattice_profile_of(&catalog::chain(3));
        assert!(c3.is_lattice && c3.is_distributive && !c3.all_complemented);
        let n5 = lattice_profile_of(&catalog::n5());
        assert!(!n5.is_distributive);
    }

    #[test]
    fn non_meet_semilattice_profile() {
        let anti = build_poset(&["x", "y"], &[]).unwrap();
        assert_eq!(lattice_profile(&anti), LatticeProfile::default());
        assert_eq!(MeetSemilattice::new(anti).unwrap_err(), Error::NoTop);
    }

    #[test]
    fn distributivity_matches_forbidden_sublattices() {
        for l in catalog::carriers() {
            let profile = lattice_profile_of(&l.1);
            assert_eq!(profile.is_distributive, find_n5_or_m3(&l.1).is_none(), "{}", l.0);
        }
    }

    #[test]
    fn meet_table_agrees_with_glb() {
        for (_, l) in catalog::carriers() {
            let n = l.size();
            for x in 0..n {
                for y in 0..n {
                    let pair = ElementSet::from_indices(n, [x, y]);
                    assert_eq!(glb(l.poset(), &pair), Some(l.meet(x, y)));
                }
            }
        }
    }

    #[test]
    fn reduction_then_closure_reproduces_order() {
        for (_, l) in catalog::carriers() {
            let p = l.poset();
            let pairs: Vec<(String, String)> = p
                .cover_pairs()
                .into_iter()
                .map(|(x, y)| (p.name(x).to_string(), p.name(y).to_string()))
                .collect();
            let q = build_poset(p.names(), &pairs).unwrap();
            assert_eq!(p.le_matrix(), q.le_matrix());
        }
    }
}
