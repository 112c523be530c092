//! Selection functions restricted to a single finite carrier, and the
//! axiom checks (S1), (S2), (S2)′, (S3), (SFin), (SCov), (SRef).

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::MeetSemilattice;
use crate::set::{all_subsets, subsets_of, ElementSet};

/// Families larger than this are not materialized for axiom checking.
const MATERIALIZE_LIMIT: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionKind {
    /// `∅` and every singleton.
    Singletons,
    /// Every finite subset; on a finite carrier, the powerset.
    Finite,
    /// A given family, with `∅` adjoined.
    Explicit,
}

impl fmt::Display for SelectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionKind::Singletons => "singletons",
            SelectionKind::Finite => "finite",
            SelectionKind::Explicit => "explicit",
        })
    }
}

/// Which axioms a selection satisfies; theorem checks declare the regime
/// they need.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Regime {
    /// Every checked axiom holds, including (SFin).
    Full,
    /// Every checked axiom except (SFin) holds.
    Base,
    /// Some axiom other than (SFin) fails.
    Weak,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Full => "FULL",
            Regime::Base => "BASE",
            Regime::Weak => "WEAK",
        })
    }
}

/// The designated subsets of one carrier.
#[derive(Clone, Debug)]
pub struct SelectionFunction {
    carrier: Arc<MeetSemilattice>,
    kind: SelectionKind,
    // Sorted and deduplicated; only populated for explicit selections.
    family: Vec<ElementSet>,
}

pub fn make_selection(
    carrier: Arc<MeetSemilattice>,
    kind: SelectionKind,
    sets: Option<Vec<ElementSet>>,
) -> Result<SelectionFunction> {
    let n = carrier.size();
    let family = match kind {
        SelectionKind::Explicit => {
            let sets = sets.ok_or(Error::MissingSets)?;
            let mut family: BTreeSet<ElementSet> = sets
                .into_iter()
                .filter(|s| s.width() == n)
                .collect();
            family.insert(ElementSet::empty(n));
            family.into_iter().collect()
        }
        _ => Vec::new(),
    };
    Ok(SelectionFunction {
        carrier,
        kind,
        family,
    })
}

impl SelectionFunction {
    pub fn carrier(&self) -> &Arc<MeetSemilattice> {
        &self.carrier
    }

    pub fn kind(&self) -> SelectionKind {
        self.kind
    }

    pub fn is_designated(&self, xs: &ElementSet) -> bool {
        match self.kind {
            SelectionKind::Singletons => xs.len() <= 1,
            SelectionKind::Finite => true,
            SelectionKind::Explicit => self.family.binary_search(xs).is_ok(),
        }
    }

    /// Number of designated subsets.
    pub fn family_size(&self) -> u128 {
        let n = self.carrier.size();
        match self.kind {
            SelectionKind::Singletons => n as u128 + 1,
            SelectionKind::Finite => 1u128 << n.min(127),
            SelectionKind::Explicit => self.family.len() as u128,
        }
    }

    /// The explicit family (empty for symbolic kinds).
    pub fn explicit_family(&self) -> &[ElementSet] {
        &self.family
    }

    /// Every designated subset, in a deterministic order. Panics for the
    /// finite kind over carriers larger than 24 elements.
    pub fn designated(&self) -> Vec<ElementSet> {
        let n = self.carrier.size();
        match self.kind {
            SelectionKind::Singletons => std::iter::once(ElementSet::empty(n))
                .chain((0..n).map(|x| ElementSet::singleton(n, x)))
                .collect(),
            SelectionKind::Finite => all_subsets(n).collect(),
            SelectionKind::Explicit => self.family.clone(),
        }
    }

    /// Image of the selection under a surjective function onto a new carrier,
    /// `{f[G] : G designated}`.
    pub fn image(&self, target: Arc<MeetSemilattice>, table: &[usize]) -> SelectionFunction {
        let m = target.size();
        let family = match self.kind {
            SelectionKind::Explicit => {
                let imgs: BTreeSet<ElementSet> = self
                    .family
                    .iter()
                    .map(|g| ElementSet::from_indices(m, g.iter().map(|x| table[x])))
                    .chain(std::iter::once(ElementSet::empty(m)))
                    .collect();
                imgs.into_iter().collect()
            }
            _ => Vec::new(),
        };
        SelectionFunction {
            carrier: target,
            kind: self.kind,
            family,
        }
    }

    /// The regime implied by the kind alone; `None` for explicit families.
    pub fn structural_regime(&self) -> Option<Regime> {
        match self.kind {
            SelectionKind::Finite => Some(Regime::Full),
            SelectionKind::Singletons if self.carrier.size() <= 1 => Some(Regime::Full),
            SelectionKind::Singletons => Some(Regime::Base),
            SelectionKind::Explicit => None,
        }
    }

    /// Regime of this selection: structural for symbolic kinds, from
    /// [`check_axioms`] for explicit families.
    pub fn regime(&self) -> Regime {
        self.structural_regime()
            .unwrap_or_else(|| check_axioms(self).regime())
    }
}

/// Verdict for one axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: &'static str,
    pub holds: bool,
    /// Counterexample subsets (by element name) when the axiom fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub kind: SelectionKind,
    pub verdicts: Vec<AxiomVerdict>,
    pub notes: Vec<String>,
}

impl AxiomReport {
    pub fn get(&self, axiom: &str) -> &AxiomVerdict {
        self.verdicts
            .iter()
            .find(|v| v.axiom == axiom)
            .unwrap_or_else(|| panic!("unknown axiom {axiom}"))
    }

    pub fn holds(&self, axiom: &str) -> bool {
        self.get(axiom).holds
    }

    pub fn regime(&self) -> Regime {
        let others = self
            .verdicts
            .iter()
            .filter(|v| v.axiom != "SFin")
            .all(|v| v.holds);
        match (others, self.holds("SFin")) {
            (true, true) => Regime::Full,
            (true, false) => Regime::Base,
            _ => Regime::Weak,
        }
    }
}

pub const AXIOMS: [&str; 7] = ["S1", "S2", "S2'", "S3", "SFin", "SCov", "SRef"];

struct Checker<'a> {
    sel: &'a SelectionFunction,
    l: &'a MeetSemilattice,
    family: Vec<ElementSet>,
}

impl Checker<'_> {
    fn n(&self) -> usize {
        self.l.size()
    }

    fn names(&self, xs: &ElementSet) -> Vec<String> {
        self.l.poset().names_of(xs)
    }

    fn verdict(&self, axiom: &'static str, witness: Option<Vec<&ElementSet>>) -> AxiomVerdict {
        AxiomVerdict {
            axiom,
            holds: witness.is_none(),
            witness: witness.map(|w| w.into_iter().map(|s| self.names(s)).collect()),
            notes: Vec::new(),
        }
    }

    fn s1(&self) -> AxiomVerdict {
        let n = self.n();
        let bad = (0..n)
            .map(|x| ElementSet::singleton(n, x))
            .find(|s| !self.sel.is_designated(s));
        self.verdict("S1", bad.as_ref().map(|s| vec![s]))
    }

    fn pointwise(&self, g: &ElementSet, h: &ElementSet, op: impl Fn(usize, usize) -> Option<usize>) -> Option<ElementSet> {
        let mut out = ElementSet::empty(self.n());
        for x in g.iter() {
            for y in h.iter() {
                out.insert(op(x, y)?);
            }
        }
        Some(out)
    }

    fn s2(&self) -> AxiomVerdict {
        for g in &self.family {
            for h in &self.family {
                let m = self.pointwise(g, h, |x, y| Some(self.l.meet(x, y))).unwrap();
                if !self.sel.is_designated(&m) {
                    return self.verdict("S2", Some(vec![g, h]));
                }
            }
        }
        self.verdict("S2", None)
    }

    fn s2_prime(&self) -> AxiomVerdict {
        let mut skipped = 0usize;
        for g in &self.family {
            for h in &self.family {
                match self.pointwise(g, h, |x, y| self.l.join(x, y)) {
                    None => skipped += 1,
                    Some(j) if !self.sel.is_designated(&j) => {
                        return self.verdict("S2'", Some(vec![g, h]));
                    }
                    Some(_) => {}
                }
            }
        }
        let mut v = self.verdict("S2'", None);
        if skipped > 0 {
            v.notes
                .push(format!("join-undefined: {skipped} pair(s) skipped"));
        }
        v
    }

    fn s3(&self) -> AxiomVerdict {
        let n = self.n();
        // decompositions[x] = designated H with ⋁H = x
        let decompositions: Vec<Vec<&ElementSet>> = (0..n)
            .map(|x| {
                self.family
                    .iter()
                    .filter(|h| self.l.join_all(h) == Some(x))
                    .collect()
            })
            .collect();
        for g in &self.family {
            if g.iter().any(|x| decompositions[x].is_empty()) {
                continue;
            }
            let mut partial: HashSet<ElementSet> = HashSet::from([ElementSet::empty(n)]);
            for x in g.iter() {
                partial = partial
                    .iter()
                    .flat_map(|u| decompositions[x].iter().map(move |h| u.union(h)))
                    .collect();
            }
            let mut unions: Vec<ElementSet> = partial.into_iter().collect();
            unions.sort();
            if let Some(bad) = unions.iter().find(|u| !self.sel.is_designated(u)) {
                return self.verdict("S3", Some(vec![g, bad]));
            }
        }
        self.verdict("S3", None)
    }

    fn sfin(&self) -> AxiomVerdict {
        let n = self.n();
        if n > 24 {
            let mut v = self.verdict("SFin", None);
            v.holds = self.sel.kind == SelectionKind::Finite;
            v.notes.push("carrier too large for subset scan; decided by kind".into());
            return v;
        }
        let p = self.l.poset();
        let mut subsets: Vec<ElementSet> = all_subsets(n).collect();
        // Smallest witnesses first, antichains before chains.
        subsets.sort_by_key(|s| {
            let chainlike = s.iter().any(|x| s.iter().any(|y| p.lt(x, y)));
            (s.len(), chainlike, s.clone())
        });
        let bad = subsets.into_iter().find(|s| !self.sel.is_designated(s));
        self.verdict("SFin", bad.as_ref().map(|s| vec![s]))
    }

    fn scov(&self) -> AxiomVerdict {
        let top = self.l.top();
        let mut v = self.verdict("SCov", None);
        for h in &self.family {
            if self.l.join_all(h) != Some(top) {
                continue;
            }
            if h.len() > 24 {
                v.notes.push(format!("cover of size {} not scanned", h.len()));
                continue;
            }
            let bad = subsets_of(h).find(|g| !self.sel.is_designated(g));
            if let Some(g) = bad {
                return self.verdict("SCov", Some(vec![h, &g]));
            }
        }
        v
    }

    fn sref(&self) -> AxiomVerdict {
        let n = self.n();
        let p = self.l.poset();
        for x in &self.family {
            // Minimal Y with X <= Y are images of choices x -> y >= x.
            let mut images: HashSet<ElementSet> = HashSet::from([ElementSet::empty(n)]);
            for a in x.iter() {
                images = images
                    .iter()
                    .flat_map(|u| {
                        p.up_set(a).iter().map(move |y| {
                            let mut w = u.clone();
                            w.insert(y);
                            w
                        })
                    })
                    .collect();
            }
            let mut images: Vec<ElementSet> = images.into_iter().collect();
            images.sort();
            for y in &images {
                let refined = self.refinements_within(x, y);
                if !refined {
                    return self.verdict("SRef", Some(vec![x, y]));
                }
            }
        }
        self.verdict("SRef", None)
    }

    // Is there a designated C with X <= C ⊆ Y?
    fn refinements_within(&self, x: &ElementSet, y: &ElementSet) -> bool {
        let p = self.l.poset();
        let dominated = |c: &ElementSet| x.iter().all(|a| c.iter().any(|b| p.le(a, b)));
        match self.sel.kind {
            SelectionKind::Finite => true,
            _ => self
                .family
                .iter()
                .any(|c| c.is_subset(y) && dominated(c)),
        }
    }
}

/// Checks the finitely checkable axioms by direct quantification over the
/// family and the carrier.
///
/// (S4) and (SSub) quantify over all meet-semilattice maps and
/// sub-semilattices and are not checked; quotients and sub-structures
/// receive their selections constructively instead.
pub fn check_axioms(sel: &SelectionFunction) -> AxiomReport {
    let l = sel.carrier.as_ref();
    let mut notes = vec![
        "S4: enforced constructively (images of designated sets)".to_string(),
        "SSub: enforced constructively (inherited by sub-structures)".to_string(),
    ];
    if sel.kind == SelectionKind::Finite && sel.family_size() > MATERIALIZE_LIMIT as u128 {
        // Every conclusion is a membership statement in the full powerset.
        notes.push("powerset family not materialized; membership conclusions hold".into());
        let mut verdicts: Vec<AxiomVerdict> = AXIOMS
            .iter()
            .map(|a| AxiomVerdict {
                axiom: a,
                holds: true,
                witness: None,
                notes: Vec::new(),
            })
            .collect();
        if !l.is_lattice() {
            verdicts[2].notes.push("join-undefined: carrier is not a lattice".into());
        }
        return AxiomReport {
            kind: sel.kind,
            verdicts,
            notes,
        };
    }
    let checker = Checker {
        sel,
        l,
        family: sel.designated(),
    };
    AxiomReport {
        kind: sel.kind,
        verdicts: vec![
            checker.s1(),
            checker.s2(),
            checker.s2_prime(),
            checker.s3(),
            checker.sfin(),
            checker.scov(),
            checker.sref(),
        ],
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn sel(l: MeetSemilattice, kind: SelectionKind, sets: Option<Vec<ElementSet>>) -> SelectionFunction {
        make_selection(Arc::new(l), kind, sets).unwrap()
    }

    #[test]
    fn make_selection_kinds() {
        let s = sel(catalog::chain(2), SelectionKind::Singletons, None);
        assert_eq!(s.designated().len(), 3);
        let f = sel(catalog::chain(2), SelectionKind::Finite, None);
        assert_eq!(f.designated().len(), 4);
        let e = sel(
            catalog::d4(),
            SelectionKind::Explicit,
            Some(vec![ElementSet::from_indices(4, [1, 2])]),
        );
        assert_eq!(
            e.designated(),
            vec![ElementSet::empty(4), ElementSet::from_indices(4, [1, 2])]
        );
        assert_eq!(
            make_selection(Arc::new(catalog::d4()), SelectionKind::Explicit, None).unwrap_err(),
            Error::MissingSets
        );
    }

    #[test]
    fn designation() {
        let s = sel(catalog::d4(), SelectionKind::Singletons, None);
        assert!(s.is_designated(&ElementSet::singleton(4, 1)));
        assert!(!s.is_designated(&ElementSet::from_indices(4, [1, 2])));
        let f = sel(catalog::d4(), SelectionKind::Finite, None);
        assert!(f.is_designated(&ElementSet::from_indices(4, [1, 2])));
    }

    #[test]
    fn singletons_on_d4() {
        let r = check_axioms(&sel(catalog::d4(), SelectionKind::Singletons, None));
        for a in ["S1", "S2", "S2'", "S3", "SCov", "SRef"] {
            assert!(r.holds(a), "{a}");
        }
        let sfin = r.get("SFin");
        assert!(!sfin.holds);
        assert_eq!(sfin.witness, Some(vec![vec!["a".to_string(), "b".to_string()]]));
        assert_eq!(r.regime(), Regime::Base);
    }

    #[test]
    fn finite_passes_everything() {
        for (name, l) in catalog::carriers() {
            let r = check_axioms(&sel(l, SelectionKind::Finite, None));
            assert!(r.verdicts.iter().all(|v| v.holds), "{name}");
            assert_eq!(r.regime(), Regime::Full);
        }
    }

    #[test]
    fn explicit_without_singletons() {
        let r = check_axioms(&sel(
            catalog::d4(),
            SelectionKind::Explicit,
            Some(vec![ElementSet::from_indices(4, [1, 2])]),
        ));
        let s1 = r.get("S1");
        assert!(!s1.holds);
        assert_eq!(s1.witness, Some(vec![vec!["0".to_string()]]));
        assert_eq!(r.regime(), Regime::Weak);
    }

    #[test]
    fn sfin_implies_s1() {
        for (_, l) in catalog::carriers() {
            let l = Arc::new(l);
            for kind in [SelectionKind::Singletons, SelectionKind::Finite] {
                let r = check_axioms(&make_selection(l.clone(), kind, None).unwrap());
                assert!(!r.holds("SFin") || r.holds("S1"));
            }
        }
    }

    #[test]
    fn structural_regime_matches_report() {
        for (name, l) in catalog::carriers() {
            let l = Arc::new(l);
            for kind in [SelectionKind::Singletons, SelectionKind::Finite] {
                let s = make_selection(l.clone(), kind, None).unwrap();
                assert_eq!(s.structural_regime(), Some(check_axioms(&s).regime()), "{name} {kind}");
            }
        }
    }

    #[test]
    fn scov_and_sref_failures_are_detected() {
        // Singletons plus the cover {a, b}: every subset of the cover is designated.
        let d4 = catalog::d4();
        let n = 4;
        let mut sets: Vec<ElementSet> = (0..n).map(|x| ElementSet::singleton(n, x)).collect();
        sets.push(ElementSet::from_indices(n, [1, 2]));
        let s = sel(d4.clone(), SelectionKind::Explicit, Some(sets.clone()));
        let r = check_axioms(&s);
        assert!(r.holds("SCov"));
        // Replace {1} by the cover {0, 1}, whose subset {1} is then missing.
        sets.retain(|x| x.len() != 1 || !x.contains(3));
        sets.push(ElementSet::from_indices(n, [0, 3]));
        let r = check_axioms(&sel(d4, SelectionKind::Explicit, Some(sets)));
        let scov = r.get("SCov");
        assert!(!scov.holds);
        assert_eq!(scov.witness.as_ref().unwrap()[1], vec!["1".to_string()]);
    }
}
