//! S-ideals and the free frame over an S-frame.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::order::{MeetSemilattice, Poset};
use crate::selection::{SelectionFunction, SelectionKind};
use crate::set::{subsets_of, ElementSet};
use crate::sframe::{validate_map, SFrame, SFrameMap};
use crate::Capacity;

/// Least S-ideal containing `xs`: a nonempty downset closed under joins of
/// designated subsets. The closure of the empty set is `{0}`.
pub fn sideal_closure(l: &SFrame, xs: &ElementSet) -> ElementSet {
    let p = l.carrier().poset();
    let n = l.size();
    let mut cur = p.downset_of(xs);
    cur.insert(l.bottom());
    match l.kind() {
        SelectionKind::Singletons => cur,
        SelectionKind::Finite => p.down_set(l.join_all(&cur)).clone(),
        SelectionKind::Explicit => loop {
            let mut next = cur.clone();
            for b in l.selection().explicit_family() {
                if b.is_subset(&cur) {
                    next.union_with(p.down_set(l.join_all(b)));
                }
            }
            if next == cur {
                debug_assert_eq!(cur.width(), n);
                break cur;
            }
            cur = next;
        },
    }
}

/// Whether `xs` is an S-ideal.
pub fn is_sideal(l: &SFrame, xs: &ElementSet) -> bool {
    !xs.is_empty() && sideal_closure(l, xs) == *xs
}

/// `P_x = {t : t ∧ x = 0}`.
pub fn annihilator(l: &SFrame, x: usize) -> ElementSet {
    ElementSet::from_indices(l.size(), l.elements().filter(|&t| l.meet(t, x) == l.bottom()))
}

/// The frame of all S-ideals, ordered by inclusion, together with the
/// embedding of the base S-frame as principal ideals.
#[derive(Clone, Debug)]
pub struct FreeFrame {
    base: Arc<SFrame>,
    ideals: Vec<ElementSet>,
    index: HashMap<ElementSet, usize>,
    principal: Vec<usize>,
    frame: Arc<SFrame>,
}

fn ideal_name(l: &SFrame, ideal: &ElementSet) -> String {
    let tops = l.carrier().poset().maximal_elements(ideal);
    if tops.len() == 1 {
        format!("↓{}", l.elem(tops[0]))
    } else {
        let names: Vec<&str> = tops.iter().map(|&x| l.elem(x)).collect();
        format!("↓{{{}}}", names.join(","))
    }
}

/// Enumerates every S-ideal by closing the principal ideals under binary
/// joins.
pub fn enumerate_free_frame(l: &Arc<SFrame>, cap: Capacity) -> Result<FreeFrame> {
    let n = l.size();
    let p = l.carrier().poset();
    let mut seen: BTreeSet<ElementSet> = BTreeSet::new();
    let mut queue: VecDeque<ElementSet> = VecDeque::new();
    for x in l.elements() {
        let d = p.down_set(x).clone();
        if seen.insert(d.clone()) {
            queue.push_back(d);
        }
    }
    while let Some(ideal) = queue.pop_front() {
        for x in l.elements() {
            if ideal.contains(x) {
                continue;
            }
            let mut u = ideal.clone();
            u.union_with(p.down_set(x));
            let j = sideal_closure(l, &u);
            if !seen.contains(&j) {
                if seen.len() >= cap.ideals {
                    return Err(Error::CapacityExceeded {
                        what: format!("free frame of {}", l.name()),
                        bound: cap.ideals,
                    });
                }
                seen.insert(j.clone());
                queue.push_back(j);
            }
        }
    }
    let mut ideals: Vec<ElementSet> = seen.into_iter().collect();
    ideals.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let index: HashMap<ElementSet, usize> =
        ideals.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let principal = (0..n).map(|x| index[p.down_set(x)]).collect();
    let names: Vec<String> = ideals.iter().map(|s| ideal_name(l, s)).collect();
    let poset = Poset::from_relation(names, |i, j| ideals[i].is_subset(&ideals[j]))?;
    let carrier = Arc::new(MeetSemilattice::new(poset)?);
    let frame = Arc::new(SFrame::full_frame(&format!("H({})", l.name()), carrier)?);
    Ok(FreeFrame {
        base: l.clone(),
        ideals,
        index,
        principal,
        frame,
    })
}

impl FreeFrame {
    pub fn base(&self) -> &Arc<SFrame> {
        &self.base
    }

    /// The free frame as a full frame (every subset designated).
    pub fn frame(&self) -> &Arc<SFrame> {
        &self.frame
    }

    pub fn size(&self) -> usize {
        self.ideals.len()
    }

    pub fn ideals(&self) -> &[ElementSet] {
        &self.ideals
    }

    pub fn ideal(&self, i: usize) -> &ElementSet {
        &self.ideals[i]
    }

    pub fn index_of(&self, ideal: &ElementSet) -> Option<usize> {
        self.index.get(ideal).copied()
    }

    /// Index of `↓x`.
    pub fn principal(&self, x: usize) -> usize {
        self.principal[x]
    }

    pub fn principal_indices(&self) -> &[usize] {
        &self.principal
    }

    pub fn is_principal(&self, i: usize) -> bool {
        self.principal.contains(&i)
    }

    pub fn principal_count(&self) -> usize {
        self.principal.iter().collect::<BTreeSet<_>>().len()
    }

    /// The embedding `x ↦ ↓x`, validated as an S-frame map into the full
    /// frame of ideals.
    pub fn down_embed(&self) -> SFrameMap {
        validate_map(self.principal.clone(), &self.base, &self.frame)
            .expect("principal ideals embed as an S-frame map")
    }

    /// Pseudocomplement of ideal `i`: the largest ideal meeting it in `{0}`.
    pub fn pseudocomplement(&self, i: usize) -> usize {
        let f = &self.frame;
        let disjoint = ElementSet::from_indices(
            self.size(),
            f.elements().filter(|&j| f.meet(i, j) == f.bottom()),
        );
        f.carrier()
            .poset()
            .maximum(&disjoint)
            .expect("finite frames are pseudocomplemented")
    }
}

/// Compares the ideal generated by `↓x ∪ I` with `{t : t ≤ x ∨ s, s ∈ I}`.
pub fn principal_join_law(l: &SFrame, x: usize, ideal: &ElementSet) -> Result<bool> {
    let p = l.carrier().poset();
    let mut u = ideal.clone();
    u.union_with(p.down_set(x));
    let lhs = sideal_closure(l, &u);
    let mut rhs = ElementSet::empty(l.size());
    for s in ideal.iter() {
        let j = l.carrier().join(x, s).ok_or_else(|| {
            Error::JoinUndefined(l.elem(x).to_string(), l.elem(s).to_string())
        })?;
        rhs.union_with(p.down_set(j));
    }
    Ok(lhs == rhs)
}

/// Elements `a` of the full frame `m` such that every `B` with `⋁B = a`
/// contains a designated `D` with `⋁D = a`.
pub fn s_lindelof_elements(m: &SFrame, sel: &SelectionFunction) -> ElementSet {
    let n = m.size();
    let p = m.carrier().poset();
    let mut out = ElementSet::empty(n);
    for a in m.elements() {
        let strictly_below = p.down_set(a).difference(&ElementSet::singleton(n, a));
        let ok = match sel.kind() {
            SelectionKind::Finite => true,
            // Only the empty set and singletons are designated, so `a` must
            // not be the join of the elements strictly below it.
            SelectionKind::Singletons => a == m.bottom() || m.join_all(&strictly_below) != a,
            SelectionKind::Explicit => {
                subsets_of(p.down_set(a))
                    .filter(|b| m.join_all(b) == a)
                    .all(|b| {
                        sel.explicit_family()
                            .iter()
                            .any(|d| d.is_subset(&b) && m.join_all(d) == a)
                    })
            }
        };
        if ok {
            out.insert(a);
        }
    }
    out
}

/// The unique frame map `F` from the free frame with `F(↓a) = f(a)`, given by
/// `F(I) = ⋁ f[I]`. The codomain of `f` must be a full frame.
pub fn free_extension(ff: &FreeFrame, f: &SFrameMap) -> Result<SFrameMap> {
    let m = f.codomain();
    if m.kind() != SelectionKind::Finite {
        return Err(Error::FactorizationFailed(format!(
            "codomain {} is not a full frame",
            m.name()
        )));
    }
    let table: Vec<usize> = ff
        .ideals()
        .iter()
        .map(|ideal| {
            let image = ElementSet::from_indices(m.size(), ideal.iter().map(|x| f.apply(x)));
            m.join_all(&image)
        })
        .collect();
    // Every ideal is the join of the principal ideals below it, so a frame
    // map is determined by its values on principal ideals.
    let fr = ff.frame();
    for (i, ideal) in ff.ideals().iter().enumerate() {
        let principals =
            ElementSet::from_indices(ff.size(), ideal.iter().map(|x| ff.principal(x)));
        assert_eq!(fr.join_all(&principals), i, "ideal not generated by principals");
    }
    validate_map(table, fr, m)
}
