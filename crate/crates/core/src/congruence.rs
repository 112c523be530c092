//! S-congruences, generated congruences, the congruence frame, quotients
//! and the maps built from them.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::freeframe::{annihilator, FreeFrame};
use crate::order::{lattice_profile_of, MeetSemilattice, Poset};
use crate::selection::{make_selection, SelectionKind};
use crate::set::ElementSet;
use crate::sframe::{
    density_profile, validate_lattice_map, validate_map, validate_sframe, SFrame, SFrameMap,
};
use crate::Capacity;

/// An equivalence on the carrier, stored as class labels where each label
/// is the least member of its class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SCongruence {
    labels: Vec<u32>,
}

impl SCongruence {
    pub fn diagonal(n: usize) -> Self {
        SCongruence {
            labels: (0..n as u32).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        SCongruence {
            labels: vec![0; n],
        }
    }

    /// The partition whose classes are the fibres of `key`.
    pub fn from_key<K: Eq + std::hash::Hash, F: Fn(usize) -> K>(n: usize, key: F) -> Self {
        let mut first: HashMap<K, u32> = HashMap::new();
        let labels = (0..n)
            .map(|x| *first.entry(key(x)).or_insert(x as u32))
            .collect();
        SCongruence { labels }
    }

    /// Builds a partition from arbitrary class labels.
    pub fn from_labels(raw: &[usize]) -> Self {
        SCongruence::from_key(raw.len(), |x| raw[x])
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Least member of the class of `x`.
    pub fn class_of(&self, x: usize) -> usize {
        self.labels[x] as usize
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }

    pub fn class_count(&self) -> usize {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(x, &c)| c as usize == x)
            .count()
    }

    /// Classes ordered by least member.
    pub fn classes(&self) -> Vec<ElementSet> {
        let n = self.size();
        let mut out: Vec<ElementSet> = Vec::new();
        let mut slot: HashMap<u32, usize> = HashMap::new();
        for x in 0..n {
            let i = *slot.entry(self.labels[x]).or_insert_with(|| {
                out.push(ElementSet::empty(n));
                out.len() - 1
            });
            out[i].insert(x);
        }
        out
    }

    /// Related pairs `(x, y)` with `x < y`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.size();
        (0..n).flat_map(move |x| (x + 1..n).filter(move |&y| self.related(x, y)).map(move |y| (x, y)))
    }

    /// Whether `self ⊆ other` as relations.
    pub fn refines(&self, other: &SCongruence) -> bool {
        (0..self.size()).all(|x| other.related(x, self.class_of(x)))
    }

    pub fn intersection(&self, other: &SCongruence) -> SCongruence {
        SCongruence::from_key(self.size(), |x| (self.labels[x], other.labels[x]))
    }

    pub fn is_diagonal(&self) -> bool {
        self.class_count() == self.size()
    }

    pub fn is_total(&self) -> bool {
        self.class_count() <= 1
    }

    /// Classes rendered by element name, e.g. `{0,a}{b}{1}`.
    pub fn render(&self, l: &SFrame) -> String {
        let mut s = String::new();
        for class in self.classes() {
            let _ = write!(s, "{{{}}}", l.names_of(&class).join(","));
        }
        s
    }

    pub fn class_names(&self, l: &SFrame) -> Vec<Vec<String>> {
        self.classes().iter().map(|c| l.names_of(c)).collect()
    }
}

/// Why a partition fails to be an S-congruence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CongruenceViolation {
    /// `(x, y)` related but `(x ∧ z, y ∧ z)` is not.
    Meet { pair: (usize, usize), with: usize, result: (usize, usize) },
    /// Designated families related elementwise whose joins are unrelated.
    Join { left: ElementSet, right: ElementSet },
}

impl CongruenceViolation {
    pub fn describe(&self, l: &SFrame) -> String {
        match self {
            CongruenceViolation::Meet { pair, with, result } => format!(
                "(({},{}),({},{})) meets to ({},{}) which is unrelated",
                l.elem(pair.0),
                l.elem(pair.1),
                l.elem(*with),
                l.elem(*with),
                l.elem(result.0),
                l.elem(result.1)
            ),
            CongruenceViolation::Join { left, right } => format!(
                "{{{}}} and {{{}}} are related elementwise but their joins are not",
                l.names_of(left).join(","),
                l.names_of(right).join(",")
            ),
        }
    }
}

fn covers(rel: impl Fn(usize, usize) -> bool, a: &ElementSet, b: &ElementSet) -> bool {
    a.iter().all(|x| b.iter().any(|y| rel(x, y))) && b.iter().all(|y| a.iter().any(|x| rel(x, y)))
}

/// Checks C2 and C3 for a partition, returning the first violation.
pub fn check_scongruence(l: &SFrame, theta: &SCongruence) -> Option<CongruenceViolation> {
    let n = l.size();
    for x in 0..n {
        for y in x + 1..n {
            if !theta.related(x, y) {
                continue;
            }
            for z in 0..n {
                let (u, v) = (l.meet(x, z), l.meet(y, z));
                if !theta.related(u, v) {
                    return Some(CongruenceViolation::Meet {
                        pair: (x, y),
                        with: z,
                        result: (u, v),
                    });
                }
            }
        }
    }
    match l.kind() {
        SelectionKind::Singletons => None,
        SelectionKind::Finite => {
            for (x, y) in theta.pairs() {
                for z in 0..n {
                    if !theta.related(l.join(x, z), l.join(y, z)) {
                        return Some(CongruenceViolation::Join {
                            left: ElementSet::from_indices(n, [x, z]),
                            right: ElementSet::from_indices(n, [y, z]),
                        });
                    }
                }
            }
            None
        }
        SelectionKind::Explicit => {
            let family = l.selection().explicit_family();
            for a in family {
                for b in family {
                    if a < b
                        && covers(|x, y| theta.related(x, y), a, b)
                        && !theta.related(l.join_all(a), l.join_all(b))
                    {
                        return Some(CongruenceViolation::Join {
                            left: a.clone(),
                            right: b.clone(),
                        });
                    }
                }
            }
            None
        }
    }
}

pub fn is_scongruence(l: &SFrame, theta: &SCongruence) -> bool {
    check_scongruence(l, theta).is_none()
}

struct Closure<'a> {
    l: &'a SFrame,
    parent: Vec<usize>,
    queue: VecDeque<(usize, usize)>,
}

impl Closure<'_> {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.parent[rx.max(ry)] = rx.min(ry);
        self.queue.push_back((x, y));
        true
    }

    fn run(&mut self) {
        let l = self.l;
        let n = l.size();
        loop {
            while let Some((x, y)) = self.queue.pop_front() {
                for z in 0..n {
                    self.union(l.meet(x, z), l.meet(y, z));
                    if l.kind() == SelectionKind::Finite {
                        self.union(l.join(x, z), l.join(y, z));
                    }
                }
            }
            if l.kind() != SelectionKind::Explicit || !self.explicit_joins() {
                break;
            }
        }
    }

    // One pass of C3 over the explicit family; true if anything merged.
    fn explicit_joins(&mut self) -> bool {
        let l = self.l;
        let family = l.selection().explicit_family();
        let mut merged = false;
        for a in family {
            for b in family {
                if a >= b {
                    continue;
                }
                let roots: Vec<usize> = (0..l.size()).map(|x| self.find(x)).collect();
                if covers(|x, y| roots[x] == roots[y], a, b) {
                    merged |= self.union(l.join_all(a), l.join_all(b));
                }
            }
        }
        merged
    }

    fn finish(mut self) -> SCongruence {
        let roots: Vec<usize> = (0..self.l.size()).map(|x| self.find(x)).collect();
        SCongruence::from_labels(&roots)
    }
}

/// The least S-congruence containing `theta` and `pairs`.
pub fn join_with(l: &SFrame, theta: &SCongruence, pairs: &[(usize, usize)]) -> SCongruence {
    let mut c = Closure {
        l,
        parent: (0..l.size()).map(|x| theta.class_of(x)).collect(),
        queue: VecDeque::new(),
    };
    for &(x, y) in pairs {
        c.union(x, y);
    }
    c.run();
    c.finish()
}

/// The least S-congruence containing `pairs`.
pub fn generate(l: &SFrame, pairs: &[(usize, usize)]) -> SCongruence {
    join_with(l, &SCongruence::diagonal(l.size()), pairs)
}

/// Join of two congruences in the congruence frame.
pub fn join(l: &SFrame, a: &SCongruence, b: &SCongruence) -> SCongruence {
    let pairs: Vec<(usize, usize)> = (0..b.size()).map(|x| (x, b.class_of(x))).collect();
    join_with(l, a, &pairs)
}

/// The closed and open congruences of an element, in their defining-formula
/// and generated forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NablaDelta {
    /// `{(x, y) : x ∨ a = y ∨ a}`.
    pub nabla_formula: SCongruence,
    /// `{(x, y) : x ∧ a = y ∧ a}`.
    pub delta_formula: SCongruence,
    /// `⟨(0, a)⟩`.
    pub nabla_generated: SCongruence,
    /// `⟨(a, 1)⟩`.
    pub delta_generated: SCongruence,
}

impl NablaDelta {
    pub fn nabla_agrees(&self) -> bool {
        self.nabla_formula == self.nabla_generated
    }

    pub fn delta_agrees(&self) -> bool {
        self.delta_formula == self.delta_generated
    }
}

pub fn nabla_delta(l: &SFrame, a: usize) -> Result<NablaDelta> {
    let n = l.size();
    let mut joins = Vec::with_capacity(n);
    for x in 0..n {
        let j = l
            .carrier()
            .join(x, a)
            .ok_or_else(|| Error::JoinUndefined(l.elem(x).into(), l.elem(a).into()))?;
        joins.push(j);
    }
    Ok(NablaDelta {
        nabla_formula: SCongruence::from_key(n, |x| joins[x]),
        delta_formula: SCongruence::from_key(n, |x| l.meet(x, a)),
        nabla_generated: generate(l, &[(l.bottom(), a)]),
        delta_generated: generate(l, &[(a, l.top())]),
    })
}

/// The lattice of all S-congruences of an S-frame, ordered by inclusion.
///
/// It is a frame whenever it is distributive. When it is not, the lattice
/// is carried as an S-frame under the singleton selection so that maps into
/// and out of it can still be represented.
#[derive(Clone, Debug)]
pub struct CongruenceFrame {
    base: Arc<SFrame>,
    congruences: Vec<SCongruence>,
    index: HashMap<SCongruence, usize>,
    nabla: Vec<usize>,
    delta: Vec<usize>,
    frame: Arc<SFrame>,
    distributive: bool,
}

fn sort_congruences(cs: &mut [SCongruence]) {
    cs.sort_by(|a, b| {
        let ka = (a.size() - a.class_count(), &a.labels);
        let kb = (b.size() - b.class_count(), &b.labels);
        ka.cmp(&kb)
    });
}

/// Enumerates `C_S L` by closing the principal congruences `⟨(x, y)⟩` under
/// binary joins.
pub fn enumerate_congruence_frame(l: &Arc<SFrame>, cap: Capacity) -> Result<CongruenceFrame> {
    let n = l.size();
    let mut principal: Vec<((usize, usize), SCongruence)> = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            principal.push(((x, y), generate(l, &[(x, y)])));
        }
    }
    let mut seen: BTreeSet<SCongruence> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let diagonal = SCongruence::diagonal(n);
    seen.insert(diagonal.clone());
    queue.push_back(diagonal);
    let overflow = || Error::CapacityExceeded {
        what: format!("congruence frame of {}", l.name()),
        bound: cap.congruences,
    };
    while let Some(theta) = queue.pop_front() {
        for ((x, y), _) in &principal {
            if theta.related(*x, *y) {
                continue;
            }
            let next = join_with(l, &theta, &[(*x, *y)]);
            if !seen.contains(&next) {
                if seen.len() >= cap.congruences {
                    return Err(overflow());
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    let mut congruences: Vec<SCongruence> = seen.into_iter().collect();
    sort_congruences(&mut congruences);
    build_frame(l, congruences)
}

fn build_frame(l: &Arc<SFrame>, congruences: Vec<SCongruence>) -> Result<CongruenceFrame> {
    let index: HashMap<SCongruence, usize> =
        congruences.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let mut nabla = Vec::with_capacity(l.size());
    let mut delta = Vec::with_capacity(l.size());
    for a in l.elements() {
        nabla.push(index[&generate(l, &[(l.bottom(), a)])]);
        delta.push(index[&generate(l, &[(a, l.top())])]);
    }
    let names: Vec<String> = congruences.iter().map(|c| c.render(l)).collect();
    let poset = Poset::from_relation(names, |i, j| congruences[i].refines(&congruences[j]))?;
    let carrier = Arc::new(MeetSemilattice::new(poset)?);
    let distributive = lattice_profile_of(&carrier).is_distributive;
    let kind = if distributive {
        SelectionKind::Finite
    } else {
        SelectionKind::Singletons
    };
    let frame = Arc::new(validate_sframe(
        &format!("C({})", l.name()),
        make_selection(carrier, kind, None)?,
    )?);
    Ok(CongruenceFrame {
        base: l.clone(),
        congruences,
        index,
        nabla,
        delta,
        frame,
        distributive,
    })
}

/// Brute-force oracle: every partition of the carrier that passes
/// [`is_scongruence`], in the same order as [`enumerate_congruence_frame`].
pub fn congruences_by_partition_filter(l: &SFrame) -> Vec<SCongruence> {
    let n = l.size();
    assert!(n <= 10, "partition filter limited to 10 elements");
    let mut out = Vec::new();
    // Restricted growth strings enumerate each partition exactly once.
    let mut rgs = vec![0usize; n];
    fn rec(l: &SFrame, rgs: &mut Vec<usize>, i: usize, max: usize, out: &mut Vec<SCongruence>) {
        if i == rgs.len() {
            let theta = SCongruence::from_labels(rgs);
            if is_scongruence(l, &theta) {
                out.push(theta);
            }
            return;
        }
        for c in 0..=max + 1 {
            rgs[i] = c;
            rec(l, rgs, i + 1, max.max(c), out);
        }
    }
    if n > 0 {
        rec(l, &mut rgs, 1, 0, &mut out);
    }
    sort_congruences(&mut out);
    out
}

impl CongruenceFrame {
    pub fn base(&self) -> &Arc<SFrame> {
        &self.base
    }

    /// The congruence lattice as an S-frame: a full frame when distributive.
    pub fn frame(&self) -> &Arc<SFrame> {
        &self.frame
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    pub fn size(&self) -> usize {
        self.congruences.len()
    }

    pub fn congruences(&self) -> &[SCongruence] {
        &self.congruences
    }

    pub fn congruence(&self, i: usize) -> &SCongruence {
        &self.congruences[i]
    }

    pub fn index_of(&self, theta: &SCongruence) -> Option<usize> {
        self.index.get(theta).copied()
    }

    /// Index of `⟨(0, a)⟩`.
    pub fn nabla(&self, a: usize) -> usize {
        self.nabla[a]
    }

    /// Index of `⟨(a, 1)⟩`.
    pub fn delta(&self, a: usize) -> usize {
        self.delta[a]
    }

    pub fn nabla_indices(&self) -> &[usize] {
        &self.nabla
    }

    pub fn delta_indices(&self) -> &[usize] {
        &self.delta
    }

    pub fn is_nabla(&self, i: usize) -> bool {
        self.nabla.contains(&i)
    }

    pub fn is_delta(&self, i: usize) -> bool {
        self.delta.contains(&i)
    }

    pub fn diagonal(&self) -> usize {
        self.frame.bottom()
    }

    pub fn total(&self) -> usize {
        self.frame.top()
    }

    /// Index of the least congruence containing `pairs`.
    pub fn generated(&self, pairs: &[(usize, usize)]) -> usize {
        self.index[&generate(&self.base, pairs)]
    }
}

/// A quotient S-frame with its quotient map.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub frame: Arc<SFrame>,
    pub map: SFrameMap,
}

/// `L/θ`: classes ordered by `[x] ≤ [y]` iff `(x, x ∧ y) ∈ θ`, with the image
/// selection.
pub fn quotient(l: &Arc<SFrame>, theta: &SCongruence) -> Result<Quotient> {
    let classes = theta.classes();
    let mut table = vec![0usize; l.size()];
    for (i, class) in classes.iter().enumerate() {
        for x in class.iter() {
            table[x] = i;
        }
    }
    let names: Vec<String> = classes.iter().map(|c| l.names_of(c).join("~")).collect();
    let reps: Vec<usize> = classes.iter().map(|c| c.first().expect("classes are nonempty")).collect();
    let poset = Poset::from_relation(names, |i, j| {
        let (x, y) = (reps[i], reps[j]);
        theta.related(x, l.meet(x, y))
    })?;
    let carrier = Arc::new(MeetSemilattice::new(poset)?);
    let sel = l.selection().image(carrier, &table);
    let name = format!("{}/{}", l.name(), theta.render(l));
    let frame = Arc::new(validate_sframe(&name, sel)?);
    let map = validate_map(table, l, &frame)?;
    Ok(Quotient { frame, map })
}

/// The Madden congruence `{(x, y) : P_x = P_y}` and its quotient.
#[derive(Clone, Debug)]
pub struct Madden {
    pub congruence: SCongruence,
    pub is_scongruence: bool,
    pub quotient: Option<Quotient>,
    pub dense: bool,
    pub onto: bool,
    pub d_reduced: bool,
}

pub fn madden(l: &Arc<SFrame>) -> Madden {
    let ann: Vec<ElementSet> = l.elements().map(|x| annihilator(l, x)).collect();
    let congruence = SCongruence::from_key(l.size(), |x| ann[x].clone());
    let is_cong = is_scongruence(l, &congruence);
    let quotient = if is_cong { quotient(l, &congruence).ok() } else { None };
    let (dense, onto) = match &quotient {
        Some(q) => {
            let d = density_profile(&q.map);
            (d.dense, d.surjective)
        }
        None => (false, false),
    };
    Madden {
        d_reduced: congruence.is_diagonal(),
        congruence,
        is_scongruence: is_cong,
        quotient,
        dense,
        onto,
    }
}

/// `a ↦ ⟨(0, a)⟩` as an S-frame map into the congruence frame.
pub fn nabla_embedding(cf: &CongruenceFrame) -> Result<SFrameMap> {
    validate_map(cf.nabla.clone(), &cf.base, &cf.frame)
}

/// The frame map `f̄` out of the congruence frame with `f̄ ∘ ∇ = f`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub map: SFrameMap,
    /// Whether the ∇-image generates the congruence frame under binary
    /// meets, joins and complements, which forces uniqueness.
    pub unique: bool,
}

pub fn factor_through_congruence_frame(cf: &CongruenceFrame, f: &SFrameMap) -> Result<Factorization> {
    if !Arc::ptr_eq(f.domain(), cf.base()) {
        return Err(Error::NotComposable);
    }
    let m = f.codomain();
    if m.kind() != SelectionKind::Finite {
        return Err(Error::FactorizationFailed(format!(
            "codomain {} is not a full frame",
            m.name()
        )));
    }
    let l = cf.base();
    let mut neg = vec![0usize; l.size()];
    for a in l.elements() {
        neg[a] = m
            .complement(f.apply(a))
            .ok_or_else(|| Error::ImageNotComplemented(l.elem(a).into()))?;
    }
    let table: Vec<usize> = cf
        .congruences()
        .iter()
        .map(|theta| {
            let mut acc = m.bottom();
            for x in l.elements() {
                for y in l.elements() {
                    if l.le(x, y) && theta.related(x, y) {
                        acc = m.join(acc, m.meet(f.apply(y), neg[x]));
                    }
                }
            }
            acc
        })
        .collect();
    let map = validate_lattice_map(table, cf.frame(), m)
        .map_err(|e| Error::FactorizationFailed(e.to_string()))?;
    for a in l.elements() {
        if map.apply(cf.nabla(a)) != f.apply(a) {
            return Err(Error::FactorizationFailed(format!(
                "extension disagrees with the map at {}",
                l.elem(a)
            )));
        }
    }
    Ok(Factorization {
        map,
        unique: nabla_generates(cf),
    })
}

// Closure of the ∇-image under binary meets, joins and complements.
fn nabla_generates(cf: &CongruenceFrame) -> bool {
    let fr = cf.frame();
    let mut gen: BTreeSet<usize> = cf.nabla_indices().iter().copied().collect();
    loop {
        let mut next = gen.clone();
        for &x in &gen {
            if let Some(c) = fr.complement(x) {
                next.insert(c);
            }
            for &y in &gen {
                next.insert(fr.meet(x, y));
                next.insert(fr.join(x, y));
            }
        }
        if next.len() == gen.len() {
            return gen.len() == cf.size();
        }
        gen = next;
    }
}

/// Table of `e_L(I) = ⋁_{i ∈ I} ∇_i` over the ideals of the free frame.
pub fn e_table(ff: &FreeFrame, cf: &CongruenceFrame) -> Vec<usize> {
    let l = cf.base();
    ff.ideals()
        .iter()
        .map(|ideal| {
            let pairs: Vec<(usize, usize)> = ideal.iter().map(|i| (l.bottom(), i)).collect();
            cf.generated(&pairs)
        })
        .collect()
}

/// `e_L` validated as a lattice map from the free frame into the congruence
/// lattice.
pub fn e_map(ff: &FreeFrame, cf: &CongruenceFrame) -> Result<SFrameMap> {
    validate_lattice_map(e_table(ff, cf), ff.frame(), cf.frame())
}

/// Table of `C_S h : θ ↦ ⟨(h × h)[θ]⟩` between congruence lattices.
pub fn cs_functor_table(h: &SFrameMap, cf_l: &CongruenceFrame, cf_m: &CongruenceFrame) -> Vec<usize> {
    cf_l.congruences()
        .iter()
        .map(|theta| {
            let pairs: Vec<(usize, usize)> = (0..theta.size())
                .map(|x| (h.apply(x), h.apply(theta.class_of(x))))
                .collect();
            cf_m.generated(&pairs)
        })
        .collect()
}

/// `C_S h` validated as a lattice map.
pub fn cs_functor_map(h: &SFrameMap, cf_l: &CongruenceFrame, cf_m: &CongruenceFrame) -> Result<SFrameMap> {
    if !Arc::ptr_eq(h.domain(), cf_l.base()) || !Arc::ptr_eq(h.codomain(), cf_m.base()) {
        return Err(Error::NotComposable);
    }
    validate_lattice_map(cs_functor_table(h, cf_l, cf_m), cf_l.frame(), cf_m.frame())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn frame(name: &str) -> Arc<SFrame> {
        Arc::new(catalog::entry(name).unwrap())
    }

    fn partition(l: &SFrame, classes: &[&[&str]]) -> SCongruence {
        let mut raw = vec![0; l.size()];
        for (i, class) in classes.iter().enumerate() {
            for name in *class {
                raw[l.index_of(name).unwrap()] = i;
            }
        }
        SCongruence::from_labels(&raw)
    }

    #[test]
    fn labels_are_canonical() {
        let a = SCongruence::from_labels(&[7, 3, 7, 3]);
        assert_eq!(a.labels, vec![0, 1, 0, 1]);
        assert_eq!(a.class_count(), 2);
        assert_eq!(a.pairs().collect::<Vec<_>>(), vec![(0, 2), (1, 3)]);
        assert!(SCongruence::diagonal(4).refines(&a));
        assert!(a.refines(&SCongruence::total(4)));
    }

    #[test]
    fn membership_examples() {
        let l = frame("D4-singletons");
        assert!(is_scongruence(&l, &SCongruence::diagonal(4)));
        assert!(is_scongruence(&l, &SCongruence::total(4)));
        let bad = partition(&l, &[&["a", "1"], &["0"], &["b"]]);
        let v = check_scongruence(&l, &bad).unwrap();
        let (a, b, one, zero) = (1, 2, 3, 0);
        assert_eq!(
            v,
            CongruenceViolation::Meet {
                pair: (a, one),
                with: b,
                result: (zero, b)
            }
        );
    }

    #[test]
    fn generation_examples() {
        let l = frame("D4-singletons");
        assert_eq!(generate(&l, &[]), SCongruence::diagonal(4));
        assert_eq!(generate(&l, &[(0, 3)]), SCongruence::total(4));
        let nd = nabla_delta(&l, 1).unwrap();
        assert_eq!(nd.nabla_generated, partition(&l, &[&["0", "a"], &["b"], &["1"]]));
        assert_eq!(nd.nabla_formula, partition(&l, &[&["0", "a"], &["b", "1"]]));
        assert!(!nd.nabla_agrees());
        assert!(nd.delta_agrees());
    }

    #[test]
    fn top_and_bottom_nabla_delta() {
        let (entries, _) = catalog::valid_entries();
        for l in entries {
            let n = l.size();
            let one = nabla_delta(&l, l.top()).unwrap();
            assert!(one.nabla_generated.is_total() && one.delta_generated == SCongruence::diagonal(n));
            let zero = nabla_delta(&l, l.bottom()).unwrap();
            assert!(zero.nabla_generated.is_diagonal() && zero.delta_generated.is_total());
        }
    }

    #[test]
    fn congruence_frame_sizes() {
        let cases = [("D4-finite", 4), ("C3-finite", 4), ("C2-singletons", 2), ("C2-finite", 2)];
        for (name, count) in cases {
            let cf = enumerate_congruence_frame(&frame(name), Capacity::default()).unwrap();
            assert_eq!(cf.size(), count, "{name}");
        }
    }

    #[test]
    fn enumeration_matches_oracle() {
        let (entries, _) = catalog::valid_entries();
        for l in entries {
            let l = Arc::new(l);
            let cf = enumerate_congruence_frame(&l, Capacity::default()).unwrap();
            assert_eq!(cf.congruences(), congruences_by_partition_filter(&l).as_slice(), "{}", l.name());
        }
    }

    #[test]
    fn singleton_congruences_of_d4_are_not_distributive() {
        let cf = enumerate_congruence_frame(&frame("D4-singletons"), Capacity::default()).unwrap();
        assert!(!cf.is_distributive());
        let cf = enumerate_congruence_frame(&frame("D4-finite"), Capacity::default()).unwrap();
        assert!(cf.is_distributive());
    }

    #[test]
    fn meets_are_intersections() {
        let cf = enumerate_congruence_frame(&frame("TwoDiamonds-singletons"), Capacity::default()).unwrap();
        let fr = cf.frame();
        for i in fr.elements() {
            for j in fr.elements() {
                let m = cf.congruence(i).intersection(cf.congruence(j));
                assert_eq!(cf.index_of(&m), Some(fr.meet(i, j)));
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let l = frame("C3-singletons");
        let theta = partition(&l, &[&["0"], &["a", "1"]]);
        let q = quotient(&l, &theta).unwrap();
        assert_eq!(q.frame.size(), 2);
        assert!(q.map.is_surjective());
        let diag = quotient(&l, &SCongruence::diagonal(3)).unwrap();
        assert!(diag.map.is_iso());
        let one = quotient(&l, &SCongruence::total(3)).unwrap();
        assert_eq!(one.frame.size(), 1);
    }

    #[test]
    fn madden_examples() {
        let c3 = madden(&frame("C3-singletons"));
        assert_eq!(c3.congruence.class_count(), 2);
        assert!(!c3.d_reduced && c3.dense && c3.onto);
        assert!(madden(&frame("D4-singletons")).d_reduced);
        assert!(madden(&frame("D4-finite")).d_reduced);
        assert!(madden(&frame("M3-singletons")).d_reduced);
    }

    #[test]
    fn nabla_embedding_examples() {
        let cf = enumerate_congruence_frame(&frame("D4-finite"), Capacity::default()).unwrap();
        assert!(nabla_embedding(&cf).unwrap().is_iso());
        let cf = enumerate_congruence_frame(&frame("C3-finite"), Capacity::default()).unwrap();
        let nabla = nabla_embedding(&cf).unwrap();
        assert!(nabla.is_injective() && !nabla.is_surjective());
    }

    #[test]
    fn factorization_of_nabla_is_identity() {
        let cf = enumerate_congruence_frame(&frame("D4-finite"), Capacity::default()).unwrap();
        let fac = factor_through_congruence_frame(&cf, &nabla_embedding(&cf).unwrap()).unwrap();
        assert_eq!(fac.map.table(), (0..cf.size()).collect::<Vec<_>>().as_slice());
        assert!(fac.unique);
    }

    #[test]
    fn factorization_needs_complements() {
        let l = frame("C3-finite");
        let cf = enumerate_congruence_frame(&l, Capacity::default()).unwrap();
        let c3_full = Arc::new(SFrame::full_frame("C3", l.carrier_arc().clone()).unwrap());
        let id = validate_map(vec![0, 1, 2], &l, &c3_full).unwrap();
        assert_eq!(
            factor_through_congruence_frame(&cf, &id).unwrap_err(),
            Error::ImageNotComplemented("a".into())
        );
    }

    #[test]
    fn functor_on_identity_and_collapse() {
        let c3 = frame("C3-finite");
        let c2 = frame("C2-finite");
        let cf3 = enumerate_congruence_frame(&c3, Capacity::default()).unwrap();
        let cf2 = enumerate_congruence_frame(&c2, Capacity::default()).unwrap();
        let id = SFrameMap::identity(&c3);
        let cid = cs_functor_map(&id, &cf3, &cf3).unwrap();
        assert_eq!(cid.table(), (0..cf3.size()).collect::<Vec<_>>().as_slice());
        let h = validate_map(vec![0, 1, 1], &c3, &c2).unwrap();
        let ch = cs_functor_map(&h, &cf3, &cf2).unwrap();
        assert_eq!(ch.apply(cf3.nabla(1)), cf2.nabla(1));
    }
}
