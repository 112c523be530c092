//! Closed and open maps, Boolean conditions, the comparison maps between
//! `C_S L` and the congruences of the free frame, and the verdict suite.

pub mod suite;

use std::sync::Arc;

use serde::Serialize;

use crate::congruence::{
    cs_functor_table, e_table, enumerate_congruence_frame, is_scongruence, madden, CongruenceFrame,
    Madden, SCongruence,
};
use crate::error::Result;
use crate::freeframe::{enumerate_free_frame, FreeFrame};
use crate::order::{lattice_profile_of, MeetSemilattice};
use crate::sframe::{density_profile, left_adjoint, right_adjoint, Adjoint, SFrame, SFrameMap};
use crate::Capacity;

/// `{(x, y) : (h(x), h(y)) ∈ φ}`.
pub fn preimage_cong(h: &SFrameMap, phi: &SCongruence) -> SCongruence {
    SCongruence::from_key(h.domain().size(), |x| phi.class_of(h.apply(x)))
}

/// Everything derived from one S-frame that the checks need.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub frame: Arc<SFrame>,
    pub free: FreeFrame,
    pub congruences: CongruenceFrame,
    /// Congruences of the free frame (a full frame, so these are its frame
    /// congruences).
    pub free_congruences: CongruenceFrame,
    pub down: SFrameMap,
    pub madden: Madden,
    /// `e_L`, indexed by ideal.
    pub e: Vec<usize>,
    /// `E_L`, indexed by congruence of `L`.
    pub big_e: Vec<usize>,
    /// `D_L`, indexed by congruence of the free frame; `None` where the
    /// preimage is not an S-congruence.
    pub big_d: Vec<Option<usize>>,
}

impl Analysis {
    pub fn new(frame: Arc<SFrame>, cap: Capacity) -> Result<Analysis> {
        let free = enumerate_free_frame(&frame, cap)?;
        let congruences = enumerate_congruence_frame(&frame, cap)?;
        let free_congruences = enumerate_congruence_frame(free.frame(), cap)?;
        let down = free.down_embed();
        let e = e_table(&free, &congruences);
        let big_e = cs_functor_table(&down, &congruences, &free_congruences);
        let big_d = free_congruences
            .congruences()
            .iter()
            .map(|phi| congruences.index_of(&preimage_cong(&down, phi)))
            .collect();
        let madden = madden(&frame);
        Ok(Analysis {
            frame,
            free,
            congruences,
            free_congruences,
            down,
            madden,
            e,
            big_e,
            big_d,
        })
    }

    pub fn name(&self) -> &str {
        self.frame.name()
    }
}

/// First codomain element `m` whose ∇ (or Δ) preimage is not a ∇ (or Δ) of
/// the domain.
fn preimage_witness(
    h: &SFrameMap,
    cf_l: &CongruenceFrame,
    cf_m: &CongruenceFrame,
    open: bool,
) -> Option<usize> {
    let m = h.codomain();
    m.elements().find(|&y| {
        let target = if open { cf_m.delta(y) } else { cf_m.nabla(y) };
        let pre = preimage_cong(h, cf_m.congruence(target));
        match cf_l.index_of(&pre) {
            Some(i) => {
                if open {
                    !cf_l.is_delta(i)
                } else {
                    !cf_l.is_nabla(i)
                }
            }
            None => true,
        }
    })
}

/// Closedness, openness, density and adjoints of one map, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapAnalysis {
    pub closed: bool,
    pub open: bool,
    pub dense: bool,
    pub codense: bool,
    pub injective: bool,
    pub surjective: bool,
    pub right_adjoint: bool,
    pub left_adjoint: bool,
    /// A right adjoint exists and `r(h(x) ∨ m) = x ∨ r(m)` everywhere.
    pub closed_characterization: bool,
    /// A left adjoint exists and `l(h(x) ∧ m) = x ∧ l(m)` everywhere.
    pub open_characterization: bool,
    pub witnesses: Vec<String>,
}

pub fn closed_open_profile(h: &SFrameMap, cf_l: &CongruenceFrame, cf_m: &CongruenceFrame) -> MapAnalysis {
    let (l, m) = (h.domain(), h.codomain());
    let mut witnesses = Vec::new();
    let closed_w = preimage_witness(h, cf_l, cf_m, false);
    if let Some(y) = closed_w {
        witnesses.push(format!("not closed: preimage of ∇_{} is no ∇", m.elem(y)));
    }
    let open_w = preimage_witness(h, cf_l, cf_m, true);
    if let Some(y) = open_w {
        witnesses.push(format!("not open: preimage of Δ_{} is no Δ", m.elem(y)));
    }
    let r = right_adjoint(h);
    if let Adjoint::Absent { witness } = &r {
        witnesses.push(format!("no right adjoint, witness m={}", m.elem(*witness)));
    }
    let lft = left_adjoint(h);
    if let Adjoint::Absent { witness } = &lft {
        witnesses.push(format!("no left adjoint, witness m={}", m.elem(*witness)));
    }
    let closed_characterization = match r.table() {
        Some(r) => l
            .elements()
            .all(|x| m.elements().all(|y| r[m.join(h.apply(x), y)] == l.join(x, r[y]))),
        None => false,
    };
    let open_characterization = match lft.table() {
        Some(lt) => l
            .elements()
            .all(|x| m.elements().all(|y| lt[m.meet(h.apply(x), y)] == l.meet(x, lt[y]))),
        None => false,
    };
    let d = density_profile(h);
    MapAnalysis {
        closed: closed_w.is_none(),
        open: open_w.is_none(),
        dense: d.dense,
        codense: d.codense,
        injective: d.injective,
        surjective: d.surjective,
        right_adjoint: r.is_present(),
        left_adjoint: lft.is_present(),
        closed_characterization,
        open_characterization,
        witnesses,
    }
}

/// The four Boolean conditions, from strongest to weakest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BooleanLadder {
    /// The free frame is Boolean.
    pub a_free_boolean: bool,
    /// `L` is a Boolean frame.
    pub b_boolean_frame: bool,
    /// Every element of `L` is complemented.
    pub c_boolean_sframe: bool,
    /// `L` is d-reduced.
    pub d_d_reduced: bool,
    pub witnesses: Vec<String>,
}

impl BooleanLadder {
    pub fn flags(&self) -> [bool; 4] {
        [self.a_free_boolean, self.b_boolean_frame, self.c_boolean_sframe, self.d_d_reduced]
    }

    /// Whether each condition implies the next.
    pub fn is_monotone(&self) -> bool {
        self.flags().windows(2).all(|w| !w[0] || w[1])
    }
}

pub fn boolean_classify(a: &Analysis) -> BooleanLadder {
    boolean_ladder(&a.frame, &a.free, &a.madden)
}

/// The ladder from its ingredients alone, without the congruence frames.
pub fn boolean_ladder(l: &SFrame, free: &FreeFrame, m: &Madden) -> BooleanLadder {
    let ff = free.frame();
    let mut witnesses = Vec::new();
    let free_profile = lattice_profile_of(ff.carrier());
    if let Some(i) = ff.elements().find(|&i| ff.complement(i).is_none()) {
        witnesses.push(format!("ideal {} has no complement", ff.elem(i)));
    }
    let profile = lattice_profile_of(l.carrier());
    let uncomplemented = l.elements().find(|&x| l.complement(x).is_none());
    if let Some(x) = uncomplemented {
        witnesses.push(format!("{} has no complement", l.elem(x)));
    }
    if !profile.is_distributive {
        witnesses.push("carrier is not distributive".into());
    }
    if let Some((x, y)) = m.congruence.pairs().next() {
        witnesses.push(format!("{} and {} have equal annihilators", l.elem(x), l.elem(y)));
    }
    BooleanLadder {
        a_free_boolean: free_profile.is_boolean_algebra,
        b_boolean_frame: profile.is_boolean_algebra,
        c_boolean_sframe: uncomplemented.is_none(),
        d_d_reduced: m.d_reduced,
        witnesses,
    }
}

/// Whether a table between lattices preserves binary meets and the top.
pub fn preserves_meets(dom: &MeetSemilattice, cod: &MeetSemilattice, f: &[usize]) -> bool {
    f[dom.top()] == cod.top()
        && (0..dom.size()).all(|x| (0..dom.size()).all(|y| f[dom.meet(x, y)] == cod.meet(f[x], f[y])))
}

/// Whether a table between lattices preserves binary joins and the bottom.
pub fn preserves_joins(dom: &MeetSemilattice, cod: &MeetSemilattice, f: &[usize]) -> bool {
    dom.bottom().map(|b| f[b]) == cod.bottom()
        && (0..dom.size()).all(|x| {
            (0..dom.size()).all(|y| {
                let j = dom.join(x, y).expect("lattice");
                cod.join(f[x], f[y]) == Some(f[j])
            })
        })
}

pub fn is_bijection(table: &[usize], codomain_size: usize) -> bool {
    let mut seen = vec![false; codomain_size];
    for &y in table {
        if std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    table.len() == codomain_size
}

/// Whether the preimage under `h` of every congruence is an S-congruence.
pub fn preimages_are_congruences(h: &SFrameMap, cf_m: &CongruenceFrame) -> bool {
    cf_m.congruences()
        .iter()
        .all(|phi| is_scongruence(h.domain(), &preimage_cong(h, phi)))
}
