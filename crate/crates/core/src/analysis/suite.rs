//! Theorem verdicts over structures, maps and composable pairs of maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    boolean_classify, closed_open_profile, is_bijection, preimage_cong, preserves_joins,
    preserves_meets, Analysis, MapAnalysis,
};
use crate::congruence::{
    congruences_by_partition_filter, enumerate_congruence_frame, generate, is_scongruence,
    nabla_delta, nabla_embedding, quotient, SCongruence,
};
use crate::error::Result;
use crate::freeframe::{
    annihilator, free_extension, is_sideal, principal_join_law, s_lindelof_elements,
};
use crate::order::{check_lattice_hom, lattice_profile_of};
use crate::selection::Regime;
use crate::set::{all_subsets, ElementSet};
use crate::sframe::{
    enumerate_maps, is_right_galois, left_adjoint, right_adjoint, SFrame,
    SFrameMap,
};
use crate::Capacity;

/// One evaluated claim on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub theorem: String,
    pub instance: String,
    pub regime: Regime,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Whether a failure of this verdict is a defect rather than a finding.
    pub asserted: bool,
}

/// Theorem ids produced by [`structure_verdicts`].
pub const STRUCTURE_THEOREMS: &[&str] = &[
    "adjoint-preservation",
    "annihilator-pseudocomplement",
    "boolean-equivalents",
    "boolean-ladder",
    "comparison-adjunction",
    "comparison-identities",
    "comparison-map",
    "comparison-meets",
    "comparison-nabla-union",
    "comparison-triangle",
    "congruence-decomposition",
    "congruence-frame-distributive",
    "congruence-oracle",
    "delta-generated",
    "delta-join-formula",
    "down-embedding",
    "e-injective",
    "free-boolean-equivalents",
    "free-frame-enumeration",
    "ideal-nabla-union",
    "interval-congruence",
    "madden-dense-onto",
    "nabla-embedding",
    "nabla-generated",
    "nabla-join-formula",
    "principal-ideal-equivalents",
    "principal-join-law",
    "quotient-closed-open",
];

/// Which instances a run covers, by regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Full,
    Base,
    All,
}

impl Suite {
    fn covers(self, regime: Regime) -> bool {
        match self {
            Suite::Full => regime == Regime::Full,
            Suite::Base => regime != Regime::Full,
            Suite::All => true,
        }
    }
}

/// In which regimes a claim is asserted; everywhere else it is reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Policy {
    /// Correctness of the enumeration algorithms themselves.
    Always,
    FullAndBase,
    FullOnly,
}

impl Policy {
    fn asserted(self, regime: Regime) -> bool {
        match self {
            Policy::Always => true,
            Policy::FullAndBase => regime != Regime::Weak,
            Policy::FullOnly => regime == Regime::Full,
        }
    }
}

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, witness: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

struct Recorder<'a> {
    instance: String,
    regime: Regime,
    out: &'a mut Vec<TheoremVerdict>,
}

impl Recorder<'_> {
    fn record(&mut self, theorem: &str, policy: Policy, check: Check) {
        self.out.push(TheoremVerdict {
            theorem: theorem.into(),
            instance: self.instance.clone(),
            regime: self.regime,
            holds: check.is_ok(),
            witness: check.err(),
            asserted: policy.asserted(self.regime),
        });
    }
}

fn flags(fs: &[bool]) -> String {
    let marks: Vec<&str> = fs.iter().map(|&b| if b { "T" } else { "F" }).collect();
    format!("({})", marks.join(","))
}

fn all_agree(fs: &[bool]) -> bool {
    fs.iter().all(|&b| b == fs[0])
}

/// Every structure-level verdict for one analyzed S-frame.
pub fn structure_verdicts(a: &Analysis, cap: Capacity) -> Vec<TheoremVerdict> {
    let mut out = Vec::new();
    let mut r = Recorder {
        instance: a.name().to_string(),
        regime: a.frame.regime(),
        out: &mut out,
    };
    let l = &a.frame;
    let n = l.size();
    let cf = &a.congruences;
    let fr = cf.frame();
    let ff = &a.free;
    let hf = ff.frame();
    let cfh = &a.free_congruences;
    let cname = |i: usize| cf.congruence(i).render(l);

    r.record("free-frame-enumeration", Policy::Always, (|| {
        if n <= 16 {
            let brute = all_subsets(n).filter(|s| is_sideal(l, s)).count();
            ensure(brute == ff.size(), || format!("{} ideals enumerated, {brute} by subset filter", ff.size()))?;
        }
        ensure(a.down.is_injective(), || "principal ideals are not distinct".into())
    })());

    if n <= 6 {
        let oracle = congruences_by_partition_filter(l);
        r.record("congruence-oracle", Policy::Always, ensure(oracle == cf.congruences(), || {
            format!("{} by principal joins, {} by partition filter", cf.size(), oracle.len())
        }));
    }

    r.record("congruence-frame-distributive", Policy::FullOnly, ensure(cf.is_distributive(), || {
        format!("the {} congruences do not form a distributive lattice", cf.size())
    }));

    r.record("nabla-generated", Policy::FullOnly, (|| {
        for x in l.elements() {
            let nd = nabla_delta(l, x).map_err(|e| e.to_string())?;
            ensure(nd.nabla_agrees() && is_scongruence(l, &nd.nabla_formula), || {
                format!(
                    "∇ formula/generated divergence at {}: formula {}, generated {}",
                    l.elem(x),
                    nd.nabla_formula.render(l),
                    nd.nabla_generated.render(l)
                )
            })?;
        }
        Ok(())
    })());

    r.record("delta-generated", Policy::FullOnly, (|| {
        for x in l.elements() {
            let nd = nabla_delta(l, x).map_err(|e| e.to_string())?;
            ensure(nd.delta_agrees() && is_scongruence(l, &nd.delta_formula), || {
                format!(
                    "Δ formula/generated divergence at {}: formula {}, generated {}",
                    l.elem(x),
                    nd.delta_formula.render(l),
                    nd.delta_generated.render(l)
                )
            })?;
        }
        Ok(())
    })());

    r.record("interval-congruence", Policy::FullOnly, (|| {
        for x in l.elements() {
            for y in l.elements().filter(|&y| l.le(x, y)) {
                let lhs = cf.congruence(cf.delta(x)).intersection(cf.congruence(cf.nabla(y)));
                let rhs = generate(l, &[(x, y)]);
                ensure(lhs == rhs, || {
                    format!("Δ_{} ∩ ∇_{} = {} but ⟨({},{})⟩ = {}", l.elem(x), l.elem(y), lhs.render(l), l.elem(x), l.elem(y), rhs.render(l))
                })?;
            }
        }
        Ok(())
    })());

    r.record("congruence-decomposition", Policy::FullOnly, (|| {
        for (i, theta) in cf.congruences().iter().enumerate() {
            let mut acc = fr.bottom();
            for x in l.elements() {
                for y in l.elements() {
                    if l.le(x, y) && theta.related(x, y) {
                        acc = fr.join(acc, fr.meet(cf.nabla(y), cf.delta(x)));
                    }
                }
            }
            ensure(acc == i, || format!("{} decomposes to {}", cname(i), cname(acc)))?;
        }
        Ok(())
    })());

    r.record("nabla-join-formula", Policy::FullOnly, (|| {
        for x in l.elements() {
            for (i, theta) in cf.congruences().iter().enumerate() {
                let formula = SCongruence::from_key(n, |y| theta.class_of(l.join(y, x)));
                let joined = cf.congruence(fr.join(cf.nabla(x), i));
                ensure(&formula == joined, || {
                    format!("∇_{} ∨ {} = {} but the formula gives {}", l.elem(x), cname(i), joined.render(l), formula.render(l))
                })?;
            }
        }
        Ok(())
    })());

    r.record("delta-join-formula", Policy::FullOnly, (|| {
        for x in l.elements() {
            for (i, theta) in cf.congruences().iter().enumerate() {
                let formula = SCongruence::from_key(n, |y| theta.class_of(l.meet(y, x)));
                let joined = cf.congruence(fr.join(cf.delta(x), i));
                ensure(&formula == joined, || {
                    format!("Δ_{} ∨ {} = {} but the formula gives {}", l.elem(x), cname(i), joined.render(l), formula.render(l))
                })?;
            }
        }
        Ok(())
    })());

    let union_of_nablas = |ideal: &ElementSet| -> Vec<bool> {
        let mut rel = vec![false; n * n];
        for i in ideal.iter() {
            let nab = cf.congruence(cf.nabla(i));
            for x in 0..n {
                for y in 0..n {
                    rel[x * n + y] |= nab.related(x, y);
                }
            }
        }
        rel
    };
    let relation = |theta: &SCongruence| -> Vec<bool> {
        (0..n * n).map(|k| theta.related(k / n, k % n)).collect()
    };

    r.record("ideal-nabla-union", Policy::FullOnly, (|| {
        for (i, ideal) in ff.ideals().iter().enumerate() {
            ensure(relation(cf.congruence(a.e[i])) == union_of_nablas(ideal), || {
                format!("for the ideal {} = {{{}}}, the join of ∇_x is {} which is larger than the union", hf.elem(i), l.names_of(ideal).join(","), cname(a.e[i]))
            })?;
        }
        Ok(())
    })());

    r.record("e-injective", Policy::FullAndBase, (|| {
        for x in l.elements() {
            ensure(a.e[ff.principal(x)] == cf.nabla(x), || format!("e(↓{0}) ≠ ∇_{0}", l.elem(x)))?;
        }
        let mut seen = vec![false; cf.size()];
        for (i, &t) in a.e.iter().enumerate() {
            ensure(!std::mem::replace(&mut seen[t], true), || format!("e is not injective at {}", hf.elem(i)))?;
        }
        check_lattice_hom(hf.carrier(), fr.carrier(), &a.e).map_err(|e| format!("e is not a lattice map: {e}"))?;
        if cf.is_distributive() {
            let nabla = nabla_embedding(cf).map_err(|e| e.to_string())?;
            let ext = free_extension(ff, &nabla).map_err(|e| e.to_string())?;
            ensure(ext.table() == a.e.as_slice(), || "free extension of ∇ differs from e".into())?;
        }
        Ok(())
    })());

    r.record("madden-dense-onto", Policy::FullAndBase, (|| {
        let m = &a.madden;
        ensure(m.is_scongruence, || "the annihilator relation is not an S-congruence".into())?;
        ensure(m.dense && m.onto, || "the Madden quotient map is not dense and onto".into())
    })());

    r.record("annihilator-pseudocomplement", Policy::FullAndBase, (|| {
        for x in l.elements() {
            let px = annihilator(l, x);
            let pc = ff.ideal(ff.pseudocomplement(ff.principal(x)));
            ensure(is_sideal(l, &px) && &px == pc, || format!("P_{} is not the pseudocomplement of ↓{}", l.elem(x), l.elem(x)))?;
        }
        Ok(())
    })());

    r.record("principal-join-law", Policy::FullOnly, (|| {
        for x in l.elements() {
            for (i, ideal) in ff.ideals().iter().enumerate() {
                let ok = principal_join_law(l, x, ideal).map_err(|e| e.to_string())?;
                ensure(ok, || format!("↓{} ∨ {} differs from the principal join formula", l.elem(x), hf.elem(i)))?;
            }
        }
        Ok(())
    })());

    r.record("quotient-closed-open", Policy::FullOnly, (|| {
        for (i, theta) in cf.congruences().iter().enumerate() {
            let q = quotient(l, theta).map_err(|e| e.to_string())?;
            let cfq = enumerate_congruence_frame(&q.frame, cap).map_err(|e| e.to_string())?;
            let p = closed_open_profile(&q.map, cf, &cfq);
            ensure(p.closed == cf.is_nabla(i), || {
                format!("quotient by {} closed={} but closed congruence={}", cname(i), p.closed, cf.is_nabla(i))
            })?;
            ensure(p.open == cf.is_delta(i), || {
                format!("quotient by {} open={} but open congruence={}", cname(i), p.open, cf.is_delta(i))
            })?;
        }
        Ok(())
    })());

    let complemented_l = l.elements().all(|x| l.complement(x).is_some());
    let e_iso = is_bijection(&a.e, cf.size());
    r.record("boolean-equivalents", Policy::FullOnly, {
        let principal_complemented = l.elements().all(|x| hf.complement(ff.principal(x)).is_some());
        let joins_of_nablas = (0..cf.size()).all(|i| {
            let below = ElementSet::from_indices(
                cf.size(),
                cf.nabla_indices().iter().copied().filter(|&k| fr.le(k, i)),
            );
            fr.join_all(&below) == i
        });
        let fs = [complemented_l, principal_complemented, e_iso, joins_of_nablas];
        ensure(all_agree(&fs), || format!("conditions disagree: {}", flags(&fs)))
    });

    let nabla_iso = is_bijection(cf.nabla_indices(), cf.size());
    r.record("free-boolean-equivalents", Policy::FullOnly, {
        let free_boolean = lattice_profile_of(hf.carrier()).is_boolean_algebra;
        let dense: Vec<usize> = hf
            .elements()
            .filter(|&i| ff.pseudocomplement(i) == hf.bottom())
            .collect();
        let only_top_dense = dense == vec![ff.principal(l.top())];
        let all_nablas = (0..cf.size()).all(|i| cf.is_nabla(i));
        let fs = [free_boolean, only_top_dense, nabla_iso, all_nablas];
        ensure(all_agree(&fs), || format!("conditions disagree: {}", flags(&fs)))
    });

    let ladder = boolean_classify(a);
    r.record("boolean-ladder", Policy::FullOnly, ensure(ladder.is_monotone(), || {
        format!("ladder {} is not monotone", flags(&ladder.flags()))
    }));

    r.record("comparison-map", Policy::FullAndBase, (|| {
        for x in l.elements() {
            let d = ff.principal(x);
            ensure(a.big_e[cf.nabla(x)] == cfh.nabla(d), || format!("E(∇_{0}) ≠ ∇_↓{0}", l.elem(x)))?;
            ensure(a.big_e[cf.delta(x)] == cfh.delta(d), || format!("E(Δ_{0}) ≠ Δ_↓{0}", l.elem(x)))?;
        }
        ensure(preserves_joins(fr.carrier(), cfh.frame().carrier(), &a.big_e), || "E does not preserve joins".into())?;
        let dense = (0..cf.size()).all(|i| a.big_e[i] != cfh.diagonal() || i == cf.diagonal());
        ensure(dense, || "E is not dense".into())
    })());

    r.record("comparison-meets", Policy::FullOnly, ensure(
        preserves_meets(fr.carrier(), cfh.frame().carrier(), &a.big_e),
        || "E does not preserve meets".into(),
    ));

    r.record("comparison-triangle", Policy::FullAndBase, (|| {
        for i in hf.elements() {
            ensure(a.big_e[a.e[i]] == cfh.nabla(i), || format!("E(e({0})) ≠ ∇_{0}", hf.elem(i)))?;
        }
        Ok(())
    })());

    let big_d: Option<Vec<usize>> = a.big_d.iter().copied().collect();
    r.record("comparison-adjunction", Policy::FullAndBase, (|| {
        let Some(d) = &big_d else {
            let k = a.big_d.iter().position(|d| d.is_none()).unwrap();
            return Err(format!("D({}) is not an S-congruence", cfh.congruence(k).render(hf)));
        };
        ensure(is_right_galois(fr.carrier(), cfh.frame().carrier(), &a.big_e, d), || "E ⊣ D fails".into())?;
        ensure(preserves_meets(cfh.frame().carrier(), fr.carrier(), d), || "D does not preserve meets".into())?;
        ensure(d[cfh.diagonal()] == cf.diagonal(), || "D does not preserve the bottom".into())
    })());

    r.record("comparison-identities", Policy::FullAndBase, (|| {
        let Some(d) = &big_d else {
            return Err("D is not defined everywhere".into());
        };
        for x in l.elements() {
            let p = ff.principal(x);
            ensure(d[cfh.nabla(p)] == cf.nabla(x), || format!("D(∇_↓{0}) ≠ ∇_{0}", l.elem(x)))?;
            ensure(d[cfh.delta(p)] == cf.delta(x), || format!("D(Δ_↓{0}) ≠ Δ_{0}", l.elem(x)))?;
        }
        for i in hf.elements() {
            ensure(d[cfh.nabla(i)] == a.e[i], || format!("D(∇_{0}) ≠ ⋁ ∇_x over {0}", hf.elem(i)))?;
            let split = fr.join(d[cfh.nabla(i)], d[cfh.delta(i)]) == cf.total();
            ensure(split == ff.is_principal(i), || {
                format!("ideal {} principal={} but D(∇)∨D(Δ) total={}", hf.elem(i), ff.is_principal(i), split)
            })?;
        }
        Ok(())
    })());

    r.record("comparison-nabla-union", Policy::FullOnly, (|| {
        let Some(d) = &big_d else {
            return Err("D is not defined everywhere".into());
        };
        for (i, ideal) in ff.ideals().iter().enumerate() {
            let dn = cf.congruence(d[cfh.nabla(i)]);
            ensure(relation(dn) == union_of_nablas(ideal), || {
                format!("for the ideal {} = {{{}}}, D(∇_I) = {} is not the union of the ∇_x", hf.elem(i), l.names_of(ideal).join(","), dn.render(l))
            })?;
        }
        Ok(())
    })());

    r.record("principal-ideal-equivalents", Policy::FullAndBase, (|| {
        let down_iso = a.down.is_iso();
        let all_principal = ff.principal_count() == ff.size();
        let profile = lattice_profile_of(l.carrier());
        let frame_lindelof = profile.is_distributive && {
            let full = SFrame::full_frame(l.name(), l.carrier_arc().clone()).map_err(|e| e.to_string())?;
            s_lindelof_elements(&full, l.selection()).len() == n
        };
        let big_e_iso = is_bijection(&a.big_e, cfh.size());
        let fs = [down_iso, all_principal, frame_lindelof, big_e_iso];
        ensure(all_agree(&fs), || format!("conditions disagree: {}", flags(&fs)))
    })());

    r.record("down-embedding", Policy::FullOnly, (|| {
        let p = closed_open_profile(&a.down, cf, cfh);
        let iso = a.down.is_iso();
        let frame = lattice_profile_of(l.carrier()).is_distributive;
        ensure(p.right_adjoint == iso, || format!("right adjoint={} but iso={}", p.right_adjoint, iso))?;
        ensure(p.closed == iso, || format!("closed={} but iso={}", p.closed, iso))?;
        ensure(p.left_adjoint == l.carrier().is_lattice(), || format!("left adjoint={} on a complete lattice", p.left_adjoint))?;
        ensure(p.open == frame, || format!("open={} but frame={}", p.open, frame))
    })());

    r.record("nabla-embedding", Policy::FullOnly, (|| {
        let nabla = nabla_embedding(cf).map_err(|e| format!("∇ is not an S-frame map: {e}"))?;
        let cfc = enumerate_congruence_frame(cf.frame(), cap).map_err(|e| format!("not evaluated: {e}"))?;
        let p = closed_open_profile(&nabla, cf, &cfc);
        let boolean_frame = lattice_profile_of(l.carrier()).is_boolean_algebra;
        ensure(p.closed == nabla_iso, || format!("closed={} but iso={}", p.closed, nabla_iso))?;
        ensure(p.open == boolean_frame, || format!("open={} but Boolean frame={}", p.open, boolean_frame))
    })());

    r.record("adjoint-preservation", Policy::FullAndBase, (|| {
        ensure(preserves_joins(fr.carrier(), cfh.frame().carrier(), &a.big_e), || "E does not preserve joins".into())?;
        if let Some(d) = &big_d {
            ensure(preserves_meets(cfh.frame().carrier(), fr.carrier(), d), || "D does not preserve meets".into())?;
        }
        adjoint_preservation(&a.down)
    })());

    out
}

// Right adjoints preserve top and meets, and their left partners preserve
// bottom and joins; dually for left adjoints.
fn adjoint_preservation(h: &SFrameMap) -> Check {
    let (l, m) = (h.domain().carrier(), h.codomain().carrier());
    if let Some(r) = right_adjoint(h).table() {
        ensure(preserves_meets(m, l, r), || "right adjoint does not preserve meets".into())?;
        ensure(preserves_joins(l, m, h.table()), || "map with a right adjoint does not preserve joins".into())?;
    }
    if let Some(lt) = left_adjoint(h).table() {
        ensure(preserves_joins(m, l, lt), || "left adjoint does not preserve joins".into())?;
        ensure(preserves_meets(l, m, h.table()), || "map with a left adjoint does not preserve meets".into())?;
    }
    Ok(())
}

fn find<'a>(analyses: &'a [Analysis], l: &Arc<SFrame>) -> &'a Analysis {
    analyses
        .iter()
        .find(|a| Arc::ptr_eq(&a.frame, l))
        .expect("every map endpoint is analyzed")
}

fn describe_map(h: &SFrameMap) -> String {
    let pairs: Vec<String> = h.describe().into_iter().map(|(x, y)| format!("{x}↦{y}")).collect();
    format!("[{}]", pairs.join(" "))
}

struct MapChecks {
    profile: MapAnalysis,
}

fn map_checks(h: &SFrameMap, analyses: &[Analysis]) -> (MapChecks, NamedChecks) {
    let a = find(analyses, h.domain());
    let b = find(analyses, h.codomain());
    let (cf_l, cf_m) = (&a.congruences, &b.congruences);
    let p = closed_open_profile(h, cf_l, cf_m);
    let mut out: NamedChecks = Vec::new();
    out.push((
        "closed-map-characterization",
        Policy::FullOnly,
        ensure(p.closed == p.closed_characterization, || {
            format!("closed={} but adjoint condition={}", p.closed, p.closed_characterization)
        }),
    ));
    out.push((
        "open-map-characterization",
        Policy::FullOnly,
        ensure(p.open == p.open_characterization, || {
            format!("open={} but adjoint condition={}", p.open, p.open_characterization)
        }),
    ));
    out.push(("dense-closed-injective", Policy::FullOnly, (|| {
        ensure(!(p.dense && p.closed) || p.injective, || "dense and closed but not one-one".into())?;
        ensure(!(p.codense && p.open) || p.injective, || "codense and open but not one-one".into())
    })()));

    let ch = crate::congruence::cs_functor_table(h, cf_l, cf_m);
    let pre: Vec<Option<usize>> = cf_m
        .congruences()
        .iter()
        .map(|phi| cf_l.index_of(&preimage_cong(h, phi)))
        .collect();
    out.push(("functor-adjunction", Policy::FullAndBase, (|| {
        let Some(pre) = pre.iter().copied().collect::<Option<Vec<usize>>>() else {
            return Err("a preimage is not an S-congruence".into());
        };
        let (fl, fm) = (cf_l.frame().carrier(), cf_m.frame().carrier());
        ensure(is_right_galois(fl, fm, &ch, &pre), || "C_S h ⊣ (h×h)⁻¹ fails".into())?;
        for x in h.domain().elements() {
            ensure(ch[cf_l.nabla(x)] == cf_m.nabla(h.apply(x)), || {
                format!("C_S h(∇_{}) ≠ ∇ of its image", h.domain().elem(x))
            })?;
        }
        Ok(())
    })()));

    out.push(("comparison-naturality", Policy::FullAndBase, (|| {
        let composite = h.then(&b.down).map_err(|e| e.to_string())?;
        let hh = free_extension(&a.free, &composite).map_err(|e| e.to_string())?;
        let chh = crate::congruence::cs_functor_table(&hh, &a.free_congruences, &b.free_congruences);
        for (i, _) in cf_l.congruences().iter().enumerate() {
            ensure(b.big_e[ch[i]] == chh[a.big_e[i]], || {
                format!("square fails at {}", cf_l.congruence(i).render(h.domain()))
            })?;
        }
        Ok(())
    })()));

    out.push(("adjoint-preservation", Policy::FullAndBase, (|| {
        let (fl, fm) = (cf_l.frame().carrier(), cf_m.frame().carrier());
        ensure(preserves_joins(fl, fm, &ch), || "C_S h does not preserve joins".into())?;
        if let Some(pre) = pre.iter().copied().collect::<Option<Vec<usize>>>() {
            ensure(preserves_meets(fm, fl, &pre), || "(h×h)⁻¹ does not preserve meets".into())?;
        }
        adjoint_preservation(h)
    })()));
    (MapChecks { profile: p }, out)
}

type NamedChecks = Vec<(&'static str, Policy, Check)>;
type Group = (Regime, Vec<(String, NamedChecks)>);

/// Aggregates per-map checks into one verdict per theorem and structure
/// pair, keeping the first failing map as the witness.
fn aggregate(
    out: &mut Vec<TheoremVerdict>,
    instance: String,
    regime: Regime,
    results: Vec<(String, NamedChecks)>,
) {
    let mut by_theorem: BTreeMap<&'static str, (Policy, Option<String>)> = BTreeMap::new();
    for (map, checks) in results {
        for (theorem, policy, check) in checks {
            let entry = by_theorem.entry(theorem).or_insert((policy, None));
            if let (Err(w), None) = (check, &entry.1) {
                entry.1 = Some(format!("{map}: {w}"));
            }
        }
    }
    for (theorem, (policy, witness)) in by_theorem {
        out.push(TheoremVerdict {
            theorem: theorem.into(),
            instance: instance.clone(),
            regime,
            holds: witness.is_none(),
            witness,
            asserted: policy.asserted(regime),
        });
    }
}

fn pair_regime(a: &SFrame, b: &SFrame) -> Regime {
    a.regime().max(b.regime())
}

/// Verdicts over every map of `maps`, grouped by structure pair, and over
/// every composable pair among them.
pub fn map_verdicts(maps: &[SFrameMap], analyses: &[Analysis]) -> Vec<TheoremVerdict> {
    let mut out = Vec::new();
    let mut groups: BTreeMap<String, Group> = BTreeMap::new();
    let mut profiles: Vec<MapAnalysis> = Vec::new();
    for h in maps {
        let (mc, checks) = map_checks(h, analyses);
        profiles.push(mc.profile);
        let instance = format!("{} -> {}", h.domain().name(), h.codomain().name());
        let entry = groups
            .entry(instance)
            .or_insert((pair_regime(h.domain(), h.codomain()), Vec::new()));
        entry.1.push((describe_map(h), checks));
    }
    for (instance, (regime, results)) in groups {
        aggregate(&mut out, instance, regime, results);
    }

    let mut triples: BTreeMap<String, Group> = BTreeMap::new();
    for (i, f) in maps.iter().enumerate() {
        for (j, g) in maps.iter().enumerate() {
            let Ok(gf) = f.then(g) else { continue };
            let a = find(analyses, gf.domain());
            let c = find(analyses, gf.codomain());
            let pgf = closed_open_profile(&gf, &a.congruences, &c.congruences);
            let (pf, pg) = (&profiles[i], &profiles[j]);
            let mut checks = Vec::new();
            for (name, open) in [("composition-closed", false), ("composition-open", true)] {
                let (sf, sg, sgf) = if open {
                    (pf.open, pg.open, pgf.open)
                } else {
                    (pf.closed, pg.closed, pgf.closed)
                };
                let check = (|| {
                    ensure(!(sf && sg) || sgf, || "both factors qualify but the composite does not".into())?;
                    ensure(!(sgf && pg.injective) || sf, || "composite and one-one g qualify but f does not".into())?;
                    ensure(!(sgf && pf.surjective) || sg, || "composite and onto f qualify but g does not".into())
                })();
                checks.push((name, Policy::FullOnly, check));
            }
            let instance = format!(
                "{} -> {} -> {}",
                f.domain().name(),
                f.codomain().name(),
                g.codomain().name()
            );
            let regime = pair_regime(f.domain(), f.codomain()).max(g.codomain().regime());
            let entry = triples.entry(instance).or_insert((regime, Vec::new()));
            entry.1.push((format!("{} then {}", describe_map(f), describe_map(g)), checks));
        }
    }
    for (instance, (regime, results)) in triples {
        aggregate(&mut out, instance, regime, results);
    }
    out
}

/// Maps between structures of at most this size are enumerated for the map
/// and composition checks.
pub const MAP_CATALOG_BOUND: usize = 4;

/// Runs every check on `structures`, the maps between the small ones of
/// the same selection kind, and their Madden quotient maps. Verdicts are
/// sorted by theorem and instance.
pub fn verify(structures: &[Arc<SFrame>], cap: Capacity, suite: Suite) -> Result<Vec<TheoremVerdict>> {
    let mut analyses: Vec<Analysis> = structures
        .iter()
        .map(|l| Analysis::new(l.clone(), cap))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for a in &analyses {
        out.extend(structure_verdicts(a, cap));
    }

    let mut maps = Vec::new();
    let small: Vec<Arc<SFrame>> = structures
        .iter()
        .filter(|l| l.size() <= MAP_CATALOG_BOUND)
        .cloned()
        .collect();
    for l in &small {
        for m in &small {
            if l.kind() == m.kind() {
                maps.extend(enumerate_maps(l, m));
            }
        }
    }
    let mut quotients = Vec::new();
    for a in &analyses {
        if let Some(q) = &a.madden.quotient {
            quotients.push(q.map.clone());
        }
    }
    for q in &quotients {
        analyses.push(Analysis::new(q.codomain().clone(), cap)?);
    }
    maps.extend(quotients);
    out.extend(map_verdicts(&maps, &analyses));

    out.retain(|v| suite.covers(v.regime));
    out.sort_by(|a, b| (&a.theorem, &a.instance).cmp(&(&b.theorem, &b.instance)));
    Ok(out)
}

/// Whether any asserted verdict failed.
pub fn has_failures(verdicts: &[TheoremVerdict]) -> bool {
    verdicts.iter().any(|v| v.asserted && !v.holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn entry(name: &str) -> Arc<SFrame> {
        Arc::new(catalog::entry(name).unwrap())
    }

    fn verdict<'a>(vs: &'a [TheoremVerdict], theorem: &str, instance: &str) -> &'a TheoremVerdict {
        vs.iter()
            .find(|v| v.theorem == theorem && v.instance == instance)
            .unwrap_or_else(|| panic!("no verdict {theorem} on {instance}"))
    }

    #[test]
    fn c2_is_trivially_fine() {
        let vs = verify(&[entry("C2-singletons")], Capacity::default(), Suite::All).unwrap();
        assert!(!has_failures(&vs));
    }

    #[test]
    fn d4_singletons_reports_divergence() {
        let vs = verify(&[entry("D4-singletons")], Capacity::default(), Suite::Base).unwrap();
        let v = verdict(&vs, "nabla-generated", "D4-singletons");
        assert!(!v.holds && !v.asserted);
        assert!(v.witness.as_ref().unwrap().contains("∇ formula/generated divergence at a"));
        let v = verdict(&vs, "comparison-nabla-union", "D4-singletons");
        assert!(!v.holds);
        assert!(v.witness.as_ref().unwrap().contains("↓{a,b}"));
    }

    #[test]
    fn theorem_list_is_complete() {
        let a = Analysis::new(entry("C3-finite"), Capacity::default()).unwrap();
        let mut ids: Vec<String> = structure_verdicts(&a, Capacity::default()).into_iter().map(|v| v.theorem).collect();
        ids.sort();
        assert_eq!(ids, STRUCTURE_THEOREMS);
    }

    #[test]
    fn verdicts_are_sorted() {
        let vs = verify(&[entry("C3-finite")], Capacity::default(), Suite::All).unwrap();
        let keys: Vec<(String, String)> = vs.iter().map(|v| (v.theorem.clone(), v.instance.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(vs.iter().all(|v| v.regime == Regime::Full));
    }
}
