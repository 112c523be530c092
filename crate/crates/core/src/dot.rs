//! Graphviz output for Hasse diagrams.

use std::fmt::Write;

use crate::congruence::CongruenceFrame;
use crate::freeframe::FreeFrame;
use crate::sframe::SFrame;

/// One highlighted group of elements.
pub struct Highlight<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub members: Vec<usize>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram of `l`, bottom at the bottom. An element in several
/// highlight groups takes the colour of the first.
pub fn hasse(l: &SFrame, highlights: &[Highlight<'_>]) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(l.name())).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    for x in l.elements() {
        let mut attrs = format!("label={}", quote(l.elem(x)));
        let groups: Vec<&Highlight<'_>> = highlights.iter().filter(|h| h.members.contains(&x)).collect();
        if let Some(first) = groups.first() {
            let tags: Vec<&str> = groups.iter().map(|h| h.label).collect();
            write!(
                attrs,
                ", style=filled, fillcolor={}, tooltip={}",
                quote(first.color),
                quote(&tags.join(" "))
            )
            .unwrap();
        }
        writeln!(out, "  n{x} [{attrs}];").unwrap();
    }
    for (x, y) in l.carrier().poset().cover_pairs() {
        writeln!(out, "  n{x} -> n{y} [arrowhead=none];").unwrap();
    }
    out.push_str("}\n");
    out
}

/// The free frame with its principal ideals highlighted.
pub fn free_frame_dot(ff: &FreeFrame) -> String {
    hasse(
        ff.frame(),
        &[Highlight {
            label: "principal",
            color: "lightblue",
            members: ff.principal_indices().to_vec(),
        }],
    )
}

/// The congruence lattice with the images of ∇ and Δ highlighted. The
/// diagonal and total congruences lie in both and are coloured separately.
pub fn congruence_frame_dot(cf: &CongruenceFrame) -> String {
    let both: Vec<usize> = cf.nabla_indices().iter().copied().filter(|i| cf.delta_indices().contains(i)).collect();
    hasse(
        cf.frame(),
        &[
            Highlight { label: "nabla delta", color: "plum", members: both },
            Highlight { label: "nabla", color: "lightblue", members: cf.nabla_indices().to_vec() },
            Highlight { label: "delta", color: "lightsalmon", members: cf.delta_indices().to_vec() },
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::congruence::enumerate_congruence_frame;
    use crate::freeframe::enumerate_free_frame;
    use crate::Capacity;
    use std::sync::Arc;

    #[test]
    fn free_frame_of_d4_singletons() {
        let l = Arc::new(catalog::entry("D4-singletons").unwrap());
        let ff = enumerate_free_frame(&l, Capacity::default()).unwrap();
        let dot = free_frame_dot(&ff);
        assert!(dot.starts_with("digraph \"H(D4-singletons)\""));
        assert_eq!(dot.matches("lightblue").count(), 4);
        assert_eq!(dot.matches("arrowhead=none").count(), 5);
    }

    #[test]
    fn congruences_highlight_both_images() {
        let l = Arc::new(catalog::entry("C3-finite").unwrap());
        let cf = enumerate_congruence_frame(&l, Capacity::default()).unwrap();
        let dot = congruence_frame_dot(&cf);
        assert_eq!(dot.matches("fillcolor").count(), 4);
        assert!(dot.contains("plum") && dot.contains("lightsalmon"));
    }
}
