//! Isomorph-free enumeration of small lattices and a witness search over
//! them under the symbolic selections.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::analysis::suite::{structure_verdicts, STRUCTURE_THEOREMS};
use crate::analysis::{boolean_ladder, Analysis, BooleanLadder};
use crate::catalog;
use crate::congruence::madden;
use crate::error::{Error, Result};
use crate::format::StructureFile;
use crate::freeframe::enumerate_free_frame;
use crate::order::{lattice_profile_of, MeetSemilattice, Poset};
use crate::selection::{Regime, SelectionKind};
use crate::sframe::SFrame;
use crate::Capacity;

/// Largest carrier the search will enumerate.
pub const MAX_SEARCH_SIZE: usize = 8;

/// Order matrix of a lattice on `0..n` (bottom `0`, top `n - 1`), packed
/// row-major into one word.
fn pack(n: usize, le: impl Fn(usize, usize) -> bool) -> u64 {
    let mut bits = 0u64;
    for x in 0..n {
        for y in 0..n {
            if le(x, y) {
                bits |= 1 << (x * n + y);
            }
        }
    }
    bits
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn rec(k: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(k, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(k, &mut current, &mut used, &mut out);
    out
}

/// Least packed matrix over all relabellings of the middle elements, with
/// the relabelling that attains it.
fn canonical(n: usize, le: &[bool], perms: &[Vec<usize>]) -> (u64, Vec<usize>) {
    let mut best: Option<(u64, Vec<usize>)> = None;
    for p in perms {
        // position of each new label in the original order
        let mut pos: Vec<usize> = Vec::with_capacity(n);
        pos.push(0);
        pos.extend(p.iter().map(|&i| i + 1));
        if n > 1 {
            pos.push(n - 1);
        }
        let key = pack(n, |x, y| le[pos[x] * n + pos[y]]);
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            best = Some((key, pos));
        }
    }
    best.unwrap_or_else(|| (pack(n, |x, y| le[x * n + y]), (0..n).collect()))
}

fn names_for(n: usize) -> Vec<String> {
    let mut names = vec!["0".to_string()];
    for i in 0..n.saturating_sub(2) {
        names.push(((b'a' + i as u8) as char).to_string());
    }
    if n > 1 {
        names.push("1".into());
    }
    names
}

fn lattice_from_key(n: usize, key: u64) -> Result<MeetSemilattice> {
    let poset = Poset::from_relation(names_for(n), |x, y| key >> (x * n + y) & 1 == 1)?;
    MeetSemilattice::new(poset)
}

/// Canonical key of a finite lattice, invariant under isomorphism.
pub fn canonical_key(l: &MeetSemilattice) -> u64 {
    let n = l.size();
    let bottom = l.bottom().expect("finite lattices have a bottom");
    let top = l.top();
    let mut order = vec![bottom];
    order.extend((0..n).filter(|&x| x != bottom && x != top));
    if n > 1 {
        order.push(top);
    }
    let le: Vec<bool> = (0..n * n).map(|k| l.le(order[k / n], order[k % n])).collect();
    canonical(n, &le, &permutations(n.saturating_sub(2))).0
}

/// All lattices with `n` elements up to isomorphism, in canonical order.
pub fn enumerate_lattices(n: usize) -> Result<Vec<MeetSemilattice>> {
    if n == 0 || n > MAX_SEARCH_SIZE {
        return Err(Error::CapacityExceeded {
            what: format!("lattice enumeration at size {n}"),
            bound: MAX_SEARCH_SIZE,
        });
    }
    let m = n.saturating_sub(2);
    let perms = permutations(m);
    let mut keys = BTreeMap::new();
    let mut below = vec![0u32; m];
    extend(0, &mut below, &mut |below| {
        let le = middle_order(n, below);
        if is_lattice(n, &le) {
            keys.entry(canonical(n, &le, &perms).0).or_insert(());
        }
    });
    keys.into_keys().map(|key| lattice_from_key(n, key)).collect()
}

/// Naturally labelled posets on the middle elements: element `k` picks a
/// down-closed set of earlier elements as its strict down-set.
fn extend(k: usize, below: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if k == below.len() {
        visit(below);
        return;
    }
    for mask in 0..(1u32 << k) {
        let closed = (0..k).filter(|&j| mask >> j & 1 == 1).all(|j| below[j] & !mask == 0);
        if closed {
            below[k] = mask;
            extend(k + 1, below, visit);
        }
    }
}

fn middle_order(n: usize, below: &[u32]) -> Vec<bool> {
    let m = below.len();
    let mut le = vec![false; n * n];
    for x in 0..n {
        le[x * n + x] = true;
        le[x] = true;
        le[x * n + n - 1] = true;
    }
    for y in 0..m {
        for x in 0..m {
            if below[y] >> x & 1 == 1 {
                le[(x + 1) * n + y + 1] = true;
            }
        }
    }
    le
}

fn is_lattice(n: usize, le: &[bool]) -> bool {
    let down: Vec<u32> = (0..n)
        .map(|y| (0..n).filter(|&x| le[x * n + y]).fold(0, |acc, x| acc | 1 << x))
        .collect();
    (0..n).all(|x| (x..n).all(|y| {
        let lb = down[x] & down[y];
        (0..n).any(|z| down[z] == lb)
    }))
}

/// Catalog name of a lattice when it matches a built-in carrier.
pub fn known_name(l: &MeetSemilattice) -> Option<String> {
    let key = canonical_key(l);
    let chain = (0..l.size()).all(|x| (0..l.size()).all(|y| l.le(x, y) || l.le(y, x)));
    if chain && l.size() >= 2 {
        return Some(format!("C{}", l.size()));
    }
    catalog::carriers()
        .into_iter()
        .find(|(_, c)| c.size() == l.size() && canonical_key(c) == key)
        .map(|(name, _)| name.to_string())
}

/// A boolean formula over structure properties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    Atom(Atom),
    Not(Box<Predicate>),
    And(Vec<Predicate>),
    Or(Vec<Predicate>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    /// One rung of the Boolean ladder, `a` through `d`.
    Ladder(char),
    Distributive,
    Complemented,
    Boolean,
    Lattice,
    Full,
    Holds(String),
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Atom(a) => write!(f, "{a}"),
            Predicate::Not(p) => write!(f, "¬{p}"),
            Predicate::And(ps) | Predicate::Or(ps) => {
                let sep = if matches!(self, Predicate::And(_)) { " ∧ " } else { " ∨ " };
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", parts.join(sep))
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Ladder(c) => write!(f, "({c})"),
            Atom::Distributive => write!(f, "distributive"),
            Atom::Complemented => write!(f, "complemented"),
            Atom::Boolean => write!(f, "boolean"),
            Atom::Lattice => write!(f, "lattice"),
            Atom::Full => write!(f, "full"),
            Atom::Holds(id) => write!(f, "holds:{id}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Not,
    And,
    Or,
    Word(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Token::Open);
            }
            ')' => {
                chars.next();
                out.push(Token::Close);
            }
            '¬' | '!' | '~' => {
                chars.next();
                out.push(Token::Not);
            }
            '∧' | '&' => {
                chars.next();
                if chars.peek() == Some(&'&') {
                    chars.next();
                }
                out.push(Token::And);
            }
            '∨' | '|' => {
                chars.next();
                if chars.peek() == Some(&'|') {
                    chars.next();
                }
                out.push(Token::Or);
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == ':' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == ':' {
                        word.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(match word.as_str() {
                    "not" => Token::Not,
                    "and" => Token::And,
                    "or" => Token::Or,
                    _ => Token::Word(word),
                });
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}` in predicate"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn disjunction(&mut self) -> Result<Predicate> {
        let mut parts = vec![self.conjunction()?];
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Predicate::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Predicate> {
        let mut parts = vec![self.factor()?];
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            parts.push(self.factor()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Predicate::And(parts) })
    }

    fn factor(&mut self) -> Result<Predicate> {
        match self.next() {
            Some(Token::Not) => Ok(Predicate::Not(Box::new(self.factor()?))),
            Some(Token::Open) => {
                let inner = self.disjunction()?;
                match self.next() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(Error::Parse("missing `)` in predicate".into())),
                }
            }
            Some(Token::Word(w)) => atom(&w).map(Predicate::Atom),
            Some(t) => Err(Error::Parse(format!("unexpected {t:?} in predicate"))),
            None => Err(Error::Parse("predicate ends early".into())),
        }
    }
}

fn atom(word: &str) -> Result<Atom> {
    Ok(match word {
        "a" | "b" | "c" | "d" => Atom::Ladder(word.chars().next().unwrap()),
        "distributive" => Atom::Distributive,
        "complemented" => Atom::Complemented,
        "boolean" => Atom::Boolean,
        "lattice" => Atom::Lattice,
        "full" => Atom::Full,
        _ => match word.strip_prefix("holds:") {
            Some(id) if STRUCTURE_THEOREMS.contains(&id) => Atom::Holds(id.to_string()),
            Some(id) => return Err(Error::Parse(format!("unknown theorem id `{id}`"))),
            None => return Err(Error::Parse(format!("unknown predicate atom `{word}`"))),
        },
    })
}

impl std::str::FromStr for Predicate {
    type Err = Error;

    fn from_str(text: &str) -> Result<Predicate> {
        let mut p = Parser { tokens: tokenize(text)?, pos: 0 };
        let pred = p.disjunction()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse("trailing input in predicate".into()));
        }
        Ok(pred)
    }
}

/// Lazily computed facts about one candidate.
struct Facts {
    frame: Arc<SFrame>,
    cap: Capacity,
    ladder: OnceCell<BooleanLadder>,
    verdicts: OnceCell<Vec<crate::analysis::suite::TheoremVerdict>>,
}

impl Facts {
    fn ladder(&self) -> Result<&BooleanLadder> {
        if self.ladder.get().is_none() {
            let free = enumerate_free_frame(&self.frame, self.cap)?;
            let m = madden(&self.frame);
            let _ = self.ladder.set(boolean_ladder(&self.frame, &free, &m));
        }
        Ok(self.ladder.get().unwrap())
    }

    fn holds(&self, id: &str) -> Result<bool> {
        if self.verdicts.get().is_none() {
            let a = Analysis::new(self.frame.clone(), self.cap)?;
            let _ = self.verdicts.set(structure_verdicts(&a, self.cap));
        }
        Ok(self.verdicts.get().unwrap().iter().filter(|v| v.theorem == id).all(|v| v.holds))
    }

    fn eval(&self, p: &Predicate) -> Result<bool> {
        Ok(match p {
            Predicate::Not(q) => !self.eval(q)?,
            Predicate::And(qs) => {
                for q in qs {
                    if !self.eval(q)? {
                        return Ok(false);
                    }
                }
                true
            }
            Predicate::Or(qs) => {
                for q in qs {
                    if self.eval(q)? {
                        return Ok(true);
                    }
                }
                false
            }
            Predicate::Atom(a) => {
                let l = self.frame.carrier();
                match a {
                    Atom::Ladder(c) => {
                        let flags = self.ladder()?.flags();
                        flags[(*c as u8 - b'a') as usize]
                    }
                    Atom::Distributive => lattice_profile_of(l).is_distributive,
                    Atom::Complemented => (0..l.size()).all(|x| l.complement(x).is_some()),
                    Atom::Boolean => lattice_profile_of(l).is_boolean_algebra,
                    Atom::Lattice => l.is_lattice(),
                    Atom::Full => self.frame.regime() == Regime::Full,
                    Atom::Holds(id) => self.holds(id)?,
                }
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub max_size: usize,
    pub kinds: Vec<SelectionKind>,
    pub predicate: Predicate,
    /// Stop after this many witnesses at the minimal size.
    pub limit: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub name: String,
    pub size: usize,
    pub regime: Regime,
    pub ladder: Option<[bool; 4]>,
    pub structure: StructureFile,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub predicate: String,
    pub max_size: usize,
    /// Number of (lattice, selection) candidates evaluated.
    pub examined: usize,
    /// Witnesses of the least size at which any exist.
    pub witnesses: Vec<Witness>,
}

impl SearchOutcome {
    pub fn summary(&self) -> String {
        match self.witnesses.first() {
            None => format!("none up to bound {} ({} candidates)", self.max_size, self.examined),
            Some(w) => {
                let names: Vec<&str> = self.witnesses.iter().map(|w| w.name.as_str()).collect();
                format!("{} witness(es) at size {}: {}", names.len(), w.size, names.join(", "))
            }
        }
    }
}

/// Searches lattices in increasing size for S-frames satisfying the
/// predicate and returns the witnesses of least size.
pub fn search(spec: &SearchSpec, cap: Capacity) -> Result<SearchOutcome> {
    if spec.max_size > MAX_SEARCH_SIZE {
        return Err(Error::CapacityExceeded {
            what: format!("search up to size {}", spec.max_size),
            bound: MAX_SEARCH_SIZE,
        });
    }
    let mut examined = 0;
    let mut witnesses = Vec::new();
    for n in 1..=spec.max_size {
        for (k, carrier) in enumerate_lattices(n)?.into_iter().enumerate() {
            let base = known_name(&carrier).unwrap_or_else(|| format!("L{n}.{}", k + 1));
            for &kind in &spec.kinds {
                let name = format!("{base}-{}", kind_name(kind));
                let Ok(frame) = SFrame::new(&name, carrier.clone(), kind) else {
                    continue;
                };
                examined += 1;
                let facts = Facts {
                    frame: Arc::new(frame),
                    cap,
                    ladder: OnceCell::new(),
                    verdicts: OnceCell::new(),
                };
                if facts.eval(&spec.predicate)? {
                    witnesses.push(Witness {
                        name,
                        size: n,
                        regime: facts.frame.regime(),
                        ladder: facts.ladder.get().map(|l| l.flags()),
                        structure: StructureFile::from_sframe(&facts.frame),
                    });
                    if spec.limit.is_some_and(|lim| witnesses.len() >= lim) {
                        break;
                    }
                }
            }
            if spec.limit.is_some_and(|lim| witnesses.len() >= lim) {
                break;
            }
        }
        if !witnesses.is_empty() {
            break;
        }
    }
    Ok(SearchOutcome {
        predicate: spec.predicate.to_string(),
        max_size: spec.max_size,
        examined,
        witnesses,
    })
}

fn kind_name(kind: SelectionKind) -> &'static str {
    match kind {
        SelectionKind::Singletons => "singletons",
        SelectionKind::Finite => "finite",
        SelectionKind::Explicit => "explicit",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_counts_match_known_sequence() {
        let counts: Vec<usize> = (1..=7).map(|n| enumerate_lattices(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5, 15, 53]);
    }

    #[test]
    fn known_names() {
        let names: Vec<Option<String>> =
            enumerate_lattices(5).unwrap().iter().map(known_name).collect();
        for expected in ["C5", "M3", "N5"] {
            assert!(names.contains(&Some(expected.to_string())), "{expected} missing from {names:?}");
        }
        let four: Vec<Option<String>> =
            enumerate_lattices(4).unwrap().iter().map(known_name).collect();
        assert!(four.contains(&Some("D4".into())) && four.contains(&Some("C4".into())));
        assert_eq!(known_name(&catalog::two_diamonds()).as_deref(), Some("TwoDiamonds"));
    }

    #[test]
    fn predicate_parsing() {
        let p: Predicate = "(b) ∧ ¬(a)".parse().unwrap();
        assert_eq!(
            p,
            Predicate::And(vec![
                Predicate::Atom(Atom::Ladder('b')),
                Predicate::Not(Box::new(Predicate::Atom(Atom::Ladder('a')))),
            ])
        );
        let q: Predicate = "not full and (distributive | holds:boolean-ladder)".parse().unwrap();
        assert!(matches!(q, Predicate::And(_)));
        assert!("(a".parse::<Predicate>().is_err());
        assert!("holds:nope".parse::<Predicate>().is_err());
        assert!("a ∧".parse::<Predicate>().is_err());
    }

    fn run(pred: &str, max: usize) -> SearchOutcome {
        let spec = SearchSpec {
            max_size: max,
            kinds: vec![SelectionKind::Singletons, SelectionKind::Finite],
            predicate: pred.parse().unwrap(),
            limit: None,
        };
        search(&spec, Capacity::default()).unwrap()
    }

    #[test]
    fn boolean_without_free_boolean_is_d4_singletons() {
        let out = run("(b) ∧ ¬(a)", 5);
        let names: Vec<&str> = out.witnesses.iter().map(|w| w.name.as_str()).collect();
        assert_eq!(names, vec!["D4-singletons"]);
    }

    #[test]
    fn complemented_without_boolean_at_size_five() {
        let out = run("(c) ∧ ¬(b)", 5);
        let names: Vec<&str> = out.witnesses.iter().map(|w| w.name.as_str()).collect();
        assert!(names.contains(&"M3-singletons"), "{names:?}");
        assert!(out.witnesses.iter().all(|w| w.size == 5));
    }

    #[test]
    fn oversized_search_is_rejected() {
        let spec = SearchSpec {
            max_size: MAX_SEARCH_SIZE + 1,
            kinds: vec![SelectionKind::Finite],
            predicate: "a".parse().unwrap(),
            limit: None,
        };
        assert!(matches!(search(&spec, Capacity::default()), Err(Error::CapacityExceeded { .. })));
    }
}
