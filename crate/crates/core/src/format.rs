//! JSON structure and map files.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{build_poset, MeetSemilattice, MAX_CARRIER};
use crate::selection::{make_selection, SelectionFunction, SelectionKind};
use crate::set::ElementSet;
use crate::sframe::{validate_map, validate_sframe, SFrame, SFrameMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionSpec {
    pub kind: SelectionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<String>>>,
}

/// A structure file: carrier, order (closure is always applied) and
/// selection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFile {
    pub name: String,
    pub elements: Vec<String>,
    pub le: Vec<(String, String)>,
    pub selection: SelectionSpec,
}

impl StructureFile {
    pub fn parse(text: &str) -> Result<StructureFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("structure files serialize")
    }

    pub fn carrier(&self) -> Result<MeetSemilattice> {
        if self.elements.len() > MAX_CARRIER {
            return Err(Error::CarrierTooLarge {
                size: self.elements.len(),
                max: MAX_CARRIER,
            });
        }
        MeetSemilattice::new(build_poset(&self.elements, &self.le)?)
    }

    /// Builds and validates the S-frame described by this file.
    pub fn to_sframe(&self) -> Result<SFrame> {
        validate_sframe(&self.name, self.selection_function()?)
    }

    /// The carrier and its selection, before the S-frame conditions are
    /// checked.
    pub fn selection_function(&self) -> Result<SelectionFunction> {
        let carrier = Arc::new(self.carrier()?);
        let sets = match &self.selection.sets {
            Some(sets) => Some(
                sets.iter()
                    .map(|set| {
                        set.iter()
                            .map(|e| {
                                carrier
                                    .index_of(e)
                                    .ok_or_else(|| Error::UnknownElement(e.clone()))
                            })
                            .collect::<Result<Vec<_>>>()
                            .map(|xs| ElementSet::from_indices(carrier.size(), xs))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        make_selection(carrier, self.selection.kind, sets)
    }

    /// Exports an S-frame; the order is written as its cover pairs.
    pub fn from_sframe(l: &SFrame) -> StructureFile {
        let p = l.carrier().poset();
        let sets = match l.kind() {
            SelectionKind::Explicit => Some(
                l.selection()
                    .explicit_family()
                    .iter()
                    .filter(|s| !s.is_empty())
                    .map(|s| l.names_of(s))
                    .collect(),
            ),
            _ => None,
        };
        StructureFile {
            name: l.name().to_string(),
            elements: p.names().to_vec(),
            le: p
                .cover_pairs()
                .into_iter()
                .map(|(x, y)| (p.name(x).to_string(), p.name(y).to_string()))
                .collect(),
            selection: SelectionSpec {
                kind: l.kind(),
                sets,
            },
        }
    }
}

/// A map file, naming its domain and codomain structures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub domain: String,
    pub codomain: String,
    pub map: BTreeMap<String, String>,
}

impl MapFile {
    pub fn parse(text: &str) -> Result<MapFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map files serialize")
    }

    pub fn resolve(&self, domain: &Arc<SFrame>, codomain: &Arc<SFrame>) -> Result<SFrameMap> {
        let mut table = Vec::with_capacity(domain.size());
        for x in domain.elements() {
            let name = domain.elem(x);
            let image = self
                .map
                .get(name)
                .ok_or_else(|| Error::TableNotTotal(name.to_string()))?;
            let y = codomain
                .index_of(image)
                .ok_or_else(|| Error::UnknownElement(image.clone()))?;
            table.push(y);
        }
        for key in self.map.keys() {
            if domain.index_of(key).is_none() {
                return Err(Error::UnknownElement(key.clone()));
            }
        }
        validate_map(table, domain, codomain)
    }

    pub fn from_map(h: &SFrameMap) -> MapFile {
        MapFile {
            domain: h.domain().name().to_string(),
            codomain: h.codomain().name().to_string(),
            map: h.describe().into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn parse_structure() {
        let text = r#"{"name": "D4", "elements": ["0","a","b","1"],
            "le": [["0","a"],["0","b"],["a","1"],["b","1"]],
            "selection": {"kind": "singletons"}}"#;
        let f = StructureFile::parse(text).unwrap();
        let l = f.to_sframe().unwrap();
        assert_eq!(l.size(), 4);
        assert_eq!(l.kind(), SelectionKind::Singletons);
    }

    #[test]
    fn explicit_sets_are_resolved() {
        let text = r#"{"name": "D4x", "elements": ["0","a","b","1"],
            "le": [["0","a"],["0","b"],["a","1"],["b","1"]],
            "selection": {"kind": "explicit", "sets": [["a","b"]]}}"#;
        let l = StructureFile::parse(text).unwrap().to_sframe().unwrap();
        assert!(l.is_designated(&ElementSet::from_indices(4, [1, 2])));
        assert!(!l.is_designated(&ElementSet::singleton(4, 1)));
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(StructureFile::parse("{"), Err(Error::Parse(_))));
        let text = r#"{"name": "x", "elements": ["0"], "le": [["0","q"]], "selection": {"kind": "finite"}}"#;
        assert_eq!(
            StructureFile::parse(text).unwrap().to_sframe().unwrap_err(),
            Error::UnknownElement("q".into())
        );
    }

    #[test]
    fn map_file_resolution() {
        let d4 = Arc::new(catalog::entry("D4-singletons").unwrap());
        let c2 = Arc::new(catalog::entry("C2-singletons").unwrap());
        let text = r#"{"domain": "D4-singletons", "codomain": "C2-singletons",
            "map": {"0": "0", "a": "0", "b": "0", "1": "1"}}"#;
        let h = MapFile::parse(text).unwrap().resolve(&d4, &c2).unwrap();
        assert_eq!(h.table(), &[0, 0, 0, 1]);
        let back = MapFile::from_map(&h);
        assert_eq!(back, MapFile::parse(text).unwrap());
    }
}
