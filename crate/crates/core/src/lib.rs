//! Finite partial frames (S-frames): their free frames and congruence
//! frames, adjoints, generated congruences, quotients, comparison maps, and
//! exhaustive checks of the characterization results on finite instances.

pub mod analysis;
pub mod catalog;
pub mod congruence;
pub mod dot;
pub mod error;
pub mod format;
pub mod freeframe;
pub mod order;
pub mod search;
pub mod selection;
pub mod set;
pub mod sframe;

pub use error::{Error, Result};
pub use order::{MeetSemilattice, Poset};
pub use selection::{Regime, SelectionFunction, SelectionKind};
pub use set::ElementSet;
pub use sframe::{SFrame, SFrameMap};

/// Bounds on derived structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capacity {
    /// Maximum number of S-ideals in a free frame.
    pub ideals: usize,
    /// Maximum number of congruences in a congruence frame.
    pub congruences: usize,
}

impl Capacity {
    pub fn uniform(bound: usize) -> Self {
        Capacity {
            ideals: bound,
            congruences: bound,
        }
    }
}

impl Default for Capacity {
    fn default() -> Self {
        Capacity::uniform(4096)
    }
}
