//! Exact Cover → planar TSP on a scaled Cantor crossbar: gadget tables, assembly with a target
//! length, structural checks, witness tours from covers, and a Held–Karp oracle.

mod assemble;
mod checks;
mod export;
mod gadgets;
mod held_karp;
mod witness;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use assemble::{reduce_exact_cover_to_tsp, AlphaRecord, TspReductionOutput};
pub use checks::{check_structure, detect_components, ComponentReport, StructureReport};
pub use export::{to_tsplib, TsplibSidecar};
pub use gadgets::{
    check_placement, gadget_table, place_gadget, GadgetKind, GadgetPlacement, Orientation, A_PATH_LENGTH,
    B_PATH_LENGTH, H_PATH_LENGTH,
};
pub use held_karp::{held_karp_optimal_path, held_karp_path_between, HELD_KARP_LIMIT};
pub use witness::{exact_covers, witness_path_from_cover, Witness};

use crate::fractal::FractalError;
use crate::geometry::GeometryError;

/// The a of the construction.
pub const A: i64 = 20;
/// Side of one scaled crossbar cell, 2a + 11.
pub const CELL: i64 = 2 * A + 11;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TspError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown gadget kind {0:?}")]
    UnknownKind(String),
    #[error("{n} points exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("structural check failed ({check}): {detail}")]
    Structure { check: String, detail: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Fractal(#[from] FractalError),
}

/// Universe {0..m−1}; `sets` has exactly m entries after padding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCoverInstance {
    pub m: usize,
    pub sets: Vec<Vec<usize>>,
}

impl ExactCoverInstance {
    /// Sorts and dedups each set and pads with empty sets up to m.
    pub fn new(m: usize, mut sets: Vec<Vec<usize>>) -> Result<Self, TspError> {
        if m == 0 {
            return Err(TspError::Invalid("universe is empty".into()));
        }
        if sets.len() > m {
            return Err(TspError::Invalid(format!("{} sets for a universe of {m}", sets.len())));
        }
        for (i, s) in sets.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(&u) = s.iter().find(|&&u| u >= m) {
                return Err(TspError::Invalid(format!("set {i} names element {u} outside 0..{m}")));
            }
        }
        sets.resize(m, Vec::new());
        Ok(ExactCoverInstance { m, sets })
    }

    pub fn contains(&self, set: usize, u: usize) -> bool {
        self.sets[set].binary_search(&u).is_ok()
    }

    /// Whether the chosen sets partition the universe.
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let mut seen = BTreeSet::new();
        for &i in chosen {
            if i >= self.sets.len() {
                return false;
            }
            for &u in &self.sets[i] {
                if !seen.insert(u) {
                    return false;
                }
            }
        }
        let distinct: BTreeSet<&usize> = chosen.iter().collect();
        distinct.len() == chosen.len() && seen.len() == self.m
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }
}
