//! Geometric graphs on point sets: greedy and carpet spanners, stretch checks,
//! grid-minor certificates from full rows, and separator tree decompositions.

mod carpet;
mod greedy;
mod minor;
mod paths;
mod treedec;
mod verify;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use carpet::{build_carpet_spanner, carpet_depth_of};
pub use greedy::build_greedy_spanner;
pub use minor::{extract_grid_minor, validate_minor, BranchSet, ConnectingPath, GridMinorCertificate, MinorCheck};
pub use paths::{shortest_path, sssp};
pub use treedec::{
    build_carpet_tree_decomposition, separator_tree_decomposition, validate_tree_decomposition, TreeCheck,
    TreeDecomposition,
};
pub use verify::{cmp_sqrt_sums, sqrt_sums_equal, verify_spanner, StretchReport};

use crate::fractal::FractalError;
use crate::geometry::rational::{self, Rational};
use crate::geometry::{sq_dist_unchecked, GeometryError, PointSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpannerError {
    #[error("stretch factor must be at least 1")]
    InvalidStretch,
    #[error("{n} points exceeds the limit of {limit} for this operation")]
    TooLarge { n: usize, limit: usize },
    #[error("edge {0}: {1}")]
    InvalidEdge(usize, String),
    #[error("not a carpet spanner: {0}")]
    NotACarpetSpanner(String),
    #[error("routed paths of rows {row_a:?} and {row_b:?} collide at vertex {vertex}")]
    Collision {
        row_a: (usize, usize),
        row_b: (usize, usize),
        vertex: usize,
    },
    #[error("vertices {0} and {1} are not connected")]
    Disconnected(usize, usize),
    #[error("row structure unusable: {0}")]
    RowStructure(String),
    #[error("certificate failed validation: {0}")]
    Certificate(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Fractal(#[from] FractalError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    #[serde(with = "rational::pair")]
    pub sq_len: Rational,
}

/// Undirected simple graph with V(G) = P and Euclidean edge weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct SpannerGraph {
    points: PointSet,
    edges: Vec<Edge>,
    #[serde(skip)]
    adj: Vec<Vec<(usize, f64)>>,
}

#[derive(Deserialize)]
struct RawGraph {
    points: PointSet,
    edges: Vec<Edge>,
}

impl TryFrom<RawGraph> for SpannerGraph {
    type Error = SpannerError;
    fn try_from(r: RawGraph) -> Result<Self, SpannerError> {
        for (i, e) in r.edges.iter().enumerate() {
            if e.u < r.points.len()
                && e.v < r.points.len()
                && sq_dist_unchecked(r.points.point(e.u), r.points.point(e.v)) != e.sq_len
            {
                return Err(SpannerError::InvalidEdge(i, "sq_len differs from sqDist".into()));
            }
        }
        let pairs = r.edges.iter().map(|e| (e.u, e.v)).collect();
        SpannerGraph::new(r.points, pairs)
    }
}

impl SpannerGraph {
    /// Rejects loops, repeated edges and out-of-range ids; edge order is kept.
    pub fn new(points: PointSet, pairs: Vec<(usize, usize)>) -> Result<Self, SpannerError> {
        let n = points.len();
        let mut seen = HashSet::with_capacity(pairs.len());
        let mut edges = Vec::with_capacity(pairs.len());
        let mut adj = vec![Vec::new(); n];
        for (i, (u, v)) in pairs.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(SpannerError::InvalidEdge(i, format!("endpoint out of range 0..{n}")));
            }
            if u == v {
                return Err(SpannerError::InvalidEdge(i, "loop".into()));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(SpannerError::InvalidEdge(i, "repeated edge".into()));
            }
            let sq_len = sq_dist_unchecked(points.point(u), points.point(v));
            let w = rational::to_f64(&sq_len).sqrt();
            adj[u].push((v, w));
            adj[v].push((u, w));
            edges.push(Edge { u, v, sq_len });
        }
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
        }
        Ok(SpannerGraph { points, edges, adj })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbours sorted by id, with float edge lengths.
    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adj[u]
    }

    pub(crate) fn adjacency(&self) -> &[Vec<(usize, f64)>] {
        &self.adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.len() && self.adj[u].binary_search_by_key(&v, |&(x, _)| x).is_ok()
    }

    pub fn edge_length(&self, u: usize, v: usize) -> Option<f64> {
        let i = self.adj[u].binary_search_by_key(&v, |&(x, _)| x).ok()?;
        Some(self.adj[u][i].1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    /// Connected components of the subgraph induced by `keep`; vertices outside are ignored.
    pub fn components_within(&self, keep: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if !keep[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &(v, _) in &self.adj[u] {
                    if keep[v] && !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components_within(&vec![true; self.len()]).len() == 1
    }
}
