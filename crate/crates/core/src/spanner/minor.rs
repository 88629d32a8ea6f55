use std::collections::{HashMap, HashSet};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::paths::{remove_loops, shortest_path};
use super::{SpannerError, SpannerGraph};
use crate::fractal::RowStructure;
use crate::geometry::rational::{int, Rational};
use crate::geometry::Point;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSet {
    pub cell: Vec<usize>,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectingPath {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    /// Starts in `from`'s branch set and ends in `to`'s.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridMinorCertificate {
    pub side: usize,
    pub dim: usize,
    /// Every ⌈c+1⌉-th full row was used.
    pub spacing: usize,
    pub branch_sets: Vec<BranchSet>,
    pub connecting_paths: Vec<ConnectingPath>,
    /// A side-s planar grid has treewidth s; for d ≥ 3 only the side is reported.
    pub treewidth_lower_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorCheck {
    pub ok: bool,
    /// First violated condition: range, cells, disjointness, connectivity or adjacency.
    pub failure: Option<String>,
    pub detail: Option<String>,
}

impl MinorCheck {
    fn pass() -> Self {
        MinorCheck {
            ok: true,
            failure: None,
            detail: None,
        }
    }

    fn fail(kind: &str, detail: String) -> Self {
        MinorCheck {
            ok: false,
            failure: Some(kind.to_string()),
            detail: Some(detail),
        }
    }
}

/// Fixed coordinates of a row along `axis`, i.e. the coordinates of its first point minus `axis`.
fn row_key(g: &SpannerGraph, row: &[usize], axis: usize) -> Vec<Rational> {
    let mut k = g.points().point(row[0]).0.clone();
    k.remove(axis);
    k
}

fn stride_select(values: Vec<Rational>, s: usize) -> Vec<Rational> {
    values.into_iter().step_by(s).collect()
}

/// Routes along every ⌈c+1⌉-th full row, uses the row intersections as single-vertex branch
/// sets and row subpaths as connecting paths, then validates the result.
pub fn extract_grid_minor(
    g: &SpannerGraph,
    rows: &RowStructure,
    c: &Rational,
) -> Result<GridMinorCertificate, SpannerError> {
    if *c < int(1) {
        return Err(SpannerError::InvalidStretch);
    }
    let d = rows.dim;
    if d != g.points().dim() {
        return Err(SpannerError::RowStructure("dimension differs from the graph".into()));
    }
    let s = (c + int(1)).ceil().to_integer().to_usize().unwrap_or(usize::MAX).max(1);
    if rows.rows_by_axis.iter().all(|r| r.is_empty()) {
        return Err(SpannerError::RowStructure("no full rows".into()));
    }

    // W_b: b-coordinates of rows crossing axis b, or of the axis-b rows themselves if none cross.
    let mut selected: Vec<Vec<Rational>> = Vec::with_capacity(d);
    for b in 0..d {
        let mut w: Vec<Rational> = Vec::new();
        for (a, list) in rows.rows_by_axis.iter().enumerate() {
            if a != b {
                w.extend(list.iter().map(|r| g.points().point(r[0]).0[b].clone()));
            }
        }
        if w.is_empty() {
            for r in &rows.rows_by_axis[b] {
                w.extend(r.iter().map(|&i| g.points().point(i).0[b].clone()));
            }
        }
        w.sort();
        w.dedup();
        selected.push(stride_select(w, s));
    }
    let side = selected.iter().map(|v| v.len()).min().unwrap_or(0);
    if side == 0 {
        return Err(SpannerError::RowStructure("an axis has no usable rows".into()));
    }
    for v in &mut selected {
        v.truncate(side);
    }

    let index: HashMap<&Point, usize> = g.points().points().iter().enumerate().map(|(i, p)| (p, i)).collect();
    let cells = grid_cells(side, d);
    let mut cell_vertex: HashMap<Vec<usize>, usize> = HashMap::new();
    for cell in &cells {
        let p = Point::new(cell.iter().enumerate().map(|(b, &i)| selected[b][i].clone()).collect());
        let id = *index
            .get(&p)
            .ok_or_else(|| SpannerError::RowStructure(format!("row intersection {p:?} is not a point")))?;
        cell_vertex.insert(cell.clone(), id);
    }
    let cell_of: HashMap<usize, Vec<usize>> = cell_vertex.iter().map(|(c, &v)| (v, c.clone())).collect();

    let mut connecting_paths = Vec::new();
    if side > 1 {
        let chosen: Vec<HashSet<Rational>> = selected.iter().map(|v| v.iter().cloned().collect()).collect();
        // (axis, row index) for every row whose fixed coordinates are all selected.
        let mut picked: Vec<(usize, usize)> = Vec::new();
        for (a, list) in rows.rows_by_axis.iter().enumerate() {
            for (ri, r) in list.iter().enumerate() {
                let key = row_key(g, r, a);
                let others = (0..d).filter(|&b| b != a);
                if others.zip(&key).all(|(b, x)| chosen[b].contains(x)) {
                    picked.push((a, ri));
                }
            }
        }
        let routed: Vec<Vec<usize>> = picked
            .par_iter()
            .map(|&(a, ri)| route_row(g, &rows.rows_by_axis[a][ri]))
            .collect::<Result<_, _>>()?;

        let mut owner: HashMap<usize, usize> = HashMap::new();
        for (pi, path) in routed.iter().enumerate() {
            let (a, ri) = picked[pi];
            for &v in path {
                if let Some(&other) = owner.get(&v) {
                    let (b, rj) = picked[other];
                    let shared_ok = cell_of.contains_key(&v)
                        && rows.rows_by_axis[a][ri].contains(&v)
                        && rows.rows_by_axis[b][rj].contains(&v)
                        && a != b;
                    if !shared_ok {
                        return Err(SpannerError::Collision {
                            row_a: (b, rj),
                            row_b: (a, ri),
                            vertex: v,
                        });
                    }
                } else {
                    owner.insert(v, pi);
                }
            }
        }

        for (pi, path) in routed.iter().enumerate() {
            let (a, _) = picked[pi];
            let stops: Vec<(usize, &Vec<usize>)> = path
                .iter()
                .enumerate()
                .filter_map(|(i, v)| cell_of.get(v).map(|c| (i, c)))
                .collect();
            for w in stops.windows(2) {
                let ((i, ca), (j, cb)) = (w[0], w[1]);
                let step = ca
                    .iter()
                    .zip(cb.iter())
                    .enumerate()
                    .all(|(b, (x, y))| if b == a { x + 1 == *y } else { x == y });
                if !step {
                    return Err(SpannerError::RowStructure(format!(
                        "routed row along axis {a} visits cells {ca:?} and {cb:?} out of order"
                    )));
                }
                connecting_paths.push(ConnectingPath {
                    from: ca.clone(),
                    to: cb.clone(),
                    vertices: path[i..=j].to_vec(),
                });
            }
        }
        connecting_paths.sort_by(|x, y| (&x.from, &x.to).cmp(&(&y.from, &y.to)));
    }

    let branch_sets = cells
        .iter()
        .map(|c| BranchSet {
            cell: c.clone(),
            vertices: vec![cell_vertex[c]],
        })
        .collect();
    let cert = GridMinorCertificate {
        side,
        dim: d,
        spacing: s,
        branch_sets,
        connecting_paths,
        treewidth_lower_bound: (d == 2).then_some(side),
        note: (d >= 3).then(|| {
            "d-dimensional grid minor; treewidth follows from the known grid bound, no constant claimed".to_string()
        }),
    };
    let check = validate_minor(g, &cert);
    if !check.ok {
        return Err(SpannerError::Certificate(format!(
            "{}: {}",
            check.failure.unwrap_or_default(),
            check.detail.unwrap_or_default()
        )));
    }
    Ok(cert)
}

fn route_row(g: &SpannerGraph, row: &[usize]) -> Result<Vec<usize>, SpannerError> {
    let mut walk = vec![row[0]];
    for w in row.windows(2) {
        let (_, p) = shortest_path(g, w[0], w[1]).ok_or(SpannerError::Disconnected(w[0], w[1]))?;
        walk.extend_from_slice(&p[1..]);
    }
    Ok(remove_loops(&walk))
}

fn grid_cells(side: usize, d: usize) -> Vec<Vec<usize>> {
    let total = side.pow(d as u32);
    (0..total)
        .map(|mut t| {
            let mut c = vec![0; d];
            for slot in c.iter_mut().rev() {
                *slot = t % side;
                t /= side;
            }
            c
        })
        .collect()
}

pub fn validate_minor(g: &SpannerGraph, cert: &GridMinorCertificate) -> MinorCheck {
    let n = g.len();
    let (side, d) = (cert.side, cert.dim);
    for bs in &cert.branch_sets {
        if bs.cell.len() != d || bs.cell.iter().any(|&x| x >= side) {
            return MinorCheck::fail("range", format!("cell {:?} outside the grid", bs.cell));
        }
        if let Some(v) = bs.vertices.iter().find(|&&v| v >= n) {
            return MinorCheck::fail("range", format!("vertex {v} not in G"));
        }
    }
    for p in &cert.connecting_paths {
        if let Some(v) = p.vertices.iter().find(|&&v| v >= n) {
            return MinorCheck::fail("range", format!("vertex {v} not in G"));
        }
    }
    let mut by_cell: HashMap<&[usize], &BranchSet> = HashMap::new();
    for bs in &cert.branch_sets {
        if by_cell.insert(&bs.cell, bs).is_some() {
            return MinorCheck::fail("cells", format!("cell {:?} listed twice", bs.cell));
        }
    }
    if by_cell.len() != side.pow(d as u32) {
        return MinorCheck::fail("cells", format!("{} cells for a side-{side} grid", by_cell.len()));
    }

    let mut used: HashMap<usize, String> = HashMap::new();
    for bs in &cert.branch_sets {
        for &v in &bs.vertices {
            if let Some(prev) = used.insert(v, format!("cell {:?}", bs.cell)) {
                return MinorCheck::fail("disjointness", format!("vertex {v} in {prev} and cell {:?}", bs.cell));
            }
        }
    }
    for (k, p) in cert.connecting_paths.iter().enumerate() {
        if p.vertices.len() < 2 {
            continue;
        }
        for &v in &p.vertices[1..p.vertices.len() - 1] {
            if let Some(prev) = used.insert(v, format!("path {k}")) {
                return MinorCheck::fail("disjointness", format!("path {k} interior vertex {v} also in {prev}"));
            }
        }
    }

    for bs in &cert.branch_sets {
        if bs.vertices.is_empty() {
            return MinorCheck::fail("connectivity", format!("cell {:?} is empty", bs.cell));
        }
        let mut keep = vec![false; n];
        for &v in &bs.vertices {
            keep[v] = true;
        }
        if g.components_within(&keep).len() != 1 {
            return MinorCheck::fail("connectivity", format!("cell {:?} is not connected", bs.cell));
        }
    }

    let mut realized: HashSet<(Vec<usize>, Vec<usize>)> = HashSet::new();
    for (k, p) in cert.connecting_paths.iter().enumerate() {
        let adjacent = p.from.len() == d
            && p.to.len() == d
            && p.from.iter().zip(&p.to).map(|(x, y)| x.abs_diff(*y)).sum::<usize>() == 1;
        if !adjacent {
            return MinorCheck::fail("adjacency", format!("path {k} joins non-adjacent cells"));
        }
        let (Some(a), Some(b)) = (by_cell.get(p.from.as_slice()), by_cell.get(p.to.as_slice())) else {
            return MinorCheck::fail("adjacency", format!("path {k} names an unknown cell"));
        };
        let ends_ok = match (p.vertices.first(), p.vertices.last()) {
            (Some(x), Some(y)) => a.vertices.contains(x) && b.vertices.contains(y),
            _ => false,
        };
        if !ends_ok || p.vertices.len() < 2 {
            return MinorCheck::fail("adjacency", format!("path {k} does not join its cells"));
        }
        if let Some(w) = p.vertices.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return MinorCheck::fail("adjacency", format!("path {k} uses non-edge {}–{}", w[0], w[1]));
        }
        let (lo, hi) = if p.from < p.to {
            (&p.from, &p.to)
        } else {
            (&p.to, &p.from)
        };
        realized.insert((lo.clone(), hi.clone()));
    }
    for c in grid_cells(side, d) {
        for b in 0..d {
            if c[b] + 1 < side {
                let mut nb = c.clone();
                nb[b] += 1;
                if !realized.contains(&(c.clone(), nb.clone())) {
                    return MinorCheck::fail("adjacency", format!("no path between {c:?} and {nb:?}"));
                }
            }
        }
    }
    MinorCheck::pass()
}
