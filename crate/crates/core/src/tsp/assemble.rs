use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::gadgets::{GadgetKind, GadgetPlacement, Orientation, AB_CORNERS, A_TABLE, B_TABLE, H_PATH_LENGTH, H_TABLE};
use super::held_karp::path_length;
use super::{checks, ExactCoverInstance, TspError, A, CELL};
use crate::fractal::{gen_f_roles, CrossbarParams, Role};
use crate::geometry::rational::ratio;
use crate::geometry::{Point, PointSet};

// Everything below is laid out in half units.
const S: i64 = 2 * CELL;
/// Left edge of the A/B box inside an X cell.
const GADGET_X: i64 = 43;
/// Bottom of H above the row baseline.
const H_Y: i64 = 48;
const AB_W: i64 = 16;

/// L = L₀ + ΣLᵢ + 2Na.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaRecord {
    pub a: i64,
    pub m: usize,
    /// Number of H components, m(m−1).
    #[serde(rename = "N")]
    pub n: usize,
    /// Remainder path length with the N hook edges taken out, measured on this assembly.
    #[serde(rename = "L0")]
    pub l0: f64,
    pub l0_expression: String,
    /// The closed form at this a and m.
    pub l0_nominal: f64,
    #[serde(rename = "Li")]
    pub li: Vec<f64>,
    pub li_nominal: f64,
    pub total: f64,
    pub recalibrated: bool,
    pub note: String,
}

impl AlphaRecord {
    pub fn identity_total(&self) -> f64 {
        self.l0 + self.li.iter().sum::<f64>() + 2.0 * self.n as f64 * self.a as f64
    }
}

pub const L0_EXPRESSION: &str = "m^2(3a+21) + m(4a+13+sqrt2) + 2m - 2a + 11";

pub fn l0_closed_form(m: usize, a: i64) -> f64 {
    let (m, a) = (m as f64, a as f64);
    m * m * (3.0 * a + 21.0) + m * (4.0 * a + 13.0 + 2f64.sqrt()) + 2.0 * m - 2.0 * a + 11.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TspReductionOutput {
    pub l: u32,
    pub v: u32,
    pub k: u32,
    pub xc: ExactCoverInstance,
    pub points: PointSet,
    pub coords_f64: Vec<[f64; 2]>,
    pub alpha: AlphaRecord,
    pub h_components: Vec<GadgetPlacement>,
    pub inventory: Vec<GadgetPlacement>,
}

impl TspReductionOutput {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reduction output serializes")
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Piece {
    Joint(usize),
    /// (bottom, top) per column, left to right.
    Chain(Vec<(usize, usize)>),
    /// Traversal order when the row runs left to right.
    Gadget(Vec<usize>),
}

/// Hook edges of one X-cell gadget, left point first.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Hooks {
    pub up: (usize, usize),
    pub down: (usize, usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub points: Vec<Point>,
    pub labels: Vec<String>,
    pub rows: Vec<Vec<Piece>>,
    /// links[r] joins the end of row r to the start of row r+1, in travel order.
    pub links: Vec<Vec<usize>>,
    /// Keyed by (row, column) of the X cell.
    pub hooks: HashMap<(usize, usize), Hooks>,
    /// Ids of the H above row i in column j, in table order.
    pub h: BTreeMap<(usize, usize), Vec<usize>>,
    pub placements: Vec<GadgetPlacement>,
    pub h_placements: Vec<GadgetPlacement>,
    pub k: u32,
}

impl Layout {
    pub fn point_set(&self) -> PointSet {
        PointSet::new(2, self.points.clone())
            .and_then(|p| p.with_labels(self.labels.clone()))
            .expect("layout points are distinct")
    }

    pub fn is_h(&self) -> Vec<bool> {
        let mut out = vec![false; self.points.len()];
        for ids in self.h.values() {
            for &i in ids {
                out[i] = true;
            }
        }
        out
    }

    /// The path through every non-H point. `top_first[r]` picks the zigzag phase of row r.
    pub fn base_path(&self, top_first: &[bool]) -> Vec<usize> {
        let mut path = Vec::new();
        for (r, pieces) in self.rows.iter().enumerate() {
            let forward = r % 2 == 0;
            let mut top = top_first.get(r).copied().unwrap_or(false);
            let ordered: Vec<&Piece> = if forward {
                pieces.iter().collect()
            } else {
                pieces.iter().rev().collect()
            };
            for piece in ordered {
                match piece {
                    Piece::Joint(id) => path.push(*id),
                    Piece::Gadget(seq) => {
                        if forward {
                            path.extend(seq.iter().copied());
                        } else {
                            path.extend(seq.iter().rev().copied());
                        }
                    }
                    Piece::Chain(cols) => {
                        let mut run = |&(lo, hi): &(usize, usize)| {
                            if top {
                                path.extend([hi, lo]);
                            } else {
                                path.extend([lo, hi]);
                            }
                            top = !top;
                        };
                        if forward {
                            cols.iter().for_each(&mut run);
                        } else {
                            cols.iter().rev().for_each(&mut run);
                        }
                    }
                }
            }
            if let Some(link) = self.links.get(r) {
                path.extend(link.iter().copied());
            }
        }
        path
    }
}

struct Builder {
    points: Vec<Point>,
    labels: Vec<String>,
    seen: HashMap<(i64, i64), usize>,
    placements: Vec<GadgetPlacement>,
}

impl Builder {
    fn add(&mut self, x: i64, y: i64, label: &str) -> usize {
        let id = self.points.len();
        if let Some(prev) = self.seen.insert((x, y), id) {
            panic!("half-unit point ({x},{y}) placed twice (first as {prev})");
        }
        self.points.push(half(x, y));
        self.labels.push(label.to_string());
        id
    }

    fn place(&mut self, kind: GadgetKind, orientation: Orientation, anchor: Point, ids: &[usize]) -> GadgetPlacement {
        let g = GadgetPlacement {
            kind,
            anchor,
            orientation,
            points: PointSet::new(2, ids.iter().map(|&i| self.points[i].clone()).collect()).expect("distinct"),
        };
        self.placements.push(g.clone());
        g
    }

    fn joint(&mut self, x: i64, y: i64) -> usize {
        let id = self.add(x, y, "joint");
        self.place(GadgetKind::OneChain, Orientation::PlusX, half(x, y), &[id]);
        id
    }

    /// Two-chain columns strictly between joints at a0 and b0 on baseline y0.
    fn chain(&mut self, a0: i64, b0: i64, y0: i64) -> Vec<(usize, usize)> {
        let mut cols = Vec::new();
        let mut x = a0 + 2;
        while x <= b0 - 2 {
            cols.push((self.add(x, y0 + 3, "chain"), self.add(x, y0 + 5, "chain")));
            x += 4;
        }
        if let Some(&(first, _)) = cols.first() {
            let ids: Vec<usize> = cols.iter().flat_map(|&(lo, hi)| [lo, hi]).collect();
            let anchor = self.points[first].clone();
            self.place(GadgetKind::TwoChain, Orientation::PlusX, anchor, &ids);
        }
        cols
    }

    /// Unit-step vertical run from y_from to y_to inclusive.
    fn vertical(&mut self, x: i64, y_from: i64, y_to: i64, label: &str) -> Vec<usize> {
        let step = if y_to >= y_from { 2 } else { -2 };
        let mut ids = Vec::new();
        let mut y = y_from;
        loop {
            ids.push(self.add(x, y, label));
            if y == y_to {
                break;
            }
            y += step;
        }
        let orientation = if step > 0 {
            Orientation::PlusY
        } else {
            Orientation::MinusY
        };
        let anchor = self.points[ids[0]].clone();
        self.place(GadgetKind::VerticalChain, orientation, anchor, &ids);
        ids
    }
}

fn half(x: i64, y: i64) -> Point {
    Point::new(vec![ratio(x, 2), ratio(y, 2)])
}

/// Smallest k ≥ 1 with (l−v)^k ≥ m.
pub(crate) fn depth_for(m: usize, l: u32, v: u32) -> u32 {
    let base = l.saturating_sub(v).max(2) as usize;
    let mut k = 1;
    while base.pow(k) < m {
        k += 1;
    }
    k
}

/// Sorted core coordinates of f(k) in the plane; f(k) is the union of full rows and columns there.
pub(crate) fn core_coords(params: &CrossbarParams) -> Result<Vec<i64>, TspError> {
    let mut w: Vec<i64> = gen_f_roles(params)?
        .into_iter()
        .filter(|(_, r)| *r == Role::Core)
        .map(|(c, _)| c[0])
        .collect();
    w.sort_unstable();
    w.dedup();
    Ok(w)
}

pub(crate) fn build_layout(xc: &ExactCoverInstance, l: u32, v: u32) -> Result<Layout, TspError> {
    let m = xc.m;
    let k = depth_for(m, l, v);
    let params = CrossbarParams::new(l, v, 2, k)?;
    let side = params.side();
    let w = core_coords(&params)?;
    let rcount = w.len();
    let is_b = |i: usize, j: usize| i < m && j < m && xc.contains(i, j);

    let mut b = Builder {
        points: Vec::new(),
        labels: Vec::new(),
        seen: HashMap::new(),
        placements: Vec::new(),
    };
    let mut rows = Vec::with_capacity(rcount);
    let mut hooks = HashMap::new();
    let mut h = BTreeMap::new();
    let mut h_placements = Vec::new();
    let right_x = S * side - 1;

    for (i, &wy) in w.iter().enumerate() {
        let y0 = S * wy;
        let foot = (i > 0 && wy - w[i - 1] > 1).then(|| S * (w[i - 1] + 1));
        let mut pieces = Vec::new();
        let mut left = 1;
        pieces.push(Piece::Joint(b.joint(left, y0 + 4)));
        for (j, &wx) in w.iter().enumerate() {
            let gx = S * wx + GADGET_X;
            let cols = b.chain(left, gx - 4, y0);
            if !cols.is_empty() {
                pieces.push(Piece::Chain(cols));
            }
            pieces.push(Piece::Joint(b.joint(gx - 4, y0 + 4)));

            let (kind, table, label): (_, &[(i64, i64)], _) = if is_b(i, j) {
                (GadgetKind::ConfigB, &B_TABLE, "B")
            } else {
                (GadgetKind::ConfigA, &A_TABLE, "A")
            };
            let ids: Vec<usize> = table.iter().map(|&(x, y)| b.add(gx + x, y0 + y, label)).collect();
            b.place(kind, Orientation::PlusX, half(gx, y0), &ids);
            let [tl, tr, br, bl] = AB_CORNERS.map(|c| ids[c]);
            let mut seq = vec![tl, tr, br];
            let down = match foot {
                Some(yf) => {
                    let right = b.vertical(gx + AB_W, y0 - 2, yf, "ladder");
                    let left_col = b.vertical(gx, yf, y0 - 2, "ladder");
                    let d = (left_col[0], *right.last().expect("non-empty"));
                    seq.extend(right);
                    seq.extend(left_col);
                    d
                }
                None => (bl, br),
            };
            seq.push(bl);
            seq.extend_from_slice(&ids[4..]);
            pieces.push(Piece::Gadget(seq));
            hooks.insert((i, j), Hooks { up: (tl, tr), down });

            if i + 1 < m && j < m {
                let hy = y0 + H_Y;
                let hid: Vec<usize> = H_TABLE.iter().map(|&(x, y)| b.add(gx + x, hy + y, "H")).collect();
                let g = GadgetPlacement {
                    kind: GadgetKind::ConfigH,
                    anchor: half(gx, hy),
                    orientation: Orientation::PlusX,
                    points: PointSet::new(2, hid.iter().map(|&p| b.points[p].clone()).collect())?,
                };
                h_placements.push(g);
                h.insert((i, j), hid);
            }

            left = gx + AB_W + 4;
            pieces.push(Piece::Joint(b.joint(left, y0 + 4)));
        }
        let cols = b.chain(left, right_x, y0);
        if !cols.is_empty() {
            pieces.push(Piece::Chain(cols));
        }
        pieces.push(Piece::Joint(b.joint(right_x, y0 + 4)));
        rows.push(pieces);
    }

    // Snake links between consecutive rows, on the side where row r ends.
    let mut links = Vec::new();
    for r in 0..rcount.saturating_sub(1) {
        let x = if r % 2 == 0 { right_x } else { 1 };
        let from = S * w[r] + 6;
        let to = S * w[r + 1] + 2;
        links.push(b.vertical(x, from, to, "link"));
    }
    debug_assert_eq!(h_placements.len(), m * (m - 1));

    Ok(Layout {
        points: b.points,
        labels: b.labels,
        rows,
        links,
        hooks,
        h,
        placements: b.placements,
        h_placements,
        k,
    })
}

/// One inventory entry per nonempty cell of f(k), scaled to side CELL.
fn cell_placements(layout: &Layout, xc: &ExactCoverInstance, w: &[i64]) -> Result<Vec<GadgetPlacement>, TspError> {
    let cell = crate::geometry::rational::int(CELL);
    let mut by_cell: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (id, p) in layout.points.iter().enumerate() {
        let cx = (&p.0[0] / &cell).floor().to_integer();
        let cy = (&p.0[1] / &cell).floor().to_integer();
        let key = (
            i64::try_from(cx).map_err(|_| TspError::Invalid("cell index overflow".into()))?,
            i64::try_from(cy).map_err(|_| TspError::Invalid("cell index overflow".into()))?,
        );
        by_cell.entry(key).or_default().push(id);
    }
    let row_of = |c: i64| w.binary_search(&c).ok();
    let mut out = Vec::new();
    for ((cx, cy), ids) in by_cell {
        let kind = match (row_of(cx), row_of(cy)) {
            (Some(_), Some(_)) => GadgetKind::CellX,
            (None, Some(_)) => GadgetKind::CellY,
            (Some(j), None) => {
                // The gadget whose ladder runs through this cell sits in the next X row up.
                let above = w.partition_point(|&y| y < cy);
                if above < w.len() && above < xc.m && j < xc.m && xc.contains(above, j) {
                    GadgetKind::CellZprime
                } else {
                    GadgetKind::CellZ
                }
            }
            (None, None) => {
                return Err(TspError::Structure {
                    check: "cells".into(),
                    detail: format!("points in removed cell ({cx},{cy})"),
                })
            }
        };
        out.push(GadgetPlacement {
            kind,
            anchor: Point::from_ints(&[cx * CELL, cy * CELL]),
            orientation: Orientation::PlusX,
            points: PointSet::new(2, ids.iter().map(|&i| layout.points[i].clone()).collect())?,
        });
    }
    Ok(out)
}

/// Alpha pieces for a layout; L₀ is the base path with the N hook edges (8 each) removed.
pub(crate) fn alpha_for(layout: &Layout, m: usize) -> AlphaRecord {
    let n = layout.h.len();
    let ps = layout.point_set();
    let base = path_length(&ps, &layout.base_path(&[]));
    let l0 = base - 8.0 * n as f64;
    let li = vec![H_PATH_LENGTH; n];
    let total = l0 + li.iter().sum::<f64>() + 2.0 * n as f64 * A as f64;
    AlphaRecord {
        a: A,
        m,
        n,
        l0,
        l0_expression: L0_EXPRESSION.to_string(),
        l0_nominal: l0_closed_form(m, A),
        li,
        li_nominal: 32.0,
        total,
        recalibrated: true,
        note: "L0 measured on this assembly; Li is the Held-Karp optimum of the H table".into(),
    }
}

/// Builds the point set, the target length and the gadget inventory, then runs the structural checks.
pub fn reduce_exact_cover_to_tsp(xc: &ExactCoverInstance, l: u32, v: u32) -> Result<TspReductionOutput, TspError> {
    let layout = build_layout(xc, l, v)?;
    let params = CrossbarParams::new(l, v, 2, layout.k)?;
    let w = core_coords(&params)?;
    let mut inventory = layout.placements.clone();
    inventory.extend(layout.h_placements.iter().cloned());
    inventory.extend(cell_placements(&layout, xc, &w)?);
    let points = layout.point_set();
    let out = TspReductionOutput {
        l,
        v,
        k: layout.k,
        xc: xc.clone(),
        coords_f64: layout
            .points
            .iter()
            .map(|p| {
                let f = p.to_f64();
                [f[0], f[1]]
            })
            .collect(),
        points,
        alpha: alpha_for(&layout, xc.m),
        h_components: layout.h_placements.clone(),
        inventory,
    };
    let report = checks::check_with_layout(&out, &layout)?;
    if let Some(f) = report.failures.first() {
        return Err(TspError::Structure {
            check: f.0.clone(),
            detail: f.1.clone(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist_f64;
    use crate::tsp::check_placement;

    fn xc(m: usize, sets: Vec<Vec<usize>>) -> ExactCoverInstance {
        ExactCoverInstance::new(m, sets).unwrap()
    }

    #[test]
    fn core_coords_make_the_crossbar() {
        let p = CrossbarParams::new(3, 1, 2, 2).unwrap();
        let w = core_coords(&p).unwrap();
        assert_eq!(w, vec![0, 2, 6, 8]);
        let f = crate::fractal::gen_f(&p).unwrap().to_set();
        let n = p.side();
        for x in 0..n {
            for y in 0..n {
                let on = w.contains(&x) || w.contains(&y);
                assert_eq!(f.contains(&Point::from_ints(&[x, y])), on, "({x},{y})");
            }
        }
    }

    #[test]
    fn depth() {
        assert_eq!(depth_for(1, 3, 1), 1);
        assert_eq!(depth_for(2, 3, 1), 1);
        assert_eq!(depth_for(3, 3, 1), 2);
        assert_eq!(depth_for(5, 5, 1), 2);
    }

    #[test]
    fn base_path_is_short_stepped_and_mode_neutral() {
        let layout = build_layout(&xc(3, vec![vec![0], vec![1, 2], vec![0, 1]]), 3, 1).unwrap();
        let ps = layout.point_set();
        let is_h = layout.is_h();
        let p0 = layout.base_path(&[]);
        assert_eq!(p0.len(), is_h.iter().filter(|&&h| !h).count());
        let mut seen = vec![false; ps.len()];
        for &i in &p0 {
            assert!(!is_h[i] && !seen[i]);
            seen[i] = true;
        }
        for e in p0.windows(2) {
            assert!(dist_f64(ps.point(e[0]), ps.point(e[1])) <= 8.0 + 1e-12);
        }
        let base = path_length(&ps, &p0);
        for modes in [[true, false, true, false], [true, true, true, true]] {
            assert!((path_length(&ps, &layout.base_path(&modes)) - base).abs() < 1e-9);
        }
    }

    #[test]
    fn hooks_are_eight_long_and_twenty_from_h() {
        let layout = build_layout(&xc(3, vec![vec![0, 1], vec![2], vec![1]]), 3, 1).unwrap();
        let ps = layout.point_set();
        for (&(i, j), hid) in &layout.h {
            let up = layout.hooks[&(i, j)].up;
            let down = layout.hooks[&(i + 1, j)].down;
            for (p, q) in [up, down] {
                assert!((dist_f64(ps.point(p), ps.point(q)) - 8.0).abs() < 1e-12);
            }
            // Up hook to the bottom corners, down hook to the top corners.
            for (p, c) in [(up.0, hid[0]), (up.1, hid[1]), (down.0, hid[2]), (down.1, hid[3])] {
                assert!((dist_f64(ps.point(p), ps.point(c)) - 20.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn placements_pass_their_checks() {
        let x = xc(2, vec![vec![0], vec![1]]);
        let out = reduce_exact_cover_to_tsp(&x, 3, 1).unwrap();
        assert_eq!(out.h_components.len(), 2);
        assert_eq!(out.alpha.n, 2);
        for g in &out.inventory {
            check_placement(g).unwrap_or_else(|e| panic!("{}: {e}", g.kind.name()));
        }
        let kinds: std::collections::BTreeSet<&str> = out.inventory.iter().map(|g| g.kind.name()).collect();
        for k in [
            "cell-X",
            "cell-Y",
            "config-A",
            "config-B",
            "config-H",
            "two-chain",
            "one-chain",
        ] {
            assert!(kinds.contains(k), "{k}");
        }
    }

    #[test]
    fn zprime_cells_sit_under_b() {
        let x = xc(3, vec![vec![0], vec![1], vec![2]]);
        let out = reduce_exact_cover_to_tsp(&x, 3, 1).unwrap();
        let kinds: Vec<GadgetKind> = out.inventory.iter().map(|g| g.kind).collect();
        assert!(kinds.contains(&GadgetKind::CellZprime));
        assert!(kinds.contains(&GadgetKind::CellZ));
        assert!(kinds.contains(&GadgetKind::VerticalChain));
    }

    #[test]
    fn alpha_identity() {
        for m in 1..=3 {
            let x = xc(m, vec![(0..m).collect()]);
            let out = reduce_exact_cover_to_tsp(&x, 3, 1).unwrap();
            let a = &out.alpha;
            assert_eq!(a.n, m * (m - 1));
            assert!((a.identity_total() - a.total).abs() < 1e-9);
            assert!(a.l0 > 0.0);
        }
    }

    #[test]
    fn deterministic_json() {
        let x = xc(2, vec![vec![0, 1]]);
        let a = reduce_exact_cover_to_tsp(&x, 3, 1).unwrap().to_json();
        let b = reduce_exact_cover_to_tsp(&x, 3, 1).unwrap().to_json();
        assert_eq!(a, b);
        let back: TspReductionOutput = serde_json::from_str(&a).unwrap();
        assert_eq!(back.to_json(), a);
    }
}
