use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::{SpannerError, SpannerGraph};
use crate::fractal::gen_sierpinski_carpet;
use crate::geometry::PointSet;

/// Unit lattice edges between present carpet vertices, plus two edges per box point to the
/// lower-left and upper-right corners of its cell.
pub fn build_carpet_spanner(k: u32) -> Result<SpannerGraph, SpannerError> {
    if k < 1 {
        return Err(SpannerError::NotACarpetSpanner("depth must be at least 1".into()));
    }
    let p = gen_sierpinski_carpet(k, true)?;
    SpannerGraph::new(p.clone(), carpet_edges(&p))
}

fn floor_int(r: &crate::geometry::Rational) -> i64 {
    r.floor().to_integer().to_i64().expect("carpet coordinates are small")
}

fn carpet_edges(p: &PointSet) -> Vec<(usize, usize)> {
    let mut lattice: HashMap<(i64, i64), usize> = HashMap::new();
    let mut boxes = Vec::new();
    for i in 0..p.len() {
        let q = p.point(i);
        let (x, y) = (floor_int(&q.0[0]), floor_int(&q.0[1]));
        if p.label(i) == Some("box") {
            boxes.push((i, x, y));
        } else {
            lattice.insert((x, y), i);
        }
    }
    let mut edges = Vec::new();
    let mut keys: Vec<_> = lattice.keys().copied().collect();
    keys.sort_unstable();
    for (x, y) in keys {
        let u = lattice[&(x, y)];
        for n in [(x + 1, y), (x, y + 1)] {
            if let Some(&v) = lattice.get(&n) {
                edges.push((u, v));
            }
        }
    }
    for (b, x, y) in boxes {
        edges.push((b, lattice[&(x, y)]));
        edges.push((b, lattice[&(x + 1, y + 1)]));
    }
    edges
}

/// Depth k if `g` is exactly the depth-k carpet spanner.
pub fn carpet_depth_of(g: &SpannerGraph) -> Result<u32, SpannerError> {
    let boxes = (0..g.len()).filter(|&i| g.points().label(i) == Some("box")).count();
    let k = (1..=7u32)
        .find(|&k| 8usize.pow(k) == boxes)
        .ok_or_else(|| SpannerError::NotACarpetSpanner(format!("{boxes} box points is not 8^k")))?;
    let want = build_carpet_spanner(k)?;
    if want.points() != g.points() {
        return Err(SpannerError::NotACarpetSpanner("point set differs".into()));
    }
    let norm = |h: &SpannerGraph| {
        let mut e: Vec<(usize, usize)> = h.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        e.sort_unstable();
        e
    };
    if norm(&want) != norm(g) {
        return Err(SpannerError::NotACarpetSpanner("edge set differs".into()));
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_one_shape() {
        let g = build_carpet_spanner(1).unwrap();
        assert_eq!(g.len(), 24);
        // 4×4 lattice has 24 unit edges; 8 boxes add 16.
        assert_eq!(g.edges().len(), 24 + 16);
        for i in 0..g.len() {
            if g.points().label(i) == Some("box") {
                assert_eq!(g.neighbors(i).len(), 2);
            }
        }
        assert!(g.is_connected());
        assert_eq!(carpet_depth_of(&g).unwrap(), 1);
    }

    #[test]
    fn depth_two_skips_hole_interior() {
        let g = build_carpet_spanner(2).unwrap();
        // 10×10 lattice minus the 2×2 interior of the central hole: the 12 unit edges
        // touching a removed vertex disappear.
        let lattice_edges = g
            .edges()
            .iter()
            .filter(|e| e.sq_len == crate::geometry::rational::int(1))
            .count();
        assert_eq!(lattice_edges, 180 - 12);
        assert!(g.is_connected());
    }

    #[test]
    fn foreign_graph_rejected() {
        let g = build_carpet_spanner(1).unwrap();
        let pairs: Vec<(usize, usize)> = g.edges().iter().skip(1).map(|e| (e.u, e.v)).collect();
        let h = SpannerGraph::new(g.points().clone(), pairs).unwrap();
        assert!(carpet_depth_of(&h).is_err());
    }
}
