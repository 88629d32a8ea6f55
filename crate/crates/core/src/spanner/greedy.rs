use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::paths::{dijkstra_adj, TIE};
use super::{SpannerError, SpannerGraph};
use crate::geometry::lattice::{sq, IntLattice};
use crate::geometry::rational::{self, int, Rational};
use crate::geometry::{sq_dist_unchecked, PointSet};

pub const GREEDY_LIMIT: usize = 5000;

/// Classic greedy c-spanner. At c = 1 this is the visibility graph: a pair is joined
/// iff no other point lies strictly between them on the segment.
pub fn build_greedy_spanner(p: &PointSet, c: &Rational) -> Result<SpannerGraph, SpannerError> {
    if *c < int(1) {
        return Err(SpannerError::InvalidStretch);
    }
    if p.len() > GREEDY_LIMIT {
        return Err(SpannerError::TooLarge {
            n: p.len(),
            limit: GREEDY_LIMIT,
        });
    }
    let edges = if *c == int(1) {
        visibility_edges(p)
    } else {
        greedy_edges(p, rational::to_f64(c))
    };
    SpannerGraph::new(p.clone(), edges)
}

fn visibility_edges(p: &PointSet) -> Vec<(usize, usize)> {
    let n = p.len();
    let mut edges = Vec::new();
    if let Some(lat) = IntLattice::build(p.points(), &[]) {
        let mut nearest: HashMap<Vec<i128>, (i128, usize)> = HashMap::new();
        for u in 0..n {
            nearest.clear();
            let a = lat.at(u);
            for v in 0..n {
                if v == u {
                    continue;
                }
                let d: Vec<i128> = lat.at(v).iter().zip(a).map(|(x, y)| x - y).collect();
                let g = d.iter().fold(0i128, |acc, x| acc.gcd(x));
                let dir: Vec<i128> = d.iter().map(|x| x / g).collect();
                let e = nearest.entry(dir).or_insert((g, v));
                if g < e.0 {
                    *e = (g, v);
                }
            }
            edges.extend(nearest.values().filter(|&&(_, v)| u < v).map(|&(_, v)| (u, v)));
        }
    } else {
        let mut nearest: HashMap<Vec<Rational>, (Rational, usize)> = HashMap::new();
        for u in 0..n {
            nearest.clear();
            let a = p.point(u);
            for v in 0..n {
                if v == u {
                    continue;
                }
                let d: Vec<Rational> = p.point(v).0.iter().zip(&a.0).map(|(x, y)| x - y).collect();
                let lead = d.iter().find(|x| !x.is_zero()).expect("points distinct").abs();
                let dir: Vec<Rational> = d.iter().map(|x| x / &lead).collect();
                let e = nearest.entry(dir).or_insert((lead.clone(), v));
                if lead < e.0 {
                    *e = (lead, v);
                }
            }
            edges.extend(nearest.values().filter(|(_, v)| u < *v).map(|(_, v)| (u, *v)));
        }
    }
    edges.sort_unstable();
    edges
}

/// Pairs by nondecreasing distance; graph distances are kept as per-source upper bounds
/// and refreshed by Dijkstra only when the stale bound fails the test.
fn greedy_edges(p: &PointSet, c: f64) -> Vec<(usize, usize)> {
    let n = p.len();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let lengths: Vec<f64>;
    if let Some(lat) = IntLattice::build(p.points(), &[]) {
        pairs.sort_by_cached_key(|&(u, v)| (sq(lat.at(u), lat.at(v)), u, v));
        lengths = pairs
            .iter()
            .map(|&(u, v)| rational::to_f64(&sq_dist_unchecked(p.point(u), p.point(v))).sqrt())
            .collect();
    } else {
        pairs.sort_by_cached_key(|&(u, v)| (sq_dist_unchecked(p.point(u), p.point(v)), u, v));
        lengths = pairs
            .iter()
            .map(|&(u, v)| rational::to_f64(&sq_dist_unchecked(p.point(u), p.point(v))).sqrt())
            .collect();
    }
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut rows: Vec<Option<Vec<f64>>> = vec![None; n];
    let mut edges = Vec::new();
    for (&(u, v), &d) in pairs.iter().zip(&lengths) {
        let limit = c * d * (1.0 + TIE);
        let bound = rows[u].as_ref().map_or(f64::INFINITY, |r| r[v]);
        if bound <= limit {
            continue;
        }
        let fresh = dijkstra_adj(&adj, u, None).0;
        for (x, &dx) in fresh.iter().enumerate() {
            if let Some(r) = rows[x].as_mut() {
                if dx < r[u] {
                    r[u] = dx;
                }
            }
        }
        let now = fresh[v];
        rows[u] = Some(fresh);
        if now <= limit {
            continue;
        }
        adj[u].push((v, d));
        adj[v].push((u, d));
        if let Some(r) = rows[u].as_mut() {
            r[v] = d;
        }
        if let Some(r) = rows[v].as_mut() {
            r[u] = d;
        }
        edges.push((u, v));
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::ratio;

    #[test]
    fn collinear_path_only() {
        let p = PointSet::from_int_coords(2, &[vec![0, 0], vec![1, 0], vec![2, 0]]).unwrap();
        let g = build_greedy_spanner(&p, &int(1)).unwrap();
        let e: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(e, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn square_at_two_has_no_diagonals() {
        let p = PointSet::from_int_coords(2, &[vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]).unwrap();
        let g = build_greedy_spanner(&p, &int(2)).unwrap();
        assert_eq!(g.edges().len(), 4);
        assert!(g.edges().iter().all(|e| e.sq_len == int(1)));
        // At c = 1 the diagonals are visible.
        assert_eq!(build_greedy_spanner(&p, &int(1)).unwrap().edges().len(), 6);
    }

    #[test]
    fn rational_fallback_matches_lattice() {
        // Coordinates too large for the lattice path force the exact fallback.
        let big = 1i64 << 60;
        let p = PointSet::from_int_coords(1, &[vec![0], vec![big / 2], vec![big]]).unwrap();
        let g = build_greedy_spanner(&p, &int(1)).unwrap();
        assert_eq!(g.edges().len(), 2);
    }

    #[test]
    fn rejects_small_c() {
        let p = PointSet::from_int_coords(1, &[vec![0], vec![1]]).unwrap();
        assert_eq!(
            build_greedy_spanner(&p, &ratio(1, 2)).unwrap_err(),
            SpannerError::InvalidStretch
        );
    }
}
