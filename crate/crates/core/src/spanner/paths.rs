use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::SpannerGraph;

/// Relative width inside which two float path lengths count as tied.
pub(crate) const TIE: f64 = 1e-9;

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Dijkstra from `s`, stopping once `stop` is settled. Returns distances and the settled flags.
fn dijkstra(g: &SpannerGraph, s: usize, stop: Option<usize>) -> (Vec<f64>, Vec<bool>) {
    dijkstra_adj(g.adjacency(), s, stop)
}

pub(crate) fn dijkstra_adj(adj: &[Vec<(usize, f64)>], s: usize, stop: Option<usize>) -> (Vec<f64>, Vec<bool>) {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Item(0.0, s));
    while let Some(Item(d, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if stop == Some(u) {
            break;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Item(nd, v));
            }
        }
    }
    (dist, done)
}

/// Single-source float distances; unreachable vertices get infinity.
pub fn sssp(g: &SpannerGraph, s: usize) -> Vec<f64> {
    dijkstra(g, s, None).0
}

/// A shortest s–t path, lexicographically smallest by vertex id among float-tied candidates.
pub fn shortest_path(g: &SpannerGraph, s: usize, t: usize) -> Option<(f64, Vec<usize>)> {
    let (dt, done) = dijkstra(g, t, Some(s));
    if !done[s] {
        return None;
    }
    let total = dt[s];
    let tol = TIE * total.max(1.0);
    let mut path = vec![s];
    let mut u = s;
    while u != t {
        // Neighbours are sorted by id, so the first hit is the smallest.
        let next = g
            .neighbors(u)
            .iter()
            .find(|&&(v, w)| done[v] && dt[v] < dt[u] && (w + dt[v] - dt[u]).abs() <= tol)
            .map(|&(v, _)| v)?;
        path.push(next);
        u = next;
    }
    Some((total, path))
}

/// Cuts every cycle out of a walk, keeping the first visit of each vertex.
pub(crate) fn remove_loops(walk: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(walk.len());
    let mut pos = std::collections::HashMap::new();
    for &v in walk {
        if let Some(&i) = pos.get(&v) {
            for w in out.drain(i + 1..) {
                pos.remove(&w);
            }
        } else {
            pos.insert(v, out.len());
            out.push(v);
        }
    }
    out
}
