use std::collections::BTreeSet;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::carpet::carpet_depth_of;
use super::{SpannerError, SpannerGraph};
use crate::geometry::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    /// Parent link per node; exactly one root.
    pub parent: Vec<Option<usize>>,
    /// Sorted vertex ids per node.
    pub bags: Vec<Vec<usize>>,
    pub width: usize,
}

impl TreeDecomposition {
    pub fn trivial(n: usize) -> Self {
        TreeDecomposition {
            parent: vec![None],
            bags: vec![(0..n).collect()],
            width: n.saturating_sub(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCheck {
    pub ok: bool,
    /// First violated condition: tree, vertex coverage, edge coverage, connectivity or width.
    pub failure: Option<String>,
    pub detail: Option<String>,
}

fn fail(kind: &str, detail: String) -> TreeCheck {
    TreeCheck {
        ok: false,
        failure: Some(kind.to_string()),
        detail: Some(detail),
    }
}

pub fn validate_tree_decomposition(g: &SpannerGraph, t: &TreeDecomposition) -> TreeCheck {
    let m = t.bags.len();
    if t.parent.len() != m || m == 0 {
        return fail("tree", format!("{} parent links for {m} bags", t.parent.len()));
    }
    let roots = t.parent.iter().filter(|p| p.is_none()).count();
    if roots != 1 {
        return fail("tree", format!("{roots} roots"));
    }
    for s in 0..m {
        let mut cur = s;
        let mut steps = 0;
        while let Some(p) = t.parent[cur] {
            if p >= m {
                return fail("tree", format!("node {cur} has parent {p} out of range"));
            }
            cur = p;
            steps += 1;
            if steps > m {
                return fail("tree", format!("cycle through node {s}"));
            }
        }
    }
    let n = g.len();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in t.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return fail("vertex coverage", format!("bag {i} names vertex {v} outside G"));
            }
            holders[v].push(i);
        }
    }
    if let Some(v) = holders.iter().position(|h| h.is_empty()) {
        return fail("vertex coverage", format!("vertex {v} is in no bag"));
    }
    for e in g.edges() {
        let a: BTreeSet<usize> = holders[e.u].iter().copied().collect();
        if !holders[e.v].iter().any(|i| a.contains(i)) {
            return fail("edge coverage", format!("edge {}–{} is in no bag", e.u, e.v));
        }
    }
    let sets: Vec<BTreeSet<usize>> = t.bags.iter().map(|b| b.iter().copied().collect()).collect();
    for (v, h) in holders.iter().enumerate() {
        let tops = h
            .iter()
            .filter(|&&i| t.parent[i].is_none_or(|p| !sets[p].contains(&v)))
            .count();
        if tops != 1 {
            return fail("connectivity", format!("bags holding vertex {v} form {tops} subtrees"));
        }
    }
    let width = t.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1);
    if width != t.width {
        return fail(
            "width",
            format!("stated width {} but largest bag gives {width}", t.width),
        );
    }
    TreeCheck {
        ok: true,
        failure: None,
        detail: None,
    }
}

/// Per axis, the hyperplane through vertices of `comp` that no edge inside `comp` crosses,
/// lies in the middle third of the extent, and holds the fewest vertices.
fn separator(g: &SpannerGraph, comp: &[usize], inside: &[bool]) -> Vec<usize> {
    let d = g.points().dim();
    let coord = |v: usize, b: usize| -> &Rational { &g.points().point(v).0[b] };
    let mut sep = BTreeSet::new();
    for b in 0..d {
        let values: BTreeSet<&Rational> = comp.iter().map(|&v| coord(v, b)).collect();
        let lo = *values.iter().next().expect("non-empty component");
        let hi = *values.iter().next_back().expect("non-empty component");
        let span = hi - lo;
        let third = &span / int(3);
        let (a, z) = (lo + &third, hi - &third);
        let mid = (lo + hi) / int(2);
        let mut best: Option<(usize, Rational, &Rational)> = None;
        for &x in values.iter().filter(|&&x| x >= &a && x <= &z) {
            let crossed = comp.iter().any(|&u| {
                g.neighbors(u)
                    .iter()
                    .any(|&(w, _)| inside[w] && coord(u, b) < x && coord(w, b) > x)
            });
            if crossed {
                continue;
            }
            let count = comp.iter().filter(|&&v| coord(v, b) == x).count();
            let off = (x - &mid).abs();
            let better = match &best {
                None => true,
                Some((c, o, _)) => count < *c || (count == *c && off < *o),
            };
            if better {
                best = Some((count, off, x));
            }
        }
        if let Some((_, _, x)) = best {
            sep.extend(comp.iter().copied().filter(|&v| coord(v, b) == x));
        }
    }
    if sep.is_empty() {
        // No clean cut: fall back to the vertices on the median coordinate of axis 0.
        let mut xs: Vec<&Rational> = comp.iter().map(|&v| coord(v, 0)).collect();
        xs.sort();
        let m = xs[xs.len() / 2].clone();
        sep.extend(comp.iter().copied().filter(|&v| *coord(v, 0) == m));
    }
    sep.into_iter().collect()
}

/// Recursive separator decomposition: a node for component C has bag N(C)∖C ∪ S with S an
/// axis-parallel cut of C; children are the components of C∖S. Components of at most
/// `leaf_size` vertices become leaves with bag N(C)∖C ∪ C.
pub fn separator_tree_decomposition(g: &SpannerGraph, leaf_size: usize) -> TreeDecomposition {
    let n = g.len();
    let mut parent = Vec::new();
    let mut bags = Vec::new();
    let mut stack: Vec<(Vec<usize>, Option<usize>)> = g
        .components_within(&vec![true; n])
        .into_iter()
        .map(|c| (c, None))
        .collect();
    // Several components share one empty root.
    let shared_root = if stack.len() > 1 {
        parent.push(None);
        bags.push(Vec::new());
        for item in stack.iter_mut() {
            item.1 = Some(0);
        }
        true
    } else {
        false
    };
    let mut inside = vec![false; n];
    while let Some((comp, par)) = stack.pop() {
        for &v in &comp {
            inside[v] = true;
        }
        let mut boundary = BTreeSet::new();
        for &v in &comp {
            for &(w, _) in g.neighbors(v) {
                if !inside[w] {
                    boundary.insert(w);
                }
            }
        }
        let id = bags.len();
        parent.push(par);
        if comp.len() <= leaf_size.max(1) {
            boundary.extend(comp.iter().copied());
            bags.push(boundary.into_iter().collect());
        } else {
            let sep = separator(g, &comp, &inside);
            boundary.extend(sep.iter().copied());
            bags.push(boundary.into_iter().collect());
            let mut keep = inside.clone();
            for &v in &sep {
                keep[v] = false;
            }
            for child in g.components_within(&keep) {
                stack.push((child, Some(id)));
            }
        }
        for &v in &comp {
            inside[v] = false;
        }
    }
    if shared_root {
        bags[0] = Vec::new();
    }
    let width = bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1);
    TreeDecomposition { parent, bags, width }
}

/// Four-way recursion on the carpet spanner: the root cut is one middle row and one middle
/// column, and each component is cut the same way until it is small.
pub fn build_carpet_tree_decomposition(g: &SpannerGraph) -> Result<TreeDecomposition, SpannerError> {
    carpet_depth_of(g)?;
    let t = separator_tree_decomposition(g, 6);
    let check = validate_tree_decomposition(g, &t);
    if !check.ok {
        return Err(SpannerError::Certificate(format!(
            "{}: {}",
            check.failure.unwrap_or_default(),
            check.detail.unwrap_or_default()
        )));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PointSet;
    use crate::spanner::build_carpet_spanner;

    fn path_graph(n: i64) -> SpannerGraph {
        let pts: Vec<Vec<i64>> = (0..n).map(|x| vec![x]).collect();
        let p = PointSet::from_int_coords(1, &pts).unwrap();
        SpannerGraph::new(p, (0..n as usize - 1).map(|i| (i, i + 1)).collect()).unwrap()
    }

    #[test]
    fn trivial_is_valid() {
        let g = path_graph(5);
        let t = TreeDecomposition::trivial(5);
        assert!(validate_tree_decomposition(&g, &t).ok);
        assert_eq!(t.width, 4);
    }

    #[test]
    fn sliding_pairs_on_a_path() {
        let g = path_graph(5);
        let t = TreeDecomposition {
            parent: vec![None, Some(0), Some(1), Some(2)],
            bags: vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4]],
            width: 1,
        };
        assert!(validate_tree_decomposition(&g, &t).ok);
        let mut broken = t.clone();
        broken.bags[1] = vec![2];
        // Edge 1–2 loses its only bag.
        assert_eq!(
            validate_tree_decomposition(&g, &broken).failure.as_deref(),
            Some("edge coverage")
        );
        let mut gap = t.clone();
        gap.bags[1] = vec![2];
        gap.bags[2] = vec![1, 2, 3];
        assert_eq!(
            validate_tree_decomposition(&g, &gap).failure.as_deref(),
            Some("connectivity")
        );
    }

    #[test]
    fn separator_decomposition_on_paths() {
        let g = path_graph(40);
        let t = separator_tree_decomposition(&g, 3);
        assert!(validate_tree_decomposition(&g, &t).ok);
        assert!(t.width <= 4, "width {}", t.width);
    }

    #[test]
    fn carpet_small_depths() {
        for k in 1..=2 {
            let g = build_carpet_spanner(k).unwrap();
            let t = build_carpet_tree_decomposition(&g).unwrap();
            assert!(t.width < 8 * 2usize.pow(k), "k={k} width {}", t.width);
        }
    }

    #[test]
    fn rejects_non_carpet() {
        let g = path_graph(4);
        assert!(build_carpet_tree_decomposition(&g).is_err());
    }
}
