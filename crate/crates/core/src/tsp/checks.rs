use serde::{Deserialize, Serialize};

use super::assemble::{alpha_for, build_layout, Layout, TspReductionOutput};
use super::gadgets::check_placement;
use super::{TspError, A};
use crate::geometry::lattice::{sq, Buckets, IntLattice};
use crate::geometry::rational::{int, to_f64, Rational};
use crate::geometry::{sq_dist_unchecked, PointSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    #[serde(with = "crate::geometry::rational::pair")]
    pub b: Rational,
    /// Sorted ids, components ordered by smallest id.
    pub components: Vec<Vec<usize>>,
    pub sizes: Vec<usize>,
    /// Bounding-box extent (width, height, ...) per component.
    pub extents: Vec<Vec<f64>>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let n = self.0[c];
            self.0[c] = r;
            c = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Single-linkage classes: points closer than `b` (strictly) are joined.
pub fn detect_components(p: &PointSet, b: &Rational) -> Result<ComponentReport, TspError> {
    if *b <= int(0) {
        return Err(TspError::Invalid("linkage distance must be positive".into()));
    }
    let n = p.len();
    let b_sq = b * b;
    let mut dsu = Dsu((0..n).collect());
    match IntLattice::build(p.points(), &[b]) {
        Some(lat) => {
            let thr = lat.strict_threshold(&b_sq).expect("threshold fits");
            let mut buckets = Buckets::new(lat.cell_for(&b_sq));
            for i in 0..n {
                buckets.insert(lat.at(i), i);
            }
            for i in 0..n {
                let mut near = Vec::new();
                buckets.for_near(lat.at(i), |j| {
                    if j > i && sq(lat.at(i), lat.at(j)) < thr {
                        near.push(j);
                    }
                    true
                });
                for j in near {
                    dsu.union(i, j);
                }
            }
        }
        None => {
            for i in 0..n {
                for j in i + 1..n {
                    if sq_dist_unchecked(p.point(i), p.point(j)) < b_sq {
                        dsu.union(i, j);
                    }
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        groups.entry(dsu.find(i)).or_default().push(i);
    }
    let components: Vec<Vec<usize>> = groups.into_values().collect();
    let extents = components
        .iter()
        .map(|c| {
            let sub = p.subset(c);
            let (lo, hi) = sub.bbox();
            lo.iter().zip(&hi).map(|(l, h)| to_f64(&(h - l))).collect()
        })
        .collect();
    Ok(ComponentReport {
        b: b.clone(),
        sizes: components.iter().map(Vec::len).collect(),
        components,
        extents,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub n_points: usize,
    pub n_h: usize,
    pub n_components: usize,
    /// Smallest distance between two H components, if there are two.
    pub min_h_gap: Option<f64>,
    pub base_path_len: usize,
    pub max_base_edge: f64,
    pub alpha_total: f64,
    /// (check, detail) for every failed check; empty when all pass.
    pub failures: Vec<(String, String)>,
}

impl StructureReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-assembles from the stored instance and checks isolation of H, the base path, placements
/// and the alpha identity.
pub fn check_structure(out: &TspReductionOutput) -> Result<StructureReport, TspError> {
    let layout = build_layout(&out.xc, out.l, out.v)?;
    check_with_layout(out, &layout)
}

pub(crate) fn check_with_layout(out: &TspReductionOutput, layout: &Layout) -> Result<StructureReport, TspError> {
    let mut failures: Vec<(String, String)> = Vec::new();
    let mut fail = |c: &str, d: String| failures.push((c.to_string(), d));
    if out.points.points() != layout.points.as_slice() {
        fail("layout", "points differ from a fresh assembly".into());
    }
    let ps = layout.point_set();
    let n = ps.len();
    let m = out.xc.m;

    // (1) each H is its own component at b = a; everything else is one more.
    let comps = detect_components(&ps, &int(A))?;
    let is_h = layout.is_h();
    let mut comp_of = vec![0usize; n];
    for (c, ids) in comps.components.iter().enumerate() {
        for &i in ids {
            comp_of[i] = c;
        }
    }
    for (key, hid) in &layout.h {
        let c = comp_of[hid[0]];
        let mut mine = hid.clone();
        mine.sort_unstable();
        if comps.components[c] != mine {
            fail("h-isolation", format!("H at {key:?} is not a component of its own"));
        }
    }
    let rest: Vec<usize> = (0..n).filter(|&i| !is_h[i]).collect();
    if let Some(&r0) = rest.first() {
        if comps.components[comp_of[r0]].len() != rest.len() {
            fail("remainder", "non-H points split into several components".into());
        }
    }
    if comps.components.len() != layout.h.len() + 1 {
        fail(
            "components",
            format!("{} components, want {}", comps.components.len(), layout.h.len() + 1),
        );
    }

    // (2) H components are at least 2a apart.
    let mut min_h: Option<Rational> = None;
    let hs: Vec<&Vec<usize>> = layout.h.values().collect();
    for x in 0..hs.len() {
        for y in x + 1..hs.len() {
            for &p in hs[x] {
                for &q in hs[y] {
                    let d = sq_dist_unchecked(ps.point(p), ps.point(q));
                    if min_h.as_ref().is_none_or(|cur| d < *cur) {
                        min_h = Some(d);
                    }
                }
            }
        }
    }
    if let Some(d) = &min_h {
        if *d < int(4 * A * A) {
            fail("h-gap", format!("two H components at squared distance {d}"));
        }
    }

    // (3) the base path covers the remainder once with edges of length ≤ 8.
    let path = layout.base_path(&[]);
    let mut seen = vec![false; n];
    let mut max_edge = int(0);
    for &i in &path {
        if is_h[i] || seen[i] {
            fail("base-path", format!("point {i} repeated or inside H"));
            break;
        }
        seen[i] = true;
    }
    if path.len() != rest.len() {
        fail("base-path", format!("covers {} of {} points", path.len(), rest.len()));
    }
    for e in path.windows(2) {
        let d = sq_dist_unchecked(ps.point(e[0]), ps.point(e[1]));
        if d > max_edge {
            max_edge = d;
        }
    }
    if max_edge > int(64) {
        fail("base-path", format!("edge with squared length {max_edge}"));
    }

    // (4) alpha.
    let fresh = alpha_for(layout, m);
    let a = &out.alpha;
    if a.n != m * m.saturating_sub(1) || a.n != layout.h.len() {
        fail(
            "alpha",
            format!("N = {}, want m(m-1) = {}", a.n, m * m.saturating_sub(1)),
        );
    }
    if (a.identity_total() - a.total).abs() > 1e-9 * a.total.max(1.0)
        || (fresh.total - a.total).abs() > 1e-9 * a.total.max(1.0)
    {
        fail("alpha", format!("total {} does not match L0 + sum Li + 2Na", a.total));
    }

    for g in &out.inventory {
        if let Err(e) = check_placement(g) {
            fail("placement", format!("{}: {e}", g.kind.name()));
        }
    }

    Ok(StructureReport {
        n_points: n,
        n_h: layout.h.len(),
        n_components: comps.components.len(),
        min_h_gap: min_h.map(|d| to_f64(&d).sqrt()),
        base_path_len: path.len(),
        max_base_edge: to_f64(&max_edge).sqrt(),
        alpha_total: a.total,
        failures,
    })
}
