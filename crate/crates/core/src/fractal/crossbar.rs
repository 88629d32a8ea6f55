use std::collections::HashSet;

use super::{CrossbarParams, FractalError, RowStructure};
use crate::geometry::{Point, PointSet};

/// Which base case a crossbar point descends from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    /// f(0): lies on a full row in every axis.
    Core,
    /// h_m(0) for the given 0-based axis m.
    Connector(usize),
}

impl Role {
    pub fn label(&self) -> &'static str {
        match self {
            Role::Core => "core",
            Role::Connector(_) => "connector",
        }
    }
}

type Cloud = Vec<(Vec<i64>, Role)>;

fn cells(l: u32, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; d];
    loop {
        out.push(cur.clone());
        let mut j = d;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if cur[j] + 1 < l {
                cur[j] += 1;
                break;
            }
            cur[j] = 0;
        }
    }
}

fn place(into: &mut Cloud, from: &Cloud, cell: &[u32], block: i64) {
    for (c, r) in from {
        let moved = c.iter().zip(cell).map(|(x, &i)| x + i as i64 * block).collect();
        into.push((moved, *r));
    }
}

/// f(k) and h_m(k) for every axis, built bottom-up.
fn build(p: &CrossbarParams) -> (Cloud, Vec<Cloud>) {
    let d = p.d as usize;
    let q = p.q();
    let middle = |c: u32| c >= q && c < q + p.v;
    let origin = vec![0i64; d];
    let mut f: Cloud = vec![(origin.clone(), Role::Core)];
    let mut h: Vec<Cloud> = (0..d).map(|m| vec![(origin.clone(), Role::Connector(m))]).collect();
    let all_cells = cells(p.l, d);
    for i in 1..=p.k {
        let block = (p.l as i64).pow(i - 1);
        let mut nf = Cloud::new();
        let mut nh: Vec<Cloud> = vec![Cloud::new(); d];
        for cell in &all_cells {
            let mids: Vec<usize> = (0..d).filter(|&b| middle(cell[b])).collect();
            match mids.len() {
                0 => place(&mut nf, &f, cell, block),
                1 => place(&mut nf, &h[mids[0]], cell, block),
                _ => {}
            }
            for (m, hm) in nh.iter_mut().enumerate() {
                if mids.iter().all(|&b| b == m) {
                    place(hm, &h[m], cell, block);
                }
            }
        }
        f = nf;
        h = nh;
    }
    (f, h)
}

fn to_point_set(mut cloud: Cloud, d: usize) -> PointSet {
    cloud.sort_by(|a, b| a.0.cmp(&b.0));
    let labels = cloud.iter().map(|(_, r)| r.label().to_string()).collect();
    let pts = cloud.iter().map(|(c, _)| Point::from_ints(c)).collect();
    PointSet::new(d, pts)
        .and_then(|p| p.with_labels(labels))
        .expect("crossbar points are distinct")
}

/// f^{l,v,d}(k) with integer coordinates in [0, l^k)^d and roles, sorted lexicographically.
pub fn gen_f_roles(p: &CrossbarParams) -> Result<Vec<(Vec<i64>, Role)>, FractalError> {
    p.validate()?;
    let (mut f, _) = build(p);
    f.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(f)
}

/// f^{l,v,d}(k), labelled `core`/`connector`.
pub fn gen_f(p: &CrossbarParams) -> Result<PointSet, FractalError> {
    Ok(to_point_set(gen_f_roles(p)?, p.d as usize))
}

/// h^{l,v,d}_axis(k) for a 1-based axis (axis 2 in the plane is the column variant g).
pub fn gen_h(p: &CrossbarParams, axis: u32) -> Result<PointSet, FractalError> {
    p.validate()?;
    if axis < 1 || axis > p.d {
        return Err(FractalError::InvalidParams(format!("axis {axis} outside 1..={}", p.d)));
    }
    let (_, mut h) = build(p);
    Ok(to_point_set(h.swap_remove(axis as usize - 1), p.d as usize))
}

#[derive(Clone, Debug)]
pub struct CrossbarDecomposition {
    pub params: CrossbarParams,
    pub all: PointSet,
    pub core: PointSet,
    pub connectors: PointSet,
    pub core_ids: Vec<usize>,
    pub connector_ids: Vec<usize>,
    pub rows: RowStructure,
}

/// Full rows per axis, the embedded grid M and the connectors C = P ∖ M.
pub fn decompose_crossbar(p: &PointSet, params: &CrossbarParams) -> Result<CrossbarDecomposition, FractalError> {
    let reference = gen_f(params)?;
    if p.dim() != params.d as usize || p.len() != reference.len() {
        return Err(FractalError::NotACrossbar(format!(
            "expected {} points in dimension {}, got {} in dimension {}",
            reference.len(),
            params.d,
            p.len(),
            p.dim()
        )));
    }
    let want: HashSet<&Point> = reference.points().iter().collect();
    if let Some(bad) = p.points().iter().find(|q| !want.contains(q)) {
        return Err(FractalError::NotACrossbar(format!("unexpected point {bad:?}")));
    }
    let side = params.side() as usize;
    let rows = RowStructure::detect(p, side);
    let d = params.d as usize;
    let mut hits = vec![0usize; p.len()];
    for axis in 0..d {
        let got = rows.rows_by_axis[axis].len() as u128;
        if got != params.full_rows_per_axis() {
            return Err(FractalError::NotACrossbar(format!(
                "axis {axis}: {got} full rows, expected {}",
                params.full_rows_per_axis()
            )));
        }
        for row in &rows.rows_by_axis[axis] {
            for &id in row {
                hits[id] += 1;
            }
        }
    }
    let core_ids: Vec<usize> = (0..p.len()).filter(|&i| hits[i] == d).collect();
    let connector_ids: Vec<usize> = (0..p.len()).filter(|&i| hits[i] != d).collect();
    if core_ids.len() as u128 != params.core_count() {
        return Err(FractalError::NotACrossbar(format!(
            "|M| = {}, expected {}",
            core_ids.len(),
            params.core_count()
        )));
    }
    Ok(CrossbarDecomposition {
        params: *params,
        all: p.clone(),
        core: p.subset(&core_ids),
        connectors: p.subset(&connector_ids),
        core_ids,
        connector_ids,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(l: u32, v: u32, d: u32, k: u32) -> CrossbarParams {
        CrossbarParams::new(l, v, d, k).unwrap()
    }

    /// Brute-force cell classification for one level, independent of `build`.
    fn one_level_counts(l: u32, v: u32, d: usize) -> (usize, usize) {
        let q = (l - v) / 2;
        let mut f = 0;
        let mut h0 = 0;
        for cell in cells(l, d) {
            let mids = cell.iter().filter(|&&c| c >= q && c < q + v).count();
            if mids <= 1 {
                f += 1;
            }
            if cell[1..].iter().all(|&c| c < q || c >= q + v) {
                h0 += 1;
            }
        }
        (f, h0)
    }

    #[test]
    fn small_counts() {
        assert_eq!(gen_f(&params(3, 1, 2, 1)).unwrap().len(), 8);
        assert_eq!(gen_f(&params(3, 1, 2, 2)).unwrap().len(), 56);
        assert_eq!(gen_f(&params(3, 1, 2, 0)).unwrap().len(), 1);
        assert_eq!(gen_h(&params(3, 1, 2, 1), 1).unwrap().len(), 6);
        assert_eq!(gen_h(&params(5, 3, 4, 0), 3).unwrap().len(), 1);
        assert_eq!(gen_h(&params(3, 1, 3, 1), 2).unwrap().len(), 12);
        assert_eq!(one_level_counts(3, 1, 3), (3 * 3 * 3 - 7, 12));
        assert_eq!(one_level_counts(3, 1, 2).0, 8);
    }

    #[test]
    fn f1_layout() {
        let f = gen_f(&params(3, 1, 2, 1)).unwrap();
        let want: Vec<Vec<i64>> = vec![
            vec![0, 0],
            vec![0, 1],
            vec![0, 2],
            vec![1, 0],
            vec![1, 2],
            vec![2, 0],
            vec![2, 1],
            vec![2, 2],
        ];
        assert_eq!(
            f,
            PointSet::from_int_coords(2, &want)
                .unwrap()
                .with_labels(
                    [
                        "core",
                        "connector",
                        "core",
                        "connector",
                        "connector",
                        "core",
                        "connector",
                        "core"
                    ]
                    .iter()
                    .map(|s| s.to_string())
                    .collect()
                )
                .unwrap()
        );
    }

    #[test]
    fn h_is_row_bar() {
        // h_1 keeps the outer rows (full along axis 1); h_2 is its transpose.
        let h1 = gen_h(&params(3, 1, 2, 1), 1).unwrap();
        assert!(h1.points().iter().all(|p| p.0[1] != crate::geometry::rational::int(1)));
        let h2 = gen_h(&params(3, 1, 2, 1), 2).unwrap();
        assert!(h2.points().iter().all(|p| p.0[0] != crate::geometry::rational::int(1)));
    }

    #[test]
    fn decomposition_examples() {
        let p = params(3, 1, 2, 1);
        let dec = decompose_crossbar(&gen_f(&p).unwrap(), &p).unwrap();
        assert_eq!(dec.rows.rows_by_axis[0].len(), 2);
        assert_eq!(dec.core.len(), 4);
        assert_eq!(dec.connectors.len(), 4);

        let p = params(3, 1, 2, 2);
        let dec = decompose_crossbar(&gen_f(&p).unwrap(), &p).unwrap();
        assert_eq!(dec.rows.rows_by_axis[1].len(), 4);
        assert!(dec.rows.rows_by_axis[1].iter().all(|r| r.len() == 9));
        assert_eq!(dec.core.len(), 16);

        let p = params(5, 1, 2, 1);
        let dec = decompose_crossbar(&gen_f(&p).unwrap(), &p).unwrap();
        assert_eq!(dec.rows.rows_by_axis[0].len(), 4);
        assert!(dec.rows.rows_by_axis[0].iter().all(|r| r.len() == 5));
        assert_eq!(dec.core.len(), 16);
    }

    #[test]
    fn core_role_matches_structural_core() {
        for (l, v, d, k) in [(3, 1, 2, 3), (5, 1, 2, 2), (5, 3, 2, 2), (3, 1, 3, 2)] {
            let p = params(l, v, d, k);
            let f = gen_f(&p).unwrap();
            let dec = decompose_crossbar(&f, &p).unwrap();
            let by_role: Vec<usize> = (0..f.len()).filter(|&i| f.label(i) == Some("core")).collect();
            assert_eq!(by_role, dec.core_ids);
        }
    }

    #[test]
    fn rejects_foreign_sets() {
        let p = params(3, 1, 2, 1);
        let g = PointSet::from_int_coords(2, &[vec![0, 0]]).unwrap();
        assert!(matches!(decompose_crossbar(&g, &p), Err(FractalError::NotACrossbar(_))));
    }
}
