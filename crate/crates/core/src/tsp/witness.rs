use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::assemble::{build_layout, TspReductionOutput};
use super::gadgets::{gadget_table, GadgetKind, H_CORNERS};
use super::held_karp::{held_karp_path_between, path_length};
use super::{ExactCoverInstance, TspError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub cover: Vec<usize>,
    /// Visits every point once.
    pub path: Vec<usize>,
    pub length: f64,
    pub target: f64,
    pub within_target: bool,
    /// 1 or 2 per X row; cover rows run in mode 2.
    pub modes: Vec<u8>,
}

/// All exact covers, as sorted lists of set indices, in increasing bitmask order.
pub fn exact_covers(xc: &ExactCoverInstance) -> Vec<Vec<usize>> {
    let m = xc.sets.len();
    assert!(m < 24, "exact_covers enumerates 2^m subsets");
    (0u32..1 << m)
        .map(|mask| (0..m).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|c| xc.is_exact_cover(c))
        .collect()
}

/// A path through every point of the reduction, built from an exact cover.
///
/// Column j's element sits in cover row r. Rows below r pick up the H above them through the
/// top hook; rows above r pick up the H below them through the bottom hook.
pub fn witness_path_from_cover(out: &TspReductionOutput, cover: &[usize]) -> Result<Witness, TspError> {
    let xc = &out.xc;
    if !xc.is_exact_cover(cover) {
        return Err(TspError::Invalid(format!("{cover:?} is not an exact cover")));
    }
    let layout = build_layout(xc, out.l, out.v)?;
    if out.points.points() != layout.points.as_slice() {
        return Err(TspError::Invalid("points do not match the stored instance".into()));
    }
    let m = xc.m;
    let ps = layout.point_set();

    // Table-order H paths between the bottom and between the top corners.
    let table = gadget_table(GadgetKind::ConfigH)?;
    let [bl, br, tl, tr] = H_CORNERS;
    let bottom = held_karp_path_between(&table, bl, br)?.1;
    let top = held_karp_path_between(&table, tl, tr)?.1;

    // Hook edge (as an unordered pair) → (left point, H key, table path left to right).
    type Visit<'a> = (usize, (usize, usize), &'a Vec<usize>);
    let mut visits: HashMap<(usize, usize), Visit> = HashMap::new();
    for j in 0..m {
        let r = *cover
            .iter()
            .find(|&&i| xc.contains(i, j))
            .expect("exact cover covers j");
        for i in 0..m {
            let hooks = layout.hooks[&(i, j)];
            let (edge, key, tpath) = if i < r {
                (hooks.up, (i, j), &bottom)
            } else if i > r {
                (hooks.down, (i - 1, j), &top)
            } else {
                continue;
            };
            let k = (edge.0.min(edge.1), edge.0.max(edge.1));
            visits.insert(k, (edge.0, key, tpath));
        }
    }
    if visits.len() != layout.h.len() {
        return Err(TspError::Invalid("visits do not match the H components".into()));
    }

    let rows = layout.rows.len();
    let modes: Vec<u8> = (0..rows).map(|i| if cover.contains(&i) { 2 } else { 1 }).collect();
    let top_first: Vec<bool> = modes.iter().map(|&md| md == 2).collect();
    let base = layout.base_path(&top_first);
    let mut path = Vec::with_capacity(ps.len());
    for (t, &p) in base.iter().enumerate() {
        path.push(p);
        let Some(&q) = base.get(t + 1) else { continue };
        if let Some(&(left, key, tpath)) = visits.get(&(p.min(q), p.max(q))) {
            let hid = &layout.h[&key];
            let seq: Vec<usize> = tpath.iter().map(|&x| hid[x]).collect();
            if p == left {
                path.extend(seq);
            } else {
                path.extend(seq.into_iter().rev());
            }
        }
    }
    let mut seen = vec![false; ps.len()];
    for &i in &path {
        if std::mem::replace(&mut seen[i], true) {
            return Err(TspError::Invalid(format!("point {i} visited twice")));
        }
    }
    if path.len() != ps.len() {
        return Err(TspError::Invalid(format!(
            "witness covers {} of {} points",
            path.len(),
            ps.len()
        )));
    }
    let length = path_length(&ps, &path);
    let target = out.alpha.total;
    Ok(Witness {
        cover: cover.to_vec(),
        path,
        length,
        target,
        within_target: length <= target * (1.0 + 1e-9),
        modes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsp::reduce_exact_cover_to_tsp;

    #[test]
    fn covers_enumerated() {
        let xc = ExactCoverInstance::new(3, vec![vec![0, 1], vec![2], vec![1, 2]]).unwrap();
        assert_eq!(exact_covers(&xc), vec![vec![0, 1]]);
        let none = ExactCoverInstance::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(exact_covers(&none).is_empty());
    }

    #[test]
    fn witness_meets_target_exactly() {
        for (m, sets) in [
            (1, vec![vec![0]]),
            (2, vec![vec![0], vec![1]]),
            (2, vec![vec![0, 1]]),
            (3, vec![vec![0, 1], vec![2], vec![1, 2]]),
            (3, vec![vec![2], vec![0], vec![1]]),
        ] {
            let xc = ExactCoverInstance::new(m, sets).unwrap();
            let out = reduce_exact_cover_to_tsp(&xc, 3, 1).unwrap();
            for cover in exact_covers(&xc) {
                let w = witness_path_from_cover(&out, &cover).unwrap();
                assert!(w.within_target);
                assert!((w.length - w.target).abs() < 1e-6, "{} vs {}", w.length, w.target);
            }
        }
    }

    #[test]
    fn non_cover_is_rejected() {
        let xc = ExactCoverInstance::new(2, vec![vec![0, 1], vec![1]]).unwrap();
        let out = reduce_exact_cover_to_tsp(&xc, 3, 1).unwrap();
        assert!(witness_path_from_cover(&out, &[0, 1]).is_err());
        assert!(witness_path_from_cover(&out, &[1]).is_err());
    }
}
