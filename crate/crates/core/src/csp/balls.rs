use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::{CspError, LeqCspInstance, Value};
use crate::geometry::rational::{self, int, ratio, Rational};
use crate::geometry::{sq_dist, GeometryError, Point, PointSet};

/// Open balls of radius 1/2, one group B_a per variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallInstance {
    pub dim: usize,
    #[serde(rename = "Delta")]
    pub delta: u32,
    #[serde(with = "rational::pair")]
    pub alpha: Rational,
    #[serde(with = "rational::pair")]
    pub radius: Rational,
    pub centers: PointSet,
    /// Group (variable) index per center.
    pub groups: Vec<usize>,
    /// The value x with center = a + αx.
    pub offsets: Vec<Value>,
    /// Grid position of each variable.
    pub positions: Vec<Vec<u32>>,
    pub target: usize,
}

impl BallInstance {
    pub fn group_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.target];
        for (c, &g) in self.groups.iter().enumerate() {
            out[g].push(c);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ball instance serializes")
    }
}

/// α = 1/(dΔ²), with Δ read as 2 when Δ = 1. At Δ = 1 the plain formula gives αΔ = 1/d and
/// the diagonal bound 2(1−αΔ)² drops to ≤ 1, so diagonal neighbours could overlap.
pub fn ball_alpha(d: usize, delta: u32) -> Rational {
    ratio(1, (d as i64) * (delta.max(2) as i64).pow(2))
}

/// Centers a + αx for every x ∈ R_a. Groups follow variable order; centers within a group
/// follow the sorted relation.
pub fn balls_from_csp(i: &LeqCspInstance) -> Result<BallInstance, CspError> {
    i.validate()?;
    let d = i.d;
    let alpha = ball_alpha(d, i.delta);
    let mut centers = Vec::new();
    let mut groups = Vec::new();
    let mut offsets = Vec::new();
    for (a, pos) in i.vars.iter().enumerate() {
        let rel = i.relation(a);
        if rel.is_empty() {
            return Err(CspError::EmptyRelation(a));
        }
        for x in rel {
            let c = pos
                .iter()
                .zip(&x)
                .map(|(&p, &t)| int(p as i64) + &alpha * int(t as i64))
                .collect();
            centers.push(Point::new(c));
            groups.push(a);
            offsets.push(x);
        }
    }
    Ok(BallInstance {
        dim: d,
        delta: i.delta,
        alpha,
        radius: ratio(1, 2),
        centers: PointSet::new(d, centers)?,
        groups,
        offsets,
        positions: i.vars.clone(),
        target: i.vars.len(),
    })
}

/// True iff the open balls of radius 1/2 do not meet: sqDist ≥ 1.
pub fn open_balls_disjoint(c1: &Point, c2: &Point) -> Result<bool, CspError> {
    Ok(sq_dist(c1, c2)? >= int(1))
}

/// True iff the open unit cubes do not meet: ℓ∞ distance ≥ 1.
pub fn cubes_disjoint(c1: &Point, c2: &Point) -> Result<bool, CspError> {
    if c1.dim() != c2.dim() {
        return Err(CspError::Geometry(GeometryError::DimensionMismatch {
            expected: c1.dim(),
            found: c2.dim(),
        }));
    }
    Ok(c1.0.iter().zip(&c2.0).any(|(a, b)| (a - b).abs() >= int(1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallChecks {
    /// Every pair inside a group is at sqDist < 1.
    pub group_clique: bool,
    /// 2(1−αΔ)² > 1 and every cross pair of non-adjacent variables is at sqDist ≥ 2(1−αΔ)².
    pub separation: bool,
    /// For adjacent a, a+e_i: balls disjoint iff x_i ≤ x′_i.
    pub adjacent_exact: bool,
    pub pairs_checked: usize,
    pub detail: Option<String>,
}

impl BallChecks {
    pub fn ok(&self) -> bool {
        self.group_clique && self.separation && self.adjacent_exact
    }
}

/// Exact checks in the integer lattice scaled by 1/α. Variable pairs at ℓ∞ position distance
/// ≥ 3 are skipped: their centers are ≥ 3 − 2αΔ > 2 apart.
pub fn check_ball_instance(b: &BallInstance) -> Result<BallChecks, CspError> {
    let inv = (int(1) / &b.alpha).to_integer().to_i128();
    let scale = match inv {
        Some(s) if b.alpha.numer() == &1.into() => s,
        _ => return Err(CspError::Invalid("α must be 1/integer".into())),
    };
    let delta = b.delta as i128;
    if b.groups.len() != b.centers.len() || b.offsets.len() != b.centers.len() {
        return Err(CspError::Invalid("groups/offsets do not match the centers".into()));
    }
    for (c, p) in b.centers.points().iter().enumerate() {
        let pos = b
            .positions
            .get(b.groups[c])
            .ok_or_else(|| CspError::Invalid(format!("center {c} names a missing group")))?;
        let want = pos
            .iter()
            .zip(&b.offsets[c])
            .map(|(&q, &t)| int(q as i64) + &b.alpha * int(t as i64));
        if p.dim() != pos.len() || !p.0.iter().cloned().eq(want) {
            return Err(CspError::Invalid(format!("center {c} is not position + α·offset")));
        }
    }
    let members = b.group_members();
    let coords: Vec<Vec<i128>> = (0..b.centers.len())
        .map(|c| {
            b.positions[b.groups[c]]
                .iter()
                .zip(&b.offsets[c])
                .map(|(&p, &x)| p as i128 * scale + x as i128)
                .collect()
        })
        .collect();
    let sq = |u: usize, v: usize| -> i128 { coords[u].iter().zip(&coords[v]).map(|(a, c)| (a - c) * (a - c)).sum() };
    let one = scale * scale;
    let sep = 2 * (scale - delta) * (scale - delta);
    let mut out = BallChecks {
        group_clique: true,
        separation: sep > one,
        adjacent_exact: true,
        pairs_checked: 0,
        detail: (sep <= one).then(|| "2(1−αΔ)² ≤ 1 for this α".to_string()),
    };
    for (g, m) in members.iter().enumerate() {
        for (k, &u) in m.iter().enumerate() {
            for &v in &m[k + 1..] {
                out.pairs_checked += 1;
                if sq(u, v) >= one && out.group_clique {
                    out.group_clique = false;
                    out.detail = Some(format!("group {g}: centers {u} and {v} are ≥ 1 apart"));
                }
            }
        }
    }
    let mut cells: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (a, p) in b.positions.iter().enumerate() {
        cells
            .entry(p.iter().map(|&x| x as i64 / 3).collect())
            .or_default()
            .push(a);
    }
    let d = b.dim;
    for (a, p) in b.positions.iter().enumerate() {
        let home: Vec<i64> = p.iter().map(|&x| x as i64 / 3).collect();
        let mut near = Vec::new();
        for code in 0..3usize.pow(d as u32) {
            let mut key = home.clone();
            let mut c = code;
            for k in key.iter_mut() {
                *k += (c % 3) as i64 - 1;
                c /= 3;
            }
            if let Some(list) = cells.get(&key) {
                near.extend(list.iter().copied().filter(|&o| o > a));
            }
        }
        for o in near {
            let q = &b.positions[o];
            let diff: Vec<i64> = p.iter().zip(q).map(|(&x, &y)| y as i64 - x as i64).collect();
            if diff.iter().any(|t| t.abs() >= 3) {
                continue;
            }
            let unit_axis = if diff.iter().map(|t| t.abs()).sum::<i64>() == 1 {
                diff.iter().position(|&t| t != 0)
            } else {
                None
            };
            for &u in &members[a] {
                for &v in &members[o] {
                    out.pairs_checked += 1;
                    let s = sq(u, v);
                    match unit_axis {
                        None => {
                            if s < sep && out.separation {
                                out.separation = false;
                                out.detail = Some(format!("variables {a},{o}: centers {u},{v} closer than 2(1−αΔ)"));
                            }
                        }
                        Some(axis) => {
                            // Orient so that `lo` sits at the smaller coordinate.
                            let (lo, hi) = if diff[axis] > 0 { (u, v) } else { (v, u) };
                            let want = b.offsets[lo][axis] <= b.offsets[hi][axis];
                            if (s >= one) != want && out.adjacent_exact {
                                out.adjacent_exact = false;
                                out.detail = Some(format!("adjacent {a},{o}: centers {u},{v} disagree with ≤"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Reads the chosen center per group back as values. `selection[g]` is a center index in B_g.
pub fn selection_to_assignment(b: &BallInstance, selection: &[usize]) -> Result<Vec<Value>, CspError> {
    if selection.len() != b.target {
        return Err(CspError::Invalid(format!(
            "selection has {} entries for {} groups",
            selection.len(),
            b.target
        )));
    }
    selection
        .iter()
        .enumerate()
        .map(|(g, &c)| match b.groups.get(c) {
            Some(&h) if h == g => Ok(b.offsets[c].clone()),
            _ => Err(CspError::Invalid(format!("center {c} is not in group {g}"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::tests::two_adjacent;
    use std::collections::BTreeMap;

    fn pt(c: &[(i64, i64)]) -> Point {
        Point::new(c.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    #[test]
    fn worked_pairs() {
        assert!(open_balls_disjoint(&pt(&[(0, 1), (0, 1)]), &pt(&[(1, 1), (0, 1)])).unwrap());
        let a = pt(&[(1, 8), (2, 8)]);
        let b = pt(&[(10, 8), (1, 8)]);
        assert_eq!(sq_dist(&a, &b).unwrap(), ratio(82, 64));
        assert!(open_balls_disjoint(&a, &b).unwrap());
        let a = pt(&[(2, 8), (1, 8)]);
        let b = pt(&[(9, 8), (1, 8)]);
        assert_eq!(sq_dist(&a, &b).unwrap(), ratio(49, 64));
        assert!(!open_balls_disjoint(&a, &b).unwrap());
        assert!(open_balls_disjoint(&a, &Point::from_ints(&[0, 0, 0])).is_err());
    }

    #[test]
    fn cubes() {
        let o = pt(&[(0, 1), (0, 1)]);
        assert!(cubes_disjoint(&o, &pt(&[(1, 1), (0, 1)])).unwrap());
        assert!(!cubes_disjoint(&o, &pt(&[(3, 4), (3, 4)])).unwrap());
        assert!(cubes_disjoint(&o, &pt(&[(1, 2), (9, 8)])).unwrap());
    }

    #[test]
    fn single_variable_full_domain() {
        let i = LeqCspInstance {
            d: 2,
            n: 1,
            delta: 2,
            vars: vec![vec![0, 0]],
            unary: BTreeMap::new(),
            edges: vec![],
        };
        let b = balls_from_csp(&i).unwrap();
        assert_eq!(b.alpha, ratio(1, 8));
        assert_eq!(b.centers.len(), 4);
        assert_eq!(b.group_members(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(b.centers.point(3), &pt(&[(2, 8), (2, 8)]));
        assert!(check_ball_instance(&b).unwrap().ok());
    }

    #[test]
    fn chain_relation_offsets() {
        let mut i = two_adjacent(vec![vec![1, 0], vec![2, 0]], vec![vec![1, 1]]);
        i.unary.insert(0, vec![vec![1, 0], vec![2, 0]]);
        let b = balls_from_csp(&i).unwrap();
        assert_eq!(b.centers.point(0), &pt(&[(1, 8), (0, 1)]));
        assert_eq!(b.centers.point(1), &pt(&[(2, 8), (0, 1)]));
    }

    #[test]
    fn adjacent_verdicts_follow_leq() {
        let i = two_adjacent(vec![vec![1, 2], vec![2, 1]], vec![vec![2, 1], vec![1, 1]]);
        let b = balls_from_csp(&i).unwrap();
        let c = check_ball_instance(&b).unwrap();
        assert!(c.ok(), "{c:?}");
        // a+α(1,2) vs a′+α(2,1)
        assert!(open_balls_disjoint(b.centers.point(0), b.centers.point(3)).unwrap());
        // a+α(2,1) vs a′+α(1,1)
        assert!(!open_balls_disjoint(b.centers.point(1), b.centers.point(2)).unwrap());
    }

    #[test]
    fn unit_delta_keeps_diagonals_apart() {
        assert_eq!(ball_alpha(2, 1), ratio(1, 8));
        assert_eq!(ball_alpha(3, 2), ratio(1, 12));
        // Diagonal chains at (1,2) and (2,1) holding e_1 and e_2.
        let i = LeqCspInstance {
            d: 2,
            n: 3,
            delta: 1,
            vars: vec![vec![1, 2], vec![2, 1]],
            unary: BTreeMap::from([(0, vec![vec![1, 0]]), (1, vec![vec![0, 1]])]),
            edges: vec![],
        };
        let b = balls_from_csp(&i).unwrap();
        assert!(open_balls_disjoint(b.centers.point(0), b.centers.point(1)).unwrap());
        assert!(check_ball_instance(&b).unwrap().ok());
        let mut plain = b.clone();
        plain.alpha = ratio(1, 2);
        plain.centers = PointSet::new(2, vec![pt(&[(3, 2), (2, 1)]), pt(&[(2, 1), (3, 2)])]).unwrap();
        assert!(!open_balls_disjoint(plain.centers.point(0), plain.centers.point(1)).unwrap());
        assert!(!check_ball_instance(&plain).unwrap().separation);
    }

    #[test]
    fn empty_relation_rejected() {
        let i = two_adjacent(vec![], vec![vec![1, 1]]);
        assert_eq!(balls_from_csp(&i).unwrap_err(), CspError::EmptyRelation(0));
    }

    #[test]
    fn selection_round_trip() {
        let i = two_adjacent(vec![vec![1, 2], vec![2, 1]], vec![vec![2, 1]]);
        let b = balls_from_csp(&i).unwrap();
        assert_eq!(
            selection_to_assignment(&b, &[0, 2]).unwrap(),
            vec![vec![1, 2], vec![2, 1]]
        );
        assert!(selection_to_assignment(&b, &[2, 0]).is_err());
        assert!(selection_to_assignment(&b, &[0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let i = two_adjacent(vec![vec![1, 2]], vec![vec![2, 1]]);
        let b = balls_from_csp(&i).unwrap();
        let back: BallInstance = serde_json::from_str(&b.to_json()).unwrap();
        assert_eq!(back, b);
    }
}
