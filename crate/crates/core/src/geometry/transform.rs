use super::rational::{self, Rational};
use super::{sq_dist_unchecked, GeometryError, Point, PointSet};

pub fn scale_point(p: &Point, c: &Rational) -> Point {
    Point(p.0.iter().map(|x| x * c).collect())
}

/// Uniform scaling about the origin; labels are kept.
pub fn scale_point_set(p: &PointSet, c: &Rational) -> Result<PointSet, GeometryError> {
    if *c <= rational::int(0) {
        return Err(GeometryError::NonPositive("scale factor"));
    }
    let pts = p.points().iter().map(|q| scale_point(q, c)).collect();
    let out = PointSet::new(p.dim(), pts)?;
    match p.labels() {
        Some(l) => out.with_labels(l.to_vec()),
        None => Ok(out),
    }
}

/// Union of gadget sets S_p, one per point of `p` (in order), after checking
/// d(u,v) > 4c for u ≠ v, |S_p| ≤ k and every x ∈ S_p within c of p.
pub fn substitute_point_set(
    p: &PointSet,
    gadgets: &[Vec<Point>],
    c: &Rational,
    k: usize,
) -> Result<PointSet, GeometryError> {
    if *c < rational::int(0) {
        return Err(GeometryError::NonPositive("substitution radius"));
    }
    assert_eq!(gadgets.len(), p.len(), "one gadget per point");
    let sep = rational::int(16) * c * c;
    let pts = p.points();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if sq_dist_unchecked(&pts[i], &pts[j]) <= sep {
                return Err(GeometryError::SubstitutionSeparation(i, j));
            }
        }
    }
    let c_sq = c * c;
    let mut out = Vec::new();
    for (i, g) in gadgets.iter().enumerate() {
        let mut uniq: Vec<&Point> = Vec::new();
        for (gi, x) in g.iter().enumerate() {
            if x.dim() != p.dim() {
                return Err(GeometryError::DimensionMismatch {
                    expected: p.dim(),
                    found: x.dim(),
                });
            }
            if sq_dist_unchecked(x, &pts[i]) > c_sq {
                return Err(GeometryError::SubstitutionRadius {
                    point: i,
                    gadget_index: gi,
                });
            }
            if !uniq.contains(&x) {
                uniq.push(x);
            }
        }
        if uniq.len() > k {
            return Err(GeometryError::SubstitutionSize {
                point: i,
                size: uniq.len(),
                k,
            });
        }
        out.extend(uniq.into_iter().cloned());
    }
    PointSet::new(p.dim(), out)
}

#[cfg(test)]
mod tests {
    use super::super::rational::{int, ratio};
    use super::*;

    #[test]
    fn scaling_examples() {
        let p = PointSet::from_int_coords(2, &[vec![1, 1]]).unwrap();
        let s = scale_point_set(&p, &int(2)).unwrap();
        assert_eq!(s.point(0), &Point::from_ints(&[2, 2]));
        let g = PointSet::from_int_coords(2, &[vec![0, 0], vec![0, 2], vec![2, 1]]).unwrap();
        let t = scale_point_set(&g, &ratio(1, 3)).unwrap();
        assert_eq!(t.point(1), &Point::new(vec![int(0), ratio(2, 3)]));
        assert!(scale_point_set(&p, &int(0)).is_err());
    }

    #[test]
    fn identity_gadget_is_identity() {
        let p = PointSet::from_int_coords(2, &[vec![0, 0], vec![5, 0], vec![0, 9]]).unwrap();
        let g: Vec<Vec<Point>> = p.points().iter().map(|q| vec![q.clone()]).collect();
        assert_eq!(substitute_point_set(&p, &g, &int(1), 1).unwrap(), p);
    }

    #[test]
    fn four_c_threshold() {
        let p = PointSet::from_int_coords(2, &[vec![0, 0], vec![5, 0]]).unwrap();
        let g = vec![
            vec![Point::from_ints(&[0, 1]), Point::from_ints(&[0, -1])],
            vec![Point::from_ints(&[5, 1]), Point::from_ints(&[5, -1])],
        ];
        assert_eq!(substitute_point_set(&p, &g, &int(1), 2).unwrap().len(), 4);
        assert_eq!(
            substitute_point_set(&p, &g, &int(2), 2).unwrap_err(),
            GeometryError::SubstitutionSeparation(0, 1)
        );
        assert!(matches!(
            substitute_point_set(&p, &g, &int(1), 1),
            Err(GeometryError::SubstitutionSize { point: 0, .. })
        ));
    }
}
