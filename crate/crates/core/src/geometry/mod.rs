//! Exact rational points, ε-nets, ball counts and the scaling/substitution transforms.

pub(crate) mod lattice;
mod net;
pub mod rational;
mod transform;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lattice::BallCounter;
pub use net::{build_epsilon_net, count_net_in_ball, scan_order, NetOrder, NetReport};
pub use rational::Rational;
pub use transform::{scale_point, scale_point_set, substitute_point_set};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point set is empty")]
    Empty,
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("duplicate point at indices {0} and {1}")]
    Duplicate(usize, usize),
    #[error("label count {labels} does not match point count {points}")]
    LabelCount { labels: usize, points: usize },
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("substitution needs d(u,v) > 4c; points {0} and {1} are too close")]
    SubstitutionSeparation(usize, usize),
    #[error("gadget point {gadget_index} of point {point} lies farther than c from it")]
    SubstitutionRadius { point: usize, gadget_index: usize },
    #[error("gadget of point {point} has {size} points, more than k = {k}")]
    SubstitutionSize { point: usize, size: usize, k: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(#[serde(with = "rational::pair_vec")] pub Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational::to_f64).collect()
    }

    pub fn translate(&self, by: &Point) -> Point {
        Point(self.0.iter().zip(&by.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", rational::fraction_string(c))?;
        }
        write!(f, ")")
    }
}

pub fn sq_dist(p: &Point, q: &Point) -> Result<Rational, GeometryError> {
    if p.dim() != q.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok(sq_dist_unchecked(p, q))
}

pub(crate) fn sq_dist_unchecked(p: &Point, q: &Point) -> Rational {
    let mut acc = rational::int(0);
    for (a, b) in p.0.iter().zip(&q.0) {
        let t = a - b;
        acc += &t * &t;
    }
    acc
}

pub fn dist_f64(p: &Point, q: &Point) -> f64 {
    rational::to_f64(&sq_dist_unchecked(p, q)).sqrt()
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPointSet")]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct RawPointSet {
    dim: usize,
    points: Vec<Point>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl TryFrom<RawPointSet> for PointSet {
    type Error = GeometryError;
    fn try_from(r: RawPointSet) -> Result<Self, Self::Error> {
        let ps = PointSet::new(r.dim, r.points)?;
        match r.labels {
            Some(l) => ps.with_labels(l),
            None => Ok(ps),
        }
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointSet")
            .field("dim", &self.dim)
            .field("n", &self.points.len())
            .finish()
    }
}

impl PointSet {
    /// Validates dimension, non-emptiness and distinctness.
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        if points.is_empty() {
            return Err(GeometryError::Empty);
        }
        let mut seen = std::collections::HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if let Some(j) = seen.insert(p, i) {
                return Err(GeometryError::Duplicate(j, i));
            }
        }
        Ok(PointSet {
            dim,
            points,
            labels: None,
        })
    }

    pub fn from_int_coords(dim: usize, pts: &[Vec<i64>]) -> Result<Self, GeometryError> {
        Self::new(dim, pts.iter().map(|c| Point::from_ints(c)).collect())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GeometryError> {
        if labels.len() != self.points.len() {
            return Err(GeometryError::LabelCount {
                labels: labels.len(),
                points: self.points.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[i].as_str())
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }

    pub fn to_set(&self) -> HashSet<Point> {
        self.points.iter().cloned().collect()
    }

    /// Subset by indices, carrying labels along.
    pub fn subset(&self, idx: &[usize]) -> PointSet {
        PointSet {
            dim: self.dim,
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| idx.iter().map(|&i| l[i].clone()).collect()),
        }
    }

    /// Canonical order: lexicographic by coordinates, labels permuted alongside.
    pub fn sorted(&self) -> PointSet {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.points[a].0.cmp(&self.points[b].0));
        self.subset(&idx)
    }

    pub fn bbox(&self) -> (Vec<Rational>, Vec<Rational>) {
        let mut lo = self.points[0].0.clone();
        let mut hi = lo.clone();
        for p in &self.points[1..] {
            for (j, c) in p.0.iter().enumerate() {
                if c < &lo[j] {
                    lo[j] = c.clone();
                }
                if c > &hi[j] {
                    hi[j] = c.clone();
                }
            }
        }
        (lo, hi)
    }

    /// Squared diameter of the bounding box; an upper bound on the squared diameter.
    pub fn bbox_diag_sq(&self) -> Rational {
        let (lo, hi) = self.bbox();
        let mut acc = rational::int(0);
        for (a, b) in lo.iter().zip(&hi) {
            let t = b - a;
            acc += &t * &t;
        }
        acc
    }

    pub fn centroid(&self) -> Point {
        let n = rational::int(self.len() as i64);
        let mut acc = vec![rational::int(0); self.dim];
        for p in &self.points {
            for (a, c) in acc.iter_mut().zip(&p.0) {
                *a += c;
            }
        }
        Point(acc.into_iter().map(|a| a / &n).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("point set serializes")
    }

    /// One point per row, coordinates as `num/den`; a trailing label column when labelled.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.points.iter().enumerate() {
            let mut row: Vec<String> = p.0.iter().map(rational::fraction_string).collect();
            if let Some(l) = &self.labels {
                row.push(l[i].clone());
            }
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::rational::{int, ratio};
    use super::*;

    #[test]
    fn sq_dist_examples() {
        let o = Point::from_ints(&[0, 0]);
        assert_eq!(sq_dist(&o, &Point::from_ints(&[1, 0])).unwrap(), int(1));
        assert_eq!(sq_dist(&o, &Point::from_ints(&[3, 4])).unwrap(), int(25));
        let a = Point::new(vec![ratio(1, 8), ratio(2, 8)]);
        let b = Point::new(vec![ratio(10, 8), ratio(1, 8)]);
        assert_eq!(sq_dist(&a, &b).unwrap(), ratio(82, 64));
        assert!(matches!(
            sq_dist(&o, &Point::from_ints(&[1])),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        let p = Point::from_ints(&[1, 2]);
        assert_eq!(
            PointSet::new(2, vec![p.clone(), p]).unwrap_err(),
            GeometryError::Duplicate(0, 1)
        );
        assert_eq!(PointSet::new(2, vec![]).unwrap_err(), GeometryError::Empty);
    }

    #[test]
    fn json_round_trip() {
        let ps = PointSet::new(
            2,
            vec![
                Point::new(vec![ratio(1, 3), int(2)]),
                Point::new(vec![ratio(-5, 2), int(0)]),
            ],
        )
        .unwrap()
        .with_labels(vec!["core".into(), "connector".into()])
        .unwrap();
        let s = ps.to_json();
        assert_eq!(
            s,
            r#"{"dim":2,"points":[[["1","3"],["2","1"]],[["-5","2"],["0","1"]]],"labels":["core","connector"]}"#
        );
        let back: PointSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ps);
        assert!(serde_json::from_str::<PointSet>(r#"{"dim":2,"points":[[["1","1"]]]}"#).is_err());
    }

    #[test]
    fn csv_uses_fractions() {
        let ps = PointSet::new(2, vec![Point::new(vec![ratio(1, 3), int(2)])]).unwrap();
        assert_eq!(ps.to_csv(), "1/3,2\n");
    }
}
