//! Multi-scale ε-net ball counting: a log-log slope for trend and an envelope
//! constant for checking a claimed dimension bound.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::rational::{self, int, Rational};
use crate::geometry::{build_epsilon_net, BallCounter, GeometryError, NetOrder, Point, PointSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DimensionError {
    #[error("scale pair {0} violates r >= 2 eps > 0")]
    BadPair(usize),
    #[error("no scale pairs given")]
    NoPairs,
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalePair {
    #[serde(with = "rational::pair")]
    pub eps: Rational,
    #[serde(with = "rational::pair")]
    pub r: Rational,
}

impl ScalePair {
    pub fn new(eps: Rational, r: Rational) -> Self {
        ScalePair { eps, r }
    }

    pub fn ratio(&self) -> f64 {
        rational::to_f64(&(&self.r / &self.eps))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimReport {
    pub scales: Vec<ScalePair>,
    /// Centers examined per pair.
    pub samples: Vec<usize>,
    pub net_sizes: Vec<usize>,
    pub max_count: Vec<usize>,
    /// Least-squares slope of ln maxCount against ln(r/ε); `None` when all ratios coincide.
    pub fitted_exponent: Option<f64>,
    pub claimed: Option<f64>,
    /// max over pairs of maxCount / (r/ε)^claimed.
    pub envelope_constant: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(with = "rational::pair")]
    pub eps: Rational,
    #[serde(with = "rational::pair")]
    pub r: Rational,
    pub center: Point,
    pub count: usize,
    pub bound: f64,
}

/// ε_j = side/l^j for j in `levels`, each with r ∈ {2ε, 4ε, lε, l²ε}.
pub fn default_ladder(p: &PointSet, l: u32, levels: std::ops::RangeInclusive<u32>) -> Vec<ScalePair> {
    let (lo, hi) = p.bbox();
    let side = lo.iter().zip(&hi).map(|(a, b)| b - a).max().unwrap_or_else(|| int(1));
    let side = if side == int(0) { int(1) } else { side };
    let lr = int(l as i64);
    let mut out = Vec::new();
    for j in levels {
        let eps = &side / num_traits::pow(lr.clone(), j as usize);
        for m in [int(2), int(4), lr.clone(), &lr * &lr] {
            out.push(ScalePair::new(eps.clone(), &eps * m));
        }
    }
    out.sort_by(|a, b| (&a.eps, &a.r).cmp(&(&b.eps, &b.r)));
    out.dedup();
    out
}

/// Spans-based ladder: with S the smallest power of l covering the bounding box,
/// ε = S·l^{-j} for every j ≥ 2 with ε ≥ `finest`, and r = ε·l^m (m ≥ 1) up to S/l.
pub fn geometric_ladder(p: &PointSet, l: u32, finest: &Rational) -> Vec<ScalePair> {
    let (lo, hi) = p.bbox();
    let extent = lo.iter().zip(&hi).map(|(a, b)| b - a).max().unwrap_or_else(|| int(0));
    let lr = int(l as i64);
    let mut span = int(1);
    while span < extent {
        span = &span * &lr;
    }
    let top = &span / &lr;
    let mut out = Vec::new();
    let mut eps = &top / &lr;
    while &eps >= finest && eps > int(0) {
        let mut r = &eps * &lr;
        while r <= top {
            out.push(ScalePair::new(eps.clone(), r.clone()));
            r = &r * &lr;
        }
        eps = &eps / &lr;
    }
    out.sort_by(|a, b| (&a.eps, &a.r).cmp(&(&b.eps, &b.r)));
    out
}

/// Pairs (ε, mε) for every ε and multiplier given.
pub fn ladder(eps: &[Rational], multipliers: &[Rational]) -> Vec<ScalePair> {
    let mut out = Vec::new();
    for e in eps {
        for m in multipliers {
            out.push(ScalePair::new(e.clone(), e * m));
        }
    }
    out
}

fn check_pairs(pairs: &[ScalePair]) -> Result<(), DimensionError> {
    if pairs.is_empty() {
        return Err(DimensionError::NoPairs);
    }
    for (i, sp) in pairs.iter().enumerate() {
        if sp.eps <= int(0) || sp.r < int(2) * &sp.eps {
            return Err(DimensionError::BadPair(i));
        }
    }
    Ok(())
}

struct PairCounts {
    net_size: usize,
    centers: Vec<Point>,
    counts: Vec<usize>,
}

/// Builds each distinct net once and counts around sampled net centers.
fn count_pairs(
    p: &PointSet,
    pairs: &[ScalePair],
    centers_per_pair: usize,
    seed: u64,
) -> Result<Vec<PairCounts>, DimensionError> {
    check_pairs(pairs)?;
    if centers_per_pair == 0 {
        return Err(DimensionError::NonPositive("centers per pair"));
    }
    let mut nets: HashMap<Rational, PointSet> = HashMap::new();
    for sp in pairs {
        if !nets.contains_key(&sp.eps) {
            let rep = build_epsilon_net(p, &sp.eps, NetOrder::Seeded(seed))?;
            nets.insert(sp.eps.clone(), rep.net);
        }
    }
    Ok(pairs
        .par_iter()
        .enumerate()
        .map(|(i, sp)| {
            let net = &nets[&sp.eps];
            let centers: Vec<Point> = if net.len() <= centers_per_pair {
                net.points().to_vec()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9));
                let mut idx = sample(&mut rng, net.len(), centers_per_pair).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(|j| net.point(j).clone()).collect()
            };
            let counter = BallCounter::new(net.points(), &sp.r);
            let counts = centers.par_iter().map(|c| counter.count(c)).collect();
            PairCounts {
                net_size: net.len(),
                centers,
                counts,
            }
        })
        .collect())
}

fn slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx < 1e-12 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

pub fn estimate_dimension(
    p: &PointSet,
    pairs: &[ScalePair],
    centers_per_pair: usize,
    seed: u64,
    claimed: Option<f64>,
) -> Result<DimReport, DimensionError> {
    let counted = count_pairs(p, pairs, centers_per_pair, seed)?;
    let max_count: Vec<usize> = counted
        .iter()
        .map(|c| c.counts.iter().copied().max().unwrap_or(0))
        .collect();
    let xs: Vec<f64> = pairs.iter().map(|sp| sp.ratio().ln()).collect();
    let ys: Vec<f64> = max_count.iter().map(|&m| (m.max(1) as f64).ln()).collect();
    let envelope_constant = claimed.map(|delta| {
        pairs
            .iter()
            .zip(&max_count)
            .map(|(sp, &m)| m as f64 / sp.ratio().powf(delta))
            .fold(0.0, f64::max)
    });
    Ok(DimReport {
        scales: pairs.to_vec(),
        samples: counted.iter().map(|c| c.centers.len()).collect(),
        net_sizes: counted.iter().map(|c| c.net_size).collect(),
        max_count,
        fitted_exponent: slope(&xs, &ys),
        claimed,
        envelope_constant,
    })
}

/// Every sampled (ε, r, x) with countNetInBall > bigC·(r/ε)^delta.
pub fn verify_dimension_bound(
    p: &PointSet,
    delta: f64,
    big_c: f64,
    pairs: &[ScalePair],
    centers_per_pair: usize,
    seed: u64,
) -> Result<Vec<Violation>, DimensionError> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(DimensionError::NonPositive("delta"));
    }
    if big_c.is_nan() || big_c <= 0.0 {
        return Err(DimensionError::NonPositive("bigC"));
    }
    let counted = count_pairs(p, pairs, centers_per_pair, seed)?;
    let mut out = Vec::new();
    for (sp, pc) in pairs.iter().zip(&counted) {
        let bound = big_c * sp.ratio().powf(delta);
        for (x, &c) in pc.centers.iter().zip(&pc.counts) {
            if c as f64 > bound {
                out.push(Violation {
                    eps: sp.eps.clone(),
                    r: sp.r.clone(),
                    center: x.clone(),
                    count: c,
                    bound,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::gen_integer_grid;

    #[test]
    fn line_has_dimension_one() {
        let pts: Vec<Vec<i64>> = (1..=400).map(|x| vec![x]).collect();
        let p = PointSet::from_int_coords(1, &pts).unwrap();
        // Ball counts are 2r/ε + 1 on a line, so keep the ratios large.
        let pairs = ladder(&[int(1)], &[int(4), int(16), int(64)]);
        let r = estimate_dimension(&p, &pairs, 10_000, 1, Some(1.0)).unwrap();
        assert!((r.fitted_exponent.unwrap() - 1.0).abs() < 0.1, "{r:?}");
    }

    #[test]
    fn geometric_ladder_shape() {
        let f = crate::fractal::gen_f(&crate::fractal::CrossbarParams::new(3, 1, 2, 4).unwrap()).unwrap();
        let pairs = geometric_ladder(&f, 3, &int(1));
        // S = 81: ε ∈ {9, 3, 1}, r up to 27.
        let got: Vec<(i64, i64)> = pairs
            .iter()
            .map(|p| {
                (
                    p.eps.to_integer().try_into().unwrap(),
                    p.r.to_integer().try_into().unwrap(),
                )
            })
            .collect();
        assert_eq!(got, vec![(1, 3), (1, 9), (1, 27), (3, 9), (3, 27), (9, 27)]);
    }

    #[test]
    fn degenerate_ladder_has_no_fit() {
        let p = gen_integer_grid(5, 2).unwrap();
        let pairs = ladder(&[int(1), int(2)], &[int(3)]);
        let r = estimate_dimension(&p, &pairs, 100, 0, None).unwrap();
        assert_eq!(r.fitted_exponent, None);
    }

    #[test]
    fn bad_pairs_rejected() {
        let p = gen_integer_grid(3, 2).unwrap();
        let pairs = vec![ScalePair::new(int(2), int(3))];
        assert_eq!(
            estimate_dimension(&p, &pairs, 10, 0, None).unwrap_err(),
            DimensionError::BadPair(0)
        );
    }

    #[test]
    fn grid_violates_low_dimension_bound() {
        let p = gen_integer_grid(27, 2).unwrap();
        let pairs = vec![ScalePair::new(int(1), int(27))];
        let v = verify_dimension_bound(&p, 1.2, 10.0, &pairs, 10_000, 0).unwrap();
        assert!(!v.is_empty());
        assert!(v.iter().all(|x| x.count as f64 > x.bound));
    }

    #[test]
    fn single_point_never_violates() {
        let p = PointSet::from_int_coords(2, &[vec![3, 3]]).unwrap();
        let pairs = ladder(&[int(1)], &[int(2), int(10)]);
        assert!(verify_dimension_bound(&p, 0.5, 1.0, &pairs, 10, 0).unwrap().is_empty());
    }
}
