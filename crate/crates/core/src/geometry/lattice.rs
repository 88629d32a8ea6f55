//! Common-denominator integer images of rational point sets, bucketed for radius queries.
//! Every comparison is still exact.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;
use super::{sq_dist_unchecked, Point};

const COORD_LIMIT: i128 = 1 << 56;

#[derive(Clone, Debug)]
pub(crate) struct IntLattice {
    pub dim: usize,
    pub scale: BigInt,
    pub coords: Vec<i128>,
}

impl IntLattice {
    /// Scales by the lcm of all denominators (and of `extra`); `None` when coordinates get too large.
    pub fn build(points: &[Point], extra: &[&Rational]) -> Option<IntLattice> {
        let dim = points.first()?.dim();
        let mut scale = BigInt::one();
        for p in points {
            for c in &p.0 {
                scale = scale.lcm(c.denom());
            }
        }
        for r in extra {
            scale = scale.lcm(r.denom());
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            for c in &p.0 {
                let v = (c.numer() * (&scale / c.denom())).to_i128()?;
                if v.abs() > COORD_LIMIT {
                    return None;
                }
                coords.push(v);
            }
        }
        Some(IntLattice { dim, scale, coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn at(&self, i: usize) -> &[i128] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn image(&self, p: &Point) -> Option<Vec<i128>> {
        p.0.iter()
            .map(|c| {
                let s = c * Rational::from_integer(self.scale.clone());
                if s.denom().is_one() {
                    s.numer().to_i128().filter(|v| v.abs() <= COORD_LIMIT)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Largest integer s with s ≤ r²·scale², i.e. the closed-ball threshold.
    pub fn closed_threshold(&self, r_sq: &Rational) -> Option<i128> {
        let s = r_sq * Rational::from_integer(&self.scale * &self.scale);
        s.floor().to_integer().to_i128()
    }

    /// Smallest integer t with (s < r²·scale² ⇔ s < t).
    pub fn strict_threshold(&self, r_sq: &Rational) -> Option<i128> {
        let s = r_sq * Rational::from_integer(&self.scale * &self.scale);
        s.ceil().to_integer().to_i128()
    }

    /// Bucket side in lattice units covering a radius with squared value `r_sq`.
    pub fn cell_for(&self, r_sq: &Rational) -> i128 {
        let s = r_sq * Rational::from_integer(&self.scale * &self.scale);
        let v = s.ceil().to_integer();
        let root = if v.is_negative() || v.is_zero() {
            BigInt::one()
        } else {
            let r = v.sqrt();
            if &r * &r < v {
                r + 1
            } else {
                r
            }
        };
        root.to_i128().unwrap_or(i128::MAX / 4).max(1)
    }
}

pub(crate) fn sq(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Uniform grid of buckets over a subset of lattice points.
pub(crate) struct Buckets {
    cell: i128,
    map: HashMap<Vec<i128>, Vec<usize>>,
}

impl Buckets {
    pub fn new(cell: i128) -> Self {
        Buckets {
            cell,
            map: HashMap::new(),
        }
    }

    fn key(&self, c: &[i128]) -> Vec<i128> {
        c.iter().map(|v| v.div_floor(&self.cell)).collect()
    }

    pub fn insert(&mut self, c: &[i128], id: usize) {
        let k = self.key(c);
        self.map.entry(k).or_default().push(id);
    }

    /// Ids in the 3^d block of buckets around `c`.
    pub fn for_near(&self, c: &[i128], mut f: impl FnMut(usize) -> bool) {
        let base = self.key(c);
        let d = base.len();
        let mut off = vec![-1i128; d];
        loop {
            let k: Vec<i128> = base.iter().zip(&off).map(|(b, o)| b + o).collect();
            if let Some(ids) = self.map.get(&k) {
                for &id in ids {
                    if !f(id) {
                        return;
                    }
                }
            }
            let mut j = 0;
            loop {
                if j == d {
                    return;
                }
                if off[j] < 1 {
                    off[j] += 1;
                    break;
                }
                off[j] = -1;
                j += 1;
            }
        }
    }
}

/// Repeated closed-ball counts over one point set at one radius.
pub struct BallCounter {
    points: Vec<Point>,
    r_sq: Rational,
    fast: Option<(IntLattice, Buckets, i128)>,
}

impl BallCounter {
    pub fn new(points: &[Point], r: &Rational) -> Self {
        let r_sq = r * r;
        let fast = IntLattice::build(points, &[]).and_then(|lat| {
            let thr = lat.closed_threshold(&r_sq)?;
            let cell = lat.cell_for(&r_sq);
            let mut b = Buckets::new(cell);
            for i in 0..lat.len() {
                b.insert(lat.at(i), i);
            }
            Some((lat, b, thr))
        });
        BallCounter {
            points: points.to_vec(),
            r_sq,
            fast,
        }
    }

    /// Number of points p with sqDist(p, x) ≤ r².
    pub fn count(&self, x: &Point) -> usize {
        if let Some((lat, b, thr)) = &self.fast {
            if let Some(img) = lat.image(x) {
                let mut n = 0;
                b.for_near(&img, |id| {
                    if sq(lat.at(id), &img) <= *thr {
                        n += 1;
                    }
                    true
                });
                return n;
            }
        }
        self.points
            .iter()
            .filter(|p| sq_dist_unchecked(p, x) <= self.r_sq)
            .count()
    }
}
