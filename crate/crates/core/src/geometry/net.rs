use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lattice::{sq, Buckets, IntLattice};
use super::rational::{self, Rational};
use super::{sq_dist, sq_dist_unchecked, GeometryError, Point, PointSet};

/// Scan order for the greedy net.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NetOrder {
    Identity,
    Seeded(u64),
}

pub fn scan_order(n: usize, order: NetOrder) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    if let NetOrder::Seeded(s) = order {
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
    }
    idx
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetReport {
    #[serde(with = "rational::pair")]
    pub epsilon: Rational,
    pub net: PointSet,
    /// Index in the input of each net point.
    pub indices: Vec<usize>,
    pub packing_ok: bool,
    /// Squared covering radius: max over the input of the squared distance to the net.
    #[serde(with = "rational::pair")]
    pub covering_radius_sq: Rational,
}

impl NetReport {
    pub fn covering_radius(&self) -> f64 {
        rational::to_f64(&self.covering_radius_sq).sqrt()
    }

    /// Packing (pairwise ≥ ε) and covering (< ε) both hold.
    pub fn is_net(&self) -> bool {
        self.packing_ok && self.covering_radius_sq < &self.epsilon * &self.epsilon
    }
}

/// Greedy sequential ε-net: a point is admitted iff it is at distance ≥ ε from all admitted points.
pub fn build_epsilon_net(p: &PointSet, eps: &Rational, order: NetOrder) -> Result<NetReport, GeometryError> {
    if *eps <= rational::int(0) {
        return Err(GeometryError::NonPositive("epsilon"));
    }
    let eps_sq = eps * eps;
    let ord = scan_order(p.len(), order);
    let pts = p.points();
    let fast = IntLattice::build(pts, &[eps]).and_then(|lat| {
        let thr = lat.strict_threshold(&eps_sq)?;
        Some((lat, thr))
    });
    let (indices, packing_ok, cover) = match fast {
        Some((lat, thr)) => net_lattice(&lat, thr, &eps_sq, &ord),
        None => net_exact(pts, &eps_sq, &ord),
    };
    Ok(NetReport {
        epsilon: eps.clone(),
        net: p.subset(&indices),
        indices,
        packing_ok,
        covering_radius_sq: cover,
    })
}

fn net_lattice(lat: &IntLattice, thr: i128, eps_sq: &Rational, ord: &[usize]) -> (Vec<usize>, bool, Rational) {
    let cell = lat.cell_for(eps_sq);
    let mut b = Buckets::new(cell);
    let mut chosen = Vec::new();
    for &i in ord {
        let c = lat.at(i);
        let mut free = true;
        b.for_near(c, |j| {
            if sq(lat.at(j), c) < thr {
                free = false;
            }
            free
        });
        if free {
            b.insert(c, i);
            chosen.push(i);
        }
    }
    // Independent re-verification of both net properties.
    let mut packing_ok = true;
    for &i in &chosen {
        let c = lat.at(i);
        b.for_near(c, |j| {
            if j != i && sq(lat.at(j), c) < thr {
                packing_ok = false;
            }
            packing_ok
        });
    }
    let mut worst: i128 = 0;
    let mut uncovered = false;
    for i in 0..lat.len() {
        let c = lat.at(i);
        let mut best: Option<i128> = None;
        b.for_near(c, |j| {
            let s = sq(lat.at(j), c);
            if best.is_none_or(|v| s < v) {
                best = Some(s);
            }
            true
        });
        match best {
            Some(s) if s < thr => worst = worst.max(s),
            _ => uncovered = true,
        }
    }
    let scale_sq = Rational::from_integer(&lat.scale * &lat.scale);
    let cover = if uncovered {
        // Fall back to an exact global scan to report the true radius.
        let mut w: i128 = 0;
        for i in 0..lat.len() {
            let c = lat.at(i);
            let m = chosen.iter().map(|&j| sq(lat.at(j), c)).min().unwrap_or(0);
            w = w.max(m);
        }
        Rational::from_integer(w.into()) / scale_sq
    } else {
        Rational::from_integer(worst.into()) / scale_sq
    };
    (chosen, packing_ok, cover)
}

fn net_exact(pts: &[Point], eps_sq: &Rational, ord: &[usize]) -> (Vec<usize>, bool, Rational) {
    let mut chosen: Vec<usize> = Vec::new();
    for &i in ord {
        if chosen.iter().all(|&j| sq_dist_unchecked(&pts[i], &pts[j]) >= *eps_sq) {
            chosen.push(i);
        }
    }
    let mut packing_ok = true;
    for (a, &i) in chosen.iter().enumerate() {
        for &j in &chosen[a + 1..] {
            if sq_dist_unchecked(&pts[i], &pts[j]) < *eps_sq {
                packing_ok = false;
            }
        }
    }
    let mut worst = rational::int(0);
    for p in pts {
        let m = chosen
            .iter()
            .map(|&j| sq_dist_unchecked(p, &pts[j]))
            .min()
            .expect("net is nonempty");
        if m > worst {
            worst = m;
        }
    }
    (chosen, packing_ok, worst)
}

/// Exact count of net points within closed distance r of x.
pub fn count_net_in_ball(n: &PointSet, x: &Point, r: &Rational) -> Result<usize, GeometryError> {
    if x.dim() != n.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: n.dim(),
            found: x.dim(),
        });
    }
    if *r <= rational::int(0) {
        return Err(GeometryError::NonPositive("radius"));
    }
    let r_sq = r * r;
    let mut c = 0;
    for p in n.points() {
        if sq_dist(p, x)? <= r_sq {
            c += 1;
        }
    }
    Ok(c)
}
