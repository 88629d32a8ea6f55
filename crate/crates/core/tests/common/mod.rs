//! Brute-force oracles for the two invariance lemmas, shared by the acceptance runner and the
//! property tests.

#![allow(dead_code)]

use cantor_forge::geometry::rational::{int, ratio};
use cantor_forge::geometry::{
    build_epsilon_net, count_net_in_ball, scale_point, scale_point_set, sq_dist, substitute_point_set, NetOrder, Point,
    PointSet, Rational,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Pairwise ≥ ε and every point of `p` strictly within ε of `n`, by exhaustive comparison.
pub fn is_net_brute(p: &PointSet, n: &PointSet, eps: &Rational) -> bool {
    let e2 = eps * eps;
    let pts = n.points();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if sq_dist(&pts[i], &pts[j]).unwrap() < e2 {
                return false;
            }
        }
    }
    p.points()
        .iter()
        .all(|q| pts.iter().any(|x| sq_dist(q, x).unwrap() < e2))
}

pub fn random_points(rng: &mut ChaCha8Rng, dim: usize, count: usize, span: i64) -> PointSet {
    let mut raw: Vec<Vec<i64>> = (0..count)
        .map(|_| (0..dim).map(|_| rng.gen_range(0..=span)).collect())
        .collect();
    raw.sort();
    raw.dedup();
    PointSet::from_int_coords(dim, &raw).unwrap()
}

pub fn random_rational(rng: &mut ChaCha8Rng, num: std::ops::RangeInclusive<i64>, den: i64) -> Rational {
    ratio(rng.gen_range(num), rng.gen_range(1..=den))
}

/// Probe centers: every input point plus a few random rational points near the bounding box.
fn probes(rng: &mut ChaCha8Rng, p: &PointSet, extra: usize, span: i64) -> Vec<Point> {
    let mut out: Vec<Point> = p.points().to_vec();
    for _ in 0..extra {
        out.push(Point::new(
            (0..p.dim())
                .map(|_| ratio(rng.gen_range(-2 * span..=6 * span), 4))
                .collect(),
        ));
    }
    out
}

/// Scaling: the scaled net is a cε-net of the scaled set, and ball counts agree exactly.
pub fn scaling_holds(p: &PointSet, eps: &Rational, c: &Rational, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let net = build_epsilon_net(p, eps, NetOrder::Seeded(seed)).map_err(|e| e.to_string())?;
    if !is_net_brute(p, &net.net, eps) {
        return Err("greedy output is not an ε-net".into());
    }
    let sp = scale_point_set(p, c).map_err(|e| e.to_string())?;
    let sn = scale_point_set(&net.net, c).map_err(|e| e.to_string())?;
    if !is_net_brute(&sp, &sn, &(c * eps)) {
        return Err(format!("scaled net is not a {}-net", c * eps));
    }
    let mut checked = 0;
    for x in probes(&mut rng, p, 8, 10) {
        for r in [
            eps.clone(),
            eps * int(2),
            eps * ratio(7, 2),
            random_rational(&mut rng, 1..=40, 3),
        ] {
            let a = count_net_in_ball(&net.net, &x, &r).unwrap();
            let b = count_net_in_ball(&sn, &scale_point(&x, c), &(c * &r)).unwrap();
            if a != b {
                return Err(format!("count {a} vs {b} at x={x:?} r={r}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Substitution: points on a lattice of spacing `gap`, gadgets of at most `k` points within `c`
/// (4c < gap), and |P′ ∩ B(x,r)| ≤ k·|P ∩ B(x,r+c)| at every probe.
pub fn substitution_holds(seed: u64, dim: usize, k: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gap = 12i64;
    let count = rng.gen_range(2..=12);
    let base = random_points(&mut rng, dim, count, 6);
    let p = PointSet::new(dim, base.points().iter().map(|q| scale_point(q, &int(gap))).collect()).unwrap();
    // c < gap/4 so the separation precondition d > 4c holds.
    let c = ratio(rng.gen_range(1..=11), 4);
    let c2 = &c * &c;
    let gadgets: Vec<Vec<Point>> = p
        .points()
        .iter()
        .map(|q| {
            let size = rng.gen_range(1..=k);
            let mut g = Vec::new();
            while g.len() < size {
                let off: Vec<Rational> = (0..dim).map(|_| &c * ratio(rng.gen_range(-8..=8), 8)).collect();
                let o = Point::new(off);
                if sq_dist(&o, &Point::new(vec![int(0); dim])).unwrap() <= c2 {
                    g.push(q.translate(&o));
                }
            }
            g
        })
        .collect();
    let sub = substitute_point_set(&p, &gadgets, &c, k).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for x in probes(&mut rng, &sub, 6, gap * 6) {
        for r in [ratio(1, 2), c.clone(), int(gap), random_rational(&mut rng, 1..=120, 4)] {
            let lhs = count_net_in_ball(&sub, &x, &r).unwrap();
            let rhs = count_net_in_ball(&p, &x, &(&r + &c)).unwrap();
            if lhs > k * rhs {
                return Err(format!("{lhs} > {k}·{rhs} at x={x:?} r={r}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// One (P, c, gadget) trial: a random set and scale factor plus a random substitution.
pub fn invariance_trial(seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let dim = rng.gen_range(1..=3);
    let count = rng.gen_range(3..=40);
    let p = random_points(&mut rng, dim, count, 20);
    let eps = random_rational(&mut rng, 1..=12, 3);
    let c = random_rational(&mut rng, 1..=15, 7);
    let a = scaling_holds(&p, &eps, &c, seed)?;
    let b = substitution_holds(seed, dim, rng.gen_range(1..=5))?;
    Ok(a + b)
}
