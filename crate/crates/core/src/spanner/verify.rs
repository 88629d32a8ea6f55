use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::paths::{shortest_path, sssp, TIE};
use super::{SpannerError, SpannerGraph};
use crate::geometry::lattice::{sq, IntLattice};
use crate::geometry::rational::{self, Rational};
use crate::geometry::sq_dist_unchecked;

pub const VERIFY_LIMIT: usize = 5000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StretchReport {
    pub c: f64,
    /// max d_G/d₂ over all pairs; `None` when G is disconnected.
    pub max_stretch: Option<f64>,
    pub worst_pair: Option<(usize, usize)>,
    pub connected: bool,
    /// d_G ≥ d₂ − tolerance on every pair.
    pub lower_ok: bool,
    pub pairs: usize,
    /// Pairs whose float comparison against c·d₂ fell inside the guard band.
    pub guarded: usize,
    /// Guarded pairs where d_G = c·d₂ holds exactly.
    pub exact_ties: usize,
    pub ok: bool,
}

/// (coefficient, squarefree radicand) with √x = coefficient·√radicand, or `None` if too big to factor.
fn radical(x: &Rational) -> Option<(Rational, BigInt)> {
    if x.is_zero() {
        return Some((Rational::zero(), BigInt::one()));
    }
    let den = x.denom().clone();
    let mut n = x.numer() * &den;
    if n.bits() > 100 {
        return None;
    }
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    let cube = n.cbrt() + 1;
    while p <= cube {
        let p2 = &p * &p;
        while (&n % &p2).is_zero() {
            n /= &p2;
            out *= &p;
        }
        p += 1;
    }
    // What is left has at most two prime factors above the cube root.
    let r = n.sqrt();
    if &r * &r == n && r > BigInt::one() {
        out *= &r;
        n = BigInt::one();
    }
    Some((Rational::new(out, den), n))
}

/// Exact test of Σ√a_i = Σ√b_j for nonnegative rationals, using linear independence of
/// square roots of distinct squarefree integers. `None` when a radicand is too large.
pub fn sqrt_sums_equal(a: &[Rational], b: &[Rational]) -> Option<bool> {
    let mut acc: BTreeMap<BigInt, Rational> = BTreeMap::new();
    for (xs, sign) in [(a, 1), (b, -1)] {
        for x in xs {
            let (c, m) = radical(x)?;
            let e = acc.entry(m).or_insert_with(Rational::zero);
            if sign > 0 {
                *e += c;
            } else {
                *e -= c;
            }
        }
    }
    Some(acc.values().all(|v| v.is_zero()))
}

/// Sign of Σ√a_i − Σ√b_j: exact when the sums agree, otherwise by interval bounds on the
/// roots at growing decimal precision.
pub fn cmp_sqrt_sums(a: &[Rational], b: &[Rational]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if sqrt_sums_equal(a, b) == Some(true) {
        return Ordering::Equal;
    }
    let bounds = |xs: &[Rational], digits: u32| -> (Rational, Rational) {
        let s = num_traits::pow(BigInt::from(10), digits as usize);
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for x in xs {
            let q = x.denom().clone();
            let r = (x.numer() * &q * &s * &s).sqrt();
            let d = &q * &s;
            lo += Rational::new(r.clone(), d.clone());
            hi += Rational::new(r + 1, d);
        }
        (lo, hi)
    };
    for digits in [20, 60, 180, 540] {
        let (alo, ahi) = bounds(a, digits);
        let (blo, bhi) = bounds(b, digits);
        if ahi < blo {
            return Ordering::Less;
        }
        if bhi < alo {
            return Ordering::Greater;
        }
    }
    Ordering::Equal
}

/// All-pairs stretch with float Dijkstra; comparisons inside the guard band are re-decided
/// exactly along the reported shortest path when possible.
pub fn verify_spanner(g: &SpannerGraph, c: &Rational) -> Result<StretchReport, SpannerError> {
    let n = g.len();
    if n > VERIFY_LIMIT {
        return Err(SpannerError::TooLarge { n, limit: VERIFY_LIMIT });
    }
    let cf = rational::to_f64(c);
    let lat = IntLattice::build(g.points().points(), &[]);
    let scale = lat
        .as_ref()
        .map(|l| l.scale.to_f64().unwrap_or(f64::INFINITY))
        .unwrap_or(1.0);
    let euclid = |u: usize, v: usize| -> f64 {
        match &lat {
            Some(l) if scale.is_finite() => (sq(l.at(u), l.at(v)) as f64).sqrt() / scale,
            _ => rational::to_f64(&sq_dist_unchecked(g.points().point(u), g.points().point(v))).sqrt(),
        }
    };

    struct Row {
        worst: f64,
        worst_v: usize,
        lower_ok: bool,
        connected: bool,
        guard: Vec<usize>,
    }
    let rows: Vec<Row> = (0..n)
        .into_par_iter()
        .map(|u| {
            let dist = sssp(g, u);
            let mut row = Row {
                worst: 1.0,
                worst_v: u,
                lower_ok: true,
                connected: true,
                guard: Vec::new(),
            };
            for v in u + 1..n {
                let dg = dist[v];
                if dg.is_infinite() {
                    row.connected = false;
                    continue;
                }
                let d2 = euclid(u, v);
                if dg < d2 * (1.0 - TIE) {
                    row.lower_ok = false;
                }
                if (dg - cf * d2).abs() <= TIE * cf * d2 {
                    row.guard.push(v);
                }
                let s = dg / d2;
                if s > row.worst {
                    row.worst = s;
                    row.worst_v = v;
                }
            }
            row
        })
        .collect();

    let connected = rows.iter().all(|r| r.connected);
    let lower_ok = rows.iter().all(|r| r.lower_ok);
    let mut worst = (1.0, None);
    for (u, r) in rows.iter().enumerate() {
        if r.worst_v != u && r.worst > worst.0 {
            worst = (r.worst, Some((u, r.worst_v)));
        }
    }
    let mut guarded = 0;
    let mut exact_ties = 0;
    let mut guard_fail = false;
    let c2 = c * c;
    for (u, r) in rows.iter().enumerate() {
        for &v in &r.guard {
            guarded += 1;
            let Some((_, path)) = shortest_path(g, u, v) else {
                continue;
            };
            let lhs: Vec<Rational> = path
                .windows(2)
                .map(|w| sq_dist_unchecked(g.points().point(w[0]), g.points().point(w[1])))
                .collect();
            let rhs = vec![&c2 * sq_dist_unchecked(g.points().point(u), g.points().point(v))];
            match cmp_sqrt_sums(&lhs, &rhs) {
                std::cmp::Ordering::Equal => exact_ties += 1,
                std::cmp::Ordering::Greater => guard_fail = true,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let max_stretch = connected.then_some(worst.0);
    // Outside the guard band the float verdict is reliable; inside it the exact one rules.
    let over_band = rows.iter().any(|r| r.worst > cf * (1.0 + TIE));
    let ok = connected && lower_ok && !over_band && !guard_fail;
    Ok(StretchReport {
        c: cf,
        max_stretch,
        worst_pair: worst.1,
        connected,
        lower_ok,
        pairs: n * (n - 1) / 2,
        guarded,
        exact_ties,
        ok,
    })
}
