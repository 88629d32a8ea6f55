use super::TspError;
use crate::geometry::{dist_f64, PointSet};

pub const HELD_KARP_LIMIT: usize = 18;

/// Relative slack when comparing candidate lengths, so that float noise never flips a tie.
const GUARD: f64 = 1e-9;

fn table(p: &PointSet) -> Vec<Vec<f64>> {
    let n = p.len();
    (0..n)
        .map(|i| (0..n).map(|j| dist_f64(p.point(i), p.point(j))).collect())
        .collect()
}

/// Subset DP for the shortest Hamiltonian path. `start`/`end` pin endpoints when given.
fn solve(p: &PointSet, start: Option<usize>, end: Option<usize>) -> Result<(f64, Vec<usize>), TspError> {
    let n = p.len();
    if n > HELD_KARP_LIMIT {
        return Err(TspError::TooLarge {
            n,
            limit: HELD_KARP_LIMIT,
        });
    }
    for e in [start, end].into_iter().flatten() {
        if e >= n {
            return Err(TspError::Invalid(format!("endpoint {e} out of range")));
        }
    }
    if n == 1 {
        return Ok((0.0, vec![0]));
    }
    if start.is_some() && start == end {
        return Err(TspError::Invalid("start and end coincide".into()));
    }
    let w = table(p);
    let full = (1usize << n) - 1;
    let mut dp = vec![f64::INFINITY; (full + 1) * n];
    let mut parent = vec![u8::MAX; (full + 1) * n];
    for s in 0..n {
        if start.is_none_or(|t| t == s) {
            dp[(1 << s) * n + s] = 0.0;
        }
    }
    for mask in 1..=full {
        for last in 0..n {
            let cur = dp[mask * n + last];
            if !cur.is_finite() {
                continue;
            }
            for next in 0..n {
                if mask & (1 << next) != 0 {
                    continue;
                }
                // The pinned end may only close the path.
                if end == Some(next) && (mask | (1 << next)) != full {
                    continue;
                }
                let nm = mask | (1 << next);
                let cand = cur + w[last][next];
                let slot = nm * n + next;
                if cand < dp[slot] * (1.0 - GUARD) || !dp[slot].is_finite() {
                    dp[slot] = cand;
                    parent[slot] = last as u8;
                }
            }
        }
    }
    let mut best = (f64::INFINITY, usize::MAX);
    for last in 0..n {
        if end.is_some_and(|e| e != last) {
            continue;
        }
        let v = dp[full * n + last];
        if v < best.0 * (1.0 - GUARD) || !best.0.is_finite() {
            best = (v, last);
        }
    }
    if !best.0.is_finite() {
        return Err(TspError::Invalid("no Hamiltonian path".into()));
    }
    let mut path = vec![best.1];
    let mut mask = full;
    let mut cur = best.1;
    while mask.count_ones() > 1 {
        let prev = parent[mask * n + cur] as usize;
        mask &= !(1 << cur);
        cur = prev;
        path.push(cur);
    }
    path.reverse();
    Ok((best.0, path))
}

/// Shortest open path through all points, both ends free. At most 18 points.
pub fn held_karp_optimal_path(p: &PointSet) -> Result<(f64, Vec<usize>), TspError> {
    solve(p, None, None)
}

/// Shortest Hamiltonian path from `s` to `t`.
pub fn held_karp_path_between(p: &PointSet, s: usize, t: usize) -> Result<(f64, Vec<usize>), TspError> {
    solve(p, Some(s), Some(t))
}

pub(crate) fn path_length(p: &PointSet, path: &[usize]) -> f64 {
    path.windows(2).map(|w| dist_f64(p.point(w[0]), p.point(w[1]))).sum()
}
