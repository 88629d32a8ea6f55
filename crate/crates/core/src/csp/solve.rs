use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{BallInstance, CspError, LeqCspInstance, Value};
use crate::geometry::rational::int;
use crate::geometry::sq_dist_unchecked;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "assignment", rename_all = "lowercase")]
pub enum SolveOutcome {
    Sat(Vec<Value>),
    Unsat,
    Budget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "selection", rename_all = "lowercase")]
pub enum SelectOutcome {
    /// One center index per group, in group order.
    Full(Vec<usize>),
    None,
    Budget,
}

/// First violated constraint, if any.
pub fn verify_assignment(i: &LeqCspInstance, h: &[Value]) -> Result<(), String> {
    if h.len() != i.vars.len() {
        return Err(format!("{} values for {} variables", h.len(), i.vars.len()));
    }
    for (a, x) in h.iter().enumerate() {
        if !i.relation(a).contains(x) {
            return Err(format!("variable {a}: {x:?} not in its relation"));
        }
    }
    for &(a, b, axis) in &i.edges {
        if h[a][axis] > h[b][axis] {
            return Err(format!("edge ({a},{b},{axis}): {} > {}", h[a][axis], h[b][axis]));
        }
    }
    Ok(())
}

/// AC-3 from the arcs in `queue`: drops every value of v with no compatible value left at u.
/// Returns false on a wipe-out.
fn propagate(
    doms: &mut [Vec<usize>],
    nbrs: &[Vec<usize>],
    conflict: &dyn Fn(usize, usize, usize, usize) -> bool,
    mut queue: VecDeque<(usize, usize)>,
) -> bool {
    while let Some((u, v)) = queue.pop_front() {
        let before = doms[v].len();
        let du = std::mem::take(&mut doms[u]);
        doms[v].retain(|&y| du.iter().any(|&x| !conflict(u, x, v, y)));
        doms[u] = du;
        if doms[v].is_empty() {
            return false;
        }
        if doms[v].len() != before {
            queue.extend(nbrs[v].iter().filter(|&&w| w != u).map(|&w| (v, w)));
        }
    }
    true
}

/// Backtracking that maintains arc consistency; `conflict(u, x, v, y)` says the choices clash
/// and must be symmetric. Levels are searched in index order and candidates in list order, and
/// propagation never removes a solution, so the first hit is lexicographically least.
fn search(
    mut domains: Vec<Vec<usize>>,
    nbrs: &[Vec<usize>],
    conflict: &dyn Fn(usize, usize, usize, usize) -> bool,
    budget: u64,
) -> Option<Option<Vec<usize>>> {
    let n = domains.len();
    let all_arcs = (0..n).flat_map(|u| nbrs[u].iter().map(move |&v| (u, v))).collect();
    if domains.iter().any(|d| d.is_empty()) || !propagate(&mut domains, nbrs, conflict, all_arcs) {
        return Some(None);
    }
    if n == 0 {
        return Some(Some(vec![]));
    }
    let mut nodes = 0u64;
    // Stack of (domains at that level, next candidate position).
    let mut stack: Vec<(Vec<Vec<usize>>, usize)> = vec![(domains, 0)];
    let mut choice = Vec::with_capacity(n);
    while let Some((doms, pos)) = stack.last_mut() {
        let level = choice.len();
        if *pos >= doms[level].len() {
            stack.pop();
            choice.pop();
            continue;
        }
        let x = doms[level][*pos];
        *pos += 1;
        nodes += 1;
        if nodes > budget {
            return None;
        }
        let mut next = doms.clone();
        next[level] = vec![x];
        let arcs = nbrs[level].iter().map(|&v| (level, v)).collect();
        if !propagate(&mut next, nbrs, conflict, arcs) {
            continue;
        }
        choice.push(x);
        if choice.len() == n {
            return Some(Some(choice));
        }
        stack.push((next, 0));
    }
    Some(None)
}

/// Backtracking over variables in placement order with arc consistency. Values are indices
/// into the sorted relations, so the returned assignment is the lexicographically first.
/// `budget` bounds the number of search nodes.
pub fn brute_solve_csp(i: &LeqCspInstance, budget: u64) -> Result<SolveOutcome, CspError> {
    i.validate()?;
    let rels: Vec<Vec<Value>> = (0..i.vars.len()).map(|a| i.relation(a)).collect();
    let mut nbrs = vec![Vec::new(); i.vars.len()];
    let mut axis_of: HashMap<(usize, usize), (usize, bool)> = HashMap::new();
    for &(a, b, axis) in &i.edges {
        nbrs[a].push(b);
        nbrs[b].push(a);
        axis_of.insert((a, b), (axis, true));
        axis_of.insert((b, a), (axis, false));
    }
    let conflict = |u: usize, x: usize, v: usize, y: usize| -> bool {
        let (axis, forward) = axis_of[&(u, v)];
        let (xu, yv) = (rels[u][x][axis], rels[v][y][axis]);
        if forward {
            xu > yv
        } else {
            yv > xu
        }
    };
    let domains = rels.iter().map(|r| (0..r.len()).collect()).collect();
    Ok(match search(domains, &nbrs, &conflict, budget) {
        None => SolveOutcome::Budget,
        Some(None) => SolveOutcome::Unsat,
        Some(Some(c)) => SolveOutcome::Sat(c.iter().enumerate().map(|(a, &x)| rels[a][x].clone()).collect()),
    })
}

/// One center per group, pairwise disjoint open balls. Groups are taken in order and centers
/// in index order.
pub fn max_disjoint_one_per_group(b: &BallInstance, budget: u64) -> SelectOutcome {
    let members = b.group_members();
    let g = members.len();
    // Cross-group conflicts: only centers in neighbouring unit cells can be within distance 1.
    let mut cells: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let cell_of = |c: usize| -> Vec<i64> {
        b.centers
            .point(c)
            .0
            .iter()
            .map(|x| x.floor().to_integer().try_into().unwrap_or(i64::MAX))
            .collect()
    };
    for c in 0..b.centers.len() {
        cells.entry(cell_of(c)).or_default().push(c);
    }
    let one = int(1);
    let mut clash: HashMap<(usize, usize), bool> = HashMap::new();
    let mut group_nbrs = vec![std::collections::BTreeSet::new(); g];
    for c in 0..b.centers.len() {
        let home = cell_of(c);
        for code in 0..3usize.pow(b.dim as u32) {
            let mut key = home.clone();
            let mut t = code;
            for k in key.iter_mut() {
                *k += (t % 3) as i64 - 1;
                t /= 3;
            }
            for &o in cells.get(&key).into_iter().flatten() {
                if o > c
                    && b.groups[o] != b.groups[c]
                    && sq_dist_unchecked(b.centers.point(c), b.centers.point(o)) < one
                {
                    clash.insert((c, o), true);
                    clash.insert((o, c), true);
                    group_nbrs[b.groups[c]].insert(b.groups[o]);
                    group_nbrs[b.groups[o]].insert(b.groups[c]);
                }
            }
        }
    }
    let nbrs: Vec<Vec<usize>> = group_nbrs.into_iter().map(|s| s.into_iter().collect()).collect();
    let conflict = |_u: usize, x: usize, _v: usize, y: usize| clash.contains_key(&(x, y));
    match search(members, &nbrs, &conflict, budget) {
        None => SelectOutcome::Budget,
        Some(None) => SelectOutcome::None,
        Some(Some(c)) => SelectOutcome::Full(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::tests::two_adjacent;
    use crate::csp::{balls_from_csp, random_leq_csp, selection_to_assignment};
    use std::collections::BTreeMap;

    #[test]
    fn single_variable() {
        let i = LeqCspInstance {
            d: 2,
            n: 1,
            delta: 1,
            vars: vec![vec![0, 0]],
            unary: BTreeMap::from([(0, vec![vec![1, 1]])]),
            edges: vec![],
        };
        assert_eq!(brute_solve_csp(&i, 100).unwrap(), SolveOutcome::Sat(vec![vec![1, 1]]));
        let b = balls_from_csp(&i).unwrap();
        assert_eq!(max_disjoint_one_per_group(&b, 100), SelectOutcome::Full(vec![0]));
    }

    #[test]
    fn decreasing_pair_is_unsat() {
        let i = two_adjacent(vec![vec![2, 1]], vec![vec![1, 1]]);
        assert_eq!(brute_solve_csp(&i, 100).unwrap(), SolveOutcome::Unsat);
        let b = balls_from_csp(&i).unwrap();
        assert_eq!(max_disjoint_one_per_group(&b, 100), SelectOutcome::None);
    }

    #[test]
    fn lexicographic_first() {
        let i = two_adjacent(vec![vec![1, 2], vec![2, 1]], vec![vec![1, 1], vec![2, 2]]);
        assert_eq!(
            brute_solve_csp(&i, 100).unwrap(),
            SolveOutcome::Sat(vec![vec![1, 2], vec![1, 1]])
        );
    }

    #[test]
    fn budget_is_reported() {
        let i = random_leq_csp(3, 2, 3, 3, false);
        assert_eq!(
            brute_solve_csp(&i, 1).unwrap_or(SolveOutcome::Unsat),
            SolveOutcome::Budget
        );
    }

    #[test]
    fn selections_verify() {
        for seed in 0..40 {
            let i = random_leq_csp(seed, 2, 2 + (seed % 2) as u32, 1 + (seed % 3) as u32, seed % 5 == 0);
            let sat = brute_solve_csp(&i, 1_000_000).unwrap();
            let b = balls_from_csp(&i).unwrap();
            match max_disjoint_one_per_group(&b, 1_000_000) {
                SelectOutcome::Full(sel) => {
                    let h = selection_to_assignment(&b, &sel).unwrap();
                    verify_assignment(&i, &h).unwrap();
                    assert!(matches!(sat, SolveOutcome::Sat(_)), "seed {seed}");
                }
                SelectOutcome::None => assert_eq!(sat, SolveOutcome::Unsat, "seed {seed}"),
                SelectOutcome::Budget => panic!("budget"),
            }
        }
    }

    #[test]
    fn verify_catches_violations() {
        let i = two_adjacent(vec![vec![1, 2], vec![2, 1]], vec![vec![1, 1]]);
        assert!(verify_assignment(&i, &[vec![1, 2], vec![1, 1]]).is_ok());
        assert!(verify_assignment(&i, &[vec![2, 1], vec![1, 1]]).is_err());
        assert!(verify_assignment(&i, &[vec![2, 2], vec![1, 1]]).is_err());
        assert!(verify_assignment(&i, &[vec![1, 2]]).is_err());
    }
}
