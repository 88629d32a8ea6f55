//! Geometric ≤-CSP instances, their embedding onto a Cantor crossbar, compilation to
//! unit-ball packing instances, and brute-force oracles for both sides.

mod balls;
mod embed;
mod equiv;
mod solve;

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use balls::{
    ball_alpha, balls_from_csp, check_ball_instance, cubes_disjoint, open_balls_disjoint, selection_to_assignment,
    BallChecks, BallInstance,
};
pub use embed::{embed_csp, EmbeddedCsp};
pub use equiv::{equivalence_suite, equivalence_trial, EquivalenceSummary, EquivalenceTrial};
pub use solve::{brute_solve_csp, max_disjoint_one_per_group, verify_assignment, SelectOutcome, SolveOutcome};

use crate::fractal::FractalError;
use crate::geometry::GeometryError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CspError {
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("variable {0} has an empty unary relation")]
    EmptyRelation(usize),
    #[error("embedding failed: {0}")]
    Embedding(String),
    #[error(transparent)]
    Fractal(#[from] FractalError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Value tuple in ({0} ∪ [Δ])^d.
pub type Value = Vec<u32>;

/// d-dimensional ≤-CSP on grid-placed variables. Coordinates are 0-based in [0, n).
/// Variables without a `unary` entry take the full domain [Δ]^d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeqCspInstance {
    pub d: usize,
    pub n: u32,
    #[serde(rename = "Delta")]
    pub delta: u32,
    pub vars: Vec<Vec<u32>>,
    #[serde(default)]
    pub unary: BTreeMap<usize, Vec<Value>>,
    /// (a, b, axis) with vars[b] = vars[a] + e_axis; the constraint is x_axis(a) ≤ x_axis(b).
    pub edges: Vec<(usize, usize, usize)>,
}

fn all_tuples(d: usize, lo: u32, hi: u32) -> Vec<Value> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|t: Value| {
                (lo..=hi).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

impl LeqCspInstance {
    pub fn validate(&self) -> Result<(), CspError> {
        let bad = |m: String| Err(CspError::Invalid(m));
        if self.d < 2 {
            return bad("d must be at least 2".into());
        }
        if self.n < 1 || self.delta < 1 {
            return bad("n and Delta must be at least 1".into());
        }
        let mut index = HashMap::new();
        for (i, v) in self.vars.iter().enumerate() {
            if v.len() != self.d || v.iter().any(|&c| c >= self.n) {
                return bad(format!("variable {i} at {v:?} is outside [0,{})^{}", self.n, self.d));
            }
            if index.insert(v.clone(), i).is_some() {
                return bad(format!("variable {i} repeats position {v:?}"));
            }
        }
        for (&a, rel) in &self.unary {
            if a >= self.vars.len() {
                return bad(format!("unary relation for unknown variable {a}"));
            }
            if let Some(x) = rel
                .iter()
                .find(|x| x.len() != self.d || x.iter().any(|&c| c > self.delta))
            {
                return bad(format!(
                    "variable {a}: value {x:?} outside {{0..{}}}^{}",
                    self.delta, self.d
                ));
            }
        }
        let mut have = HashSet::new();
        for &(a, b, axis) in &self.edges {
            if a >= self.vars.len() || b >= self.vars.len() || axis >= self.d {
                return bad(format!("edge ({a},{b},{axis}) out of range"));
            }
            let mut want = self.vars[a].clone();
            want[axis] += 1;
            if self.vars[b] != want {
                return bad(format!("edge ({a},{b},{axis}) does not join a to a+e_{axis}"));
            }
            if !have.insert((a, b)) {
                return bad(format!("edge ({a},{b}) repeated"));
            }
        }
        // The primal graph must be induced: adjacent variables carry an edge.
        for (a, v) in self.vars.iter().enumerate() {
            for axis in 0..self.d {
                let mut w = v.clone();
                w[axis] += 1;
                if let Some(&b) = index.get(&w) {
                    if !have.contains(&(a, b)) {
                        return bad(format!("adjacent variables {a} and {b} lack an edge"));
                    }
                }
            }
        }
        Ok(())
    }

    /// R_a, sorted lexicographically and deduplicated.
    pub fn relation(&self, a: usize) -> Vec<Value> {
        let mut r = match self.unary.get(&a) {
            Some(r) => r.clone(),
            None => all_tuples(self.d, 1, self.delta),
        };
        r.sort();
        r.dedup();
        r
    }

    /// Whether any relation uses the extra value 0.
    pub fn uses_zero(&self) -> bool {
        self.unary.values().flatten().flatten().any(|&c| c == 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }
}

/// Random instance on a random induced subset of [0,n)^d. Relations are random nonempty subsets
/// of [Δ]^d; with `force_unsat`, one edge gets singleton relations violating its ≤.
pub fn random_leq_csp(seed: u64, d: usize, n: u32, delta: u32, force_unsat: bool) -> LeqCspInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = all_tuples(d, 0, n - 1);
    let mut vars: Vec<Vec<u32>> = cells.into_iter().filter(|_| rng.gen_bool(0.8)).collect();
    if vars.len() < 2 && n > 1 {
        vars = vec![vec![0; d], {
            let mut v = vec![0; d];
            v[0] = 1;
            v
        }];
    }
    if vars.is_empty() {
        vars.push(vec![0; d]);
    }
    let index: HashMap<Vec<u32>, usize> = vars.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let mut edges = Vec::new();
    for (a, v) in vars.iter().enumerate() {
        for axis in 0..d {
            let mut w = v.clone();
            w[axis] += 1;
            if let Some(&b) = index.get(&w) {
                edges.push((a, b, axis));
            }
        }
    }
    let full = all_tuples(d, 1, delta);
    let mut unary = BTreeMap::new();
    for a in 0..vars.len() {
        let k = rng.gen_range(1..=full.len());
        let mut r: Vec<Value> = full.choose_multiple(&mut rng, k).cloned().collect();
        r.sort();
        unary.insert(a, r);
    }
    if force_unsat && !edges.is_empty() {
        let &(a, b, axis) = edges.choose(&mut rng).expect("non-empty");
        let hi = vec![delta; d];
        let mut lo = vec![1; d];
        lo[axis] = delta.saturating_sub(1);
        unary.insert(a, vec![hi]);
        unary.insert(b, vec![lo]);
    }
    LeqCspInstance {
        d,
        n,
        delta,
        vars,
        unary,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_adjacent(ra: Vec<Value>, rb: Vec<Value>) -> LeqCspInstance {
        LeqCspInstance {
            d: 2,
            n: 2,
            delta: 2,
            vars: vec![vec![0, 0], vec![1, 0]],
            unary: BTreeMap::from([(0, ra), (1, rb)]),
            edges: vec![(0, 1, 0)],
        }
    }

    #[test]
    fn validation() {
        let i = two_adjacent(vec![vec![1, 1]], vec![vec![2, 2]]);
        assert!(i.validate().is_ok());
        let mut missing = i.clone();
        missing.edges.clear();
        assert!(missing.validate().is_err());
        let mut reversed = i.clone();
        reversed.edges = vec![(1, 0, 0)];
        assert!(reversed.validate().is_err());
        let mut big = i.clone();
        big.unary.insert(0, vec![vec![3, 1]]);
        assert!(big.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let i = two_adjacent(vec![vec![1, 2]], vec![vec![2, 1]]);
        let s = i.to_json();
        assert!(s.contains("\"Delta\":2"));
        let back: LeqCspInstance = serde_json::from_str(&s).unwrap();
        assert_eq!(back, i);
    }

    #[test]
    fn random_instances_validate() {
        for seed in 0..50 {
            let i = random_leq_csp(seed, 2, 1 + (seed % 3) as u32, 1 + (seed % 3) as u32, seed % 4 == 0);
            i.validate().unwrap();
        }
    }

    #[test]
    fn default_relation_is_full_domain() {
        let mut i = two_adjacent(vec![vec![1, 1]], vec![vec![2, 2]]);
        i.unary.remove(&1);
        assert_eq!(i.relation(1).len(), 4);
    }
}
