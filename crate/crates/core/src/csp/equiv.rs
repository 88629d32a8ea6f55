use serde::{Deserialize, Serialize};

use super::{
    balls_from_csp, brute_solve_csp, check_ball_instance, embed_csp, max_disjoint_one_per_group, random_leq_csp,
    selection_to_assignment, verify_assignment, CspError, LeqCspInstance, SelectOutcome, SolveOutcome,
};

/// One instance run through I → I′ → balls.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceTrial {
    pub seed: u64,
    pub n: u32,
    #[serde(rename = "Delta")]
    pub delta: u32,
    pub forced_unsat: bool,
    /// `None` when a search ran out of budget.
    pub sat_i: Option<bool>,
    pub sat_embedded: Option<bool>,
    pub full_selection: Option<bool>,
    pub ball_checks_ok: bool,
    /// The selection decodes to an assignment of I′ whose restriction satisfies I.
    pub round_trip_ok: Option<bool>,
    pub chains: usize,
    pub balls: usize,
}

impl EquivalenceTrial {
    pub fn budget_hit(&self) -> bool {
        self.sat_i.is_none() || self.sat_embedded.is_none() || self.full_selection.is_none()
    }

    pub fn agrees(&self) -> bool {
        !self.budget_hit()
            && self.ball_checks_ok
            && self.sat_i == self.sat_embedded
            && self.sat_i == self.full_selection
            && self.round_trip_ok != Some(false)
    }
}

fn sat_of(o: &SolveOutcome) -> Option<bool> {
    match o {
        SolveOutcome::Sat(_) => Some(true),
        SolveOutcome::Unsat => Some(false),
        SolveOutcome::Budget => None,
    }
}

pub fn equivalence_trial(
    i: &LeqCspInstance,
    seed: u64,
    forced_unsat: bool,
    l: u32,
    v: u32,
    budget: u64,
) -> Result<EquivalenceTrial, CspError> {
    let e = embed_csp(i, l, v)?;
    let sat_i = sat_of(&brute_solve_csp(i, budget)?);
    let sat_embedded = sat_of(&brute_solve_csp(&e.instance, budget)?);
    let b = balls_from_csp(&e.instance)?;
    let ball_checks_ok = check_ball_instance(&b)?.ok();
    let sel = max_disjoint_one_per_group(&b, budget);
    let (full_selection, round_trip_ok) = match &sel {
        SelectOutcome::Full(s) => {
            let ok = selection_to_assignment(&b, s).ok().is_some_and(|h| {
                if verify_assignment(&e.instance, &h).is_err() {
                    return false;
                }
                let mut back = vec![Vec::new(); i.vars.len()];
                for (k, o) in e.origin.iter().enumerate() {
                    if let Some(a) = o {
                        back[*a] = h[k].clone();
                    }
                }
                verify_assignment(i, &back).is_ok()
            });
            (Some(true), Some(ok))
        }
        SelectOutcome::None => (Some(false), None),
        SelectOutcome::Budget => (None, None),
    };
    Ok(EquivalenceTrial {
        seed,
        n: i.n,
        delta: i.delta,
        forced_unsat,
        sat_i,
        sat_embedded,
        full_selection,
        ball_checks_ok,
        round_trip_ok,
        chains: e.chain_count(),
        balls: b.centers.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceSummary {
    pub count: usize,
    pub agreed: usize,
    pub budget_hits: usize,
    pub sat: usize,
    pub trials: Vec<EquivalenceTrial>,
}

/// `count` seeded instances. Trial t uses seed `seed + t`, n = 1 + t mod n_max,
/// Δ = 1 + (t / n_max) mod Δ_max, and forces UNSAT on every fourth trial.
#[allow(clippy::too_many_arguments)]
pub fn equivalence_suite(
    seed: u64,
    count: usize,
    d: usize,
    n_max: u32,
    delta_max: u32,
    l: u32,
    v: u32,
    budget: u64,
) -> Result<EquivalenceSummary, CspError> {
    if n_max == 0 || delta_max == 0 {
        return Err(CspError::Invalid("n and Delta bounds must be positive".into()));
    }
    let mut trials = Vec::with_capacity(count);
    for t in 0..count as u64 {
        let s = seed.wrapping_add(t);
        let n = 1 + (t % n_max as u64) as u32;
        let delta = 1 + ((t / n_max as u64) % delta_max as u64) as u32;
        let unsat = t % 4 == 3;
        let i = random_leq_csp(s, d, n, delta, unsat);
        trials.push(equivalence_trial(&i, s, unsat, l, v, budget)?);
    }
    Ok(EquivalenceSummary {
        count,
        agreed: trials.iter().filter(|t| t.agrees()).count(),
        budget_hits: trials.iter().filter(|t| t.budget_hit()).count(),
        sat: trials.iter().filter(|t| t.sat_i == Some(true)).count(),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_agrees() {
        let s = equivalence_suite(7, 24, 2, 3, 3, 3, 1, 1_000_000).unwrap();
        assert_eq!(s.agreed, s.count);
        assert!(s.sat > 0 && s.sat < s.count);
    }

    #[test]
    fn forced_unsat_is_unsat() {
        let s = equivalence_suite(0, 8, 2, 2, 2, 3, 1, 1_000_000).unwrap();
        for t in s.trials.iter().filter(|t| t.forced_unsat) {
            assert_eq!(t.sat_i, Some(false));
        }
    }
}
