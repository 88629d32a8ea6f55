use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{CspError, LeqCspInstance, Value};
use crate::fractal::{decompose_crossbar, gen_f, CrossbarParams};
use crate::geometry::Point;

/// I′ together with where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddedCsp {
    pub instance: LeqCspInstance,
    pub params: CrossbarParams,
    /// Index of the source variable in I, for variables placed on M.
    pub origin: Vec<Option<usize>>,
    /// Axis of the chain, for chain variables.
    pub chain_axis: Vec<Option<usize>>,
}

impl EmbeddedCsp {
    pub fn chain_count(&self) -> usize {
        self.chain_axis.iter().filter(|a| a.is_some()).count()
    }
}

/// Places I on the embedded grid M of f^{l,v,d}(m), m the least integer with (l−v)^m ≥ n,
/// and threads chain variables through the connector points between every constrained pair.
pub fn embed_csp(i: &LeqCspInstance, l: u32, v: u32) -> Result<EmbeddedCsp, CspError> {
    i.validate()?;
    let d = i.d;
    let mut m = 0u32;
    while ((l.saturating_sub(v)) as u64).pow(m) < i.n as u64 {
        m += 1;
        if m > 12 {
            return Err(CspError::Embedding("grid too large for the crossbar".into()));
        }
    }
    let params = CrossbarParams::new(l, v, d as u32, m)?;
    let f = gen_f(&params)?;
    let dec = decompose_crossbar(&f, &params)?;
    let members: HashSet<&Point> = f.points().iter().collect();

    // W_b: sorted b-coordinates of M.
    let mut w: Vec<Vec<i64>> = vec![Vec::new(); d];
    for p in dec.core.points() {
        for (b, c) in p.0.iter().enumerate() {
            w[b].push(c.to_integer().to_i64().expect("small"));
        }
    }
    for list in &mut w {
        list.sort_unstable();
        list.dedup();
    }
    let place = |a: &[u32]| -> Vec<i64> { a.iter().enumerate().map(|(b, &x)| w[b][x as usize]).collect() };

    let lo = if i.uses_zero() { 0 } else { 1 };
    let mut slots: BTreeMap<Vec<i64>, (Option<usize>, Option<usize>)> = BTreeMap::new();
    for (a, coords) in i.vars.iter().enumerate() {
        slots.insert(place(coords), (Some(a), None));
    }
    for &(a, b, axis) in &i.edges {
        let (p, q) = (place(&i.vars[a]), place(&i.vars[b]));
        for t in p[axis] + 1..q[axis] {
            let mut c = p.clone();
            c[axis] = t;
            if !members.contains(&Point::from_ints(&c)) {
                return Err(CspError::Embedding(format!("chain point {c:?} is not in the crossbar")));
            }
            slots.insert(c, (None, Some(axis)));
        }
    }

    let positions: Vec<Vec<i64>> = slots.keys().cloned().collect();
    let index: HashMap<&Vec<i64>, usize> = positions.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let mut origin = Vec::with_capacity(positions.len());
    let mut chain_axis = Vec::with_capacity(positions.len());
    let mut unary = BTreeMap::new();
    for (k, (_, &(o, ax))) in slots.iter().enumerate() {
        origin.push(o);
        chain_axis.push(ax);
        let rel: Vec<Value> = match (o, ax) {
            (Some(a), _) => i.relation(a),
            (None, Some(axis)) => (lo..=i.delta)
                .map(|t| {
                    let mut x = vec![0; d];
                    x[axis] = t;
                    x
                })
                .collect(),
            _ => unreachable!("every slot is a variable or a chain point"),
        };
        unary.insert(k, rel);
    }
    let mut edges = Vec::new();
    for (k, p) in positions.iter().enumerate() {
        for axis in 0..d {
            let mut q = p.clone();
            q[axis] += 1;
            if let Some(&j) = index.get(&q) {
                edges.push((k, j, axis));
            }
        }
    }
    let instance = LeqCspInstance {
        d,
        n: params.side() as u32,
        delta: i.delta,
        vars: positions
            .iter()
            .map(|p| p.iter().map(|&x| x as u32).collect())
            .collect(),
        unary,
        edges,
    };
    instance.validate()?;
    Ok(EmbeddedCsp {
        instance,
        params,
        origin,
        chain_axis,
    })
}
