use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geometry::rational::{int, Rational};
use crate::geometry::PointSet;

/// Full rows per axis: maximal axis-parallel runs of exactly `len` unit-spaced points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowStructure {
    pub dim: usize,
    pub len: usize,
    /// `rows_by_axis[a]` lists rows along axis `a`, each an ordered list of point ids;
    /// rows are sorted by their fixed coordinates.
    pub rows_by_axis: Vec<Vec<Vec<usize>>>,
}

impl RowStructure {
    pub fn detect(p: &PointSet, len: usize) -> RowStructure {
        let d = p.dim();
        let one = int(1);
        let mut rows_by_axis = Vec::with_capacity(d);
        for axis in 0..d {
            let mut lines: BTreeMap<Vec<Rational>, Vec<(Rational, usize)>> = BTreeMap::new();
            for (i, q) in p.points().iter().enumerate() {
                let mut key = q.0.clone();
                let t = key.remove(axis);
                lines.entry(key).or_default().push((t, i));
            }
            let mut rows = Vec::new();
            for (_, mut line) in lines {
                line.sort();
                let mut start = 0;
                for j in 1..=line.len() {
                    let breaks = j == line.len() || &line[j].0 - &line[j - 1].0 != one;
                    if breaks {
                        if j - start == len {
                            rows.push(line[start..j].iter().map(|x| x.1).collect());
                        }
                        start = j;
                    }
                }
            }
            rows_by_axis.push(rows);
        }
        RowStructure {
            dim: d,
            len,
            rows_by_axis,
        }
    }

    pub fn row_count(&self, axis: usize) -> usize {
        self.rows_by_axis[axis].len()
    }
}
