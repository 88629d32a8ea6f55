//! Integer grids, the discrete Sierpiński carpet and the Cantor crossbars f/h,
//! plus full-row structure extraction.

mod carpet;
mod crossbar;
mod rows;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use carpet::{carpet_cells, gen_sierpinski_carpet, BOX_POINT_OFFSET};
pub use crossbar::{decompose_crossbar, gen_f, gen_f_roles, gen_h, CrossbarDecomposition, Role};
pub use rows::RowStructure;

use crate::geometry::{GeometryError, PointSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FractalError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("point set is not the crossbar for these parameters: {0}")]
    NotACrossbar(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossbarParams {
    pub l: u32,
    pub v: u32,
    pub d: u32,
    pub k: u32,
}

impl CrossbarParams {
    pub fn new(l: u32, v: u32, d: u32, k: u32) -> Result<Self, FractalError> {
        let p = CrossbarParams { l, v, d, k };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), FractalError> {
        let bad = |m: &str| Err(FractalError::InvalidParams(m.to_string()));
        if self.l < 3 || self.l.is_multiple_of(2) {
            return bad("l must be odd and at least 3");
        }
        if self.v < 1 || self.v.is_multiple_of(2) {
            return bad("v must be odd and at least 1");
        }
        if self.v >= self.l {
            return bad("need l > v");
        }
        if self.d < 2 {
            return bad("d must be at least 2");
        }
        let side = (self.l as u128).checked_pow(self.k);
        if side.is_none_or(|s| s > 1 << 40) {
            return bad("l^k too large");
        }
        Ok(())
    }

    pub fn with_k(&self, k: u32) -> Self {
        CrossbarParams { k, ..*self }
    }

    /// Side length l^k of the ambient grid.
    pub fn side(&self) -> i64 {
        (self.l as i64).pow(self.k)
    }

    /// (l−v)/2: number of corner bands on each side.
    pub fn q(&self) -> u32 {
        (self.l - self.v) / 2
    }

    /// |h(k)| = (l(l−v)^{d−1})^k.
    pub fn h_count(&self) -> u128 {
        ((self.l as u128) * ((self.l - self.v) as u128).pow(self.d - 1)).pow(self.k)
    }

    /// d·(l(l−v)^{d−1})^k.
    pub fn f_bound(&self) -> u128 {
        self.d as u128 * self.h_count()
    }

    /// (l−v)^{k(d−1)} full rows per axis.
    pub fn full_rows_per_axis(&self) -> u128 {
        ((self.l - self.v) as u128).pow(self.k * (self.d - 1))
    }

    /// |M| = (l−v)^{kd}.
    pub fn core_count(&self) -> u128 {
        ((self.l - self.v) as u128).pow(self.k * self.d)
    }

    /// log(l(l−v)^{d−1}) / log l.
    pub fn dimension_bound(&self) -> f64 {
        let l = self.l as f64;
        (l * ((self.l - self.v) as f64).powi(self.d as i32 - 1)).ln() / l.ln()
    }
}

/// The full grid {1..n}^d, labelled `grid`.
pub fn gen_integer_grid(n: u32, d: u32) -> Result<PointSet, FractalError> {
    if n < 1 || d < 1 {
        return Err(FractalError::InvalidParams("n and d must be at least 1".into()));
    }
    let total = (n as u128).checked_pow(d);
    if total.is_none_or(|t| t > 10_000_000) {
        return Err(FractalError::InvalidParams("grid too large".into()));
    }
    let mut pts = Vec::new();
    let mut cur = vec![1i64; d as usize];
    loop {
        pts.push(cur.clone());
        let mut j = d as usize;
        loop {
            if j == 0 {
                let labels = vec!["grid".to_string(); pts.len()];
                return Ok(PointSet::from_int_coords(d as usize, &pts)?.with_labels(labels)?);
            }
            j -= 1;
            if cur[j] < n as i64 {
                cur[j] += 1;
                break;
            }
            cur[j] = 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_examples() {
        assert_eq!(gen_integer_grid(2, 2).unwrap().len(), 4);
        assert_eq!(gen_integer_grid(3, 3).unwrap().len(), 27);
        let g = gen_integer_grid(4, 2).unwrap();
        assert_eq!(g.len(), 16);
        let rows = RowStructure::detect(&g, 4);
        assert_eq!(rows.rows_by_axis[0].len(), 4);
        assert_eq!(rows.rows_by_axis[1].len(), 4);
    }

    #[test]
    fn params_validation() {
        assert!(CrossbarParams::new(3, 1, 2, 2).is_ok());
        assert!(CrossbarParams::new(4, 1, 2, 2).is_err());
        assert!(CrossbarParams::new(3, 3, 2, 2).is_err());
        assert!(CrossbarParams::new(5, 2, 2, 2).is_err());
        assert!(CrossbarParams::new(3, 1, 1, 2).is_err());
        let p = CrossbarParams::new(3, 1, 2, 1).unwrap();
        assert!((p.dimension_bound() - 6f64.ln() / 3f64.ln()).abs() < 1e-12);
    }
}
