use std::collections::BTreeSet;

use super::FractalError;
use crate::geometry::rational::{int, ratio};
use crate::geometry::{Point, PointSet};

/// Offset of a box point from the lower-left corner of its box, along the attached diagonal.
pub const BOX_POINT_OFFSET: (i64, i64) = (1, 4);

/// A cell survives iff no base-3 digit position has both digits equal to 1.
fn survives(mut x: i64, mut y: i64) -> bool {
    while x > 0 || y > 0 {
        if x % 3 == 1 && y % 3 == 1 {
            return false;
        }
        x /= 3;
        y /= 3;
    }
    true
}

/// Surviving unit cells (lower-left corners) of the depth-k carpet, sorted.
pub fn carpet_cells(k: u32) -> Vec<(i64, i64)> {
    let side = 3i64.pow(k);
    let mut out = Vec::with_capacity(8usize.pow(k));
    for x in 0..side {
        for y in 0..side {
            if survives(x, y) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Without box points: one point per surviving cell (8^k points, label `cell`).
/// With box points: every lattice vertex touching a surviving cell (label `lattice`)
/// plus one point inside each surviving cell (label `box`).
pub fn gen_sierpinski_carpet(k: u32, with_box_points: bool) -> Result<PointSet, FractalError> {
    if k > 7 {
        return Err(FractalError::InvalidParams("carpet depth above 7".into()));
    }
    let cells = carpet_cells(k);
    if !with_box_points {
        let pts: Vec<Vec<i64>> = cells.iter().map(|&(x, y)| vec![x, y]).collect();
        let labels = vec!["cell".to_string(); pts.len()];
        return Ok(PointSet::from_int_coords(2, &pts)?.with_labels(labels)?);
    }
    let mut verts = BTreeSet::new();
    for &(x, y) in &cells {
        for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            verts.insert((x + dx, y + dy));
        }
    }
    let mut pts: Vec<Point> = verts.iter().map(|&(x, y)| Point::from_ints(&[x, y])).collect();
    let mut labels = vec!["lattice".to_string(); pts.len()];
    let off = ratio(BOX_POINT_OFFSET.0, BOX_POINT_OFFSET.1);
    for &(x, y) in &cells {
        pts.push(Point::new(vec![int(x) + &off, int(y) + &off]));
        labels.push("box".to_string());
    }
    Ok(PointSet::new(2, pts)?.with_labels(labels)?)
}
