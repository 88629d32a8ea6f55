//! Gadget point tables and their placement in the plane.
//!
//! The tables are our own transcription: H is 8 wide and 7 tall with its four corners as the
//! access points, A and B are 8 × 4 with the corners as hook pairs. Every table carries its
//! Held–Karp optimum.

use serde::{Deserialize, Serialize};

use super::TspError;
use crate::geometry::rational::{int, ratio, Rational};
use crate::geometry::{Point, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GadgetKind {
    #[serde(rename = "one-chain")]
    OneChain,
    #[serde(rename = "two-chain")]
    TwoChain,
    #[serde(rename = "config-H")]
    ConfigH,
    #[serde(rename = "config-A")]
    ConfigA,
    #[serde(rename = "config-B")]
    ConfigB,
    #[serde(rename = "vertical-chain")]
    VerticalChain,
    #[serde(rename = "cell-X")]
    CellX,
    #[serde(rename = "cell-Y")]
    CellY,
    #[serde(rename = "cell-Z")]
    CellZ,
    #[serde(rename = "cell-Zprime")]
    CellZprime,
}

impl GadgetKind {
    pub fn parse(s: &str) -> Result<Self, TspError> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| TspError::UnknownKind(s.to_string()))
    }

    pub fn name(&self) -> &'static str {
        match self {
            GadgetKind::OneChain => "one-chain",
            GadgetKind::TwoChain => "two-chain",
            GadgetKind::ConfigH => "config-H",
            GadgetKind::ConfigA => "config-A",
            GadgetKind::ConfigB => "config-B",
            GadgetKind::VerticalChain => "vertical-chain",
            GadgetKind::CellX => "cell-X",
            GadgetKind::CellY => "cell-Y",
            GadgetKind::CellZ => "cell-Z",
            GadgetKind::CellZprime => "cell-Zprime",
        }
    }
}

/// Direction a chain grows in. Configurations only accept `PlusX` (the table as given).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+x")]
    PlusX,
    #[serde(rename = "-x")]
    MinusX,
    #[serde(rename = "+y")]
    PlusY,
    #[serde(rename = "-y")]
    MinusY,
}

impl Orientation {
    fn step(self) -> (i64, i64) {
        match self {
            Orientation::PlusX => (1, 0),
            Orientation::MinusX => (-1, 0),
            Orientation::PlusY => (0, 1),
            Orientation::MinusY => (0, -1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GadgetPlacement {
    pub kind: GadgetKind,
    pub anchor: Point,
    pub orientation: Orientation,
    pub points: PointSet,
}

/// Half-units, so every table entry is an integer here.
pub(crate) const H_TABLE: [(i64, i64); 12] = [
    (0, 0),
    (16, 0),
    (0, 14),
    (16, 14),
    (8, 0),
    (8, 14),
    (0, 7),
    (16, 7),
    (5, 5),
    (11, 5),
    (5, 9),
    (11, 9),
];
pub(crate) const A_TABLE: [(i64, i64); 7] = [(0, 8), (16, 8), (16, 0), (0, 0), (4, 4), (8, 4), (12, 4)];
pub(crate) const B_TABLE: [(i64, i64); 6] = [(0, 8), (16, 8), (16, 0), (0, 0), (8, 2), (8, 6)];

/// Held–Karp optimum of the H table (free ends; also attained corner to corner on either
/// long side). The figure value is 32.
pub const H_PATH_LENGTH: f64 = 34.281_961_748_200_686;
pub const A_PATH_LENGTH: f64 = 17.656_854_249_492_38;
pub const B_PATH_LENGTH: f64 = 18.246_211_251_235_323;

pub const H_WIDTH: i64 = 8;
pub const H_HEIGHT: i64 = 7;
pub const AB_HEIGHT: i64 = 4;

/// Corner ids inside the H table: bottom-left, bottom-right, top-left, top-right.
pub const H_CORNERS: [usize; 4] = [0, 1, 2, 3];
/// Corner ids inside A and B: top-left, top-right, bottom-right, bottom-left.
pub const AB_CORNERS: [usize; 4] = [0, 1, 2, 3];

fn table(kind: GadgetKind) -> Option<&'static [(i64, i64)]> {
    match kind {
        GadgetKind::ConfigH => Some(&H_TABLE),
        GadgetKind::ConfigA => Some(&A_TABLE),
        GadgetKind::ConfigB => Some(&B_TABLE),
        _ => None,
    }
}

/// The local table of a configuration, in the order listed above.
pub fn gadget_table(kind: GadgetKind) -> Result<PointSet, TspError> {
    let t = table(kind).ok_or_else(|| TspError::Invalid(format!("{} has no table", kind.name())))?;
    let pts = t
        .iter()
        .map(|&(x, y)| Point::new(vec![ratio(x, 2), ratio(y, 2)]))
        .collect();
    Ok(PointSet::new(2, pts)?)
}

fn offset(anchor: &Point, dx: Rational, dy: Rational) -> Point {
    Point::new(vec![&anchor.0[0] + dx, &anchor.0[1] + dy])
}

/// Places a gadget with its local origin at `anchor`. `len` is the number of points of a
/// one-chain or vertical chain, and the number of columns of a two-chain; tables ignore it.
pub fn place_gadget(
    kind: GadgetKind,
    anchor: &Point,
    orientation: Orientation,
    len: usize,
) -> Result<GadgetPlacement, TspError> {
    if anchor.dim() != 2 {
        return Err(TspError::Invalid("gadgets live in the plane".into()));
    }
    let points: Vec<Point> = match kind {
        GadgetKind::ConfigH | GadgetKind::ConfigA | GadgetKind::ConfigB => {
            if orientation != Orientation::PlusX {
                return Err(TspError::Invalid(format!("{} is only placed as tabled", kind.name())));
            }
            table(kind)
                .expect("configs have tables")
                .iter()
                .map(|&(x, y)| offset(anchor, ratio(x, 2), ratio(y, 2)))
                .collect()
        }
        GadgetKind::OneChain | GadgetKind::VerticalChain => {
            let (sx, sy) = orientation.step();
            (0..len as i64)
                .map(|t| offset(anchor, int(sx * t), int(sy * t)))
                .collect()
        }
        GadgetKind::TwoChain => {
            // Columns 2 apart along the orientation, the second row 1 to its left.
            let (sx, sy) = orientation.step();
            let (nx, ny) = (-sy, sx);
            (0..len as i64)
                .flat_map(|c| [(2 * c * sx, 2 * c * sy), (2 * c * sx + nx, 2 * c * sy + ny)])
                .map(|(x, y)| offset(anchor, int(x), int(y)))
                .collect()
        }
        GadgetKind::CellX | GadgetKind::CellY | GadgetKind::CellZ | GadgetKind::CellZprime => {
            return Err(TspError::Invalid(format!(
                "{} placements are assembled from their contents",
                kind.name()
            )))
        }
    };
    Ok(GadgetPlacement {
        kind,
        anchor: anchor.clone(),
        orientation,
        points: PointSet::new(2, points)?,
    })
}

fn bbox_extent(p: &PointSet) -> (Rational, Rational) {
    let (lo, hi) = p.bbox();
    (&hi[0] - &lo[0], &hi[1] - &lo[1])
}

/// Kind-specific shape invariants of a placement.
pub fn check_placement(g: &GadgetPlacement) -> Result<(), String> {
    let pts = g.points.points();
    let (w, h) = bbox_extent(&g.points);
    match g.kind {
        GadgetKind::OneChain | GadgetKind::VerticalChain => {
            for (k, pair) in pts.windows(2).enumerate() {
                let step: Rational = pair[0]
                    .0
                    .iter()
                    .zip(&pair[1].0)
                    .map(|(a, b)| num_traits::Signed::abs(&(a - b)))
                    .sum();
                if step != int(1) {
                    return Err(format!("{} step {k} has ℓ1 length {step}", g.kind.name()));
                }
            }
        }
        GadgetKind::TwoChain => {
            if !pts.len().is_multiple_of(2) {
                return Err("two-chain has an odd number of points".into());
            }
            let cols: Vec<(&Point, &Point)> = pts.chunks(2).map(|c| (&c[0], &c[1])).collect();
            for (k, (a, b)) in cols.iter().enumerate() {
                if crate::geometry::sq_dist_unchecked(a, b) != int(1) {
                    return Err(format!("two-chain column {k}: rows not 1 apart"));
                }
            }
            for (k, pair) in cols.windows(2).enumerate() {
                if crate::geometry::sq_dist_unchecked(pair[0].0, pair[1].0) != int(4) {
                    return Err(format!("two-chain gap {k} is not 2"));
                }
            }
        }
        GadgetKind::ConfigH => {
            if (w.clone(), h.clone()) != (int(H_WIDTH), int(H_HEIGHT)) {
                return Err(format!("config-H box is {w}×{h}, expected 8×7"));
            }
        }
        GadgetKind::ConfigA | GadgetKind::ConfigB => {
            if (w.clone(), h.clone()) != (int(H_WIDTH), int(AB_HEIGHT)) {
                return Err(format!("{} box is {w}×{h}, expected 8×4", g.kind.name()));
            }
        }
        GadgetKind::CellX | GadgetKind::CellY | GadgetKind::CellZ | GadgetKind::CellZprime => {
            let side = int(super::CELL);
            let inside = pts
                .iter()
                .all(|p| p.0.iter().zip(&g.anchor.0).all(|(c, a)| c >= a && *c < a + &side));
            if !inside {
                return Err(format!("{} point outside its {}-cell", g.kind.name(), super::CELL));
            }
        }
    }
    Ok(())
}
