use serde::{Deserialize, Serialize};

use super::assemble::{AlphaRecord, TspReductionOutput};

/// Whatever TSPLIB cannot hold: the exact target and the point labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TsplibSidecar {
    pub name: String,
    pub dimension: usize,
    pub l: u32,
    pub v: u32,
    pub k: u32,
    pub m: usize,
    pub alpha: AlphaRecord,
    pub labels: Vec<String>,
}

/// EUC_2D body plus sidecar. Coordinates are written exactly (they are multiples of 1/2);
/// note that TSPLIB's EUC_2D metric rounds edge lengths, so compare against the sidecar target
/// with true Euclidean lengths.
pub fn to_tsplib(out: &TspReductionOutput, name: &str) -> (String, TsplibSidecar) {
    let n = out.points.len();
    let mut s = String::new();
    s.push_str(&format!("NAME : {name}\n"));
    s.push_str("TYPE : TSP\n");
    s.push_str(&format!(
        "COMMENT : exact cover m={} l={} v={} k={} target={}\n",
        out.xc.m, out.l, out.v, out.k, out.alpha.total
    ));
    s.push_str(&format!("DIMENSION : {n}\n"));
    s.push_str("EDGE_WEIGHT_TYPE : EUC_2D\n");
    s.push_str("NODE_COORD_SECTION\n");
    for (i, [x, y]) in out.coords_f64.iter().enumerate() {
        s.push_str(&format!("{} {} {}\n", i + 1, x, y));
    }
    s.push_str("EOF\n");
    let sidecar = TsplibSidecar {
        name: name.to_string(),
        dimension: n,
        l: out.l,
        v: out.v,
        k: out.k,
        m: out.xc.m,
        alpha: out.alpha.clone(),
        labels: out.points.labels().map(<[String]>::to_vec).unwrap_or_default(),
    };
    (s, sidecar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsp::{reduce_exact_cover_to_tsp, ExactCoverInstance};

    #[test]
    fn tsplib_shape() {
        let xc = ExactCoverInstance::new(2, vec![vec![0], vec![1]]).unwrap();
        let out = reduce_exact_cover_to_tsp(&xc, 3, 1).unwrap();
        let (body, side) = to_tsplib(&out, "xc2");
        let lines: Vec<&str> = body.lines().collect();
        assert_eq!(lines[0], "NAME : xc2");
        assert!(lines.contains(&"EDGE_WEIGHT_TYPE : EUC_2D"));
        let start = lines.iter().position(|l| *l == "NODE_COORD_SECTION").unwrap();
        assert_eq!(lines.len(), start + 1 + out.points.len() + 1);
        assert_eq!(*lines.last().unwrap(), "EOF");
        // Coordinates round-trip to the exact half-unit values.
        let first: Vec<f64> = lines[start + 1]
            .split_whitespace()
            .skip(1)
            .map(|t| t.parse().unwrap())
            .collect();
        assert_eq!(first, out.points.point(0).to_f64());
        assert_eq!(side.dimension, out.points.len());
        assert_eq!(side.labels.len(), out.points.len());
        assert_eq!(side.alpha, out.alpha);
    }
}
