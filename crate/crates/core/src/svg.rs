//! Static SVG of a planar point set, optionally with edges. Higher dimensions are
//! projected onto the first two axes.

use std::fmt::Write;

use crate::geometry::PointSet;

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 20.0;

pub fn render_svg(p: &PointSet, edges: &[(usize, usize)]) -> String {
    let xy: Vec<(f64, f64)> = p
        .points()
        .iter()
        .map(|q| {
            let f = q.to_f64();
            (f[0], f.get(1).copied().unwrap_or(0.0))
        })
        .collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &xy {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (CANVAS - 2.0 * MARGIN) / span;
    // SVG y grows downwards.
    let map = |(x, y): (f64, f64)| (MARGIN + (x - x0) * scale, CANVAS - MARGIN - (y - y0) * scale);
    let r = (0.35 * scale).clamp(0.5, 4.0);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !edges.is_empty() {
        let _ = writeln!(s, r##"<g stroke="#4a6fa5" stroke-width="0.6">"##);
        for &(u, v) in edges {
            let (a, b) = (map(xy[u]), map(xy[v]));
            let _ = writeln!(
                s,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                a.0, a.1, b.0, b.1
            );
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, r#"<g fill="black">"#);
    for &q in &xy {
        let (cx, cy) = map(q);
        let _ = writeln!(s, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}"/>"#);
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}
