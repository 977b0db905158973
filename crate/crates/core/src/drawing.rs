//! Straight-line grid drawings from region sizes.
//!
//! Vertex `u` goes to `(N_0(u), N_1(u))`. All arithmetic is on integers, so
//! the crossing checks here are exact.

use std::fmt::Write as _;
use std::path::Path;

use crate::realizer::{EdgeKind, Realizer, Wood};

pub type Point = (i64, i64);

/// Points and straight segments of a drawing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Drawing {
    pub points: Vec<Point>,
    pub segments: Vec<(usize, usize)>,
}

pub fn drawing(r: &Realizer) -> Drawing {
    let points = r.barycentric_linear().iter().map(|v| (v.0[0] as i64, v.0[1] as i64)).collect();
    Drawing { points, segments: r.triangulation().edges().collect() }
}

fn orient(a: Point, b: Point, c: Point) -> i64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient(a, b, p) == 0 && p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

fn segments_meet(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1.signum() * o2.signum() < 0 && o3.signum() * o4.signum() < 0 {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

impl Drawing {
    /// Pairs of segments meeting anywhere but a shared endpoint, plus
    /// vertices lying on a segment they do not belong to.
    pub fn improper_crossings(&self) -> usize {
        let p = &self.points;
        let s = &self.segments;
        let mut count = 0;
        for (k, &(a, b)) in s.iter().enumerate() {
            for &(c, d) in &s[k + 1..] {
                let shared = [c, d].into_iter().find(|&x| x == a || x == b);
                let bad = match shared {
                    Some(x) => {
                        let q1 = if x == a { b } else { a };
                        let q2 = if x == c { d } else { c };
                        let (v1, v2) = ((p[q1].0 - p[x].0, p[q1].1 - p[x].1), (p[q2].0 - p[x].0, p[q2].1 - p[x].1));
                        orient(p[x], p[q1], p[q2]) == 0 && v1.0 * v2.0 + v1.1 * v2.1 > 0
                    }
                    None => segments_meet(p[a], p[b], p[c], p[d]),
                };
                count += usize::from(bad);
            }
            count += (0..p.len()).filter(|&x| x != a && x != b && on_segment(p[a], p[b], p[x])).count();
        }
        count
    }

    /// Whether no two vertices share a point.
    pub fn is_injective(&self) -> bool {
        let mut pts = self.points.clone();
        pts.sort_unstable();
        pts.windows(2).all(|w| w[0] != w[1])
    }
}

const TREE_STROKE: [&str; 3] = ["#d62728", "#2ca02c", "#1f77b4"];

/// SVG text with grid unit `scale`; tree edges are colored by tree.
pub fn to_svg(r: &Realizer, scale: i64) -> String {
    let d = drawing(r);
    let t = r.triangulation();
    let side = (r.n() as i64 - 1) * scale;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        -scale,
        -scale,
        side + 2 * scale,
        side + 2 * scale,
        side + 2 * scale,
        side + 2 * scale
    );
    for &(a, b) in &d.segments {
        let stroke = match r.edge_kind(a, b) {
            Some(EdgeKind::Out(c) | EdgeKind::In(c)) => TREE_STROKE[c.index()],
            _ => "#000000",
        };
        let ((x1, y1), (x2, y2)) = (d.points[a], d.points[b]);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="2"/>"#,
            x1 * scale,
            y1 * scale,
            x2 * scale,
            y2 * scale
        );
    }
    for (u, &(x, y)) in d.points.iter().enumerate() {
        let fill = if t.is_outer_vertex(u) { "#000000" } else { "#ffffff" };
        let _ = writeln!(out, r##"<circle cx="{}" cy="{}" r="{}" fill="{fill}" stroke="#000000"/>"##, x * scale, y * scale, (scale / 5).max(2));
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_svg(r: &Realizer, path: impl AsRef<Path>, scale: i64) -> std::io::Result<()> {
    std::fs::write(path, to_svg(r, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realizer::compute_realizer;
    use crate::testkit::{f5, k4};

    #[test]
    fn fixtures_draw_planar() {
        for (t, segs) in [(k4(), 6), (f5(), 9)] {
            let r = compute_realizer(&t);
            let d = drawing(&r);
            assert_eq!(d.segments.len(), segs);
            assert_eq!(d.improper_crossings(), 0);
            assert!(d.is_injective());
            let svg = to_svg(&r, 20);
            assert_eq!(svg.matches("<circle").count(), t.n());
            assert_eq!(svg.matches("<line").count(), segs);
            assert_eq!(svg, to_svg(&r, 20));
        }
    }

    #[test]
    fn detects_crossings() {
        let d = Drawing { points: vec![(0, 0), (2, 2), (0, 2), (2, 0), (1, 1)], segments: vec![(0, 1), (2, 3)] };
        assert_eq!(d.improper_crossings(), 1 + 2);
        let overlap = Drawing { points: vec![(0, 0), (2, 0), (1, 0)], segments: vec![(0, 1), (0, 2)] };
        assert_eq!(overlap.improper_crossings(), 2);
        assert!(!Drawing { points: vec![(1, 1), (1, 1)], segments: vec![] }.is_injective());
    }
}
