//! Deterministic SVG output. Coordinates are printed with four decimals and
//! elements follow the `(d, p, q)` segment order, so equal inputs give
//! byte-identical files.

use std::fmt::Write as _;

use crate::lattice::{SegmentId, TriangleId, Vertex};
use crate::patch::{Color, PatternPatch};
use crate::tiling::DecoratedTile;

#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub red: String,
    pub blue: String,
    pub uncolored: String,
    /// Fill per red count 0..=3.
    pub tile_fill: [String; 4],
    pub scale: f64,
    pub stroke_width: f64,
    pub draw_boundary: bool,
}

impl Default for Style {
    fn default() -> Self {
        Self {
            red: "#E41A1C".into(),
            blue: "#377EB8".into(),
            uncolored: "#999999".into(),
            tile_fill: ["#66C2A5".into(), "#FC8D62".into(), "#8DA0CB".into(), "#E78AC3".into()],
            scale: 20.0,
            stroke_width: 2.0,
            draw_boundary: true,
        }
    }
}

fn num(x: f64) -> String {
    // adding zero turns -0.0 into 0.0
    format!("{:.4}", x + 0.0)
}

struct Canvas {
    scale: f64,
    min: (f64, f64),
    max: (f64, f64),
    body: String,
}

impl Canvas {
    fn new(scale: f64, points: impl Iterator<Item = Vertex>) -> Self {
        let mut min = (f64::INFINITY, f64::INFINITY);
        let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in points {
            let (x, y) = Self::project(scale, v);
            min = (min.0.min(x), min.1.min(y));
            max = (max.0.max(x), max.1.max(y));
        }
        if !min.0.is_finite() {
            min = (0.0, 0.0);
            max = (0.0, 0.0);
        }
        Self { scale, min, max, body: String::new() }
    }

    fn project(scale: f64, v: Vertex) -> (f64, f64) {
        let (x, y) = v.to_cartesian();
        (x * scale, -y * scale)
    }

    fn pt(&self, v: Vertex) -> (String, String) {
        let (x, y) = Self::project(self.scale, v);
        (num(x), num(y))
    }

    fn finish(self, pad: f64) -> String {
        let (x0, y0) = (self.min.0 - pad, self.min.1 - pad);
        let (w, h) = (self.max.0 - self.min.0 + 2.0 * pad, self.max.1 - self.min.1 + 2.0 * pad);
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"{}\" height=\"{}\">",
            num(x0),
            num(y0),
            num(w),
            num(h),
            num(w),
            num(h)
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

fn segment_line(canvas: &mut Canvas, seg: SegmentId, stroke: &str, width: f64, dashed: bool) {
    let (a, b) = seg.endpoints();
    let ((x1, y1), (x2, y2)) = (canvas.pt(a), canvas.pt(b));
    let dash = if dashed { " stroke-dasharray=\"2 2\"" } else { "" };
    let _ = writeln!(
        canvas.body,
        "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"{stroke}\" stroke-width=\"{}\" stroke-linecap=\"round\"{dash}/>",
        num(width)
    );
}

pub fn render_pattern_svg(patch: &PatternPatch, style: &Style) -> String {
    let mut records: Vec<(SegmentId, Option<Color>, bool)> = patch
        .interior()
        .iter()
        .map(|(s, c)| (*s, Some(*c), false))
        .collect();
    if style.draw_boundary {
        records.extend(patch.boundary().iter().map(|(s, c)| (*s, *c, true)));
    }
    records.sort_by_key(|r| r.0);
    let points = records.iter().flat_map(|(s, _, _)| {
        let (a, b) = s.endpoints();
        [a, b]
    });
    let mut canvas = Canvas::new(style.scale, points);
    for (seg, c, boundary) in records {
        let stroke = match c {
            Some(Color::Red) => &style.red,
            Some(Color::Blue) => &style.blue,
            None => &style.uncolored,
        };
        segment_line(&mut canvas, seg, stroke, style.stroke_width, boundary && c.is_none());
    }
    canvas.finish(style.stroke_width * 2.0)
}

fn polygon(canvas: &mut Canvas, t: &TriangleId, fill: &str) {
    let pts: Vec<String> = t
        .vertices()
        .into_iter()
        .map(|v| {
            let (x, y) = canvas.pt(v);
            format!("{x},{y}")
        })
        .collect();
    let _ = writeln!(
        canvas.body,
        "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"#FFFFFF\" stroke-width=\"{}\"/>",
        pts.join(" "),
        num(canvas.scale / 40.0)
    );
}

/// Tiles filled by red count; a decorated tile gets a dot next to its
/// minority side.
pub fn render_tiling_svg(tiles: &[DecoratedTile], style: &Style) -> String {
    let mut tiles = tiles.to_vec();
    tiles.sort();
    let mut canvas = Canvas::new(style.scale, tiles.iter().flat_map(|t| t.tri.vertices()));
    for t in &tiles {
        polygon(&mut canvas, &t.tri, &style.tile_fill[usize::from(t.red_count.min(3))]);
    }
    for t in &tiles {
        let Some(slot) = t.decoration else { continue };
        let (a, b) = t.tri.side_segment(slot).endpoints();
        let opposite = t
            .tri
            .vertices()
            .into_iter()
            .find(|v| *v != a && *v != b)
            .expect("three vertices");
        let project = |v: Vertex| Canvas::project(canvas.scale, v);
        let (pa, pb, po) = (project(a), project(b), project(opposite));
        // a quarter of the way from the side's midpoint towards the opposite corner
        let mx = (pa.0 + pb.0) / 2.0;
        let my = (pa.1 + pb.1) / 2.0;
        let (cx, cy) = (mx + (po.0 - mx) * 0.25, my + (po.1 - my) * 0.25);
        let _ = writeln!(
            canvas.body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#000000\"/>",
            num(cx),
            num(cy),
            num(canvas.scale / 12.0)
        );
    }
    canvas.finish(style.scale / 10.0)
}
