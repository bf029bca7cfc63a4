//! SVG output: model coordinates scaled into a 512 x 512 view box with a
//! 5% margin and the y axis pointing up.

use std::fmt::Write;

use lsys::{ModuleString, ParamValue, Point};

pub const SIZE: f64 = 512.0;
pub const MARGIN: f64 = 0.05;

const STYLE: &str = "\
.control { stroke: #1f5fbf; stroke-width: 1.5; fill: none; }
.intermediate { stroke: #a0a0a0; stroke-width: 0.75; fill: none; }
.result { stroke: #c0392b; stroke-width: 1.5; }
.result.edge-I { stroke: #27ae60; }
circle.control { fill: #1f5fbf; stroke: none; }
circle.result { fill: #c0392b; stroke: none; }
circle.state-0 { fill: #7f8c8d; }
circle.state-1 { fill: #2980b9; }
circle.state-2 { fill: #8e44ad; }
";

/// Formats a coordinate with 12 significant digits, dropping trailing
/// zeros, so identical inputs always give identical bytes.
pub fn number(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

#[derive(Debug, Clone, Copy)]
struct Transform {
    scale: f64,
    offset: (f64, f64),
}

impl Transform {
    fn fit(points: &[Point]) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for (k, c) in [p.x(), p.y()].into_iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        if points.is_empty() {
            return Transform {
                scale: 1.0,
                offset: (SIZE / 2.0, SIZE / 2.0),
            };
        }
        let inner = SIZE * (1.0 - 2.0 * MARGIN);
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let scale = if extent > 0.0 { inner / extent } else { 1.0 };
        let centre = ((lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0);
        Transform {
            scale,
            offset: (SIZE / 2.0 - scale * centre.0, SIZE / 2.0 + scale * centre.1),
        }
    }

    fn apply(&self, p: &Point) -> (String, String) {
        (
            number(self.offset.0 + self.scale * p.x()),
            number(self.offset.1 - self.scale * p.y()),
        )
    }
}

/// Drawing roles, in back-to-front order.
#[derive(Debug, Default)]
pub struct Scene {
    /// The initial polygon and whether it is closed.
    pub control: Option<(Vec<Point>, bool)>,
    pub intermediate: Vec<(Vec<Point>, bool)>,
    /// Result segments with an extra class each (may be empty).
    pub segments: Vec<(Point, Point, String)>,
    /// Result points with an extra class each.
    pub points: Vec<(Point, String)>,
}

impl Scene {
    fn all_points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        if let Some((c, _)) = &self.control {
            out.extend(c);
        }
        for (poly, _) in &self.intermediate {
            out.extend(poly);
        }
        for (a, b, _) in &self.segments {
            out.extend([*a, *b]);
        }
        out.extend(self.points.iter().map(|(p, _)| *p));
        out
    }

    pub fn render(&self) -> String {
        let tr = Transform::fit(&self.all_points());
        let size = number(SIZE);
        let mut out = String::new();
        writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
        )
        .unwrap();
        writeln!(out, "<style>\n{STYLE}</style>").unwrap();
        let poly = |out: &mut String, pts: &[Point], closed: bool, class: &str| {
            let tag = if closed { "polygon" } else { "polyline" };
            let coords: Vec<String> = pts
                .iter()
                .map(|p| {
                    let (x, y) = tr.apply(p);
                    format!("{x},{y}")
                })
                .collect();
            writeln!(out, r#"<{tag} class="{class}" points="{}"/>"#, coords.join(" ")).unwrap();
        };
        for (pts, closed) in &self.intermediate {
            poly(&mut out, pts, *closed, "intermediate");
        }
        if let Some((pts, closed)) = &self.control {
            poly(&mut out, pts, *closed, "control");
            for p in pts {
                let (x, y) = tr.apply(p);
                writeln!(out, r#"<circle class="control" cx="{x}" cy="{y}" r="2.5"/>"#).unwrap();
            }
        }
        for (a, b, extra) in &self.segments {
            let ((x1, y1), (x2, y2)) = (tr.apply(a), tr.apply(b));
            let class = join_class("result", extra);
            writeln!(
                out,
                r#"<line class="{class}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#
            )
            .unwrap();
        }
        for (p, extra) in &self.points {
            let (x, y) = tr.apply(p);
            let class = join_class("result", extra);
            writeln!(out, r#"<circle class="{class}" cx="{x}" cy="{y}" r="1.5"/>"#).unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}

fn join_class(base: &str, extra: &str) -> String {
    if extra.is_empty() {
        base.to_string()
    } else {
        format!("{base} {extra}")
    }
}

/// Point parameters of every module in `word`, projected to the plane when
/// the word is homogeneous.
pub fn word_points(word: &ModuleString) -> Vec<Point> {
    word.iter()
        .filter_map(|m| match m.params.first() {
            Some(ParamValue::Point(p)) => Some(planar(p)),
            _ => None,
        })
        .collect()
}

/// Drops to the plane: 3-D points are projected from the origin onto z = 1.
pub fn planar(p: &Point) -> Point {
    lsys::geometry::project_to_plane(p).unwrap_or(*p)
}

/// Vertex state classes for points carrying a state parameter, as in
/// `P(v, s)`.
pub fn state_points(word: &ModuleString) -> Vec<(Point, String)> {
    word.iter()
        .filter_map(|m| match m.params.as_slice() {
            [ParamValue::Point(p), ParamValue::Scalar(s)] => Some((planar(p), format!("state-{s}"))),
            _ => None,
        })
        .collect()
}

/// Symbols of the edge modules between two point modules, in order: the
/// modules an edge-drawing interpretation turns into segments.
pub fn edge_kinds(word: &ModuleString) -> Vec<String> {
    let is_point =
        |i: Option<usize>| i.is_some_and(|i| matches!(word.modules[i].params.first(), Some(ParamValue::Point(_))));
    (0..word.len())
        .filter(|&i| {
            word.modules[i].params.is_empty() && is_point(word.neighbor(i, -1)) && is_point(word.neighbor(i, 1))
        })
        .map(|i| word.modules[i].symbol.clone())
        .collect()
}
