//! Plain SVG 1.1 rendering of polygons, medial axes and disc sets.

use std::fmt::Write as _;

use filling::geom::{Disc, Point, Polygon};
use filling::medial_axis::{BranchGeometry, MedialAxis};

const PANEL: f64 = 320.0;
const MARGIN: f64 = 12.0;

/// One panel of a figure.
pub struct Panel<'a> {
    pub title: String,
    pub polygon: &'a Polygon,
    pub axis: Option<&'a MedialAxis>,
    pub discs: &'a [Disc],
}

struct Frame {
    lo: Point,
    scale: f64,
    height: f64,
    dx: f64,
    dy: f64,
}

impl Frame {
    fn new(poly: &Polygon, dx: f64, dy: f64) -> Self {
        let (lo, hi) = poly.bbox();
        let span = (hi.x - lo.x).max(hi.y - lo.y);
        let scale = (PANEL - 2.0 * MARGIN) / span;
        Self { lo, scale, height: (hi.y - lo.y) * scale, dx, dy }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        let x = self.dx + MARGIN + (p.x - self.lo.x) * self.scale;
        let y = self.dy + MARGIN + self.height - (p.y - self.lo.y) * self.scale;
        (x, y)
    }
}

fn path_points(f: &Frame, pts: impl IntoIterator<Item = Point>) -> String {
    pts.into_iter()
        .map(|p| {
            let (x, y) = f.map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn draw_panel(out: &mut String, panel: &Panel, dx: f64, dy: f64) {
    let f = Frame::new(panel.polygon, dx, dy);
    let _ = writeln!(
        out,
        r#"  <text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">{}</text>"#,
        dx + MARGIN,
        dy + PANEL + 4.0,
        escape(&panel.title)
    );
    let _ = writeln!(
        out,
        r#"  <polygon class="outline" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        path_points(&f, panel.polygon.vertices().iter().copied())
    );
    if let Some(m) = panel.axis {
        for b in &m.branches {
            let (ta, tb) = b.t_range;
            match b.geometry {
                BranchGeometry::EdgePoint { .. } => {
                    let pts = (0..=32).map(|i| b.point(ta + (tb - ta) * i as f64 / 32.0));
                    let _ = writeln!(
                        out,
                        r#"  <polyline class="axis" points="{}" fill="none" stroke="gray" stroke-dasharray="4 3"/>"#,
                        path_points(&f, pts)
                    );
                }
                _ => {
                    let (x1, y1) = f.map(b.point(ta));
                    let (x2, y2) = f.map(b.point(tb));
                    let _ = writeln!(
                        out,
                        r#"  <line class="axis" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="gray" stroke-dasharray="4 3"/>"#
                    );
                }
            }
        }
        for j in m.junctions() {
            let (x, y) = f.map(j.position);
            let _ = writeln!(out, r#"  <circle class="junction" cx="{x:.3}" cy="{y:.3}" r="3" fill="black"/>"#);
        }
    }
    for d in panel.discs {
        let (x, y) = f.map(d.center);
        let _ = writeln!(
            out,
            r##"  <circle class="disc" cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="#3b7dd8" fill-opacity="0.4" stroke="#1d4f91" stroke-width="0.5"/>"##,
            d.radius * f.scale
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Panels laid out in a grid with `columns` columns.
pub fn render_grid(panels: &[Panel], columns: usize) -> String {
    let columns = columns.max(1).min(panels.len().max(1));
    let rows = panels.len().div_ceil(columns).max(1);
    let w = columns as f64 * PANEL;
    let h = rows as f64 * (PANEL + 20.0);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    );
    for (i, p) in panels.iter().enumerate() {
        let dx = (i % columns) as f64 * PANEL;
        let dy = (i / columns) as f64 * (PANEL + 20.0);
        draw_panel(&mut out, p, dx, dy);
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_svg(panel: &Panel) -> String {
    render_grid(std::slice::from_ref(panel), 1)
}
