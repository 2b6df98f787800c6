//! Planar primitives: points, simple polygons, discs, and boundary distance queries.
//!
//! Every geometric comparison uses `tol_geom = 1e-9 * bbox_diag` of the polygon in play,
//! so results do not depend on the absolute scale of the input.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{FillError, Result};

/// Relative geometric tolerance, multiplied by the bounding-box diagonal.
pub const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise rotation by 90 degrees.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point, s: f64) -> Point {
        self + (o - self) * s
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// A closed disc. Zero radius is allowed and covers no area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: Point,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }

    pub fn contains_point(&self, p: Point) -> bool {
        self.center.dist(p) <= self.radius
    }
}

/// Nearest boundary feature of a query point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feature {
    /// Interior of edge `i` (from vertex `i` to vertex `i + 1`).
    Edge(usize),
    Vertex(usize),
}

/// A simple polygon with counter-clockwise vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
    bbox_min: Point,
    bbox_max: Point,
    bbox_diag: f64,
    area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vertices: Vec<[f64; 2]>,
}

fn signed_area(vs: &[Point]) -> f64 {
    let n = vs.len();
    let mut s = 0.0;
    for i in 0..n {
        s += vs[i].cross(vs[(i + 1) % n]);
    }
    0.5 * s
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point, tol: f64) -> bool {
    if seg_seg_distance(a, b, c, d) <= tol {
        return true;
    }
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn seg_seg_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    point_segment_distance(a, c, d)
        .0
        .min(point_segment_distance(b, c, d).0)
        .min(point_segment_distance(c, a, b).0)
        .min(point_segment_distance(d, a, b).0)
}

/// Distance from `q` to segment `ab` and the clamped projection parameter in `[0, 1]`.
pub fn point_segment_distance(q: Point, a: Point, b: Point) -> (f64, f64) {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return (q.dist(a), 0.0);
    }
    let s = ((q - a).dot(ab) / len2).clamp(0.0, 1.0);
    (q.dist(a + ab * s), s)
}

impl Polygon {
    /// Validates and normalizes a vertex loop.
    ///
    /// Clockwise input is reversed, duplicate and collinear vertices are merged, and
    /// self-intersecting loops are rejected.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(FillError::InvalidPolygon("non-finite coordinate".into()));
        }
        if vertices.len() < 3 {
            return Err(FillError::InvalidPolygon(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let (lo, hi) = bbox(&vertices);
        let diag = (hi - lo).norm();
        if diag <= 0.0 {
            return Err(FillError::InvalidPolygon("all vertices coincide".into()));
        }
        let tol = REL_TOL * diag;

        let mut vs = vertices;
        // Merge duplicates and collinear runs until stable.
        loop {
            let n = vs.len();
            if n < 3 {
                return Err(FillError::InvalidPolygon("degenerate after merging vertices".into()));
            }
            let mut drop = None;
            for i in 0..n {
                let prev = vs[(i + n - 1) % n];
                let cur = vs[i];
                let next = vs[(i + 1) % n];
                if cur.dist(next) <= tol {
                    drop = Some(i);
                    break;
                }
                let e1 = cur - prev;
                let e2 = next - cur;
                let cr = e1.cross(e2);
                if cr.abs() <= tol * (e1.norm() + e2.norm()) {
                    if e1.dot(e2) < 0.0 {
                        return Err(FillError::InvalidPolygon(format!(
                            "boundary folds back on itself at vertex {i}"
                        )));
                    }
                    drop = Some(i);
                    break;
                }
            }
            match drop {
                Some(i) => {
                    vs.remove(i);
                }
                None => break,
            }
        }

        let a = signed_area(&vs);
        if a.abs() <= tol * diag {
            return Err(FillError::InvalidPolygon("zero area".into()));
        }
        if a < 0.0 {
            vs.reverse();
        }

        let n = vs.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if segments_intersect(vs[i], vs[(i + 1) % n], vs[j], vs[(j + 1) % n], tol) {
                    return Err(FillError::InvalidPolygon(format!(
                        "edges {i} and {j} intersect"
                    )));
                }
            }
        }

        Ok(Self {
            area: a.abs(),
            vertices: vs,
            bbox_min: lo,
            bbox_max: hi,
            bbox_diag: diag,
        })
    }

    pub fn from_coords(coords: &[[f64; 2]]) -> Result<Self> {
        Self::new(coords.iter().map(|c| Point::new(c[0], c[1])).collect())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let pj: PolygonJson = serde_json::from_str(s)?;
        Self::from_coords(&pj.vertices)
    }

    pub fn to_json(&self) -> PolygonJson {
        PolygonJson {
            vertices: self.vertices.iter().map(|p| [p.x, p.y]).collect(),
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    /// Endpoints of edge `i`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.vertex(i), self.vertex(i + 1))
    }

    /// Unit inward normal of edge `i` (left of the direction of travel for CCW order).
    pub fn inward_normal(&self, i: usize) -> Point {
        let (a, b) = self.edge(i);
        (b - a).normalized().perp()
    }

    pub fn bbox(&self) -> (Point, Point) {
        (self.bbox_min, self.bbox_max)
    }

    pub fn bbox_diag(&self) -> f64 {
        self.bbox_diag
    }

    /// Scale-aware geometric tolerance.
    pub fn tol(&self) -> f64 {
        REL_TOL * self.bbox_diag
    }

    /// Largest bounding-box dimension.
    pub fn width(&self) -> f64 {
        let d = self.bbox_max - self.bbox_min;
        d.x.max(d.y)
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// Interior angle at vertex `i`, in `(0, 2π)`.
    pub fn interior_angle(&self, i: usize) -> f64 {
        let n = self.len();
        let prev = self.vertex(i + n - 1);
        let cur = self.vertex(i);
        let next = self.vertex(i + 1);
        let a = prev - cur;
        let b = next - cur;
        let ang = b.cross(a).atan2(b.dot(a));
        if ang <= 0.0 {
            ang + std::f64::consts::TAU
        } else {
            ang
        }
    }

    /// True when the interior angle at `i` exceeds π.
    pub fn is_reflex(&self, i: usize) -> bool {
        let n = self.len();
        let prev = self.vertex(i + n - 1);
        let cur = self.vertex(i);
        let next = self.vertex(i + 1);
        (cur - prev).cross(next - cur) < 0.0
    }

    pub fn is_convex(&self) -> bool {
        (0..self.len()).all(|i| !self.is_reflex(i))
    }

    /// Even-odd point-in-polygon test. Boundary points may land on either side.
    pub fn contains(&self, q: Point) -> bool {
        let n = self.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[j];
            if (a.y > q.y) != (b.y > q.y) {
                let x = (b.x - a.x) * (q.y - a.y) / (b.y - a.y) + a.x;
                if q.x < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    /// Unchecked distance from `q` to the boundary together with the nearest feature.
    pub fn boundary_distance(&self, q: Point) -> (f64, Feature) {
        let n = self.len();
        let mut best = f64::INFINITY;
        let mut feat = Feature::Edge(0);
        for i in 0..n {
            let (a, b) = self.edge(i);
            let (d, s) = point_segment_distance(q, a, b);
            if d < best {
                best = d;
                feat = if s <= 0.0 {
                    Feature::Vertex(i)
                } else if s >= 1.0 {
                    Feature::Vertex((i + 1) % n)
                } else {
                    Feature::Edge(i)
                };
            }
        }
        (best, feat)
    }

    /// Distance from an interior point to the boundary, with the nearest feature.
    pub fn distance_to_boundary(&self, q: Point) -> Result<(f64, Feature)> {
        if !q.is_finite() {
            return Err(FillError::Domain("non-finite query point".into()));
        }
        let (d, f) = self.boundary_distance(q);
        if d <= self.tol() || !self.contains(q) {
            return Err(FillError::Domain(format!(
                "point ({}, {}) is not strictly inside the polygon",
                q.x, q.y
            )));
        }
        Ok((d, f))
    }

    /// True when `d` lies inside the polygon, allowing `tol` of boundary penetration.
    pub fn disc_inside(&self, d: &Disc, tol: f64) -> bool {
        if !d.center.is_finite() || !d.radius.is_finite() || d.radius < 0.0 {
            return false;
        }
        let (dist, _) = self.boundary_distance(d.center);
        if !self.contains(d.center) && dist > tol {
            return false;
        }
        dist >= d.radius - tol
    }

    /// Nearest point on the boundary to `q`.
    pub fn nearest_boundary_point(&self, q: Point) -> (Point, usize) {
        let mut best = f64::INFINITY;
        let mut out = (self.vertices[0], 0);
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            let (d, s) = point_segment_distance(q, a, b);
            if d < best {
                best = d;
                out = (a + (b - a) * s, i);
            }
        }
        out
    }
}

/// Shoelace area of a validated polygon.
pub fn polygon_area(p: &Polygon) -> f64 {
    p.area()
}

fn bbox(vs: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in vs {
        lo.x = lo.x.min(v.x);
        lo.y = lo.y.min(v.y);
        hi.x = hi.x.max(v.x);
        hi.y = hi.y.max(v.y);
    }
    (lo, hi)
}
