use serde::{Deserialize, Serialize};

use crate::error::{FillError, Result};
use crate::geom::Point;

/// A boundary feature that can generate a medial-axis branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", content = "index", rename_all = "snake_case")]
pub enum Site {
    Edge(usize),
    /// Reflex vertex.
    Vertex(usize),
}

/// Branch taxonomy by parent pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BranchCase {
    EdgeEdge,
    EdgePoint,
    PointPoint,
}

/// Closed-form geometry of a branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BranchGeometry {
    /// Straight segment `origin + t*dir` with linear radius `c*t + r0`.
    EdgeEdge { origin: Point, dir: Point, c: f64, r0: f64 },
    /// Parabola with the reflex vertex as focus and the edge line as directrix, in the
    /// frame where the path is `(2*r0*t, r0*t^2)` and the radius is `r0*(t^2 + 1)`.
    EdgePoint { origin: Point, x_axis: Point, y_axis: Point, r0: f64 },
    /// Perpendicular bisector of two reflex vertices, `t = 0` at their midpoint:
    /// path `mid + t*dir`, radius `sqrt(a^2 + t^2)`.
    PointPoint { mid: Point, dir: Point, a: f64 },
}

impl BranchGeometry {
    pub fn case(&self) -> BranchCase {
        match self {
            BranchGeometry::EdgeEdge { .. } => BranchCase::EdgeEdge,
            BranchGeometry::EdgePoint { .. } => BranchCase::EdgePoint,
            BranchGeometry::PointPoint { .. } => BranchCase::PointPoint,
        }
    }

    pub fn point(&self, t: f64) -> Point {
        match *self {
            BranchGeometry::EdgeEdge { origin, dir, .. } => origin + dir * t,
            BranchGeometry::EdgePoint { origin, x_axis, y_axis, r0 } => {
                origin + x_axis * (2.0 * r0 * t) + y_axis * (r0 * t * t)
            }
            BranchGeometry::PointPoint { mid, dir, .. } => mid + dir * t,
        }
    }

    pub fn radius(&self, t: f64) -> f64 {
        match *self {
            BranchGeometry::EdgeEdge { c, r0, .. } => c * t + r0,
            BranchGeometry::EdgePoint { r0, .. } => r0 * (t * t + 1.0),
            BranchGeometry::PointPoint { a, .. } => a.hypot(t),
        }
    }

    /// dr/dt in the native parameter.
    pub fn radius_dt(&self, t: f64) -> f64 {
        match *self {
            BranchGeometry::EdgeEdge { c, .. } => c,
            BranchGeometry::EdgePoint { r0, .. } => 2.0 * r0 * t,
            BranchGeometry::PointPoint { a, .. } => t / a.hypot(t),
        }
    }

    /// |dp/dt|.
    pub fn speed(&self, t: f64) -> f64 {
        match *self {
            BranchGeometry::EdgePoint { r0, .. } => 2.0 * r0 * (1.0 + t * t).sqrt(),
            _ => 1.0,
        }
    }

    /// Radius derivative with respect to arclength.
    pub fn radius_ds(&self, t: f64) -> f64 {
        self.radius_dt(t) / self.speed(t)
    }

    /// Unsigned curvature of the path.
    pub fn curvature(&self, t: f64) -> f64 {
        match *self {
            BranchGeometry::EdgePoint { r0, .. } => (1.0 + t * t).powf(-1.5) / (2.0 * r0),
            _ => 0.0,
        }
    }

    /// Signed arclength from the parameter origin.
    pub fn arclength(&self, t: f64) -> f64 {
        match *self {
            BranchGeometry::EdgePoint { r0, .. } => r0 * (t * (1.0 + t * t).sqrt() + t.asinh()),
            _ => t,
        }
    }

    /// Inverse of [`arclength`](Self::arclength).
    pub fn param_at_arclength(&self, s: f64) -> f64 {
        match *self {
            BranchGeometry::EdgePoint { r0, .. } => {
                // s/r0 = t*sqrt(1+t^2) + asinh(t) is odd and strictly increasing.
                let target = s / r0;
                let sign = target.signum();
                let target = target.abs();
                let mut lo = 0.0;
                let mut hi = 1.0;
                let g = |t: f64| t * (1.0 + t * t).sqrt() + t.asinh();
                while g(hi) < target {
                    hi *= 2.0;
                }
                let mut t = 0.5 * (lo + hi);
                for _ in 0..200 {
                    t = 0.5 * (lo + hi);
                    if g(t) < target {
                        lo = t;
                    } else {
                        hi = t;
                    }
                    if hi - lo <= 1e-16 * hi.max(1.0) {
                        break;
                    }
                }
                // one Newton polish: g'(t) = 2*sqrt(1+t^2)
                let t = t - (g(t) - target) / (2.0 * (1.0 + t * t).sqrt());
                sign * t
            }
            _ => s,
        }
    }

    /// Parameter of the branch point closest to `p` (exact for points on the path).
    pub fn project(&self, p: Point) -> f64 {
        match *self {
            BranchGeometry::EdgeEdge { origin, dir, .. } => (p - origin).dot(dir),
            BranchGeometry::EdgePoint { origin, x_axis, r0, .. } => {
                (p - origin).dot(x_axis) / (2.0 * r0)
            }
            BranchGeometry::PointPoint { mid, dir, .. } => (p - mid).dot(dir),
        }
    }
}

/// A medial-axis branch: parameterized path between two nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub geometry: BranchGeometry,
    pub parents: [Site; 2],
    pub t_range: (f64, f64),
    /// Node ids at `t_range.0` and `t_range.1`.
    pub nodes: [usize; 2],
}

impl Branch {
    pub fn case(&self) -> BranchCase {
        self.geometry.case()
    }

    pub fn point(&self, t: f64) -> Point {
        self.geometry.point(t)
    }

    pub fn length(&self) -> f64 {
        self.geometry.arclength(self.t_range.1) - self.geometry.arclength(self.t_range.0)
    }

    /// Closed-form radius, rejecting parameters outside the branch.
    pub fn radius_at(&self, t: f64) -> Result<f64> {
        let (a, b) = self.t_range;
        let slack = 1e-12 * (1.0 + a.abs().max(b.abs()));
        if !t.is_finite() || t < a - slack || t > b + slack {
            return Err(FillError::Domain(format!(
                "parameter {t} outside branch range [{a}, {b}]"
            )));
        }
        Ok(self.geometry.radius(t))
    }

    /// Parameter of an interior radius minimum, if any.
    pub fn interior_minimum(&self) -> Option<f64> {
        let (a, b) = self.t_range;
        match self.geometry {
            BranchGeometry::EdgeEdge { .. } => None,
            _ => {
                let span = b - a;
                (a + 1e-9 * span < 0.0 && 0.0 < b - 1e-9 * span).then_some(0.0)
            }
        }
    }
}
