//! Medial axis of a simple polygon as a tree of closed-form branches, and its
//! decomposition into pieces for the way search.

pub mod branch;
mod build;
pub mod pieces;

use std::collections::VecDeque;

use serde::Serialize;

pub use branch::{Branch, BranchCase, BranchGeometry, Site};
pub use pieces::{Piece, Section, SectionSegment};

use crate::error::{FillError, Result};
use crate::geom::{Disc, Point, Polygon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    /// Degree one: a convex corner where the radius vanishes.
    EndPoint,
    /// Degree two: the parents change but the axis does not branch.
    Transition,
    /// Degree three or more.
    Junction,
    /// Interior radius minimum where a branch is cut in two pieces.
    Split,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub position: Point,
    pub radius: f64,
    pub kind: NodeKind,
    pub branches: Vec<usize>,
}

/// A branch point of the axis.
#[derive(Debug, Clone, PartialEq)]
pub struct JunctionPoint {
    pub position: Point,
    pub radius: f64,
    pub degree: usize,
    pub branches: Vec<usize>,
    pub node: usize,
    pub piece: usize,
}

/// What lies beyond one end of a section piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndLink {
    /// Polygon corner (or other degree-one end).
    Leaf,
    Junction(usize),
    /// Another section meeting at a transition or split node; `end` is 0 or 1.
    Section { piece: usize, end: usize },
}

/// Closest axis location to a query point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub piece: usize,
    /// Normalized coordinate; zero for junction pieces.
    pub u: f64,
    pub point: Point,
    pub radius: f64,
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct MedialAxis {
    pub nodes: Vec<Node>,
    pub branches: Vec<Branch>,
    pub pieces: Vec<Piece>,
    /// Piece adjacency (sorted neighbor lists); the piece graph is a tree.
    pub adjacency: Vec<Vec<usize>>,
    pub diagnostics: Vec<String>,
    bbox_diag: f64,
}

/// Computes the medial axis of `poly` and its piece decomposition.
pub fn compute_medial_axis(poly: &Polygon) -> Result<MedialAxis> {
    if poly.area() <= poly.tol() * poly.bbox_diag() {
        return Err(FillError::InvalidPolygon("degenerate polygon area".into()));
    }
    let built = build::build(poly)?;
    let mut nodes = built.nodes;
    let diag = poly.bbox_diag();
    let dec = pieces::decompose(&mut nodes, &built.branches, diag);
    for d in &built.diagnostics {
        log::debug!("medial axis: {d}");
    }
    Ok(MedialAxis {
        nodes,
        branches: built.branches,
        pieces: dec.pieces,
        adjacency: dec.adjacency,
        diagnostics: built.diagnostics,
        bbox_diag: diag,
    })
}

impl MedialAxis {
    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    pub fn bbox_diag(&self) -> f64 {
        self.bbox_diag
    }

    pub fn is_junction(&self, piece: usize) -> bool {
        self.pieces[piece].is_junction()
    }

    /// Ids of the junction pieces, ascending.
    pub fn junction_pieces(&self) -> Vec<usize> {
        (0..self.pieces.len()).filter(|&p| self.is_junction(p)).collect()
    }

    pub fn num_junctions(&self) -> usize {
        self.pieces.iter().filter(|p| p.is_junction()).count()
    }

    pub fn junctions(&self) -> Vec<JunctionPoint> {
        self.pieces
            .iter()
            .enumerate()
            .filter_map(|(pi, p)| match p {
                Piece::Junction { node } => {
                    let n = &self.nodes[*node];
                    Some(JunctionPoint {
                        position: n.position,
                        radius: n.radius,
                        degree: n.branches.len(),
                        branches: n.branches.clone(),
                        node: *node,
                        piece: pi,
                    })
                }
                Piece::Section(_) => None,
            })
            .collect()
    }

    pub fn section(&self, piece: usize) -> Result<&Section> {
        self.pieces
            .get(piece)
            .ok_or_else(|| FillError::Domain(format!("no piece {piece}")))?
            .as_section()
            .ok_or_else(|| FillError::Domain(format!("piece {piece} is a junction")))
    }

    /// Position and radius at normalized coordinate `u` of a section piece.
    pub fn point_at(&self, piece: usize, u: f64) -> Result<(Point, f64)> {
        let sec = self.section(piece)?;
        if !(-1e-12..=1.0 + 1e-12).contains(&u) {
            return Err(FillError::Domain(format!("u = {u} outside [0, 1]")));
        }
        Ok(self.section_point(sec, u.clamp(0.0, 1.0)))
    }

    pub(crate) fn section_point(&self, sec: &Section, u: f64) -> (Point, f64) {
        let s = u * sec.length;
        let seg = sec
            .segments
            .iter()
            .find(|g| s <= g.offset + g.length)
            .unwrap_or_else(|| sec.segments.last().expect("non-empty section"));
        let g = &self.branches[seg.branch].geometry;
        let local = (s - seg.offset).clamp(0.0, seg.length);
        let t = if local <= 0.0 {
            seg.t_start
        } else if local >= seg.length {
            seg.t_end
        } else {
            let s0 = g.arclength(seg.t_start);
            let t = if seg.t_end >= seg.t_start {
                g.param_at_arclength(s0 + local)
            } else {
                g.param_at_arclength(s0 - local)
            };
            t.clamp(seg.t_start.min(seg.t_end), seg.t_start.max(seg.t_end))
        };
        (g.point(t), g.radius(t))
    }

    /// Disc centered on the axis at a placement.
    pub fn disc_at(&self, piece: usize, u: f64) -> Result<Disc> {
        match &self.pieces.get(piece) {
            Some(Piece::Junction { node }) => {
                let n = &self.nodes[*node];
                Ok(Disc::new(n.position, n.radius))
            }
            Some(Piece::Section(_)) => {
                let (p, r) = self.point_at(piece, u)?;
                Ok(Disc::new(p, r))
            }
            None => Err(FillError::Domain(format!("no piece {piece}"))),
        }
    }

    /// Position and radius of a junction piece.
    pub fn junction_disc(&self, piece: usize) -> Result<Disc> {
        match self.pieces.get(piece) {
            Some(Piece::Junction { node }) => {
                let n = &self.nodes[*node];
                Ok(Disc::new(n.position, n.radius))
            }
            _ => Err(FillError::Domain(format!("piece {piece} is not a junction"))),
        }
    }

    /// What adjoins end `end` (0 for `u = 0`, 1 for `u = 1`) of a section piece.
    pub fn end_link(&self, piece: usize, end: usize) -> EndLink {
        let Some(sec) = self.pieces[piece].as_section() else {
            return EndLink::Leaf;
        };
        let node = sec.end_nodes[end];
        for &q in &self.adjacency[piece] {
            match &self.pieces[q] {
                Piece::Junction { node: jn } if *jn == node => return EndLink::Junction(q),
                Piece::Section(other) => {
                    if let Some(e) = other.end_nodes.iter().position(|&m| m == node) {
                        return EndLink::Section { piece: q, end: e };
                    }
                }
                _ => {}
            }
        }
        EndLink::Leaf
    }

    /// Hop distances from `from` to every piece in the piece graph.
    pub fn piece_distances(&self, from: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.pieces.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(p) = queue.pop_front() {
            for &q in &self.adjacency[p] {
                if dist[q] == usize::MAX {
                    dist[q] = dist[p] + 1;
                    queue.push_back(q);
                }
            }
        }
        dist
    }

    /// Nearest axis location to `p`.
    pub fn project(&self, p: Point) -> Projection {
        let mut best = Projection {
            piece: 0,
            u: 0.0,
            point: p,
            radius: 0.0,
            distance: f64::INFINITY,
        };
        for (pi, piece) in self.pieces.iter().enumerate() {
            match piece {
                Piece::Junction { node } => {
                    let n = &self.nodes[*node];
                    let d = n.position.dist(p);
                    if d < best.distance {
                        best = Projection { piece: pi, u: 0.0, point: n.position, radius: n.radius, distance: d };
                    }
                }
                Piece::Section(sec) => {
                    for seg in &sec.segments {
                        let g = &self.branches[seg.branch].geometry;
                        let t = closest_param(g, seg.t_start, seg.t_end, p);
                        let q = g.point(t);
                        let d = q.dist(p);
                        if d < best.distance {
                            let local = (g.arclength(t) - g.arclength(seg.t_start)).abs();
                            let u = if sec.length > 0.0 {
                                ((seg.offset + local) / sec.length).clamp(0.0, 1.0)
                            } else {
                                0.0
                            };
                            best = Projection { piece: pi, u, point: q, radius: g.radius(t), distance: d };
                        }
                    }
                }
            }
        }
        best
    }

    /// About `per_branch` maximal discs per branch: half spaced uniformly in parameter,
    /// half geometrically toward the smaller-radius end so that vanishing corners are
    /// still covered.
    pub fn sample_discs(&self, per_branch: usize) -> Vec<Disc> {
        let half = (per_branch / 2).max(1);
        let mut out = Vec::with_capacity(self.branches.len() * (2 * half + 2));
        for b in &self.branches {
            let (t0, t1) = b.t_range;
            for k in 0..=half {
                let t = t0 + (t1 - t0) * k as f64 / half as f64;
                out.push(Disc::new(b.point(t), b.geometry.radius(t)));
            }
            let (near, far) = if b.geometry.radius(t0) <= b.geometry.radius(t1) { (t0, t1) } else { (t1, t0) };
            let ratio = 1e-7f64;
            for k in 0..=half {
                let f = ratio.powf(1.0 - k as f64 / half as f64);
                let t = near + (far - near) * f;
                out.push(Disc::new(b.point(t), b.geometry.radius(t)));
            }
        }
        out
    }

    pub fn to_json(&self) -> MedialAxisJson {
        MedialAxisJson {
            branches: self
                .branches
                .iter()
                .map(|b| {
                    let (t0, t1) = b.t_range;
                    let params = match b.geometry {
                        BranchGeometry::EdgeEdge { c, r0, .. } => RadiusParams::EdgeEdge { c, r0 },
                        BranchGeometry::EdgePoint { r0, .. } => RadiusParams::EdgePoint { r0 },
                        BranchGeometry::PointPoint { a, dir, .. } => {
                            let (p, q) = (b.point(t0), b.point(t1));
                            RadiusParams::PointPoint { a, start: [p.x, p.y], end: [q.x, q.y], dir: [dir.x, dir.y] }
                        }
                    };
                    let p0 = b.point(t0);
                    let p1 = b.point(t1);
                    BranchJson {
                        case: b.case(),
                        parents: b.parents,
                        t_range: [t0, t1],
                        start: [p0.x, p0.y],
                        end: [p1.x, p1.y],
                        radius_params: params,
                        nodes: b.nodes,
                    }
                })
                .collect(),
            junctions: self
                .junctions()
                .iter()
                .map(|j| JunctionJson {
                    x: j.position.x,
                    y: j.position.y,
                    r: j.radius,
                    degree: j.degree,
                    piece: j.piece,
                })
                .collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| match p {
                    Piece::Junction { node } => PieceJson { kind: "junction", node: Some(*node), branches: vec![], length: 0.0 },
                    Piece::Section(s) => PieceJson {
                        kind: "section",
                        node: None,
                        branches: s.segments.iter().map(|g| g.branch).collect(),
                        length: s.length,
                    },
                })
                .collect(),
            adjacency: self.adjacency.clone(),
            diagnostics: self.diagnostics.clone(),
        }
    }
}

/// Parameter in `[min(a, b), max(a, b)]` of the branch point closest to `p`.
fn closest_param(g: &BranchGeometry, a: f64, b: f64, p: Point) -> f64 {
    let (lo, hi) = (a.min(b), a.max(b));
    match g {
        BranchGeometry::EdgePoint { .. } => {
            const N: usize = 64;
            let f = |t: f64| g.point(t).dist(p);
            let mut k_best = 0;
            let mut d_best = f64::INFINITY;
            for k in 0..=N {
                let t = lo + (hi - lo) * k as f64 / N as f64;
                let d = f(t);
                if d < d_best {
                    d_best = d;
                    k_best = k;
                }
            }
            let step = (hi - lo) / N as f64;
            let mut l = (lo + step * (k_best as f64 - 1.0)).max(lo);
            let mut h = (lo + step * (k_best as f64 + 1.0)).min(hi);
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..80 {
                let m1 = h - phi * (h - l);
                let m2 = l + phi * (h - l);
                if f(m1) <= f(m2) {
                    h = m2;
                } else {
                    l = m1;
                }
            }
            0.5 * (l + h)
        }
        _ => g.project(p).clamp(lo, hi),
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum RadiusParams {
    EdgeEdge { c: f64, r0: f64 },
    EdgePoint { r0: f64 },
    PointPoint { a: f64, start: [f64; 2], end: [f64; 2], dir: [f64; 2] },
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchJson {
    pub case: BranchCase,
    pub parents: [Site; 2],
    pub t_range: [f64; 2],
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub radius_params: RadiusParams,
    pub nodes: [usize; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct JunctionJson {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub degree: usize,
    pub piece: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PieceJson {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node: Option<usize>,
    pub branches: Vec<usize>,
    pub length: f64,
}

/// Serializable view of a medial axis.
#[derive(Debug, Clone, Serialize)]
pub struct MedialAxisJson {
    pub branches: Vec<BranchJson>,
    pub junctions: Vec<JunctionJson>,
    pub pieces: Vec<PieceJson>,
    pub adjacency: Vec<Vec<usize>>,
    pub diagnostics: Vec<String>,
}
