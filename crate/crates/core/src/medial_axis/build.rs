//! Medial-axis construction by clipping pairwise bisectors of boundary sites.
//!
//! Sites are the open edges and the reflex vertices. Every site pair yields a closed-form
//! bisector (line or parabola); the part of it whose points are equidistant to both
//! parents and no closer to any other boundary feature is kept. Endpoints are clustered
//! into nodes, junction positions are polished by Gauss-Newton on the equidistance
//! conditions, and the result is checked to be a tree.

use nalgebra::{Matrix3, Vector3};

use super::branch::{Branch, BranchGeometry, Site};
use super::{Node, NodeKind};
use crate::error::{FillError, Result};
use crate::geom::{Point, Polygon};

/// Samples per bisector when locating valid intervals.
const SAMPLES: usize = 2048;
/// Predicate slack relative to the bounding-box diagonal.
const PRED_TOL: f64 = 1e-11;
/// Endpoints closer than this (relative) belong to the same node.
const CLUSTER_TOL: f64 = 1e-7;
/// Branches shorter than this (relative) are reported in diagnostics.
pub(crate) const SHORT_BRANCH: f64 = 1e-6;

struct Candidate {
    geometry: BranchGeometry,
    parents: [Site; 2],
    lo: f64,
    hi: f64,
}

pub(super) struct Built {
    pub nodes: Vec<Node>,
    pub branches: Vec<Branch>,
    pub diagnostics: Vec<String>,
}

/// Parameter interval where `p0 + t*d` stays inside the box `[lo, hi]`.
fn clip_line(p0: Point, d: Point, lo: Point, hi: Point) -> Option<(f64, f64)> {
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for (p, dd, l, h) in [(p0.x, d.x, lo.x, hi.x), (p0.y, d.y, lo.y, hi.y)] {
        if dd.abs() < 1e-300 {
            if p < l || p > h {
                return None;
            }
        } else {
            let a = (l - p) / dd;
            let b = (h - p) / dd;
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
    }
    (t0 < t1).then_some((t0, t1))
}

fn candidates(poly: &Polygon) -> Vec<Candidate> {
    let n = poly.len();
    let diag = poly.bbox_diag();
    let (lo, hi) = poly.bbox();
    let pad = Point::new(1e-6 * diag, 1e-6 * diag);
    let (lo, hi) = (lo - pad, hi + pad);
    let center = (lo + hi) * 0.5;
    let tol = PRED_TOL * diag;

    let reflex: Vec<usize> = (0..n).filter(|&i| poly.is_reflex(i)).collect();
    let mut out = Vec::new();

    // Case 1: edge / edge
    for i in 0..n {
        for j in (i + 1)..n {
            let ni = poly.inward_normal(i);
            let nj = poly.inward_normal(j);
            let ci = ni.dot(poly.vertex(i));
            let cj = nj.dot(poly.vertex(j));
            let m = ni - nj;
            let mm = m.dot(m);
            if mm < 1e-20 {
                continue;
            }
            let origin = center + m * ((ci - cj - m.dot(center)) / mm);
            let mut dir = m.perp().normalized();
            if ni.dot(dir) < 0.0 {
                dir = -dir;
            }
            let c = ni.dot(dir).max(0.0);
            let r0 = ni.dot(origin) - ci;
            let Some((mut t0, t1)) = clip_line(origin, dir, lo, hi) else {
                continue;
            };
            if c > 0.0 {
                t0 = t0.max(-r0 / c);
            } else if r0 <= tol {
                continue;
            }
            if t0 >= t1 {
                continue;
            }
            out.push(Candidate {
                geometry: BranchGeometry::EdgeEdge { origin, dir, c, r0 },
                parents: [Site::Edge(i), Site::Edge(j)],
                lo: t0,
                hi: t1,
            });
        }
    }

    // Case 2: edge / reflex vertex
    for e in 0..n {
        for &v in &reflex {
            if v == e || v == (e + 1) % n {
                continue;
            }
            let (a, b) = poly.edge(e);
            let y_axis = poly.inward_normal(e);
            let x_axis = (b - a).normalized();
            let vp = poly.vertex(v);
            let h = (vp - a).dot(y_axis);
            if h <= tol {
                continue;
            }
            let r0 = 0.5 * h;
            let origin = vp - y_axis * r0;
            let ta = (a - origin).dot(x_axis) / (2.0 * r0);
            let tb = (b - origin).dot(x_axis) / (2.0 * r0);
            let tmax = (diag / r0).sqrt();
            let t0 = ta.min(tb).max(-tmax);
            let t1 = ta.max(tb).min(tmax);
            if t0 >= t1 {
                continue;
            }
            out.push(Candidate {
                geometry: BranchGeometry::EdgePoint { origin, x_axis, y_axis, r0 },
                parents: [Site::Edge(e), Site::Vertex(v)],
                lo: t0,
                hi: t1,
            });
        }
    }

    // Case 3: reflex vertex / reflex vertex
    for (k, &u) in reflex.iter().enumerate() {
        for &v in &reflex[k + 1..] {
            let pu = poly.vertex(u);
            let pv = poly.vertex(v);
            let mid = (pu + pv) * 0.5;
            let a = 0.5 * pu.dist(pv);
            let dir = (pv - pu).perp().normalized();
            let Some((t0, t1)) = clip_line(mid, dir, lo, hi) else {
                continue;
            };
            out.push(Candidate {
                geometry: BranchGeometry::PointPoint { mid, dir, a },
                parents: [Site::Vertex(u), Site::Vertex(v)],
                lo: t0,
                hi: t1,
            });
        }
    }
    out
}

/// Whether the point at parameter `t` of a candidate bisector is a medial-axis point
/// generated by exactly the candidate's parents.
fn is_valid(poly: &Polygon, cand: &Candidate, t: f64) -> bool {
    let tol = PRED_TOL * poly.bbox_diag();
    let p = cand.geometry.point(t);
    let r = cand.geometry.radius(t);
    if !p.is_finite() || r < -tol {
        return false;
    }
    for site in cand.parents {
        match site {
            Site::Edge(i) => {
                let (a, b) = poly.edge(i);
                let len = a.dist(b);
                let s = (p - a).dot((b - a) * (1.0 / len));
                if s < -tol || s > len + tol {
                    return false;
                }
                if (p - a).dot(poly.inward_normal(i)) < -tol {
                    return false;
                }
            }
            Site::Vertex(v) => {
                let n = poly.len();
                let pv = poly.vertex(v);
                let prev = poly.vertex(v + n - 1);
                let next = poly.vertex(v + 1);
                if (p - pv).dot((prev - pv).normalized()) > tol
                    || (p - pv).dot((next - pv).normalized()) > tol
                {
                    return false;
                }
            }
        }
    }
    let (d, _) = poly.boundary_distance(p);
    if d > tol && !poly.contains(p) {
        return false;
    }
    d >= r - tol
}

fn uniform_samples(cand: &Candidate) -> Vec<f64> {
    let step = (cand.hi - cand.lo) / SAMPLES as f64;
    (0..=SAMPLES).map(|k| cand.lo + step * k as f64).collect()
}

fn valid_intervals(poly: &Polygon, cand: &Candidate, ts: &[f64]) -> Vec<(f64, f64)> {
    let last = ts.len() - 1;
    let flags: Vec<bool> = ts.iter().map(|&t| is_valid(poly, cand, t)).collect();

    // bisect the predicate boundary between a valid and an invalid parameter
    let refine = |mut good: f64, mut bad: f64| {
        for _ in 0..100 {
            let mid = 0.5 * (good + bad);
            if mid == good || mid == bad {
                break;
            }
            if is_valid(poly, cand, mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    };

    let mut out = Vec::new();
    let mut k = 0;
    while k <= last {
        if !flags[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k < last && flags[k + 1] {
            k += 1;
        }
        let end = k;
        let t0 = if start == 0 { ts[0] } else { refine(ts[start], ts[start - 1]) };
        let t1 = if end == last { ts[last] } else { refine(ts[end], ts[end + 1]) };
        out.push((t0, t1));
        k += 1;
    }
    out
}

fn site_distance(poly: &Polygon, site: Site, p: Point) -> (f64, Point) {
    match site {
        Site::Edge(i) => {
            let n = poly.inward_normal(i);
            ((p - poly.vertex(i)).dot(n), n)
        }
        Site::Vertex(v) => {
            let d = p - poly.vertex(v);
            let r = d.norm();
            (r, if r > 0.0 { d * (1.0 / r) } else { Point::new(0.0, 0.0) })
        }
    }
}

/// Gauss-Newton polish of a point equidistant to all `sites`.
fn refine_node(poly: &Polygon, sites: &[Site], start: Point) -> Option<(Point, f64)> {
    if sites.len() < 3 {
        return None;
    }
    let diag = poly.bbox_diag();
    let mut p = start;
    let mut r = sites.iter().map(|&s| site_distance(poly, s, p).0).sum::<f64>() / sites.len() as f64;
    for _ in 0..50 {
        let mut jtj = Matrix3::<f64>::zeros();
        let mut jtr = Vector3::<f64>::zeros();
        for &s in sites {
            let (d, g) = site_distance(poly, s, p);
            let row = Vector3::new(g.x, g.y, -1.0);
            let res = d - r;
            jtj += row * row.transpose();
            jtr += row * res;
        }
        let step = jtj.lu().solve(&(-jtr))?;
        p = Point::new(p.x + step[0], p.y + step[1]);
        r += step[2];
        if step.norm() <= 1e-15 * diag {
            break;
        }
    }
    let worst = sites
        .iter()
        .map(|&s| (site_distance(poly, s, p).0 - r).abs())
        .fold(0.0, f64::max);
    (worst <= 1e-9 * diag && p.dist(start) <= 1e3 * CLUSTER_TOL * diag).then_some((p, r))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut k = i;
        while self.0[k] != r {
            let next = self.0[k];
            self.0[k] = r;
            k = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub(super) fn build(poly: &Polygon) -> Result<Built> {
    let diag = poly.bbox_diag();
    let mut diagnostics = Vec::new();

    let cands = candidates(poly);
    let first: Vec<Vec<(f64, f64)>> =
        cands.iter().map(|c| valid_intervals(poly, c, &uniform_samples(c))).collect();

    // Branches shorter than the sampling step can hide between samples. Their ends are
    // nodes of other branches, so resample every candidate at the nodes it passes through.
    let found: Vec<Point> = cands
        .iter()
        .zip(&first)
        .flat_map(|(c, iv)| iv.iter().flat_map(|&(t0, t1)| [c.geometry.point(t0), c.geometry.point(t1)]))
        .collect();
    let mut raw: Vec<(BranchGeometry, [Site; 2], f64, f64)> = Vec::new();
    for (cand, intervals) in cands.iter().zip(first) {
        let mut extra: Vec<f64> = found
            .iter()
            .filter(|&&p| {
                let d0 = site_distance(poly, cand.parents[0], p).0;
                let d1 = site_distance(poly, cand.parents[1], p).0;
                (d0 - d1).abs() <= 1e3 * CLUSTER_TOL * diag
            })
            .map(|&p| cand.geometry.project(p))
            .filter(|t| *t > cand.lo && *t < cand.hi)
            .collect();
        let intervals = if extra.is_empty() {
            intervals
        } else {
            let mut ts = uniform_samples(cand);
            ts.append(&mut extra);
            ts.sort_by(f64::total_cmp);
            ts.dedup();
            let mids: Vec<f64> = ts.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
            ts.extend(mids);
            ts.sort_by(f64::total_cmp);
            valid_intervals(poly, cand, &ts)
        };
        for (t0, t1) in intervals {
            let len = cand.geometry.arclength(t1) - cand.geometry.arclength(t0);
            if len > 10.0 * CLUSTER_TOL * diag {
                raw.push((cand.geometry, cand.parents, t0, t1));
            }
        }
    }
    if raw.is_empty() {
        return Err(FillError::MedialAxis("no medial-axis branches found".into()));
    }

    // Cluster endpoints into nodes.
    let ends: Vec<Point> = raw
        .iter()
        .flat_map(|(g, _, t0, t1)| [g.point(*t0), g.point(*t1)])
        .collect();
    let mut uf = UnionFind((0..ends.len()).collect());
    for i in 0..ends.len() {
        for j in (i + 1)..ends.len() {
            if ends[i].dist(ends[j]) <= CLUSTER_TOL * diag {
                uf.union(i, j);
            }
        }
    }
    let mut root_to_node = std::collections::BTreeMap::new();
    for i in 0..ends.len() {
        let r = uf.find(i);
        let next = root_to_node.len();
        root_to_node.entry(r).or_insert(next);
    }
    let node_of = |uf: &mut UnionFind, i: usize| root_to_node[&uf.find(i)];

    let mut branches = Vec::new();
    for (k, (g, parents, t0, t1)) in raw.iter().enumerate() {
        let a = node_of(&mut uf, 2 * k);
        let b = node_of(&mut uf, 2 * k + 1);
        if a == b {
            diagnostics.push(format!(
                "dropped branch {:?} of length {:.3e}: both ends merge into one node",
                parents,
                g.arclength(*t1) - g.arclength(*t0)
            ));
            continue;
        }
        branches.push(Branch { geometry: *g, parents: *parents, t_range: (*t0, *t1), nodes: [a, b] });
    }

    // Renumber nodes that are still referenced.
    let mut used: Vec<Option<usize>> = vec![None; root_to_node.len()];
    let mut count = 0;
    for b in &branches {
        for &nd in &b.nodes {
            if used[nd].is_none() {
                used[nd] = Some(count);
                count += 1;
            }
        }
    }
    let mut sums = vec![(Point::new(0.0, 0.0), 0usize); count];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (bi, b) in branches.iter_mut().enumerate() {
        for (end, nd) in b.nodes.iter_mut().enumerate() {
            *nd = used[*nd].expect("node in use");
            let t = if end == 0 { b.t_range.0 } else { b.t_range.1 };
            let p = b.geometry.point(t);
            sums[*nd].0 = sums[*nd].0 + p;
            sums[*nd].1 += 1;
            incident[*nd].push(bi);
        }
    }

    let mut nodes = Vec::with_capacity(count);
    for (nd, inc) in incident.iter().enumerate() {
        let avg = sums[nd].0 * (1.0 / sums[nd].1 as f64);
        let degree = inc.len();
        let mut sites: Vec<Site> = inc.iter().flat_map(|&b| branches[b].parents).collect();
        sites.sort();
        sites.dedup();
        let (position, radius, kind) = if degree == 1 {
            let vertex = (0..poly.len())
                .map(|i| poly.vertex(i))
                .find(|v| v.dist(avg) <= 1e3 * CLUSTER_TOL * diag);
            match vertex {
                Some(v) => (v, 0.0, NodeKind::EndPoint),
                None => {
                    diagnostics.push(format!(
                        "end point at ({:.6}, {:.6}) is not a polygon vertex",
                        avg.x, avg.y
                    ));
                    (avg, poly.boundary_distance(avg).0, NodeKind::EndPoint)
                }
            }
        } else {
            let kind = if degree == 2 { NodeKind::Transition } else { NodeKind::Junction };
            match refine_node(poly, &sites, avg) {
                Some((p, r)) => (p, r, kind),
                None => {
                    diagnostics.push(format!(
                        "node at ({:.6}, {:.6}) kept at endpoint average",
                        avg.x, avg.y
                    ));
                    (avg, poly.boundary_distance(avg).0, kind)
                }
            }
        };
        nodes.push(Node { position, radius, kind, branches: inc.clone() });
    }

    // Snap branch parameters onto the polished node positions.
    for b in branches.iter_mut() {
        let t0 = b.geometry.project(nodes[b.nodes[0]].position);
        let t1 = b.geometry.project(nodes[b.nodes[1]].position);
        if t0 < t1 {
            b.t_range = (t0, t1);
        } else {
            b.t_range = (t1, t0);
            b.nodes.swap(0, 1);
        }
        if b.length() < SHORT_BRANCH * diag {
            diagnostics.push(format!(
                "short branch {:?}: length {:.3e}",
                b.parents,
                b.length()
            ));
        }
    }

    check_tree(&nodes, &branches)?;
    Ok(Built { nodes, branches, diagnostics })
}

fn check_tree(nodes: &[Node], branches: &[Branch]) -> Result<()> {
    if branches.len() + 1 != nodes.len() {
        return Err(FillError::MedialAxis(format!(
            "expected a tree, found {} nodes and {} branches",
            nodes.len(),
            branches.len()
        )));
    }
    let mut seen = vec![false; nodes.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(nd) = stack.pop() {
        for &b in &nodes[nd].branches {
            for &m in &branches[b].nodes {
                if !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(FillError::MedialAxis("medial axis graph is disconnected".into()));
    }
    Ok(())
}
