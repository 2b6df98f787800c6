//! Exact areas of unions and differences of discs by integrating along the uncovered
//! boundary arcs (Green's theorem).

use std::f64::consts::{PI, TAU};

use crate::geom::{Disc, Point};

/// How much of one circle's boundary lies inside another disc.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Cover {
    None,
    Full,
    /// Start angle in `[0, 2π)` and angular length in `(0, 2π)`.
    Arc(f64, f64),
}

/// Boundary of disc `c` (index `ci`) covered by disc `o` (index `oi`). Identical discs
/// are resolved by index: the lower index covers the higher.
fn covered_by(c: &Disc, ci: usize, o: &Disc, oi: usize) -> Cover {
    if o.radius <= 0.0 || c.radius <= 0.0 {
        return Cover::None;
    }
    let v = o.center - c.center;
    let d = v.norm();
    let scale = c.radius.max(o.radius);
    let eps = 1e-14 * scale;
    if d <= eps && (c.radius - o.radius).abs() <= eps {
        return if oi < ci { Cover::Full } else { Cover::None };
    }
    if d + c.radius <= o.radius {
        return Cover::Full;
    }
    if d >= c.radius + o.radius || d + o.radius <= c.radius {
        return Cover::None;
    }
    let a = (c.radius * c.radius + d * d - o.radius * o.radius) / (2.0 * d);
    let h2 = c.radius * c.radius - a * a;
    let tol = 1e-9 * scale;
    if h2 < tol * tol {
        // tangent within tolerance
        return if o.radius > c.radius && d < o.radius { Cover::Full } else { Cover::None };
    }
    let alpha = h2.sqrt().atan2(a);
    let beta = v.y.atan2(v.x);
    Cover::Arc((beta - alpha).rem_euclid(TAU), 2.0 * alpha)
}

/// Uncovered angular intervals `[a, b]` of a circle given its covers, or `None` when
/// the whole circle is covered.
fn uncovered(covers: &[Cover]) -> Option<Vec<(f64, f64)>> {
    let mut iv: Vec<(f64, f64)> = Vec::with_capacity(covers.len() + 2);
    for c in covers {
        match *c {
            Cover::None => {}
            Cover::Full => return None,
            Cover::Arc(s, len) => {
                let e = s + len;
                if e > TAU {
                    iv.push((s, TAU));
                    iv.push((0.0, e - TAU));
                } else {
                    iv.push((s, e));
                }
            }
        }
    }
    if iv.is_empty() {
        return Some(vec![(0.0, TAU)]);
    }
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Vec::new();
    let mut cursor = 0.0;
    for (s, e) in iv {
        if s > cursor {
            out.push((cursor, s));
        }
        cursor = f64::max(cursor, e);
    }
    if cursor < TAU {
        out.push((cursor, TAU));
    }
    // join the pieces that wrap through angle zero
    if out.len() >= 2 && out[0].0 == 0.0 && out.last().unwrap().1 == TAU {
        let first = out.remove(0);
        out.last_mut().unwrap().1 = TAU + first.1;
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

/// `½∮(x dy − y dx)` along the arc `[t0, t1]` of a circle centered at `p` (relative
/// to the integration origin).
fn green(p: Point, r: f64, t0: f64, t1: f64) -> f64 {
    if t1 - t0 >= TAU {
        return PI * r * r;
    }
    let (s0, c0) = t0.sin_cos();
    let (s1, c1) = t1.sin_cos();
    0.5 * (r * r * (t1 - t0) + r * (p.x * (s1 - s0) - p.y * (c1 - c0)))
}

/// Signed boundary integral of the arcs of disc `i` not covered by any disc in `others`.
fn boundary_term<'a>(
    disc: &Disc,
    i: usize,
    others: impl Iterator<Item = (usize, &'a Disc)>,
    origin: Point,
) -> f64 {
    if disc.radius <= 0.0 {
        return 0.0;
    }
    let covers: Vec<Cover> = others
        .filter(|&(j, _)| j != i)
        .map(|(j, o)| covered_by(disc, i, o, j))
        .filter(|c| *c != Cover::None)
        .collect();
    match uncovered(&covers) {
        None => 0.0,
        Some(arcs) => {
            let p = disc.center - origin;
            arcs.iter().map(|&(a, b)| green(p, disc.radius, a, b)).sum()
        }
    }
}

fn centroid(discs: &[Disc]) -> Point {
    if discs.is_empty() {
        return Point::default();
    }
    let s = discs.iter().fold(Point::default(), |acc, d| acc + d.center);
    s * (1.0 / discs.len() as f64)
}

fn overlaps(a: &Disc, b: &Disc) -> bool {
    a.center.dist(b.center) < a.radius + b.radius
}

/// Area of the union of `discs`.
pub fn union_area(discs: &[Disc]) -> f64 {
    let origin = centroid(discs);
    let mut total = 0.0;
    for (i, d) in discs.iter().enumerate() {
        if d.radius <= 0.0 {
            continue;
        }
        let near = discs.iter().enumerate().filter(|(j, o)| *j != i && overlaps(d, o));
        total += boundary_term(d, i, near, origin);
    }
    total.max(0.0)
}

/// Area of `discs[k]` not covered by any other disc of the slice.
pub fn difference_area(discs: &[Disc], k: usize) -> f64 {
    let dk = &discs[k];
    if dk.radius <= 0.0 {
        return 0.0;
    }
    let origin = dk.center;
    let near: Vec<(usize, &Disc)> = discs
        .iter()
        .enumerate()
        .filter(|(j, o)| *j != k && overlaps(dk, o) && o.radius > 0.0)
        .collect();
    let mut area = boundary_term(dk, k, near.iter().copied(), origin);
    for &(j, dj) in &near {
        let without_k = near.iter().copied().filter(|&(l, _)| l != j);
        let with_k = without_k.clone().chain(std::iter::once((k, dk)));
        area -= boundary_term(dj, j, without_k, origin) - boundary_term(dj, j, with_k, origin);
    }
    area.max(0.0)
}

/// Area of the intersection of two discs.
pub fn lens_area(a: &Disc, b: &Disc) -> f64 {
    let d = a.center.dist(b.center);
    let (r1, r2) = (a.radius, b.radius);
    if r1 <= 0.0 || r2 <= 0.0 || d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        let r = r1.min(r2);
        return PI * r * r;
    }
    let x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h = (r1 * r1 - x * x).max(0.0).sqrt();
    let a1 = h.atan2(x);
    let a2 = h.atan2(d - x);
    r1 * r1 * (a1 - a1.sin() * a1.cos()) + r2 * r2 * (a2 - a2.sin() * a2.cos())
}

/// Per-disc overlap decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapReport {
    /// Area covered by exactly one disc, per disc.
    pub unique: Vec<f64>,
    /// Share of the union attributed to each disc: area covered by `m` discs counts `1/m`.
    pub contribution: Vec<f64>,
    /// Pairwise intersection areas `(i, j, area)` for overlapping pairs with `i < j`.
    pub lenses: Vec<(usize, usize, f64)>,
    pub diagnostics: Vec<String>,
}

struct SubArc {
    t0: f64,
    t1: f64,
    covering: Vec<usize>,
}

fn in_cover(c: Cover, t: f64) -> bool {
    match c {
        Cover::None => false,
        Cover::Full => true,
        Cover::Arc(s, len) => (t - s).rem_euclid(TAU) < len,
    }
}

/// Splits the boundary of each disc at all intersection points and records which
/// other discs cover each sub-arc.
fn sub_arcs(discs: &[Disc]) -> Vec<Vec<SubArc>> {
    discs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            if d.radius <= 0.0 {
                return Vec::new();
            }
            let covers: Vec<(usize, Cover)> = discs
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(j, o)| (j, covered_by(d, i, o, j)))
                .filter(|(_, c)| *c != Cover::None)
                .collect();
            let mut cuts: Vec<f64> = Vec::new();
            for &(_, c) in &covers {
                if let Cover::Arc(s, len) = c {
                    cuts.push(s);
                    cuts.push((s + len).rem_euclid(TAU));
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            let bounds: Vec<(f64, f64)> = if cuts.is_empty() {
                vec![(0.0, TAU)]
            } else {
                let n = cuts.len();
                (0..n)
                    .map(|k| {
                        let a = cuts[k];
                        let b = if k + 1 < n { cuts[k + 1] } else { cuts[0] + TAU };
                        (a, b)
                    })
                    .collect()
            };
            bounds
                .into_iter()
                .filter(|(a, b)| b > a)
                .map(|(t0, t1)| {
                    let mid = (0.5 * (t0 + t1)).rem_euclid(TAU);
                    let covering = covers
                        .iter()
                        .filter(|(_, c)| in_cover(*c, mid))
                        .map(|(j, _)| *j)
                        .collect();
                    SubArc { t0, t1, covering }
                })
                .collect()
        })
        .collect()
}

/// Unique areas, contributions and pairwise lenses of a disc set.
pub fn contributions(discs: &[Disc]) -> OverlapReport {
    let n = discs.len();
    let mut diagnostics = Vec::new();
    let jittered: Vec<Disc> = discs
        .iter()
        .enumerate()
        .map(|(i, d)| Disc::new(d.center, d.radius * (1.0 + 1e-12 * (i + 1) as f64)))
        .collect();
    if n > 1 {
        diagnostics.push("radii perturbed by up to 1e-12 relative for arc classification".into());
    }
    let origin = centroid(&jittered);
    let arcs = sub_arcs(&jittered);
    let max_depth = arcs
        .iter()
        .flat_map(|a| a.iter().map(|s| s.covering.len()))
        .max()
        .unwrap_or(0);

    let mut unique = vec![0.0; n];
    let mut contribution = vec![0.0; n];
    for k in 0..n {
        if jittered[k].radius <= 0.0 {
            continue;
        }
        // level[m] = area of the part of D_k covered by at least m + 1 discs
        let levels = max_depth + 2;
        let mut level = vec![0.0; levels + 1];
        let pk = jittered[k].center - origin;
        for s in &arcs[k] {
            let g = green(pk, jittered[k].radius, s.t0, s.t1);
            for m in 0..=s.covering.len().min(levels - 1) {
                level[m] += g;
            }
        }
        for (j, aj) in arcs.iter().enumerate() {
            if j == k {
                continue;
            }
            let pj = jittered[j].center - origin;
            for s in aj.iter().filter(|s| s.covering.contains(&k)) {
                // covered by exactly `depth` others including k: boundary of level `depth`
                let depth = s.covering.len();
                level[depth] += green(pj, jittered[j].radius, s.t0, s.t1);
            }
        }
        unique[k] = (level[0] - level[1]).max(0.0);
        contribution[k] = (0..levels).map(|m| (level[m] - level[m + 1]) / (m + 1) as f64).sum();
    }

    let mut lenses = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let a = lens_area(&discs[i], &discs[j]);
            if a > 0.0 {
                lenses.push((i, j, a));
            }
        }
    }
    OverlapReport { unique, contribution, lenses, diagnostics }
}
