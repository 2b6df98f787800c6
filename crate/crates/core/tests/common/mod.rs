#![allow(dead_code)]

use filling::continuum::integrate;
use filling::coverage::{lens_area, union_area, Placement};
use filling::geom::{Disc, Feature, Point, Polygon};
use filling::local_opt::parts;
use filling::medial_axis::{compute_medial_axis, MedialAxis};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn square() -> Polygon {
    Polygon::from_coords(&[[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap()
}

pub fn equilateral() -> Polygon {
    Polygon::from_coords(&[[0.0, 0.0], [2.0, 0.0], [1.0, 3f64.sqrt()]]).unwrap()
}

pub fn l_shape() -> Polygon {
    Polygon::from_coords(&[[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]).unwrap()
}

pub fn rectangle() -> Polygon {
    Polygon::from_coords(&[[0.0, 0.0], [4.0, 0.0], [4.0, 1.0], [0.0, 1.0]]).unwrap()
}

/// Symmetric octagon pinched by two facing reflex vertices.
pub fn dumbbell() -> Polygon {
    Polygon::from_coords(&[
        [0.0, 0.0],
        [1.5, 0.5],
        [3.0, 0.0],
        [3.3, 1.0],
        [3.0, 2.0],
        [1.5, 1.5],
        [0.0, 2.0],
        [-0.3, 1.0],
    ])
    .unwrap()
}

pub fn triangle_30_60_90() -> Polygon {
    Polygon::from_coords(&[[0.0, 0.0], [3f64.sqrt(), 0.0], [0.0, 1.0]]).unwrap()
}

/// Random star-shaped polygon around the origin.
pub fn random_star(rng: &mut ChaCha8Rng, n: usize) -> Polygon {
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ok = angles.windows(2).all(|w| w[1] - w[0] > 0.15)
            && angles[0] + std::f64::consts::TAU - angles[n - 1] > 0.15;
        if !ok {
            continue;
        }
        let coords: Vec<[f64; 2]> = angles
            .iter()
            .map(|&a| {
                let r = rng.gen_range(0.4..1.0);
                [r * a.cos(), r * a.sin()]
            })
            .collect();
        if let Ok(p) = Polygon::from_coords(&coords) {
            return p;
        }
    }
}

/// Random convex polygon: points on an ellipse with jittered angles.
pub fn random_convex(rng: &mut ChaCha8Rng, n: usize) -> Polygon {
    let sx = rng.gen_range(0.6..1.4);
    let sy = rng.gen_range(0.6..1.4);
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ok = angles.windows(2).all(|w| w[1] - w[0] > 0.2)
            && angles[0] + std::f64::consts::TAU - angles[n - 1] > 0.2;
        if !ok {
            continue;
        }
        let coords: Vec<[f64; 2]> = angles.iter().map(|&a| [sx * a.cos(), sy * a.sin()]).collect();
        if let Ok(p) = Polygon::from_coords(&coords) {
            return p;
        }
    }
}

/// Distinct boundary features within `tol` of distance `r` from `q`.
pub fn features_at_distance(poly: &Polygon, q: Point, r: f64, tol: f64) -> Vec<Feature> {
    let n = poly.len();
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b) = poly.edge(i);
        let (d, s) = filling::geom::point_segment_distance(q, a, b);
        if (d - r).abs() <= tol {
            let f = if s <= 1e-9 {
                Feature::Vertex(i)
            } else if s >= 1.0 - 1e-9 {
                Feature::Vertex((i + 1) % n)
            } else {
                Feature::Edge(i)
            };
            if !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out
}

pub fn uniform_in(poly: &Polygon, rng: &mut ChaCha8Rng) -> Point {
    let (lo, hi) = poly.bbox();
    loop {
        let p = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if poly.contains(p) {
            return p;
        }
    }
}

/// Pieces on the tree path from `from` to `to`, both included.
pub fn piece_path(m: &filling::MedialAxis, from: usize, to: usize) -> Vec<usize> {
    let k = m.num_pieces();
    let mut parent = vec![usize::MAX; k];
    let mut queue = std::collections::VecDeque::from([from]);
    parent[from] = from;
    while let Some(p) = queue.pop_front() {
        for &q in &m.adjacency[p] {
            if parent[q] == usize::MAX {
                parent[q] = p;
                queue.push_back(q);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    path
}

/// End of section `p` that leads to the adjacent piece `next`.
pub fn end_towards(m: &filling::MedialAxis, p: usize, next: usize) -> usize {
    use filling::medial_axis::EndLink;
    for e in 0..2 {
        match m.end_link(p, e) {
            EndLink::Junction(j) if j == next => return e,
            EndLink::Section { piece, .. } if piece == next => return e,
            _ => {}
        }
    }
    panic!("piece {next} is not adjacent to {p}");
}

/// Tangency, containment, tree topology, slope and sampled coverage of the medial axis.
pub fn check_axis(poly: &Polygon, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let m = compute_medial_axis(poly).map_err(|e| e.to_string())?;
    let diag = poly.bbox_diag();

    let edges: usize = m.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2;
    if edges + 1 != m.num_pieces() {
        return Err(format!("piece graph not a tree: {} pieces, {} edges", m.num_pieces(), edges));
    }

    for _ in 0..100 {
        let sections: Vec<usize> = (0..m.num_pieces()).filter(|&p| !m.is_junction(p)).collect();
        let p = sections[rng.gen_range(0..sections.len())];
        let u = rng.gen_range(0.0..1.0);
        let (q, r) = m.point_at(p, u).unwrap();
        let (d, _) = poly.boundary_distance(q);
        if (d - r).abs() > 1e-6 * diag {
            return Err(format!("tangency: piece {p} u {u}: d {d} r {r}"));
        }
        let feats = features_at_distance(poly, q, d, 1e-6 * diag);
        if feats.len() < 2 {
            return Err(format!("only {:?} at piece {p} u {u}", feats));
        }
        if !poly.disc_inside(&Disc::new(q, r), 1e-9 * diag) {
            return Err(format!("disc outside at piece {p} u {u}"));
        }
    }

    for b in &m.branches {
        let (t0, t1) = b.t_range;
        let n = 200;
        for k in 0..n {
            let ta = t0 + (t1 - t0) * k as f64 / n as f64;
            let tb = t0 + (t1 - t0) * (k + 1) as f64 / n as f64;
            let ds = b.point(ta).dist(b.point(tb));
            let dr = (b.geometry.radius(tb) - b.geometry.radius(ta)).abs();
            if ds > 0.0 && dr > ds * (1.0 + 1e-9) + 1e-15 {
                return Err(format!("|r'| > 1 on {:?}", b.parents));
            }
        }
    }

    let discs = m.sample_discs(1000);
    let samples = 20_000;
    let mut missed = 0;
    for _ in 0..samples {
        let q = uniform_in(poly, rng);
        let quick = discs.iter().any(|d| d.center.dist(q) <= d.radius);
        if !quick && !covered_by_axis(&m, q, 1000) {
            missed += 1;
        }
    }
    if missed as f64 / samples as f64 > 1e-4 {
        return Err(format!("coverage miss fraction {}", missed as f64 / samples as f64));
    }
    Ok(())
}

/// Whether some maximal disc of the axis covers `q`: best of `per_branch` samples per
/// branch, refined by golden-section search around the best sample.
pub fn covered_by_axis(m: &MedialAxis, q: Point, per_branch: usize) -> bool {
    for b in &m.branches {
        let (t0, t1) = b.t_range;
        let margin = |t: f64| b.geometry.radius(t) - b.point(t).dist(q);
        let step = (t1 - t0) / per_branch as f64;
        let (k, best) = (0..=per_branch)
            .map(|k| (k, margin(t0 + step * k as f64)))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if best >= 0.0 {
            return true;
        }
        let mut lo = (t0 + step * (k as f64 - 1.0)).max(t0);
        let mut hi = (t0 + step * (k as f64 + 1.0)).min(t1);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..100 {
            let a = hi - g * (hi - lo);
            let c = lo + g * (hi - lo);
            if margin(a) >= margin(c) {
                hi = c;
            } else {
                lo = a;
            }
        }
        if margin(0.5 * (lo + hi)) >= -1e-12 {
            return true;
        }
    }
    false
}

pub fn random_placement(m: &MedialAxis, rng: &mut ChaCha8Rng) -> Placement {
    let sections: Vec<usize> = (0..m.num_pieces()).filter(|&p| !m.is_junction(p)).collect();
    Placement::Section { piece: sections[rng.gen_range(0..sections.len())], u: rng.gen_range(0.0..1.0) }
}

pub fn disc_of(m: &MedialAxis, pl: &Placement) -> Disc {
    filling::coverage::placement_disc(m, pl).unwrap()
}

/// Area of `A ∩ C` outside `B`, by inclusion-exclusion.
pub fn lens_outside(a: Disc, b: Disc, c: Disc) -> f64 {
    let triple = union_area(&[a, b, c]) - a.area() - b.area() - c.area()
        + lens_area(&a, &b)
        + lens_area(&a, &c)
        + lens_area(&b, &c);
    lens_area(&a, &c) - triple
}

/// Ordered triple `A, B, C` along an axis path.
pub fn ordered_triple(m: &MedialAxis, rng: &mut ChaCha8Rng) -> (Placement, Placement, Placement) {
    loop {
        let a = random_placement(m, rng);
        let c = random_placement(m, rng);
        let (pa, ua) = (a.piece(), a.u());
        let (pc, uc) = (c.piece(), c.u());
        if pa == pc {
            if (ua - uc).abs() < 1e-3 {
                continue;
            }
            let (lo, hi) = if ua < uc { (ua, uc) } else { (uc, ua) };
            return (a, Placement::Section { piece: pa, u: rng.gen_range(lo..hi) }, c);
        }
        let path = piece_path(m, pa, pc);
        let k = rng.gen_range(0..path.len());
        let q = path[k];
        let b = if m.is_junction(q) {
            Placement::Junction { piece: q }
        } else if k == 0 {
            let end = end_towards(m, pa, path[1]) as f64;
            Placement::Section { piece: pa, u: ua + (end - ua) * rng.gen_range(0.0..1.0) }
        } else if k == path.len() - 1 {
            let end = end_towards(m, pc, path[k - 1]) as f64;
            Placement::Section { piece: pc, u: uc + (end - uc) * rng.gen_range(0.0..1.0) }
        } else {
            Placement::Section { piece: q, u: rng.gen_range(0.0..1.0) }
        };
        return (a, b, c);
    }
}

/// Occupies the first junction, fixes two random discs per section on the far side and
/// redraws the near side four times. Returns the spread of the area the far side adds.
pub fn junction_isolation_spread(poly: &Polygon, rng: &mut ChaCha8Rng) -> f64 {
    let m = compute_medial_axis(poly).unwrap();
    let j = m.junction_pieces()[0];
    let mut occ = vec![false; m.num_pieces()];
    occ[j] = true;
    let sides = parts(&m, &occ);
    let one = &sides[0];
    let place = |rng: &mut ChaCha8Rng, mine: bool| -> Vec<Placement> {
        sides
            .iter()
            .filter(|s| (*s == one) == mine)
            .flatten()
            .filter(|&&p| !m.is_junction(p))
            .flat_map(|&p| (0..2).map(move |_| p))
            .map(|p| Placement::Section { piece: p, u: rng.gen_range(0.0..1.0) })
            .collect()
    };
    let other: Vec<Disc> = place(rng, false).iter().map(|pl| disc_of(&m, pl)).collect();
    let jd = m.junction_disc(j).unwrap();
    let mut seen: Vec<f64> = Vec::new();
    for _ in 0..4 {
        let mut all = vec![jd];
        all.extend(place(rng, true).iter().map(|pl| disc_of(&m, pl)));
        let without = union_area(&all);
        all.extend(&other);
        seen.push(union_area(&all) - without);
    }
    let lo = seen.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = seen.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

/// Uncovered area between a tangent line and two discs, sliced along the line.
pub fn sliced_gap(d: f64, r: f64, rp: f64) -> f64 {
    let n = Point::new(-rp, (1.0 - rp * rp).sqrt());
    let along = Point::new(n.y, -n.x);
    let circles = [(Point::new(0.0, 0.0), r), (Point::new(d, 0.0), r + rp * d)];
    let base = circles[0].0 + n * circles[0].1;
    let s_end = (circles[1].0 + n * circles[1].1 - base).dot(along);
    let depth = |s: f64| {
        let p = base + along * s;
        circles
            .iter()
            .map(|&(c, rad)| {
                // first h >= 0 with |p - h n - c| = rad
                let w = p - c;
                let bq = -2.0 * w.dot(n);
                let cq = w.dot(w) - rad * rad;
                let disc = (bq * bq - 4.0 * cq).max(0.0).sqrt();
                ((-bq - disc) / 2.0).max(0.0)
            })
            .fold(f64::INFINITY, f64::min)
    };
    // the slice depth has a kink where the two circles cross; split there
    let a = (d * d + r * r - (r + rp * d).powi(2)) / (2.0 * d);
    let x = Point::new(a, (r * r - a * a).max(0.0).sqrt());
    let s_kink = (x - base).dot(along);
    let (s0, s1) = (0.0f64.min(s_end), 0.0f64.max(s_end));
    integrate(depth, s0, s_kink, 1e-16) + integrate(depth, s_kink, s1, 1e-16)
}
