//! Large-N model: optimal center density along each branch, the branch constants that
//! govern the uncovered area, and allocation of discs over branches.
//!
//! Along a branch, a center density `ρ` leaves an uncovered area `∫ C/ρ² ds`, where `C`
//! depends on the local radius, its slope and the path curvature. Minimizing under
//! `∫ ρ ds = N` gives `ρ ∝ C^{1/3}` and an uncovered area `𝒞/N²` with
//! `𝒞 = (∫ C^{1/3} ds)³`.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{FillError, Result};
use crate::geom::{Point, Polygon};
use crate::medial_axis::{Branch, BranchCase, BranchGeometry, MedialAxis, Site};

const QUAD_TOL: f64 = 1e-12;

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    // a fixed first split avoids accidental agreement on symmetric integrands
    let n = 8;
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| {
            let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let xm = 0.5 * (x0 + x1);
            let (f0, fm, f1) = (f(x0), f(xm), f(x1));
            let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
            rec(&f, x0, x1, f0, fm, f1, whole, tol / n as f64, 40)
        })
        .sum()
}

/// Gap constant per unit length at parameter `t`: the uncovered area between consecutive
/// discs spaced `d` apart is `C d³`.
pub fn gap_integrand(g: &BranchGeometry, t: f64) -> Result<f64> {
    let r = g.radius(t);
    match g {
        BranchGeometry::EdgeEdge { .. } => {
            let rp = g.radius_ds(t);
            Ok((1.0 - rp * rp).max(0.0).powf(1.5) / (12.0 * r))
        }
        BranchGeometry::EdgePoint { r0, .. } => Ok(r0 * g.curvature(t) / (12.0 * r)),
        BranchGeometry::PointPoint { .. } => Err(FillError::Domain("point-point branches carry no density".into())),
    }
}

/// Density exponent `α` in `ρ ∝ r^{-α}`.
pub fn density_exponent(case: BranchCase) -> Option<f64> {
    match case {
        BranchCase::EdgeEdge => Some(1.0 / 3.0),
        BranchCase::EdgePoint => Some(5.0 / 6.0),
        BranchCase::PointPoint => None,
    }
}

/// Integral of `f(t) ds` along the branch. Ends where the radius vanishes are handled by
/// the substitution `t = end ± span v³`, which removes the `r^{-1/3}` type singularity.
fn integrate_branch<F: Fn(f64) -> f64>(b: &Branch, f: F) -> f64 {
    let (ta, tb) = b.t_range;
    let g = &b.geometry;
    let span = tb - ta;
    let zero_tol = 1e-12 * (1.0 + b.length());
    let ra = g.radius(ta);
    let rb = g.radius(tb);
    let ds = |t: f64| f(t) * g.speed(t);
    let scale = b.length().max(1e-300);
    // the substituted integrand vanishes at v = 0
    let from = |end: f64, h: f64| {
        integrate(
            |v| if v == 0.0 { 0.0 } else { ds(end + h * v * v * v) * 3.0 * h.abs() * v * v },
            0.0,
            1.0,
            QUAD_TOL * scale,
        )
    };
    if ra <= zero_tol && rb <= zero_tol {
        from(ta, 0.5 * span) + from(tb, -0.5 * span)
    } else if ra <= zero_tol {
        from(ta, span)
    } else if rb <= zero_tol {
        from(tb, -span)
    } else {
        integrate(ds, ta, tb, QUAD_TOL * scale)
    }
}

/// Branch constant `𝒞` with uncovered area `𝒞/N²` for `N` optimally spaced discs.
pub fn branch_constant(b: &Branch) -> Result<f64> {
    if b.case() == BranchCase::PointPoint {
        return Err(FillError::Domain("point-point branch has no continuum constant".into()));
    }
    let g = b.geometry;
    let s = integrate_branch(b, |t| gap_integrand(&g, t).map(f64::cbrt).unwrap_or(0.0));
    Ok(s * s * s)
}

/// Constant for a section of length `length` with constant curvature and radius.
pub fn constant_curvature_constant(length: f64, kappa: f64, r: f64) -> f64 {
    length.powi(3) * (kappa * kappa * r + 1.0 / r) / 12.0
}

/// Allocation fractions for sections `(length, curvature, radius)` of constant curvature.
pub fn constant_curvature_fractions(sections: &[(f64, f64, f64)]) -> Vec<f64> {
    let w: Vec<f64> = sections
        .iter()
        .map(|&(t, k, r)| constant_curvature_constant(t, k, r).cbrt())
        .collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Continuum description of one branch.
#[derive(Debug, Clone, Serialize)]
pub struct ContinuumBranchModel {
    pub branch: usize,
    pub case: BranchCase,
    pub alpha: Option<f64>,
    /// `∫ r^{-α} ds`.
    pub r0_integral: f64,
    pub constant: f64,
    pub excluded: bool,
}

pub fn branch_model(m: &MedialAxis, branch: usize) -> Result<ContinuumBranchModel> {
    let b = m
        .branches
        .get(branch)
        .ok_or_else(|| FillError::Domain(format!("no branch {branch}")))?;
    let case = b.case();
    let Some(alpha) = density_exponent(case) else {
        return Ok(ContinuumBranchModel { branch, case, alpha: None, r0_integral: 0.0, constant: 0.0, excluded: true });
    };
    let g = b.geometry;
    let r0_integral = integrate_branch(b, |t| g.radius(t).powf(-alpha));
    Ok(ContinuumBranchModel { branch, case, alpha: Some(alpha), r0_integral, constant: branch_constant(b)?, excluded: false })
}

/// Density samples `(t, s, ρ)` along a branch holding `n` discs.
pub fn density_profile(b: &Branch, n: f64, samples: usize) -> Result<Vec<(f64, f64, f64)>> {
    let alpha = density_exponent(b.case())
        .ok_or_else(|| FillError::Domain("point-point branch has no density".into()))?;
    let g = b.geometry;
    let r0_integral = integrate_branch(b, |t| g.radius(t).powf(-alpha));
    let rho0 = n / r0_integral;
    let (ta, tb) = b.t_range;
    let s0 = g.arclength(ta);
    Ok((0..samples)
        .map(|i| {
            let t = ta + (tb - ta) * (i as f64 + 0.5) / samples as f64;
            (t, g.arclength(t) - s0, rho0 * g.radius(t).powf(-alpha))
        })
        .collect())
}

/// Density `ρ(t) = (N/R_0) r(t)^{-α}` at a single parameter.
pub fn density_at(b: &Branch, n: f64, t: f64) -> Result<f64> {
    let alpha = density_exponent(b.case())
        .ok_or_else(|| FillError::Domain("point-point branch has no density".into()))?;
    let g = b.geometry;
    let r0_integral = integrate_branch(b, |t| g.radius(t).powf(-alpha));
    Ok(n / r0_integral * g.radius(t).powf(-alpha))
}

/// Disc fractions and integer counts per branch.
#[derive(Debug, Clone, Serialize)]
pub struct AllocationPlan {
    pub models: Vec<ContinuumBranchModel>,
    pub fractions: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Cube-root allocation of `n` discs over the branches of `m`.
pub fn allocate(m: &MedialAxis, n: usize) -> Result<AllocationPlan> {
    let models: Vec<ContinuumBranchModel> = (0..m.branches.len()).map(|i| branch_model(m, i)).collect::<Result<_>>()?;
    let weights: Vec<f64> = models.iter().map(|b| if b.excluded { 0.0 } else { b.constant.cbrt() }).collect();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        return Err(FillError::ExcludedBranch(m.branches.len()));
    }
    let fractions: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let counts = largest_remainder(&fractions, n, &models.iter().map(|b| b.constant).collect::<Vec<_>>());
    Ok(AllocationPlan { models, fractions, counts })
}

/// Rounds `f_i * n` to integers summing to `n`; ties go to larger `priority`.
pub fn largest_remainder(fractions: &[f64], n: usize, priority: &[f64]) -> Vec<usize> {
    let exact: Vec<f64> = fractions.iter().map(|f| f * n as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..fractions.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(priority[b].total_cmp(&priority[a])).then(a.cmp(&b))
    });
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Uncovered-area prediction for `n` discs.
#[derive(Debug, Clone, Serialize)]
pub struct UncoveredPrediction {
    pub per_branch: Vec<f64>,
    pub total: f64,
    pub phi: f64,
    pub diagnostics: Vec<String>,
}

/// Predicted uncovered area `Σ 𝒞_i/N_i²` at the rounded allocation. A branch that
/// receives no disc is charged the full area between it and its parents.
pub fn predicted_uncovered(poly: &Polygon, m: &MedialAxis, n: usize) -> Result<UncoveredPrediction> {
    let plan = allocate(m, n)?;
    let mut per_branch = Vec::with_capacity(plan.models.len());
    let mut diagnostics = Vec::new();
    for (model, &ni) in plan.models.iter().zip(&plan.counts) {
        let a = if model.excluded {
            0.0
        } else if ni == 0 {
            let gap = parent_region_area(poly, &m.branches[model.branch]);
            diagnostics.push(format!("branch {} receives no disc; charged its parent region {gap:.6e}", model.branch));
            gap
        } else {
            model.constant / (ni * ni) as f64
        };
        per_branch.push(a);
    }
    let total: f64 = per_branch.iter().sum();
    Ok(UncoveredPrediction { per_branch, total, phi: 1.0 - total / poly.area(), diagnostics })
}

/// Area between a branch and its two parent features.
pub fn parent_region_area(poly: &Polygon, b: &Branch) -> f64 {
    let steps = 256;
    let (ta, tb) = b.t_range;
    let path: Vec<Point> = (0..=steps)
        .map(|i| b.point(ta + (tb - ta) * i as f64 / steps as f64))
        .collect();
    b.parents
        .iter()
        .map(|site| {
            let foot = |p: Point| match *site {
                Site::Vertex(v) => poly.vertex(v),
                Site::Edge(e) => {
                    let (a, c) = poly.edge(e);
                    let dir = (c - a).normalized();
                    a + dir * (p - a).dot(dir)
                }
            };
            let mut ring: Vec<Point> = path.clone();
            ring.extend(path.iter().rev().map(|&p| foot(p)));
            let n = ring.len();
            (0..n).map(|i| ring[i].cross(ring[(i + 1) % n])).sum::<f64>().abs() * 0.5
        })
        .sum()
}

/// Uncovered area on one side between two discs `d` apart on a straight-parent branch
/// with radius `r` and slope `r_prime`, to leading order in `d`.
pub fn two_disc_gap(d: f64, r: f64, r_prime: f64) -> f64 {
    d.powi(3) * (1.0 - r_prime * r_prime).max(0.0).powf(1.5) / (24.0 * r)
}

/// Both sides of [`two_disc_gap`].
pub fn two_disc_gap_total(d: f64, r: f64, r_prime: f64) -> f64 {
    2.0 * two_disc_gap(d, r, r_prime)
}

/// Exact one-sided gap between two maximal discs spaced `d` along a straight branch
/// whose radius grows as `r + r_prime * x`, bounded by the tangent parent line.
pub fn exact_two_disc_gap(d: f64, r: f64, r_prime: f64) -> f64 {
    let c1 = Point::new(0.0, 0.0);
    let c2 = Point::new(d, 0.0);
    let r1 = r;
    let r2 = r + r_prime * d;
    // parent line: -r' x + sqrt(1 - r'^2) y = r, unit normal n
    let n = Point::new(-r_prime, (1.0 - r_prime * r_prime).sqrt());
    let t1 = c1 + n * r1;
    let t2 = c2 + n * r2;
    // upper intersection of the two circles
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let x = Point::new(a, h);
    let angle = |u: Point, v: Point| u.cross(v).atan2(u.dot(v)).abs();
    let quad = 0.5 * ((c1.cross(t1) + t1.cross(t2) + t2.cross(c2) + c2.cross(c1)).abs());
    let sector1 = 0.5 * r1 * r1 * angle(t1 - c1, x - c1);
    let sector2 = 0.5 * r2 * r2 * angle(x - c2, t2 - c2);
    let tri = 0.5 * (x - c1).cross(c2 - c1).abs();
    quad - sector1 - sector2 - tri
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of ways to place `n` discs on `k` pieces of which `j` are junctions holding at
/// most one disc each.
pub fn count_ways(n: u64, k: u64, j: u64) -> Result<BigUint> {
    if j >= k {
        return Err(FillError::Domain(format!("need j < k, got j = {j}, k = {k}")));
    }
    let sections = k - j;
    let mut total = BigUint::from(0u32);
    for m in 0..=j.min(n) {
        total += binomial(j, m) * binomial(n - m + sections - 1, sections - 1);
    }
    Ok(total)
}

/// Triangle branch fractions `cot θ_i / Σ cot θ_k` from the interior angles.
pub fn triangle_cot_fractions(angles: [f64; 3]) -> [f64; 3] {
    let c = angles.map(|a| 1.0 / a.tan());
    let s: f64 = c.iter().sum();
    c.map(|x| x / s)
}

/// Triangle branch fractions `cot(θ_i/2) / Σ cot(θ_k/2)`, the closed form of the cube-root
/// allocation on the three corner branches.
pub fn triangle_half_angle_fractions(angles: [f64; 3]) -> [f64; 3] {
    let c = angles.map(|a| 1.0 / (0.5 * a).tan());
    let s: f64 = c.iter().sum();
    c.map(|x| x / s)
}
