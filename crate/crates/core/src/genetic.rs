//! Genetic search over unconstrained disc centers.

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coverage::{union_area, FillingSolution, Placement};
use crate::error::{FillError, Result};
use crate::geom::{Disc, Point, Polygon};
use crate::medial_axis::{BranchCase, MedialAxis, NodeKind, Site};
use crate::way::Way;

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    /// Population size is this multiple of `N`.
    pub population_multiplier: usize,
    pub elite_fraction: f64,
    pub mutation_fraction: f64,
    pub crossover_fraction: f64,
    /// Generations without improvement before a run stops.
    pub stall_generations: usize,
    pub max_generations: usize,
    pub seeds: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_multiplier: 100,
            elite_fraction: 0.05,
            mutation_fraction: 0.60,
            crossover_fraction: 0.35,
            stall_generations: 200,
            max_generations: 5000,
            seeds: 10,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let sum = self.elite_fraction + self.mutation_fraction + self.crossover_fraction;
        let fr = [self.elite_fraction, self.mutation_fraction, self.crossover_fraction];
        if (sum - 1.0).abs() > 1e-9 || fr.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(FillError::Domain(format!("generation fractions must sum to 1, got {sum}")));
        }
        if self.population_multiplier == 0 || self.seeds == 0 {
            return Err(FillError::Domain("population multiplier and seed count must be positive".into()));
        }
        Ok(())
    }
}

/// One population member: disc centers with their grown radii and fitness.
#[derive(Debug, Clone, PartialEq)]
pub struct Genome {
    pub centers: Vec<Point>,
    pub radii: Vec<f64>,
    pub fitness: f64,
}

impl Genome {
    pub fn discs(&self) -> Vec<Disc> {
        self.centers.iter().zip(&self.radii).map(|(&c, &r)| Disc::new(c, r)).collect()
    }
}

/// Region of a corner branch: the kite spanned by the corner, the far end of the branch
/// and its feet on the two corner edges.
#[derive(Debug, Clone)]
struct CornerKite {
    corner: Point,
    far: Point,
    quad: [Point; 4],
}

impl CornerKite {
    fn strictly_contains(&self, p: Point, eps: f64) -> bool {
        let q = &self.quad;
        let signs: Vec<f64> = (0..4).map(|i| (q[(i + 1) % 4] - q[i]).cross(p - q[i])).collect();
        signs.iter().all(|&s| s > eps) || signs.iter().all(|&s| s < -eps)
    }

    fn snap(&self, p: Point) -> Point {
        let d = self.far - self.corner;
        let s = ((p - self.corner).dot(d) / d.dot(d)).clamp(0.0, 1.0);
        self.corner + d * s
    }
}

/// Polygon data shared by all genomes.
pub struct GaContext<'a> {
    pub poly: &'a Polygon,
    pub m: &'a MedialAxis,
    kites: Vec<CornerKite>,
    junctions: Vec<Point>,
    /// Largest bounding-box dimension.
    pub width: f64,
}

impl<'a> GaContext<'a> {
    pub fn new(poly: &'a Polygon, m: &'a MedialAxis) -> Self {
        let mut kites = Vec::new();
        for b in &m.branches {
            if b.case() != BranchCase::EdgeEdge {
                continue;
            }
            for (end, &node) in b.nodes.iter().enumerate() {
                if m.nodes[node].kind != NodeKind::EndPoint {
                    continue;
                }
                let corner = m.nodes[node].position;
                let far = m.nodes[b.nodes[1 - end]].position;
                let feet: Vec<Point> = b
                    .parents
                    .iter()
                    .filter_map(|s| match *s {
                        Site::Edge(e) => {
                            let (a, c) = poly.edge(e);
                            let dir = (c - a).normalized();
                            Some(a + dir * (far - a).dot(dir))
                        }
                        Site::Vertex(_) => None,
                    })
                    .collect();
                if feet.len() == 2 {
                    kites.push(CornerKite { corner, far, quad: [corner, feet[0], far, feet[1]] });
                }
            }
        }
        let junctions = m.junctions().into_iter().map(|j| j.position).collect();
        let (lo, hi) = poly.bbox();
        Self { poly, m, kites, junctions, width: (hi.x - lo.x).max(hi.y - lo.y) }
    }

    /// Moves a point outside the polygon just inside its nearest edge.
    pub fn move_inside(&self, p: Point) -> Point {
        if self.poly.contains(p) {
            return p;
        }
        let (b, e) = self.poly.nearest_boundary_point(p);
        let q = b + self.poly.inward_normal(e) * (1e-6 * self.poly.bbox_diag());
        if self.poly.contains(q) {
            q
        } else {
            self.m.project(p).point
        }
    }

    fn random_point<R: Rng>(&self, rng: &mut R) -> Point {
        let (lo, hi) = self.poly.bbox();
        let p = Point::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y));
        self.move_inside(p)
    }
}

/// Grows each disc to touch the boundary and snaps discs lying in a corner region onto
/// the corner bisector.
pub fn enforce_maximal(centers: Vec<Point>, ctx: &GaContext) -> Genome {
    let eps = 1e-12 * ctx.poly.bbox_diag() * ctx.poly.bbox_diag();
    let centers: Vec<Point> = centers
        .into_iter()
        .map(|c| {
            let c = ctx.move_inside(c);
            match ctx.kites.iter().find(|k| k.strictly_contains(c, eps)) {
                Some(k) => k.snap(c),
                None => c,
            }
        })
        .collect();
    let radii: Vec<f64> = centers.iter().map(|&c| ctx.poly.boundary_distance(c).0.max(0.0)).collect();
    let discs: Vec<Disc> = centers.iter().zip(&radii).map(|(&c, &r)| Disc::new(c, r)).collect();
    let fitness = union_area(&discs) / ctx.poly.area();
    Genome { centers, radii, fitness }
}

/// Selection weights `1/√r` for ranks `1..=n`.
pub fn rank_weights(n: usize) -> Vec<f64> {
    (1..=n).map(|r| 1.0 / (r as f64).sqrt()).collect()
}

/// Sorts centers by `x*w + y`.
pub fn spatial_sort(centers: &[Point], w: f64) -> Vec<Point> {
    let mut v = centers.to_vec();
    v.sort_by(|a, b| (a.x * w + a.y).total_cmp(&(b.x * w + b.y)));
    v
}

/// Child with the first `c` spatially sorted discs of `a` and the rest from `b`.
pub fn crossover(a: &[Point], b: &[Point], c: usize, w: f64) -> Vec<Point> {
    let sa = spatial_sort(a, w);
    let sb = spatial_sort(b, w);
    sa[..c].iter().chain(&sb[c..]).copied().collect()
}

fn displace<R: Rng>(p: Point, max: f64, rng: &mut R) -> Point {
    let ang = rng.gen_range(0.0..std::f64::consts::TAU);
    let len = rng.gen_range(0.0..=max);
    p + Point::new(ang.cos(), ang.sin()) * len
}

/// Mutates one random disc of `centers`.
pub fn mutate<R: Rng>(centers: &[Point], ctx: &GaContext, rng: &mut R) -> Vec<Point> {
    let mut out = centers.to_vec();
    let i = rng.gen_range(0..out.len());
    let kind = rng.gen_range(0..4);
    out[i] = match kind {
        0 => ctx.random_point(rng),
        1 => displace(out[i], 0.5 * ctx.width, rng),
        2 => displace(out[i], ctx.width / 200.0, rng),
        _ if !ctx.junctions.is_empty() => ctx.junctions[rng.gen_range(0..ctx.junctions.len())],
        _ => ctx.random_point(rng),
    };
    out
}

fn sort_population(pop: &mut [Genome]) {
    pop.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
}

/// Next generation from a rank-sorted population.
pub fn next_generation<R: Rng>(pop: &[Genome], ctx: &GaContext, cfg: &GaConfig, rng: &mut R) -> Vec<Genome> {
    let size = pop.len();
    let n_elite = ((cfg.elite_fraction * size as f64).round() as usize).clamp(1, size);
    let n_mut = ((cfg.mutation_fraction * size as f64).round() as usize).min(size - n_elite);
    let n_cross = size - n_elite - n_mut;
    let pick = WeightedIndex::new(rank_weights(size)).expect("positive weights");
    let n = pop[0].centers.len();
    let mut children: Vec<Vec<Point>> = Vec::with_capacity(n_mut + n_cross);
    for _ in 0..n_mut {
        let parent = &pop[pick.sample(rng)];
        children.push(mutate(&parent.centers, ctx, rng));
    }
    for _ in 0..n_cross {
        let a = &pop[pick.sample(rng)];
        let b = &pop[pick.sample(rng)];
        let c = rng.gen_range(1..=n);
        children.push(crossover(&a.centers, &b.centers, c, ctx.width));
    }
    let mut next: Vec<Genome> = pop[..n_elite].to_vec();
    next.extend(children.into_par_iter().map(|c| enforce_maximal(c, ctx)).collect::<Vec<_>>());
    sort_population(&mut next);
    next
}

/// Outcome of one seeded run.
#[derive(Debug, Clone)]
pub struct GaRun {
    pub seed: u64,
    pub best: Genome,
    pub generations: usize,
}

/// Single seeded run.
pub fn run_seed(ctx: &GaContext, n: usize, cfg: &GaConfig, stream: u64) -> GaRun {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let size = (cfg.population_multiplier * n).max(1);
    let init: Vec<Vec<Point>> = (0..size).map(|_| (0..n).map(|_| ctx.random_point(&mut rng)).collect()).collect();
    let mut pop: Vec<Genome> = init.into_par_iter().map(|c| enforce_maximal(c, ctx)).collect();
    sort_population(&mut pop);
    let mut best = pop[0].fitness;
    let mut stall = 0;
    let mut generations = 0;
    while stall < cfg.stall_generations && generations < cfg.max_generations {
        pop = next_generation(&pop, ctx, cfg, &mut rng);
        generations += 1;
        if pop[0].fitness > best + 1e-10 {
            best = pop[0].fitness;
            stall = 0;
        } else {
            stall += 1;
        }
    }
    log::debug!("ga stream {stream}: phi {best:.9} after {generations} generations");
    GaRun { seed: stream, best: pop.swap_remove(0), generations }
}

/// Piece placements of free disc centers: projection onto the axis, with centers close
/// to a free junction assigned to it.
pub fn placements_of(centers: &[Point], m: &MedialAxis, junction_tol: f64) -> Vec<Placement> {
    let junctions = m.junctions();
    let mut used = vec![false; junctions.len()];
    let mut order: Vec<(usize, usize, f64)> = Vec::new();
    for (i, &c) in centers.iter().enumerate() {
        for (k, j) in junctions.iter().enumerate() {
            let d = c.dist(j.position);
            if d <= junction_tol {
                order.push((i, k, d));
            }
        }
    }
    order.sort_by(|a, b| a.2.total_cmp(&b.2));
    let mut assigned: Vec<Option<usize>> = vec![None; centers.len()];
    for (i, k, _) in order {
        if assigned[i].is_none() && !used[k] {
            used[k] = true;
            assigned[i] = Some(junctions[k].piece);
        }
    }
    centers
        .iter()
        .zip(assigned)
        .map(|(&c, a)| match a {
            Some(piece) => Placement::Junction { piece },
            None => {
                let p = m.project(c);
                if m.is_junction(p.piece) {
                    // an occupied junction: fall back to the nearest section end
                    let q = m.adjacency[p.piece].iter().copied().find(|&q| !m.is_junction(q)).unwrap_or(p.piece);
                    let u = m
                        .section(q)
                        .map(|s| if m.nodes[s.end_nodes[0]].position.dist(p.point) < m.nodes[s.end_nodes[1]].position.dist(p.point) { 0.0 } else { 1.0 })
                        .unwrap_or(0.0);
                    Placement::Section { piece: q, u }
                } else {
                    Placement::Section { piece: p.piece, u: p.u }
                }
            }
        })
        .collect()
}

/// Result of a multi-seed run.
#[derive(Debug, Clone)]
pub struct GaResult {
    pub solution: FillingSolution,
    pub runs: Vec<GaRun>,
}

/// Best genome over `cfg.seeds` runs, with its discs assigned to pieces.
pub fn run_ga(poly: &Polygon, m: &MedialAxis, n: usize, cfg: &GaConfig) -> Result<GaResult> {
    cfg.validate()?;
    if n == 0 {
        return Ok(GaResult { solution: FillingSolution::empty(m), runs: Vec::new() });
    }
    let ctx = GaContext::new(poly, m);
    let runs: Vec<GaRun> = (0..cfg.seeds as u64).map(|s| run_seed(&ctx, n, cfg, s)).collect();
    let best = runs
        .iter()
        .max_by(|a, b| a.best.fitness.total_cmp(&b.best.fitness).then(b.seed.cmp(&a.seed)))
        .expect("at least one run")
        .best
        .clone();
    let placements = placements_of(&best.centers, m, 1e-3 * poly.bbox_diag());
    let mut way = Way::empty(m.num_pieces());
    for pl in &placements {
        way.counts[pl.piece()] += 1;
    }
    let solution = FillingSolution {
        discs: best.discs(),
        placements,
        phi: best.fitness,
        way,
        converged: true,
        notes: Vec::new(),
    };
    Ok(GaResult { solution, runs })
}
