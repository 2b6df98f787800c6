//! Heuristic search over ways: grow the best solution for `N - 1` discs into candidates
//! for `N` and keep the best local maximum.
//!
//! Occupied junctions cut the axis into parts that are optimized independently, and
//! part optima are cached by the part's pieces and disc counts.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::coverage::{FillingSolution, Placement};
use crate::error::Result;
use crate::geom::Polygon;
use crate::local_opt::{all_ways, local_maximum, parts, AscentConfig, Init};
use crate::medial_axis::MedialAxis;
use crate::way::Way;

#[derive(Debug, Clone, PartialEq)]
pub struct HaConfig {
    /// Pieces within this many hops of a deoccupied junction receive the two new discs.
    pub neighborhood: usize,
    /// Keep every junction occupied once there are enough discs.
    pub pin_junctions: bool,
    pub ascent: AscentConfig,
}

impl Default for HaConfig {
    fn default() -> Self {
        Self { neighborhood: 2, pin_junctions: false, ascent: AscentConfig::default() }
    }
}

/// Result for one disc count.
#[derive(Debug, Clone)]
pub struct HaStep {
    pub n: usize,
    pub solution: FillingSolution,
    /// Local-maximum invocations at this step.
    pub searches: usize,
    /// Candidate ways considered.
    pub candidates: usize,
    pub cache_hits: usize,
}

#[derive(Debug, Clone, Default)]
pub struct HaTrace {
    pub steps: Vec<HaStep>,
}

/// Total local-maximum invocations of a run.
pub fn way_search_count(trace: &HaTrace) -> usize {
    trace.steps.iter().map(|s| s.searches).sum()
}

type PartKey = (Vec<usize>, Vec<usize>);

/// Search state carried from one disc count to the next.
pub struct HaState<'a> {
    poly: &'a Polygon,
    m: &'a MedialAxis,
    cfg: HaConfig,
    best: FillingSolution,
    cache: HashMap<PartKey, Vec<Placement>>,
}

/// Candidate ways grown from `prev`: one more disc on any section or free junction, and
/// for each occupied junction, the junction emptied with two discs added to sections
/// within `a` hops of it.
pub fn neighborhood_ways(prev: &Way, m: &MedialAxis, a: usize) -> Vec<Way> {
    let mut out = Vec::new();
    for p in 0..m.num_pieces() {
        if !m.is_junction(p) || prev.counts[p] == 0 {
            out.push(prev.with_added(p));
        }
    }
    for j in m.junction_pieces() {
        if prev.counts[j] == 0 {
            continue;
        }
        let mut base = prev.clone();
        base.counts[j] = 0;
        let dist = m.piece_distances(j);
        let near: Vec<usize> = (0..m.num_pieces())
            .filter(|&p| !m.is_junction(p) && dist[p] <= a)
            .collect();
        for (i, &p) in near.iter().enumerate() {
            for &q in &near[i..] {
                out.push(base.with_added(p).with_added(q));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn pick_best(cands: impl IntoIterator<Item = FillingSolution>) -> Option<FillingSolution> {
    let mut best: Option<FillingSolution> = None;
    for c in cands {
        best = match best {
            None => Some(c),
            Some(b) => {
                if c.phi > b.phi + 1e-12 || ((c.phi - b.phi).abs() <= 1e-12 && c.way < b.way) {
                    Some(c)
                } else {
                    Some(b)
                }
            }
        };
    }
    best
}

impl<'a> HaState<'a> {
    pub fn new(poly: &'a Polygon, m: &'a MedialAxis, cfg: HaConfig) -> Self {
        Self { poly, m, cfg, best: FillingSolution::empty(m), cache: HashMap::new() }
    }

    pub fn best(&self) -> &FillingSolution {
        &self.best
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    fn occupied(&self, way: &Way) -> Vec<bool> {
        (0..self.m.num_pieces())
            .map(|p| self.m.is_junction(p) && way.counts[p] > 0)
            .collect()
    }

    /// Free parts of `way` as cache keys.
    fn part_keys(&self, way: &Way) -> Vec<PartKey> {
        parts(self.m, &self.occupied(way))
            .into_iter()
            .filter_map(|part| {
                let counts: Vec<usize> = part.iter().map(|&p| way.counts[p]).collect();
                (counts.iter().sum::<usize>() > 0).then_some((part, counts))
            })
            .collect()
    }

    /// Warm start for a part: the previous best's discs on those pieces, with missing
    /// discs inserted in the widest gaps.
    fn warm_start(&self, part: &[usize], counts: &[usize]) -> Vec<Placement> {
        let mut out = Vec::new();
        for (&p, &c) in part.iter().zip(counts) {
            if c == 0 {
                continue;
            }
            if self.m.is_junction(p) {
                out.push(Placement::Junction { piece: p });
                continue;
            }
            let mut us: Vec<f64> = self
                .best
                .placements
                .iter()
                .filter_map(|pl| match *pl {
                    Placement::Section { piece, u } if piece == p => Some(u),
                    _ => None,
                })
                .collect();
            if us.len() > c {
                us = (0..c).map(|i| (i as f64 + 0.5) / c as f64).collect();
            }
            us.sort_by(f64::total_cmp);
            while us.len() < c {
                let mut edges = vec![0.0];
                edges.extend(us.iter().copied());
                edges.push(1.0);
                let (k, _) = edges
                    .windows(2)
                    .enumerate()
                    .map(|(k, w)| (k, w[1] - w[0]))
                    .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
                us.insert(k, 0.5 * (edges[k] + edges[k + 1]));
            }
            out.extend(us.into_iter().map(|u| Placement::Section { piece: p, u }));
        }
        out
    }

    fn solve_part(&self, key: &PartKey) -> Result<Vec<Placement>> {
        let (part, counts) = key;
        let k = self.m.num_pieces();
        let mut way = Way::empty(k);
        for (&p, &c) in part.iter().zip(counts) {
            way.counts[p] = c;
        }
        // occupied junctions bounding the part stay fixed
        let mut init = self.warm_start(part, counts);
        for &p in part {
            for &q in &self.m.adjacency[p] {
                if self.m.is_junction(q) && !part.contains(&q) && way.counts[q] == 0 {
                    way.counts[q] = 1;
                    init.push(Placement::Junction { piece: q });
                }
            }
        }
        let r = local_maximum(self.poly, self.m, &way, &Init::Given(init), Some(part), &self.cfg.ascent)?;
        for note in &r.solution.notes {
            log::debug!("part {:?}: {note}", part);
        }
        Ok(r.solution.placements.into_iter().filter(|pl| part.contains(&pl.piece())).collect())
    }

    /// Solution for `way` assembled from cached part optima.
    fn assemble(&self, way: &Way) -> Result<FillingSolution> {
        let mut placements: Vec<Placement> = self
            .m
            .junction_pieces()
            .into_iter()
            .filter(|&j| way.counts[j] > 0)
            .map(|piece| Placement::Junction { piece })
            .collect();
        for key in self.part_keys(way) {
            placements.extend(self.cache[&key].iter().copied());
        }
        placements.sort_by(|a, b| a.piece().cmp(&b.piece()).then(a.u().total_cmp(&b.u())));
        FillingSolution::from_placements(self.poly, self.m, placements)
    }

    /// Evaluates candidate ways, filling the cache with the missing part optima.
    /// Returns the best solution, the number of optimizations and cache hits.
    pub fn evaluate(&mut self, ways: &[Way]) -> Result<(FillingSolution, usize, usize)> {
        let mut missing: Vec<PartKey> = Vec::new();
        let mut hits = 0;
        for w in ways {
            for key in self.part_keys(w) {
                if self.cache.contains_key(&key) {
                    hits += 1;
                } else if !missing.contains(&key) {
                    missing.push(key);
                }
            }
        }
        let solved: Vec<Vec<Placement>> = missing
            .par_iter()
            .map(|key| self.solve_part(key))
            .collect::<Result<_>>()?;
        let searches = missing.len();
        for (key, pl) in missing.into_iter().zip(solved) {
            self.cache.insert(key, pl);
        }
        let sols: Vec<FillingSolution> = ways.iter().map(|w| self.assemble(w)).collect::<Result<_>>()?;
        let best = pick_best(sols).unwrap_or_else(|| FillingSolution::empty(self.m));
        Ok((best, searches, hits))
    }

    /// Advances from `N - 1` to `N` discs.
    pub fn step(&mut self) -> Result<HaStep> {
        let n = self.best.n() + 1;
        let pinned = self.cfg.pin_junctions && n > self.m.num_junctions();
        let a = if pinned { None } else { Some(self.cfg.neighborhood) };
        let mut ways = match a {
            Some(a) => neighborhood_ways(&self.best.way, self.m, a),
            None => {
                let mut w = Vec::new();
                for p in 0..self.m.num_pieces() {
                    if !self.m.is_junction(p) || self.best.way.counts[p] == 0 {
                        w.push(self.best.way.with_added(p));
                    }
                }
                w
            }
        };
        ways.retain(|w| w.validate(self.m).is_ok());
        let (best, searches, hits) = self.evaluate(&ways)?;
        self.best = best.clone();
        Ok(HaStep { n, solution: best, searches, candidates: ways.len(), cache_hits: hits })
    }
}

/// Best solutions for `N = 1..=n_max` by the heuristic search.
pub fn fill_sequence(poly: &Polygon, m: &MedialAxis, n_max: usize, cfg: &HaConfig) -> Result<HaTrace> {
    let mut state = HaState::new(poly, m, cfg.clone());
    let mut trace = HaTrace::default();
    for _ in 0..n_max {
        let step = state.step()?;
        log::info!(
            "N={} phi={:.9} way={} searches={}",
            step.n,
            step.solution.phi,
            step.solution.way,
            step.searches
        );
        trace.steps.push(step);
    }
    Ok(trace)
}

/// Exhaustive search over every way of `n` discs. Returns the best solution and the
/// number of ways searched.
pub fn enumerate_all(poly: &Polygon, m: &MedialAxis, n: usize, cfg: &AscentConfig) -> Result<(FillingSolution, usize)> {
    let ways = all_ways(m, n);
    let results = crate::local_opt::enumerate_local_maxima(poly, m, &ways, cfg)?;
    let best = pick_best(results.into_iter().map(|r| r.solution)).unwrap_or_else(|| FillingSolution::empty(m));
    Ok((best, ways.len()))
}
