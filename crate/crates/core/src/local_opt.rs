//! Constrained ascent of the filling measure for a fixed way.
//!
//! Disc centers live on section pieces at normalized coordinates `u ∈ [0, 1]`; junction
//! discs and discs on frozen pieces do not move. The ascent is a Levenberg-Marquardt
//! projected Newton method whose derivatives are finite differences of each disc's
//! uniquely covered area, so every derivative only involves overlapping discs.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::coverage::{difference_area, neighbor_lists, union_area, FillingSolution, Placement};
use crate::error::{FillError, Result};
use crate::geom::{Disc, Polygon};
use crate::medial_axis::{EndLink, MedialAxis};
use crate::way::Way;

#[derive(Debug, Clone, PartialEq)]
pub struct AscentConfig {
    /// Central-difference step for the gradient, in `u`.
    pub fd_step: f64,
    /// Step for second differences.
    pub hess_step: f64,
    /// Stop when the projected gradient of φ is below this.
    pub grad_tol: f64,
    /// Stop after repeated accepted steps gaining less than this in φ.
    pub phi_tol: f64,
    pub max_iters: usize,
    /// Distance in `u` from a piece end that counts as reaching it.
    pub snap_tol: f64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            fd_step: 1e-6,
            hess_step: 1e-4,
            grad_tol: 1e-8,
            phi_tol: 1e-10,
            max_iters: 500,
            snap_tol: 1e-6,
        }
    }
}

/// Starting configuration of an ascent.
#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    /// `u = (i - 1/2) / n` on each piece.
    Spread,
    Given(Vec<Placement>),
}

/// Outcome of one ascent.
#[derive(Debug, Clone)]
pub struct LocalMaximum {
    pub solution: FillingSolution,
    /// The way that was asked for; differs from `solution.way` after snapping.
    pub requested: Way,
    pub iterations: usize,
    /// φ after every accepted step, across all rounds.
    pub history: Vec<f64>,
}

impl LocalMaximum {
    pub fn reclassified(&self) -> bool {
        self.requested != self.solution.way
    }
}

/// Spread placements for a way.
pub fn spread_placements(m: &MedialAxis, way: &Way) -> Vec<Placement> {
    let mut out = Vec::with_capacity(way.total());
    for (p, &n) in way.counts.iter().enumerate() {
        if n == 0 {
            continue;
        }
        if m.is_junction(p) {
            out.push(Placement::Junction { piece: p });
        } else {
            for i in 0..n {
                out.push(Placement::Section { piece: p, u: (i as f64 + 0.5) / n as f64 });
            }
        }
    }
    out
}

/// Parts: groups of pieces connected without passing an occupied junction. Occupied
/// junctions are not members of any part.
pub fn parts(m: &MedialAxis, occupied: &[bool]) -> Vec<Vec<usize>> {
    let k = m.num_pieces();
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for start in 0..k {
        if seen[start] || (m.is_junction(start) && occupied[start]) {
            continue;
        }
        let mut part = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(p) = stack.pop() {
            part.push(p);
            for &q in &m.adjacency[p] {
                if !seen[q] && !(m.is_junction(q) && occupied[q]) {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        part.sort_unstable();
        out.push(part);
    }
    out
}

struct Ascent<'a> {
    m: &'a MedialAxis,
    area: f64,
    fixed: Vec<Disc>,
    fixed_pl: Vec<Placement>,
    pieces: Vec<usize>,
    /// Variable indices grouped by piece, in ascending slot order.
    groups: Vec<Vec<usize>>,
}

impl<'a> Ascent<'a> {
    fn discs(&self, u: &[f64]) -> Vec<Disc> {
        let mut out = self.fixed.clone();
        for (i, &p) in self.pieces.iter().enumerate() {
            out.push(self.disc(p, u[i]));
        }
        out
    }

    fn disc(&self, piece: usize, u: f64) -> Disc {
        let sec = self.m.pieces[piece].as_section().expect("section piece");
        let (c, r) = self.m.section_point(sec, u.clamp(0.0, 1.0));
        Disc::new(c, r)
    }

    fn objective(&self, u: &[f64]) -> f64 {
        union_area(&self.discs(u))
    }

    /// Axis neighbors of every variable, as indices into `discs(u)`.
    fn neighbor_sets(&self, u: &[f64]) -> Vec<Vec<usize>> {
        let mut pls = self.fixed_pl.clone();
        pls.extend(self.pieces.iter().zip(u).map(|(&piece, &u)| Placement::Section { piece, u }));
        let nf = self.fixed.len();
        let nb = neighbor_lists(&pls, self.m).expect("placements on the axis");
        (0..u.len()).map(|i| nb[nf + i].clone()).collect()
    }

    /// Unique area of variable `i` against its neighbors, with the listed variables
    /// moved to new values.
    fn unique_with(&self, base: &[Disc], nb: &[usize], i: usize, moves: &[(usize, f64)]) -> f64 {
        let nf = self.fixed.len();
        let me = nf + i;
        let mut idx: Vec<usize> = nb.to_vec();
        idx.push(me);
        idx.sort_unstable();
        let local: Vec<Disc> = idx
            .iter()
            .map(|&g| match moves.iter().find(|mv| nf + mv.0 == g) {
                Some(&(j, uj)) => self.disc(self.pieces[j], uj),
                None => base[g],
            })
            .collect();
        let pos = idx.iter().position(|&g| g == me).expect("self present");
        difference_area(&local, pos)
    }

    fn gradient(&self, u: &[f64], h: f64) -> Vec<f64> {
        let base = self.discs(u);
        let nbs = self.neighbor_sets(u);
        (0..u.len())
            .map(|i| {
                let a = (u[i] - h).max(0.0);
                let b = (u[i] + h).min(1.0);
                let fa = self.unique_with(&base, &nbs[i], i, &[(i, a)]);
                let fb = self.unique_with(&base, &nbs[i], i, &[(i, b)]);
                (fb - fa) / (b - a)
            })
            .collect()
    }

    fn hessian(&self, u: &[f64], h: f64) -> DMatrix<f64> {
        let n = u.len();
        let base = self.discs(u);
        let nbs = self.neighbor_sets(u);
        let nf = self.fixed.len();
        let mut hm = DMatrix::<f64>::zeros(n, n);
        let c: Vec<f64> = u.iter().map(|&x| x.clamp(h, 1.0 - h)).collect();
        for i in 0..n {
            let nb = &nbs[i];
            let f0 = self.unique_with(&base, nb, i, &[(i, c[i])]);
            let fp = self.unique_with(&base, nb, i, &[(i, c[i] + h)]);
            let fm = self.unique_with(&base, nb, i, &[(i, c[i] - h)]);
            hm[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
            for &g in nb {
                if g < nf || g - nf <= i {
                    continue;
                }
                let j = g - nf;
                let pp = self.unique_with(&base, nb, i, &[(i, c[i] + h), (j, c[j] + h)]);
                let pm = self.unique_with(&base, nb, i, &[(i, c[i] + h), (j, c[j] - h)]);
                let mp = self.unique_with(&base, nb, i, &[(i, c[i] - h), (j, c[j] + h)]);
                let mm = self.unique_with(&base, nb, i, &[(i, c[i] - h), (j, c[j] - h)]);
                let v = (pp - pm - mp + mm) / (4.0 * h * h);
                hm[(i, j)] = v;
                hm[(j, i)] = v;
            }
        }
        hm
    }

    /// Clamps to `[0, 1]` and restores the order of `u` within each piece.
    fn project(&self, u: &mut [f64]) {
        for x in u.iter_mut() {
            *x = x.clamp(0.0, 1.0);
        }
        for g in &self.groups {
            let mut vals: Vec<f64> = g.iter().map(|&i| u[i]).collect();
            vals.sort_by(f64::total_cmp);
            for (&i, v) in g.iter().zip(vals) {
                u[i] = v;
            }
        }
    }

    /// Returns `(u, φ-area, iterations, converged)` and appends accepted φ values to
    /// `history`.
    fn run(&self, mut u: Vec<f64>, cfg: &AscentConfig, history: &mut Vec<f64>) -> (Vec<f64>, f64, usize, bool) {
        self.project(&mut u);
        let mut f = self.objective(&u);
        history.push(f / self.area);
        if u.is_empty() {
            return (u, f, 0, true);
        }
        let gtol = cfg.grad_tol * self.area;
        let ftol = cfg.phi_tol * self.area;
        let bound = 1e-12;
        let mut mu = 1e-3;
        let mut small = 0;
        for it in 0..cfg.max_iters {
            let g = self.gradient(&u, cfg.fd_step);
            let free: Vec<usize> = (0..u.len())
                .filter(|&i| !((u[i] <= bound && g[i] <= 0.0) || (u[i] >= 1.0 - bound && g[i] >= 0.0)))
                .collect();
            let pg = free.iter().map(|&i| g[i].abs()).fold(0.0, f64::max);
            if pg <= gtol {
                return (u, f, it, true);
            }
            let h = self.hessian(&u, cfg.hess_step);
            let nfree = free.len();
            let mut a = DMatrix::<f64>::zeros(nfree, nfree);
            let mut rhs = DVector::<f64>::zeros(nfree);
            for (r, &i) in free.iter().enumerate() {
                rhs[r] = g[i];
                for (c, &j) in free.iter().enumerate() {
                    a[(r, c)] = -h[(i, j)];
                }
            }
            let scale = (0..nfree).map(|r| a[(r, r)].abs()).fold(0.0, f64::max).max(pg);
            let mut accepted = false;
            while mu <= 1e12 {
                let mut damped = a.clone();
                for r in 0..nfree {
                    damped[(r, r)] += mu * scale;
                }
                let Some(chol) = damped.cholesky() else {
                    mu *= 4.0;
                    continue;
                };
                let step = chol.solve(&rhs);
                let mut trial = u.clone();
                for (r, &i) in free.iter().enumerate() {
                    trial[i] += step[r];
                }
                self.project(&mut trial);
                let ft = self.objective(&trial);
                if ft > f {
                    let gain = ft - f;
                    u = trial;
                    f = ft;
                    history.push(f / self.area);
                    mu = (mu / 3.0).max(1e-12);
                    accepted = true;
                    if gain <= ftol {
                        small += 1;
                    } else {
                        small = 0;
                    }
                    break;
                }
                mu *= 4.0;
            }
            if !accepted || small >= 3 {
                return (u, f, it + 1, true);
            }
        }
        (u, f, cfg.max_iters, false)
    }
}

/// Local maximum of φ for `way`. Discs on pieces outside `free_pieces` (when given) keep
/// their initial positions. A disc that reaches a piece end next to an unoccupied
/// junction is moved onto the junction; one pushed against an end shared with another
/// section continues on that section. The ascent is then repeated.
pub fn local_maximum(
    poly: &Polygon,
    m: &MedialAxis,
    way: &Way,
    init: &Init,
    free_pieces: Option<&[usize]>,
    cfg: &AscentConfig,
) -> Result<LocalMaximum> {
    way.validate(m)?;
    let mut placements = match init {
        Init::Spread => spread_placements(m, way),
        Init::Given(p) => {
            let mut w = Way::empty(m.num_pieces());
            for pl in p {
                w.counts[pl.piece()] += 1;
            }
            if &w != way {
                return Err(FillError::InvalidSolution(format!(
                    "initial placements follow way {w}, expected {way}"
                )));
            }
            p.clone()
        }
    };
    let k = m.num_pieces();
    let is_free = |p: usize| free_pieces.is_none_or(|f| f.contains(&p));
    let mut total_iters = 0;
    let mut converged = true;
    let mut notes = Vec::new();
    let mut history = Vec::new();
    let max_rounds = 2 * way.total() + 4;

    for round in 0..max_rounds {
        let mut fixed_pl = Vec::new();
        let mut var_pl: Vec<(usize, f64)> = Vec::new();
        for pl in &placements {
            match *pl {
                Placement::Section { piece, u } if is_free(piece) => var_pl.push((piece, u)),
                _ => fixed_pl.push(*pl),
            }
        }
        var_pl.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let fixed: Vec<Disc> = fixed_pl
            .iter()
            .map(|pl| crate::coverage::placement_disc(m, pl))
            .collect::<Result<_>>()?;
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (i, &(p, _)) in var_pl.iter().enumerate() {
            groups[p].push(i);
        }
        groups.retain(|g| !g.is_empty());
        let asc = Ascent {
            m,
            area: poly.area(),
            fixed,
            fixed_pl: fixed_pl.clone(),
            pieces: var_pl.iter().map(|v| v.0).collect(),
            groups,
        };
        let (u, _, iters, ok) = asc.run(var_pl.iter().map(|v| v.1).collect(), cfg, &mut history);
        total_iters += iters;
        converged &= ok;

        // end handling
        let mut occupied = vec![false; k];
        for pl in &fixed_pl {
            if let Placement::Junction { piece } = pl {
                occupied[*piece] = true;
            }
        }
        let g = asc.gradient(&u, cfg.fd_step);
        let gtol = cfg.grad_tol * poly.area();
        let mut moved = false;
        let mut new_vars: Vec<Placement> = Vec::new();
        for (i, &p) in asc.pieces.iter().enumerate() {
            let end = if u[i] <= cfg.snap_tol {
                Some(0)
            } else if u[i] >= 1.0 - cfg.snap_tol {
                Some(1)
            } else {
                None
            };
            let mut pl = Placement::Section { piece: p, u: u[i] };
            if let Some(e) = end {
                match m.end_link(p, e) {
                    EndLink::Junction(j) if !occupied[j] && is_free(j) => {
                        occupied[j] = true;
                        pl = Placement::Junction { piece: j };
                        moved = true;
                        notes.push(format!("disc moved from piece {p} onto junction piece {j}"));
                    }
                    EndLink::Section { piece: q, end: f } if is_free(q) => {
                        let outward = if e == 0 { g[i] < -gtol } else { g[i] > gtol };
                        if outward {
                            pl = Placement::Section { piece: q, u: f as f64 };
                            moved = true;
                            notes.push(format!("disc moved from piece {p} to piece {q}"));
                        }
                    }
                    _ => {}
                }
            }
            new_vars.push(pl);
        }
        placements = fixed_pl;
        placements.extend(new_vars);
        if !moved {
            break;
        }
        if round + 1 == max_rounds {
            notes.push("reclassification did not settle".into());
        }
    }

    placements.sort_by(|a, b| a.piece().cmp(&b.piece()).then(a.u().total_cmp(&b.u())));
    let mut sol = FillingSolution::from_placements(poly, m, placements)?;
    sol.converged = converged;
    if !converged {
        notes.push(format!("iteration limit {} reached", cfg.max_iters));
    }
    if sol.way != *way {
        notes.push(format!("no interior maximum for way {way}; converged to way {}", sol.way));
    }
    sol.notes = notes;
    Ok(LocalMaximum { solution: sol, requested: way.clone(), iterations: total_iters, history })
}

/// One ascent per way from spread starts; results landing on the same way are merged
/// keeping the best φ.
pub fn enumerate_local_maxima(
    poly: &Polygon,
    m: &MedialAxis,
    ways: &[Way],
    cfg: &AscentConfig,
) -> Result<Vec<LocalMaximum>> {
    let results: Vec<LocalMaximum> = ways
        .par_iter()
        .map(|w| local_maximum(poly, m, w, &Init::Spread, None, cfg))
        .collect::<Result<_>>()?;
    let mut out: Vec<LocalMaximum> = Vec::new();
    for r in results {
        match out.iter_mut().find(|o| o.solution.way == r.solution.way) {
            Some(o) => {
                if r.solution.phi > o.solution.phi {
                    *o = r;
                }
            }
            None => out.push(r),
        }
    }
    Ok(out)
}

/// All ways of `n` discs over the pieces of `m` (junctions hold at most one).
pub fn all_ways(m: &MedialAxis, n: usize) -> Vec<Way> {
    fn rec(m: &MedialAxis, p: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Way>) {
        let k = m.num_pieces();
        if p == k {
            if left == 0 {
                out.push(Way::new(cur.clone()));
            }
            return;
        }
        let max = if m.is_junction(p) { left.min(1) } else { left };
        for c in 0..=max {
            cur.push(c);
            rec(m, p + 1, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, 0, n, &mut Vec::new(), &mut out);
    out
}
