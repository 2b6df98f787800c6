use super::{difference_area, FillingSolution, Placement};
use crate::error::{FillError, Result};
use crate::geom::Disc;
use crate::medial_axis::{EndLink, MedialAxis, Piece};

struct Occupancy {
    /// Discs on each piece, sorted by `u`.
    on_piece: Vec<Vec<(f64, usize)>>,
}

impl Occupancy {
    fn new(placements: &[Placement], m: &MedialAxis) -> Result<Self> {
        let mut on_piece: Vec<Vec<(f64, usize)>> = vec![Vec::new(); m.num_pieces()];
        for (i, pl) in placements.iter().enumerate() {
            let p = pl.piece();
            if p >= m.num_pieces() {
                return Err(FillError::InvalidSolution(format!("disc {i} placed on missing piece {p}")));
            }
            match (pl, m.is_junction(p)) {
                (Placement::Section { u, .. }, false) if (0.0..=1.0).contains(u) => on_piece[p].push((*u, i)),
                (Placement::Junction { .. }, true) => on_piece[p].push((0.0, i)),
                _ => {
                    return Err(FillError::InvalidSolution(format!(
                        "disc {i} has an inconsistent placement {pl:?}"
                    )))
                }
            }
        }
        for v in on_piece.iter_mut() {
            v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        }
        Ok(Self { on_piece })
    }
}

/// First discs met when entering section `piece` through end `end`.
fn enter_section(m: &MedialAxis, occ: &Occupancy, piece: usize, end: usize, out: &mut Vec<usize>) {
    let discs = &occ.on_piece[piece];
    if !discs.is_empty() {
        let d = if end == 0 { discs[0].1 } else { discs[discs.len() - 1].1 };
        out.push(d);
        return;
    }
    leave_section(m, occ, piece, 1 - end, out);
}

/// Continues past end `end` of section `piece`.
fn leave_section(m: &MedialAxis, occ: &Occupancy, piece: usize, end: usize, out: &mut Vec<usize>) {
    match m.end_link(piece, end) {
        EndLink::Leaf => {}
        EndLink::Section { piece: q, end: e } => enter_section(m, occ, q, e, out),
        EndLink::Junction(j) => enter_junction(m, occ, j, Some(piece), out),
    }
}

fn enter_junction(m: &MedialAxis, occ: &Occupancy, j: usize, from: Option<usize>, out: &mut Vec<usize>) {
    if let Some(&(_, d)) = occ.on_piece[j].first() {
        out.push(d);
        return;
    }
    spread_from_junction(m, occ, j, from, out);
}

fn spread_from_junction(m: &MedialAxis, occ: &Occupancy, j: usize, from: Option<usize>, out: &mut Vec<usize>) {
    let Piece::Junction { node } = m.pieces[j] else { return };
    for &q in &m.adjacency[j] {
        if Some(q) == from {
            continue;
        }
        if let Some(sec) = m.pieces[q].as_section() {
            for (e, &nd) in sec.end_nodes.iter().enumerate() {
                if nd == node {
                    enter_section(m, occ, q, e, out);
                }
            }
        }
    }
}

/// Neighbor lists: discs reachable along the axis without passing another center.
pub fn neighbors(sol: &FillingSolution, m: &MedialAxis) -> Result<Vec<Vec<usize>>> {
    neighbor_lists(&sol.placements, m)
}

pub(crate) fn neighbor_lists(placements: &[Placement], m: &MedialAxis) -> Result<Vec<Vec<usize>>> {
    let occ = Occupancy::new(placements, m)?;
    let mut out = vec![Vec::new(); placements.len()];
    for (i, pl) in placements.iter().enumerate() {
        let mut found = Vec::new();
        let p = pl.piece();
        if m.is_junction(p) {
            for &(_, d) in &occ.on_piece[p] {
                if d != i {
                    found.push(d);
                }
            }
            spread_from_junction(m, &occ, p, None, &mut found);
        } else {
            let list = &occ.on_piece[p];
            let pos = list.iter().position(|&(_, d)| d == i).expect("disc registered");
            if pos > 0 {
                found.push(list[pos - 1].1);
            } else {
                leave_section(m, &occ, p, 0, &mut found);
            }
            if pos + 1 < list.len() {
                found.push(list[pos + 1].1);
            } else {
                leave_section(m, &occ, p, 1, &mut found);
            }
        }
        found.retain(|&d| d != i);
        found.sort_unstable();
        found.dedup();
        out[i] = found;
    }
    Ok(out)
}

/// Area covered by disc `k` alone, computed from `k` and its neighbors only.
pub fn unique_area(k: usize, sol: &FillingSolution, m: &MedialAxis) -> Result<f64> {
    let nb = neighbors(sol, m)?;
    let mut local: Vec<Disc> = vec![sol.discs[k]];
    local.extend(nb[k].iter().map(|&j| sol.discs[j]));
    // identical discs: keep the global index order for the tie rule
    let mut order: Vec<usize> = std::iter::once(k).chain(nb[k].iter().copied()).collect();
    let mut idx: Vec<usize> = (0..order.len()).collect();
    idx.sort_by_key(|&a| order[a]);
    let sorted: Vec<Disc> = idx.iter().map(|&a| local[a]).collect();
    order.sort_unstable();
    let pos = order.iter().position(|&g| g == k).expect("k present");
    Ok(difference_area(&sorted, pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Polygon;
    use crate::medial_axis::compute_medial_axis;

    fn equilateral() -> Polygon {
        Polygon::from_coords(&[[0.0, 0.0], [2.0, 0.0], [1.0, 3f64.sqrt()]]).unwrap()
    }

    #[test]
    fn chain_on_one_piece() {
        let poly = equilateral();
        let m = compute_medial_axis(&poly).unwrap();
        let p = (0..m.num_pieces()).find(|&p| !m.is_junction(p)).unwrap();
        let pls = vec![
            Placement::Section { piece: p, u: 0.2 },
            Placement::Section { piece: p, u: 0.5 },
            Placement::Section { piece: p, u: 0.8 },
        ];
        let sol = FillingSolution::from_placements(&poly, &m, pls).unwrap();
        let nb = neighbors(&sol, &m).unwrap();
        assert_eq!(nb[1], vec![0, 2]);
        assert_eq!(nb[0], vec![1]);
    }

    #[test]
    fn junction_neighbors() {
        let poly = equilateral();
        let m = compute_medial_axis(&poly).unwrap();
        let mut pls = Vec::new();
        for p in 0..m.num_pieces() {
            if !m.is_junction(p) {
                pls.push(Placement::Section { piece: p, u: 0.3 });
                pls.push(Placement::Section { piece: p, u: 0.7 });
            }
        }
        let sol = FillingSolution::from_placements(&poly, &m, pls).unwrap();
        let nb = neighbors(&sol, &m).unwrap();
        // the discs closest to the junction see each other
        for i in [1, 3, 5] {
            assert_eq!(nb[i].len(), 3, "{:?}", nb);
        }
        let single = FillingSolution::from_placements(&poly, &m, vec![Placement::Junction { piece: m.junction_pieces()[0] }]).unwrap();
        assert!(neighbors(&single, &m).unwrap()[0].is_empty());
        assert!((unique_area(0, &single, &m).unwrap() - single.discs[0].area()).abs() < 1e-12);
    }
}
