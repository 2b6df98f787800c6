//! Decomposition of the medial axis into pieces: junction points and maximally long
//! branch sections along which the radius is non-decreasing.

use std::collections::VecDeque;

use super::branch::Branch;
use super::{Node, NodeKind};

/// Part of one branch traversed by a section, from `t_start` to `t_end` (either order).
#[derive(Debug, Clone, PartialEq)]
pub struct SectionSegment {
    pub branch: usize,
    pub t_start: f64,
    pub t_end: f64,
    /// Arclength of the section before this segment.
    pub offset: f64,
    pub length: f64,
}

/// Monotone chain of branch sub-intervals, oriented with the radius increasing in `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub segments: Vec<SectionSegment>,
    pub length: f64,
    /// Axis nodes at `u = 0` and `u = 1`.
    pub end_nodes: [usize; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Section(Section),
    Junction { node: usize },
}

impl Piece {
    pub fn is_junction(&self) -> bool {
        matches!(self, Piece::Junction { .. })
    }

    pub fn as_section(&self) -> Option<&Section> {
        match self {
            Piece::Section(s) => Some(s),
            Piece::Junction { .. } => None,
        }
    }
}

#[derive(Clone, Copy)]
struct Sub {
    branch: usize,
    t0: f64,
    t1: f64,
    n0: usize,
    n1: usize,
}

#[derive(Clone, Copy)]
struct Oriented {
    sub: usize,
    forward: bool,
}

pub(super) struct Decomposition {
    pub pieces: Vec<Piece>,
    pub adjacency: Vec<Vec<usize>>,
}

fn trend(branches: &[Branch], sub: &Sub, forward: bool, eps: f64) -> i8 {
    let g = &branches[sub.branch].geometry;
    let (a, b) = if forward { (sub.t0, sub.t1) } else { (sub.t1, sub.t0) };
    let d = g.radius(b) - g.radius(a);
    if d > eps {
        1
    } else if d < -eps {
        -1
    } else {
        0
    }
}

/// Splits branches at interior radius minima (appending split nodes) and chains the
/// monotone sub-branches into sections.
pub(super) fn decompose(nodes: &mut Vec<Node>, branches: &[Branch], diag: f64) -> Decomposition {
    let eps = 1e-10 * diag;
    let mut subs: Vec<Sub> = Vec::new();
    for (bi, b) in branches.iter().enumerate() {
        let (t0, t1) = b.t_range;
        match b.interior_minimum() {
            Some(tm) => {
                let id = nodes.len();
                nodes.push(Node {
                    position: b.geometry.point(tm),
                    radius: b.geometry.radius(tm),
                    kind: NodeKind::Split,
                    branches: vec![bi],
                });
                subs.push(Sub { branch: bi, t0, t1: tm, n0: b.nodes[0], n1: id });
                subs.push(Sub { branch: bi, t0: tm, t1, n0: id, n1: b.nodes[1] });
            }
            None => subs.push(Sub { branch: bi, t0, t1, n0: b.nodes[0], n1: b.nodes[1] }),
        }
    }

    let mut at_node: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (k, s) in subs.iter().enumerate() {
        at_node[s.n0].push(k);
        at_node[s.n1].push(k);
    }

    let mergeable = |nd: usize| nodes[nd].kind == NodeKind::Transition && at_node[nd].len() == 2;
    let end_of = |o: Oriented| if o.forward { subs[o.sub].n1 } else { subs[o.sub].n0 };
    let start_of = |o: Oriented| if o.forward { subs[o.sub].n0 } else { subs[o.sub].n1 };

    let mut visited = vec![false; subs.len()];
    let mut chains: Vec<Vec<Oriented>> = Vec::new();
    for k in 0..subs.len() {
        if visited[k] {
            continue;
        }
        visited[k] = true;
        let mut chain: VecDeque<Oriented> = VecDeque::from([Oriented { sub: k, forward: true }]);
        let mut dir = trend(branches, &subs[k], true, eps);

        // forward
        loop {
            let last = *chain.back().unwrap();
            let nd = end_of(last);
            if !mergeable(nd) {
                break;
            }
            let Some(&other) = at_node[nd].iter().find(|&&s| s != last.sub) else { break };
            if visited[other] {
                break;
            }
            let o = Oriented { sub: other, forward: subs[other].n0 == nd };
            let tr = trend(branches, &subs[other], o.forward, eps);
            if tr != 0 && dir != 0 && tr != dir {
                break;
            }
            if dir == 0 {
                dir = tr;
            }
            visited[other] = true;
            chain.push_back(o);
        }
        // backward
        loop {
            let first = *chain.front().unwrap();
            let nd = start_of(first);
            if !mergeable(nd) {
                break;
            }
            let Some(&other) = at_node[nd].iter().find(|&&s| s != first.sub) else { break };
            if visited[other] {
                break;
            }
            let o = Oriented { sub: other, forward: subs[other].n1 == nd };
            let tr = trend(branches, &subs[other], o.forward, eps);
            if tr != 0 && dir != 0 && tr != dir {
                break;
            }
            if dir == 0 {
                dir = tr;
            }
            visited[other] = true;
            chain.push_front(o);
        }

        let mut chain: Vec<Oriented> = chain.into_iter().collect();
        let reverse = match dir {
            -1 => true,
            1 => false,
            _ => start_of(chain[0]) > end_of(*chain.last().unwrap()),
        };
        if reverse {
            chain.reverse();
            for o in chain.iter_mut() {
                o.forward = !o.forward;
            }
        }
        chains.push(chain);
    }

    // Build unordered pieces: sections then junctions.
    let mut raw_pieces: Vec<Piece> = chains
        .iter()
        .map(|chain| {
            let mut segments = Vec::new();
            let mut offset = 0.0;
            for o in chain {
                let s = &subs[o.sub];
                let g = &branches[s.branch].geometry;
                let (ts, te) = if o.forward { (s.t0, s.t1) } else { (s.t1, s.t0) };
                let length = (g.arclength(te) - g.arclength(ts)).abs();
                segments.push(SectionSegment { branch: s.branch, t_start: ts, t_end: te, offset, length });
                offset += length;
            }
            Piece::Section(Section {
                segments,
                length: offset,
                end_nodes: [start_of(chain[0]), end_of(*chain.last().unwrap())],
            })
        })
        .collect();
    for (nd, node) in nodes.iter().enumerate() {
        if node.kind == NodeKind::Junction {
            raw_pieces.push(Piece::Junction { node: nd });
        }
    }

    let raw_adj = adjacency(&raw_pieces, nodes);
    let order = dfs_order(&raw_pieces, &raw_adj, nodes);
    let mut new_id = vec![0; raw_pieces.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new;
    }
    let pieces: Vec<Piece> = order.iter().map(|&old| raw_pieces[old].clone()).collect();
    let mut adjacency: Vec<Vec<usize>> = order
        .iter()
        .map(|&old| raw_adj[old].iter().map(|&o| new_id[o]).collect())
        .collect();
    for a in adjacency.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    Decomposition { pieces, adjacency }
}

fn adjacency(pieces: &[Piece], nodes: &[Node]) -> Vec<Vec<usize>> {
    let mut by_node: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    let mut junction_piece = vec![None; nodes.len()];
    for (pi, p) in pieces.iter().enumerate() {
        match p {
            Piece::Section(s) => {
                for &nd in &s.end_nodes {
                    by_node[nd].push(pi);
                }
            }
            Piece::Junction { node } => junction_piece[*node] = Some(pi),
        }
    }
    let mut adj = vec![Vec::new(); pieces.len()];
    for (nd, secs) in by_node.iter().enumerate() {
        match junction_piece[nd] {
            Some(j) => {
                for &s in secs {
                    adj[s].push(j);
                    adj[j].push(s);
                }
            }
            None => {
                for (i, &a) in secs.iter().enumerate() {
                    for &b in &secs[i + 1..] {
                        if a != b {
                            adj[a].push(b);
                            adj[b].push(a);
                        }
                    }
                }
            }
        }
    }
    adj
}

/// Depth-first ordering starting from the section that ends at the lowest-index
/// polygon corner, so ways read along the axis.
fn dfs_order(pieces: &[Piece], adj: &[Vec<usize>], nodes: &[Node]) -> Vec<usize> {
    let start = pieces
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let s = p.as_section()?;
            let leaf = s.end_nodes.iter().any(|&n| nodes[n].kind == NodeKind::EndPoint);
            leaf.then_some(i)
        })
        .next()
        .unwrap_or(0);
    let mut seen = vec![false; pieces.len()];
    let mut order = Vec::with_capacity(pieces.len());
    let mut stack = vec![start];
    while let Some(p) = stack.pop() {
        if seen[p] {
            continue;
        }
        seen[p] = true;
        order.push(p);
        let mut next: Vec<usize> = adj[p].iter().copied().filter(|&q| !seen[q]).collect();
        next.sort_unstable_by(|a, b| b.cmp(a));
        stack.extend(next);
    }
    // disconnected leftovers (should not happen for a tree)
    for (p, s) in seen.iter().enumerate() {
        if !s {
            order.push(p);
        }
    }
    order
}
