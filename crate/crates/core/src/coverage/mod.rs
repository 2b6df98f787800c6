//! The filling measure: exact union areas, per-disc contributions and the neighbor
//! relation along the medial axis.

mod arcs;
mod neighbors;

pub use arcs::{contributions, difference_area, lens_area, union_area, OverlapReport};
pub use neighbors::{neighbors, unique_area};
pub(crate) use neighbors::neighbor_lists;

use serde::{Deserialize, Serialize};

use crate::error::{FillError, Result};
use crate::geom::{Disc, Polygon};
use crate::medial_axis::MedialAxis;
use crate::way::Way;

/// Where a disc center sits on the medial axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Placement {
    Section { piece: usize, u: f64 },
    Junction { piece: usize },
}

impl Placement {
    pub fn piece(&self) -> usize {
        match *self {
            Placement::Section { piece, .. } | Placement::Junction { piece } => piece,
        }
    }

    /// Normalized coordinate; junction placements report zero.
    pub fn u(&self) -> f64 {
        match *self {
            Placement::Section { u, .. } => u,
            Placement::Junction { .. } => 0.0,
        }
    }
}

/// A set of discs inside a polygon together with its axis placements.
#[derive(Debug, Clone, PartialEq)]
pub struct FillingSolution {
    pub discs: Vec<Disc>,
    pub placements: Vec<Placement>,
    pub phi: f64,
    pub way: Way,
    /// Set when the optimizer stopped on its iteration limit.
    pub converged: bool,
    pub notes: Vec<String>,
}

impl FillingSolution {
    /// Builds a solution from placements, evaluating the discs and φ.
    pub fn from_placements(poly: &Polygon, m: &MedialAxis, placements: Vec<Placement>) -> Result<Self> {
        let mut way = Way::empty(m.num_pieces());
        let mut discs = Vec::with_capacity(placements.len());
        for pl in &placements {
            way.counts[pl.piece()] += 1;
            discs.push(placement_disc(m, pl)?);
        }
        way.validate(m)?;
        let phi = union_area(&discs) / poly.area();
        Ok(Self { discs, placements, phi, way, converged: true, notes: Vec::new() })
    }

    pub fn empty(m: &MedialAxis) -> Self {
        Self {
            discs: Vec::new(),
            placements: Vec::new(),
            phi: 0.0,
            way: Way::empty(m.num_pieces()),
            converged: true,
            notes: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.discs.len()
    }

    /// Every disc uniquely covers a positive area.
    pub fn is_all_filling(&self, tol: f64) -> bool {
        contributions(&self.discs).unique.iter().all(|&u| u > tol)
    }
}

pub fn placement_disc(m: &MedialAxis, pl: &Placement) -> Result<Disc> {
    match *pl {
        Placement::Section { piece, u } => {
            let (c, r) = m.point_at(piece, u)?;
            Ok(Disc::new(c, r))
        }
        Placement::Junction { piece } => m.junction_disc(piece),
    }
}

/// Covered fraction of `poly`; errors if any disc leaves the polygon.
pub fn phi(sol: &FillingSolution, poly: &Polygon) -> Result<f64> {
    check_inside(&sol.discs, poly)?;
    Ok(union_area(&sol.discs) / poly.area())
}

pub fn check_inside(discs: &[Disc], poly: &Polygon) -> Result<()> {
    for (i, d) in discs.iter().enumerate() {
        if !poly.disc_inside(d, poly.tol()) {
            return Err(FillError::InvalidSolution(format!(
                "disc {i} at ({}, {}) with radius {} is not inside the polygon",
                d.center.x, d.center.y, d.radius
            )));
        }
    }
    Ok(())
}
