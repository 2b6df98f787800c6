//! Solution files.

use serde::{Deserialize, Serialize};

use crate::coverage::{check_inside, union_area, FillingSolution, Placement};
use crate::error::{FillError, Result};
use crate::geom::{Disc, Point, Polygon, PolygonJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ha,
    Ga,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscJson {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub piece: usize,
    /// Absent for junction discs.
    pub u: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub polygon: PolygonJson,
    pub n: usize,
    pub discs: Vec<DiscJson>,
    pub phi: f64,
    pub way: Vec<usize>,
    pub method: Method,
}

impl SolutionJson {
    pub fn new(poly: &Polygon, sol: &FillingSolution, method: Method) -> Self {
        let discs = sol
            .discs
            .iter()
            .zip(&sol.placements)
            .map(|(d, pl)| DiscJson {
                x: d.center.x,
                y: d.center.y,
                r: d.radius,
                piece: pl.piece(),
                u: match pl {
                    Placement::Section { u, .. } => Some(*u),
                    Placement::Junction { .. } => None,
                },
            })
            .collect();
        Self { polygon: poly.to_json(), n: sol.n(), discs, phi: sol.phi, way: sol.way.counts.clone(), method }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn polygon(&self) -> Result<Polygon> {
        Polygon::new(self.polygon.vertices.iter().map(|&[x, y]| Point::new(x, y)).collect())
    }

    pub fn discs(&self) -> Vec<Disc> {
        self.discs.iter().map(|d| Disc::new(Point::new(d.x, d.y), d.r)).collect()
    }

    /// Checks containment, the disc count, the way total and the stored φ against a
    /// recomputation. Returns the recomputed φ.
    pub fn validate(&self, phi_tol: f64) -> Result<f64> {
        let poly = self.polygon()?;
        let discs = self.discs();
        if discs.len() != self.n {
            return Err(FillError::InvalidSolution(format!("n = {} but {} discs", self.n, discs.len())));
        }
        if self.way.iter().sum::<usize>() != self.n {
            return Err(FillError::InvalidSolution("way total differs from n".into()));
        }
        check_inside(&discs, &poly)?;
        let phi = union_area(&discs) / poly.area();
        if (phi - self.phi).abs() > phi_tol {
            return Err(FillError::InvalidSolution(format!("stored phi {} but recomputed {phi}", self.phi)));
        }
        Ok(phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_opt::{local_maximum, AscentConfig, Init};
    use crate::medial_axis::compute_medial_axis;
    use crate::way::Way;

    #[test]
    fn round_trip_and_validate() {
        let p = Polygon::from_coords(&[[0.0, 0.0], [2.0, 0.0], [1.0, 3f64.sqrt()]]).unwrap();
        let m = compute_medial_axis(&p).unwrap();
        let mut way = Way::empty(m.num_pieces());
        way.counts[m.junction_pieces()[0]] = 1;
        way.counts[(0..m.num_pieces()).find(|&q| !m.is_junction(q)).unwrap()] = 2;
        let r = local_maximum(&p, &m, &way, &Init::Spread, None, &AscentConfig::default()).unwrap();
        let js = SolutionJson::new(&p, &r.solution, Method::Ha);
        let text = js.to_json_string().unwrap();
        let back = SolutionJson::from_json_str(&text).unwrap();
        assert_eq!(back, js);
        assert!((back.validate(1e-10).unwrap() - r.solution.phi).abs() < 1e-10);
        let mut bad = back.clone();
        bad.phi += 1e-6;
        assert!(bad.validate(1e-10).is_err());
        let mut outside = back;
        outside.discs[0].r *= 1.5;
        assert!(outside.validate(1.0).is_err());
    }
}
