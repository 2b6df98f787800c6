//! Heuristic vs genetic comparison tables.

use std::time::Instant;

use serde::Serialize;

use filling::genetic::{run_ga, GaConfig};
use filling::heuristic::{fill_sequence, HaConfig};
use filling::{compute_medial_axis, Polygon, Result};

/// Tolerance under which two φ values count as equal.
pub const PHI_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportRow {
    pub polygon: String,
    pub convex: bool,
    pub n: usize,
    pub phi_ha: f64,
    pub phi_ga: f64,
    pub way_ha: String,
    pub way_ga: String,
    pub way_match: bool,
    pub searches: usize,
    pub ms_ha: f64,
    pub ms_ga: f64,
}

/// Shares over a group of rows, in percent.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct Aggregate {
    pub instances: usize,
    pub way_match: f64,
    /// Ways differ and the heuristic's is better.
    pub best_way_ha: f64,
    /// Ways differ and the genetic one is better.
    pub best_way_ga: f64,
    /// Heuristic φ at least the genetic φ within [`PHI_TOL`].
    pub best_phi_ha: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RunReport {
    pub rows: Vec<ReportRow>,
}

impl RunReport {
    pub fn aggregate(&self, filter: impl Fn(&ReportRow) -> bool) -> Aggregate {
        let rows: Vec<&ReportRow> = self.rows.iter().filter(|r| filter(r)).collect();
        let n = rows.len();
        let pct = |k: usize| if n == 0 { 0.0 } else { 100.0 * k as f64 / n as f64 };
        Aggregate {
            instances: n,
            way_match: pct(rows.iter().filter(|r| r.way_match).count()),
            best_way_ha: pct(rows.iter().filter(|r| !r.way_match && r.phi_ha > r.phi_ga).count()),
            best_way_ga: pct(rows.iter().filter(|r| !r.way_match && r.phi_ga > r.phi_ha).count()),
            best_phi_ha: pct(rows.iter().filter(|r| r.phi_ha >= r.phi_ga - PHI_TOL).count()),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| filling::FillError::Numeric(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| filling::FillError::Numeric(e.to_string()))?;
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::from("| | Way match | Best way: HA | Best way: GA | Best phi: HA | Instances |\n|---|---|---|---|---|---|\n");
        let groups: [(&str, Box<dyn Fn(&ReportRow) -> bool>); 3] = [
            ("Convex", Box::new(|r: &ReportRow| r.convex)),
            ("Concave", Box::new(|r: &ReportRow| !r.convex)),
            ("All", Box::new(|_: &ReportRow| true)),
        ];
        for (name, f) in groups {
            let a = self.aggregate(f);
            if a.instances == 0 {
                continue;
            }
            s.push_str(&format!(
                "| {name} | {:.1}% | {:.1}% | {:.1}% | {:.1}% | {} |\n",
                a.way_match, a.best_way_ha, a.best_way_ga, a.best_phi_ha, a.instances
            ));
        }
        s
    }
}

/// Runs both algorithms on `poly` for `N = 1..=n_max`.
pub fn compare_polygon(name: &str, poly: &Polygon, n_max: usize, ha: &HaConfig, ga: &GaConfig) -> Result<Vec<ReportRow>> {
    let m = compute_medial_axis(poly)?;
    let t = Instant::now();
    let trace = fill_sequence(poly, &m, n_max, ha)?;
    let ms_ha = t.elapsed().as_secs_f64() * 1e3 / n_max.max(1) as f64;
    let mut rows = Vec::new();
    for step in &trace.steps {
        let t = Instant::now();
        let g = run_ga(poly, &m, step.n, ga)?;
        let ms_ga = t.elapsed().as_secs_f64() * 1e3;
        rows.push(ReportRow {
            polygon: name.to_string(),
            convex: poly.is_convex(),
            n: step.n,
            phi_ha: step.solution.phi,
            phi_ga: g.solution.phi,
            way_ha: step.solution.way.to_string(),
            way_ga: g.solution.way.to_string(),
            way_match: step.solution.way == g.solution.way,
            searches: step.searches,
            ms_ha,
            ms_ga,
        });
    }
    Ok(rows)
}
