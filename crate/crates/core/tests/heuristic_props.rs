mod common;

use common::*;
use filling::coverage::{check_inside, phi, Placement};
use filling::geom::Point;
use filling::heuristic::{enumerate_all, fill_sequence, way_search_count, HaConfig};
use filling::local_opt::{local_maximum, AscentConfig, Init};
use filling::{compute_medial_axis, Way};

#[test]
fn triangle_sequence_grows_with_few_searches() {
    let poly = triangle_30_60_90();
    let m = compute_medial_axis(&poly).unwrap();
    let trace = fill_sequence(&poly, &m, 10, &HaConfig::default()).unwrap();
    let phis: Vec<f64> = trace.steps.iter().map(|s| s.solution.phi).collect();
    for w in phis.windows(2) {
        assert!(w[1] > w[0], "φ not increasing: {phis:?}");
    }
    assert!(way_search_count(&trace) <= 70, "{} searches", way_search_count(&trace));
    for s in &trace.steps {
        assert_eq!(s.solution.n(), s.n);
        check_inside(&s.solution.discs, &poly).unwrap();
        assert!((phi(&s.solution, &poly).unwrap() - s.solution.phi).abs() <= 1e-10);
    }
}

#[test]
fn square_and_equilateral_single_disc() {
    let sq = square();
    let m = compute_medial_axis(&sq).unwrap();
    let t = fill_sequence(&sq, &m, 1, &HaConfig::default()).unwrap();
    assert!((t.steps[0].solution.phi - std::f64::consts::FRAC_PI_4).abs() <= 1e-9);
    assert!(m.is_junction(t.steps[0].solution.placements[0].piece()));

    let tri = equilateral();
    let m = compute_medial_axis(&tri).unwrap();
    let t = fill_sequence(&tri, &m, 1, &HaConfig::default()).unwrap();
    assert!((t.steps[0].solution.phi - std::f64::consts::PI / (3.0 * 3f64.sqrt())).abs() <= 1e-9);
}

#[test]
fn full_enumeration_searches_121_ways() {
    let poly = triangle_30_60_90();
    let m = compute_medial_axis(&poly).unwrap();
    let (best, searched) = enumerate_all(&poly, &m, 10, &AscentConfig::default()).unwrap();
    assert_eq!(searched, 121);
    let t = fill_sequence(&poly, &m, 10, &HaConfig::default()).unwrap();
    assert!(best.phi >= t.steps[9].solution.phi - 1e-9);
}

#[test]
fn pinned_parts_match_joint_optimization() {
    let poly = rectangle();
    let m = compute_medial_axis(&poly).unwrap();
    let cfg = HaConfig { pin_junctions: true, ..HaConfig::default() };
    let trace = fill_sequence(&poly, &m, 8, &cfg).unwrap();
    for s in trace.steps.iter().filter(|s| s.n > m.num_junctions()) {
        let joint = local_maximum(&poly, &m, &s.solution.way, &Init::Spread, None, &AscentConfig::default()).unwrap();
        assert_eq!(joint.solution.way, s.solution.way);
        assert!(
            (joint.solution.phi - s.solution.phi).abs() <= 1e-9,
            "N={}: cached {} joint {}",
            s.n,
            s.solution.phi,
            joint.solution.phi
        );
    }
}

#[test]
fn marginal_gain_shrinks_on_a_single_part() {
    let poly = rectangle();
    let m = compute_medial_axis(&poly).unwrap();
    let mid = m.project(Point::new(2.0, 0.5)).piece;
    let js = m.junction_pieces();
    let cfg = AscentConfig::default();
    let mut phis = Vec::new();
    for n in 0..=10 {
        let mut pls: Vec<Placement> = js.iter().map(|&j| Placement::Junction { piece: j }).collect();
        pls.extend((0..n).map(|i| Placement::Section { piece: mid, u: (i as f64 + 0.5) / n as f64 }));
        let mut way = Way::empty(m.num_pieces());
        for pl in &pls {
            way.counts[pl.piece()] += 1;
        }
        let res = local_maximum(&poly, &m, &way, &Init::Given(pls), Some(&[mid]), &cfg).unwrap();
        phis.push(res.solution.phi);
    }
    let gains: Vec<f64> = phis.windows(2).map(|w| w[1] - w[0]).collect();
    for w in gains.windows(2) {
        assert!(w[1] > 0.0 && w[1] <= w[0] + 1e-12, "gains {gains:?}");
    }
}

#[test]
fn long_triangle_run_stays_under_700_searches() {
    let poly = triangle_30_60_90();
    let m = compute_medial_axis(&poly).unwrap();
    let trace = fill_sequence(&poly, &m, 100, &HaConfig::default()).unwrap();
    assert!(way_search_count(&trace) <= 700, "{} searches", way_search_count(&trace));
}
