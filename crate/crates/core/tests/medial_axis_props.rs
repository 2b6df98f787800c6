mod common;

use common::*;
use filling::medial_axis::{compute_medial_axis, BranchCase, NodeKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn named_polygons() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for poly in [square(), equilateral(), l_shape(), rectangle(), dumbbell(), triangle_30_60_90()] {
        check_axis(&poly, &mut rng).unwrap();
    }
}

#[test]
fn dumbbell_splits_point_point_branch() {
    let m = compute_medial_axis(&dumbbell()).unwrap();
    let pp: Vec<usize> = (0..m.branches.len())
        .filter(|&b| m.branches[b].case() == BranchCase::PointPoint)
        .collect();
    assert_eq!(pp.len(), 1);
    let b = &m.branches[pp[0]];
    let splits: Vec<_> = m.nodes.iter().filter(|n| n.kind == NodeKind::Split).collect();
    assert_eq!(splits.len(), 1);
    assert!((splits[0].radius - 0.5).abs() < 1e-9);
    assert!((splits[0].position.y - 1.0).abs() < 1e-9);
    // the two halves of the branch land in different sections
    let holders: Vec<usize> = (0..m.num_pieces())
        .filter(|&p| {
            m.pieces[p]
                .as_section()
                .is_some_and(|s| s.segments.iter().any(|g| g.branch == pp[0]))
        })
        .collect();
    assert_eq!(holders.len(), 2);
    // numeric minimum of the radius along the branch sits at the split
    let (t0, t1) = b.t_range;
    let tmin = (0..=10_000)
        .map(|k| t0 + (t1 - t0) * k as f64 / 10_000.0)
        .min_by(|x, y| b.geometry.radius(*x).partial_cmp(&b.geometry.radius(*y)).unwrap())
        .unwrap();
    assert!(b.point(tmin).dist(splits[0].position) < 1e-3);
}

#[test]
fn random_star_polygons() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..60 {
        let n = rng.gen_range(4..12);
        let poly = random_star(&mut rng, n);
        if let Err(e) = check_axis(&poly, &mut rng) {
            panic!("polygon {i} {:?}: {e}", poly.vertices());
        }
    }
}

#[test]
fn random_convex_polygons() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..40 {
        let n = rng.gen_range(3..10);
        let poly = random_convex(&mut rng, n);
        if let Err(e) = check_axis(&poly, &mut rng) {
            panic!("polygon {i} {:?}: {e}", poly.vertices());
        }
    }
}
