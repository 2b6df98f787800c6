mod common;

use common::*;
use filling::geom::{polygon_area, Disc, Polygon};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn area_ignores_starting_vertex(seed in any::<u64>(), n in 3usize..10, shift in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_star(&mut rng, n);
        let mut vs = p.vertices().to_vec();
        let k = shift % vs.len();
        vs.rotate_left(k);
        let q = Polygon::new(vs).unwrap();
        prop_assert!((polygon_area(&p) - polygon_area(&q)).abs() <= 1e-12 * polygon_area(&p));
    }

    #[test]
    fn reversed_input_is_reoriented(seed in any::<u64>(), n in 3usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_star(&mut rng, n);
        let mut vs = p.vertices().to_vec();
        vs.reverse();
        let q = Polygon::new(vs).unwrap();
        prop_assert!((p.area() - q.area()).abs() <= 1e-12 * p.area());
        let mut a: Vec<(f64, f64)> = p.vertices().iter().map(|v| (v.x, v.y)).collect();
        let mut b: Vec<(f64, f64)> = q.vertices().iter().map(|v| (v.x, v.y)).collect();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        prop_assert_eq!(a, b);
        // counter-clockwise: positive shoelace sum
        let vs = q.vertices();
        let s: f64 = (0..vs.len()).map(|i| vs[i].cross(vs[(i + 1) % vs.len()])).sum();
        prop_assert!(s > 0.0);
    }

    #[test]
    fn boundary_distance_disc_is_inside(seed in any::<u64>(), n in 3usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_star(&mut rng, n);
        for _ in 0..20 {
            let q = uniform_in(&p, &mut rng);
            let (d, _) = p.distance_to_boundary(q).unwrap();
            prop_assert!(p.disc_inside(&Disc::new(q, d * (1.0 - 1e-9)), 0.0));
        }
    }
}
