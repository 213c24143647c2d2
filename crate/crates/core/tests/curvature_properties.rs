use minkgh_core::curvature::{cmc_check, grid_points, mean_curvature, GraphSurface, SurfaceSpec};
use minkgh_core::Isometry;
use minkgh_core::MinkVector;
use proptest::prelude::*;

#[test]
fn hyperboloid_levels_scale_inversely() {
    for n in [3, 4] {
        for t in [0.5, 1.0, 2.0] {
            let a = SurfaceSpec::Hyperboloid { t }.build(n, 1.5 * t).unwrap();
            let b = SurfaceSpec::Hyperboloid { t: 2.0 * t }.build(n, 3.0 * t).unwrap();
            let ra = cmc_check(&a, &grid_points(&a, 4, 0.9), 1e-4, None).unwrap();
            let rb = cmc_check(&b, &grid_points(&b, 4, 0.9), 1e-4, None).unwrap();
            assert!(ra.is_cmc && rb.is_cmc && ra.spread < 1e-4 && rb.spread < 1e-4);
            assert!((ra.value / rb.value - 2.0).abs() < 1e-3);
            assert!((ra.value - 1.0 / t).abs() < 1e-6 / t);
        }
    }
}

#[test]
fn misner_levels_are_cmc() {
    for n in [3, 4] {
        let spec = SurfaceSpec::MisnerLevel { t: 0.8 };
        let s = spec.build(n, 1.5).unwrap();
        let r = cmc_check(&s, &grid_points(&s, 4, 0.9), 1e-6, None).unwrap();
        assert!(r.is_cmc);
        assert!((r.value - spec.exact_mean_curvature(n).unwrap()).abs() < 1e-6);
    }
}

#[test]
fn planes_have_zero_mean_curvature() {
    for slope in [vec![], vec![0.3, -0.5]] {
        let s = SurfaceSpec::Plane { height: 2.0, slope }.build(3, 1.0).unwrap();
        let r = cmc_check(&s, &grid_points(&s, 4, 0.9), 1e-6, None).unwrap();
        assert!(r.is_cmc && r.value.abs() < 1e-6);
    }
}

#[test]
fn bumpy_graph_is_not_cmc() {
    for seed in 0..5 {
        let s = SurfaceSpec::Bumpy { amplitude: 0.08, modes: 3, seed }.build(3, 1.0).unwrap();
        assert!(!cmc_check(&s, &grid_points(&s, 4, 0.9), 1e-4, None).unwrap().is_cmc);
    }
}

#[test]
fn boosts_preserve_hyperboloid_curvature() {
    let s = SurfaceSpec::Hyperboloid { t: 1.0 }.build(3, 3.0).unwrap();
    for (x, zeta) in [([0.2, 0.1], 0.7), ([-0.5, 0.4], -0.3), ([0.0, 0.0], 1.1)] {
        let p = MinkVector::new(&[s.eval(&x), x[0], x[1]]);
        let q = Isometry::boost(3, 1, zeta).act(&p);
        let hp = mean_curvature(&s, &x, None).unwrap();
        let hq = mean_curvature(&s, &[q.0[1], q.0[2]], None).unwrap();
        assert!((hp - hq).abs() < 1e-7);
    }
}

#[test]
fn euclidean_motions_preserve_curvature() {
    let spec = SurfaceSpec::Bumpy { amplitude: 0.08, modes: 3, seed: 7 };
    let base = spec.build(3, 2.0).unwrap();
    let (c, s) = (0.6f64.cos(), 0.6f64.sin());
    let shift = [0.3, -0.2];
    let moved = GraphSurface::new(
        move |y: &[f64]| {
            let (u, v) = (y[0] - shift[0], y[1] - shift[1]);
            base_eval(&[c * u + s * v, -s * u + c * v]) + 5.0
        },
        vec![-1.0; 2],
        vec![1.0; 2],
        0.9,
    )
    .unwrap();
    for x in grid_points(&spec.build(3, 0.5).unwrap(), 3, 0.9) {
        let y = [c * x[0] - s * x[1] + shift[0], s * x[0] + c * x[1] + shift[1]];
        let a = mean_curvature(&base, &x, Some(1e-4)).unwrap();
        let b = mean_curvature(&moved, &y, Some(1e-4)).unwrap();
        assert!((a - b).abs() < 1e-6, "{a} {b}");
    }
}

fn base_eval(x: &[f64]) -> f64 {
    thread_local! {
        static S: GraphSurface = SurfaceSpec::Bumpy { amplitude: 0.08, modes: 3, seed: 7 }.build(3, 2.0).unwrap();
    }
    S.with(|s| s.eval(x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn estimator_is_second_order(x0 in -0.8f64..0.8, x1 in -0.8f64..0.8, t in 0.5f64..2.0) {
        let s = SurfaceSpec::Hyperboloid { t }.build(3, 2.0 * t).unwrap();
        let x = [x0 * t, x1 * t];
        let e1 = mean_curvature(&s, &x, Some(0.04 * t)).unwrap() - 1.0 / t;
        let e2 = mean_curvature(&s, &x, Some(0.02 * t)).unwrap() - 1.0 / t;
        prop_assert!((e1 / e2 - 4.0).abs() < 0.3, "{}", e1 / e2);
    }
}
