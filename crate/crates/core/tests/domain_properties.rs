use minkgh_core::domain::{
    cone_lambda, cosmological_time, gauss_lipschitz_check, is_future_regular, is_past_regular, level_set_sample,
    misner_wedge, random_plane, sphere_directions, CtOptions, LambdaSet,
};
use minkgh_core::penrose::LightPlane;
use minkgh_core::samples::random_lorentz;
use minkgh_core::MinkVector;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn opts() -> CtOptions {
    CtOptions::default()
}

fn wedge_point(rng: &mut ChaCha8Rng, n: usize) -> MinkVector {
    // null coordinates x > 0 > y, transverse z
    let x: f64 = rng.gen_range(0.05..3.0);
    let y: f64 = -rng.gen_range(0.05..3.0);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut p = DVector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0));
    p[0] = r * (x - y);
    p[1] = r * (x + y);
    MinkVector(p)
}

#[test]
fn misner_wedge_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let w = misner_wedge(4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = wedge_point(&mut rng, 4);
        let exact = (p.0[0] * p.0[0] - p.0[1] * p.0[1]).sqrt();
        let ct = cosmological_time(&w, &p, &opts()).unwrap();
        worst = worst.max((ct.t - exact).abs());
    }
    assert!(worst < 1e-9, "{worst}");
}

fn boosted(n: usize, b: f64, angle: f64) -> MinkVector {
    let mut c = vec![0.0; n];
    c[0] = b.cosh();
    c[1] = b.sinh() * angle.cos();
    c[2] = b.sinh() * angle.sin();
    MinkVector::new(&c)
}

#[test]
fn radiant_cone_converges_monotonically() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let apex = MinkVector::zeros(3);
    // equally spaced directions: 64 ⊂ 128 ⊂ 256, so the domains shrink
    let lambdas: Vec<_> =
        [64, 128, 256].iter().map(|&k| cone_lambda(&apex, &sphere_directions(3, k, &mut rng)).unwrap()).collect();
    for (b, angle) in [(0.3, 0.2), (1.0, 2.0), (2.0, 0.93), (3.0, 4.1), (4.0, 0.93), (5.0, 0.93)] {
        let p = boosted(3, b, angle);
        let exact = (-p.sq()).sqrt();
        let t: Vec<f64> = lambdas.iter().map(|l| cosmological_time(l, &p, &opts()).unwrap().t).collect();
        let err: Vec<f64> = t.iter().map(|t| (t - exact) / exact).collect();
        assert!(err.iter().all(|&e| e > -1e-9), "b = {b}: {err:?}");
        assert!(err[1] <= err[0] + 1e-9 && err[2] <= err[1] + 1e-9, "b = {b}: {err:?}");
        if b <= 3.0 {
            assert!(err[0] < 0.01, "b = {b}: {err:?}");
        }
    }
    // near the light cone the sampling error is visible and shrinks
    let p = boosted(3, 5.0, 0.93);
    let exact = (-p.sq()).sqrt();
    let err: Vec<f64> = lambdas.iter().map(|l| (cosmological_time(l, &p, &opts()).unwrap().t - exact) / exact).collect();
    assert!(err[0] > 0.1 && err[1] < err[0] / 10.0 && err[2] < 1e-6, "{err:?}");
}

#[test]
fn radiant_cone_in_dimension_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let lambda = cone_lambda(&MinkVector::zeros(4), &sphere_directions(4, 64, &mut rng)).unwrap();
    for (b, angle) in [(0.5, 0.3), (1.0, 1.7), (2.0, 0.93)] {
        let p = boosted(4, b, angle);
        let exact = (-p.sq()).sqrt();
        let t = cosmological_time(&lambda, &p, &opts()).unwrap().t;
        assert!((t - exact).abs() / exact < 0.01, "b = {b}: {t} vs {exact}");
    }
}

#[test]
fn time_grows_along_gauss_vector() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [3, 4] {
        for _ in 0..10 {
            let lambda = LambdaSet::future((0..4).map(|_| random_plane(&mut rng, n, 1.0)).collect()).unwrap();
            let w = is_future_regular(&lambda, 1e-9).unwrap().witness.unwrap();
            let p = MinkVector(&w.0 + DVector::from_fn(n, |i, _| if i == 0 { rng.gen_range(0.0..1.0) } else { 0.0 }));
            let ct = cosmological_time(&lambda, &p, &opts()).unwrap();
            let q = MinkVector(&p.0 + &ct.gauss.0 * 1e-3);
            let ct2 = cosmological_time(&lambda, &q, &opts()).unwrap();
            assert!((ct2.t - ct.t - 1e-3).abs() < 1e-8);
            // structure of the result
            assert!((ct.gauss.sq() + 1.0).abs() < 1e-9 && ct.gauss.0[0] > 0.0);
            let seg = &p.0 - &ct.retraction.0 - &ct.gauss.0 * ct.t;
            assert!(seg.amax() < 1e-9);
            let top = lambda.signed_levels(&ct.retraction.0).into_iter().fold(f64::NEG_INFINITY, f64::max);
            assert!(top.abs() < 1e-9);
            assert!(lambda.planes[ct.active_plane].level(&ct.retraction.0).abs() < 1e-9);
        }
    }
}

#[test]
fn equivariance_under_isometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let lambda = LambdaSet::future((0..4).map(|_| random_plane(&mut rng, 3, 1.0)).collect()).unwrap();
        let p = is_future_regular(&lambda, 1e-9).unwrap().witness.unwrap();
        let g = random_lorentz(&mut rng, 3, 0.5).with_translation(&MinkVector::new(&[0.3, -0.2, 0.5]));
        let a = cosmological_time(&lambda, &p, &opts()).unwrap();
        let b = cosmological_time(&lambda.transform(&g), &g.act(&p), &opts()).unwrap();
        assert!((a.t - b.t).abs() < 1e-9 * (1.0 + a.t));
        assert!((&g.act(&a.retraction).0 - &b.retraction.0).amax() < 1e-8 * (1.0 + a.t));
    }
}

#[test]
fn redundant_plane_changes_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let lambda = LambdaSet::future((0..3).map(|_| random_plane(&mut rng, 3, 1.0)).collect()).unwrap();
    let p = is_future_regular(&lambda, 1e-9).unwrap().witness.unwrap();
    let base = cosmological_time(&lambda, &p, &opts()).unwrap();
    // a parallel copy pushed further to the past contains Ω
    let mut planes = lambda.planes.clone();
    planes.push(LightPlane { v: planes[0].v.clone(), s: planes[0].s + 0.7 });
    let more = LambdaSet::future(planes).unwrap();
    assert!((cosmological_time(&more, &p, &opts()).unwrap().t - base.t).abs() < 1e-10);
}

#[test]
fn compact_lambda_is_regular_both_ways() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in [3, 4, 5] {
        for _ in 0..5 {
            let k = rng.gen_range(2..8);
            let lambda = LambdaSet::future((0..k).map(|_| random_plane(&mut rng, n, 2.0)).collect()).unwrap();
            assert!(is_future_regular(&lambda, 1e-9).unwrap().regular);
            assert!(is_past_regular(&lambda, 1e-9).unwrap().regular);
        }
    }
}

#[test]
fn gauss_map_is_lipschitz_on_level_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let lambda = LambdaSet::future((0..3).map(|_| random_plane(&mut rng, 3, 1.0)).collect()).unwrap();
    for (l, t) in [(misner_wedge(3), 1.3), (lambda, 0.8)] {
        let w = is_future_regular(&l, 1e-9).unwrap().witness.unwrap();
        let dirs: Vec<MinkVector> = (0..20)
            .map(|_| {
                let (a, b): (f64, f64) = (rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
                MinkVector::new(&[(1.0 + a * a + b * b).sqrt(), a, b])
            })
            .collect();
        let pts: Vec<MinkVector> = level_set_sample(&l, t, Some(&w), &dirs, &opts())
            .unwrap()
            .into_iter()
            .map(|r| r.unwrap().point)
            .collect();
        let mut pairs = Vec::new();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                pairs.push((pts[i].clone(), pts[j].clone()));
            }
        }
        let rep = gauss_lipschitz_check(&l, t, &pairs, 1e-3, &opts()).unwrap();
        assert!(rep.holds, "{rep:?}");
    }
}
