use minkgh_core::domain::{cosmological_time, CtOptions};
use minkgh_core::models::extension::{random_problem, symmetric_extension, ExtCase};
use minkgh_core::models::unipotent::{components, default_escape_paths, surface_completeness_probe, AProfile, ProbePath, UnipotentModel};
use minkgh_core::models::{build_misner, build_unipotent, null_point, MisnerElement};
use minkgh_core::linalg;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rows_to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j])
}

fn eigen_range(t: &DMatrix<f64>) -> (f64, f64) {
    let (ev, _) = linalg::sym_eigen(&(0.5 * (t + t.transpose()))).unwrap();
    ev.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)))
}

fn rotated_basis(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    let q = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0)).qr().q();
    (0..d).map(|c| q.column(c).iter().copied().collect()).collect()
}

#[test]
fn extension_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for i in 0..150 {
        let case = [ExtCase::Bounded, ExtCase::FutureInfinite, ExtCase::PastInfinite][i % 3];
        let d = rng.gen_range(2..=5);
        let k = rng.gen_range(1..d.min(3) + 1);
        let y: f64 = rng.gen_range(0.5..2.0);
        let bound = if case == ExtCase::FutureInfinite { -y } else { y };
        let p = random_problem(&mut rng, case, d, k, bound, false);
        let r = symmetric_extension(&p).unwrap_or_else(|e| panic!("{i} {case:?} {e}"));
        let t = rows_to_matrix(&r.operator);
        assert!(r.symmetry_residual < 1e-10 && r.restriction_residual < 1e-10);
        let (lo, hi) = eigen_range(&t);
        let top = 1.0 / y;
        match case {
            ExtCase::Bounded => assert!(lo >= -top - 1e-8 && hi <= top + 1e-8),
            ExtCase::FutureInfinite => assert!(lo >= -1e-8 && hi <= top + 1e-8),
            ExtCase::PastInfinite => assert!(lo >= -top - 1e-8 && hi <= 1e-8),
        }
    }
}

#[test]
fn norm_seven_tenths_stays_strictly_inside() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let mut p = random_problem(&mut rng, ExtCase::Bounded, 4, 2, 1.0, false);
        let m = DMatrix::from_fn(4, 2, |r, c| p.images[c][r]);
        let norm = m.norm();
        if norm < 1e-3 {
            continue;
        }
        let scale = 0.7 / linalg::svd_sorted(&m).sigma[0];
        for img in &mut p.images {
            img.iter_mut().for_each(|x| *x *= scale);
        }
        let t = rows_to_matrix(&symmetric_extension(&p).unwrap().operator);
        let (lo, hi) = eigen_range(&t);
        assert!(lo.abs().max(hi.abs()) <= 1.0 - 1e-6);
    }
}

#[test]
fn saturated_inputs_match_the_pseudo_inverse_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let p = random_problem(&mut rng, ExtCase::Bounded, 4, 2, 1.0, true);
        let r = symmetric_extension(&p).unwrap();
        assert!(r.shrink_steps.is_some());
        let u = DMatrix::from_fn(4, 2, |r, c| p.basis[c][r]);
        let m = DMatrix::from_fn(4, 2, |r, c| p.images[c][r]);
        let w = linalg::complement(&u, 1e-10);
        let t0 = u.transpose() * &m;
        let b = w.transpose() * &m;
        let inner = (DMatrix::identity(2, 2) - &t0 * &t0).pseudo_inverse(1e-9).unwrap();
        let z = -(&b * &t0 * inner * b.transpose());
        let t = rows_to_matrix(&r.operator);
        let got = w.transpose() * t * &w;
        assert!((got - z).amax() < 1e-6);
    }
}

#[test]
fn misner_time_is_the_corner_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = build_misner(3, 0.5, vec![MisnerElement { boost: 0.0, translation: vec![1.0] }], &[null_point(1.0, -1.0, &[0.0])], 1e-9).unwrap();
    let lambda = m.lambda();
    for _ in 0..200 {
        let (x, y) = (rng.gen_range(0.01..5.0), -rng.gen_range(0.01..5.0));
        let p = null_point(x, y, &[rng.gen_range(-3.0..3.0)]);
        let t = cosmological_time(&lambda, &p, &CtOptions::default()).unwrap().t;
        assert!((t - (-2.0 * x * y).sqrt()).abs() < 1e-9);
        assert!((m.cosmological_time(&p).unwrap() - t).abs() < 1e-15);
    }
}

fn model(rng: &mut ChaCha8Rng, lambdas: Vec<f64>, component: usize) -> UnipotentModel {
    let d = lambdas.len();
    let basis = rotated_basis(rng, d);
    let lattice = (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    build_unipotent(lambdas, basis, component, lattice, AProfile::Default).unwrap()
}

#[test]
fn group_law_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let m = model(&mut rng, vec![-1.0, 0.3, 2.0], 1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let s: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let sum: Vec<f64> = t.iter().zip(&s).map(|(a, b)| a + b).collect();
        let composed = m.phi(&t).compose(&m.phi(&s));
        let direct = m.phi(&sum);
        worst = worst.max((composed.mu - direct.mu).abs());
        for (a, b) in composed.u.iter().chain(&composed.v).zip(direct.u.iter().chain(&direct.v)) {
            worst = worst.max((a - b).abs());
        }
        let p = null_point(rng.gen_range(-2.0..2.0), rng.gen_range(-1.5..0.5), &[1.0, -0.5, 0.2]);
        let twice = m.phi(&t).apply_point(&m.phi(&s).apply_point(&p));
        worst = worst.max((&twice.0 - &direct.apply_point(&p).0).amax() / (1.0 + twice.norm()));
    }
    assert!(worst < 1e-12, "{worst:e}");
}

#[test]
fn surface_is_invariant_and_inside() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (lambdas, comp) in [(vec![-1.0, 0.5], 1), (vec![-1.0, 0.5], 0), (vec![0.0, 1.0], 1), (vec![2.0], 0)] {
        let m = model(&mut rng, lambdas, comp);
        let (lo, hi) = (m.lower.unwrap_or(-50.0), m.upper.unwrap_or(50.0));
        for _ in 0..200 {
            let y = rng.gen_range(lo + 1e-3 * (hi - lo)..hi - 1e-3 * (hi - lo));
            let z: Vec<f64> = (0..m.lambdas.len()).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let t: Vec<f64> = (0..m.lambdas.len()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            assert!(m.contains(&m.surface_point(y, &z)));
            assert!(m.invariance_residual(y, &z, &t) < 1e-10);
            // Γ acts freely: a nonzero lattice element moves every point
            let moved = m.phi(&m.lattice[0]).apply_point(&m.surface_point(y, &z));
            assert!((&moved.0 - &m.surface_point(y, &z).0).amax() > 1e-6);
        }
    }
}

#[test]
fn completeness_on_every_component() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let lambdas = vec![-1.0, 0.25, 0.5];
    for comp in 0..components(&lambdas).len() {
        let m = model(&mut rng, lambdas.clone(), comp);
        let mut paths = default_escape_paths(&m);
        paths.push(ProbePath::Escape { upper: true, zeta_rate: vec![0.3, -1.0, 0.0] });
        let y0 = m.y_ref();
        paths.push(ProbePath::Segment { y0, y1: y0 + 0.01, zeta0: vec![0.0; 3], zeta1: vec![1.0, 2.0, 3.0] });
        let r = surface_completeness_probe(&m, &paths).unwrap();
        assert!(r.complete, "component {comp}");
        assert!(r.paths[3].length.is_finite() && !r.paths[3].flagged);
        let bad = UnipotentModel::new_unchecked(m.lambdas.clone(), m.basis.clone(), comp, m.lattice.clone(), AProfile::Constant { value: 2.0 }).unwrap();
        let r = surface_completeness_probe(&bad, &default_escape_paths(&bad)).unwrap();
        // ends at infinity still diverge with a constant profile
        let finite_ends = usize::from(bad.lower.is_some()) + usize::from(bad.upper.is_some());
        assert_eq!(r.paths.iter().filter(|p| p.flagged).count(), finite_ends);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn induced_metric_is_positive(y in -1.9f64..0.9, z in proptest::collection::vec(-5.0f64..5.0, 2)) {
        let m = UnipotentModel::new_unchecked(vec![-1.0, 0.5], vec![vec![1.0, 0.0], vec![0.0, 1.0]], 1, Vec::new(), AProfile::Default).unwrap();
        let (ev, _) = linalg::sym_eigen(&m.induced_metric(y, &z)).unwrap();
        prop_assert!(ev.iter().all(|&e| e > 0.0));
    }

    #[test]
    fn extension_keeps_restriction(seed in 0u64..10_000, d in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..d);
        let p = random_problem(&mut rng, ExtCase::Bounded, d, k, 1.0, false);
        let r = symmetric_extension(&p).unwrap();
        prop_assert!(r.restriction_residual < 1e-10);
    }
}
