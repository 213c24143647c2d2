use std::f64::consts::FRAC_PI_2;

use minkgh_core::cohomology::{
    coboundary_map, cocycle_residual, Cocycle, Cohomology, ConeProber, TriGroup,
};
use minkgh_core::domain::{omega_membership, Orientation};
use minkgh_core::holonomy::{
    admissibility_of, limit_set_approx, schottky_pair, AdmissibilityStatus, GroupSpec, HolonomyTable,
};
use minkgh_core::penrose::act_on_j;
use minkgh_core::samples::random_lorentz;
use minkgh_core::{Isometry, MinkVector};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn schottky() -> GroupSpec {
    schottky_pair(2.0, FRAC_PI_2)
}

fn random_cocycle(rng: &mut ChaCha8Rng, rank: usize, radius: f64) -> Cocycle {
    let values = (0..rank)
        .map(|_| {
            let v = DVector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
            let r = radius * rng.gen_range(0.0..1.0f64).sqrt();
            MinkVector(v.normalize() * r)
        })
        .collect();
    Cocycle { values }
}

#[test]
fn plane_count_grows_with_depth() {
    let spec = schottky().with_translations(&[DVector::from_row_slice(&[0.1, -0.2, 0.05]), DVector::from_row_slice(&[0.0, 0.3, 0.1])]).unwrap();
    let mut previous = limit_set_approx(&spec, 1).unwrap();
    for maxlen in 2..=6 {
        let next = limit_set_approx(&spec, maxlen).unwrap();
        assert!(next.len() > previous.len(), "{} -> {}", previous.len(), next.len());
        for d in &previous.data {
            assert!(next.data.iter().any(|e| e.plane.approx_eq(&d.plane, 1e-8)));
        }
        for d in &next.data {
            // fixed by g iff fixed by g⁻¹; forming τ(g⁻¹) = −L⁻¹τ cancels terms of size |L|·|τ|
            let g = spec.evaluate(&d.word).unwrap();
            let q = act_on_j(&g.inverse(), &d.plane);
            let slack = 1e-8 * (1.0 + d.plane.s.abs()) + 1e-14 * g.linear().norm() * g.tau().norm();
            assert!((&q.v.0 - &d.plane.v.0).amax() < 1e-8, "{:?}", d.word);
            assert!((q.s - d.plane.s).abs() < slack, "{:?}", d.word);
        }
        previous = next;
    }
}

#[test]
fn small_schottky_cocycles_are_future_and_past_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let prober = ConeProber::new(&schottky(), 6, TOL).unwrap();
    for _ in 0..10 {
        let tau = random_cocycle(&mut rng, 2, 1e-2);
        for o in [Orientation::Future, Orientation::Past] {
            assert_eq!(prober.probe(&tau, o).unwrap().status, AdmissibilityStatus::Feasible);
        }
    }
}

#[test]
fn status_is_conjugation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let tri = TriGroup::build(TOL).unwrap();
    let coh = Cohomology::new(&tri.spec).unwrap();
    let class = Cocycle::from_coords(&(&coh.h1 * DVector::from_row_slice(&[0.2, -0.7, 0.4])), 3);
    let cases = [
        schottky().with_translations(&[DVector::from_row_slice(&[0.3, 0.1, -0.2]), DVector::from_row_slice(&[-0.1, 0.2, 0.2])]).unwrap(),
        tri.spec.with_translations(&class.taus()).unwrap(),
    ];
    for spec in &cases {
        let base = limit_set_approx(spec, 4).unwrap();
        let before = admissibility_of(&base, Orientation::Future, TOL).unwrap();
        for _ in 0..4 {
            let shift = MinkVector(DVector::from_fn(3, |_, _| rng.gen_range(-0.5..0.5)));
            let h: Isometry = random_lorentz(&mut rng, 3, 0.5).with_translation(&shift);
            let moved = limit_set_approx(&spec.conjugate_by(&h).unwrap(), 4).unwrap();
            let after = admissibility_of(&moved, Orientation::Future, TOL).unwrap();
            assert_eq!(before.status, after.status);
            if let Some(w) = &before.witness {
                let lambda = moved.lambda(Orientation::Future).unwrap();
                assert!(omega_membership(&lambda, &h.act(w), 0.0));
            }
        }
    }
}

#[test]
fn coboundaries_do_not_change_status() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let tri = TriGroup::build(TOL).unwrap();
    let coh = Cohomology::new(&tri.spec).unwrap();
    let tri_prober = ConeProber::new(&tri.spec, 3, TOL).unwrap();
    let sch_prober = ConeProber::new(&schottky(), 5, TOL).unwrap();
    for _ in 0..5 {
        let v = DVector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
        let x = DVector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
        let class = Cocycle::from_coords(&(&coh.h1 * &x), 3);
        let shifted = Cocycle::from_coords(&(class.coords() + coboundary_map(&tri.spec) * &v), 3);
        let a = tri_prober.probe(&class, Orientation::Future).unwrap().status;
        assert_eq!(a, AdmissibilityStatus::Infeasible);
        assert_eq!(tri_prober.probe(&shifted, Orientation::Future).unwrap().status, a);

        let tau = random_cocycle(&mut rng, 2, 0.5);
        let shifted = Cocycle::from_coords(&(tau.coords() + coboundary_map(&schottky()) * &v), 3);
        let a = sch_prober.probe(&tau, Orientation::Future).unwrap().status;
        assert_eq!(sch_prober.probe(&shifted, Orientation::Future).unwrap().status, a);
    }
}

#[test]
fn antipodal_swaps_future_and_past() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tri = TriGroup::build(TOL).unwrap();
    let coh = Cohomology::new(&tri.spec).unwrap();
    let tri_prober = ConeProber::new(&tri.spec, 3, TOL).unwrap();
    let sch_prober = ConeProber::new(&schottky(), 5, TOL).unwrap();
    for _ in 0..5 {
        let x = DVector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
        let taus = [Cocycle::from_coords(&(&coh.h1 * &x), 3), random_cocycle(&mut rng, 2, 1.0)];
        for (prober, tau) in [(&tri_prober, &taus[0]), (&sch_prober, &taus[1])] {
            for o in [Orientation::Future, Orientation::Past] {
                let a = prober.probe(tau, o).unwrap().status;
                let b = prober.probe(&tau.scaled(-1.0), o.flipped()).unwrap().status;
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn limit_sets_share_one_enumeration() {
    let spec = schottky();
    let table = HolonomyTable::new(&spec, 5).unwrap();
    let taus = [DVector::from_row_slice(&[0.2, 0.0, -0.3]), DVector::from_row_slice(&[0.1, 0.4, 0.0])];
    let cached = table.limit_set(&taus).unwrap();
    let direct = limit_set_approx(&spec.with_translations(&taus).unwrap(), 5).unwrap();
    assert_eq!(cached.len(), direct.len());
    for (a, b) in cached.data.iter().zip(&direct.data) {
        assert!(a.plane.approx_eq(&b.plane, 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cone_is_homogeneous_and_convex(seed in 0u64..1000, c in 0.05f64..20.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prober = ConeProber::new(&schottky(), 4, TOL).unwrap();
        let a = random_cocycle(&mut rng, 2, 1.0);
        let b = random_cocycle(&mut rng, 2, 1.0);
        let sa = prober.probe(&a, Orientation::Future).unwrap().status;
        prop_assert_eq!(prober.probe(&a.scaled(c), Orientation::Future).unwrap().status, sa);
        let sb = prober.probe(&b, Orientation::Future).unwrap().status;
        if sa == AdmissibilityStatus::Feasible && sb == AdmissibilityStatus::Feasible {
            let mid = Cocycle::from_coords(&((a.coords() + b.coords()) * 0.5), 3);
            prop_assert_eq!(prober.probe(&mid, Orientation::Future).unwrap().status, AdmissibilityStatus::Feasible);
        }
    }

    #[test]
    fn h1_section_gives_cocycles(x in proptest::collection::vec(-1.0f64..1.0, 3), v in proptest::collection::vec(-1.0f64..1.0, 3)) {
        let tri = TriGroup::build(TOL).unwrap();
        let coh = Cohomology::new(&tri.spec).unwrap();
        let x = DVector::from_vec(x);
        let tau = Cocycle::from_coords(&(&coh.h1 * &x), 3);
        prop_assert!(cocycle_residual(&tri.spec, &tau).unwrap() < 1e-12);
        let shifted = Cocycle::from_coords(&(tau.coords() + coboundary_map(&tri.spec) * DVector::from_vec(v)), 3);
        prop_assert!((coh.class_coords(&shifted) - &x).amax() < 1e-10);
    }
}
