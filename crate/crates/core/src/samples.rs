//! Seeded random constructions of isometries by conjugacy family.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::classify::{Family, ParabolicKind};
use crate::mink::{CausalKind, Isometry, MinkVector};

/// Random element of SO₀(1,n−1): boosts along random axes interleaved with rotations.
pub fn random_lorentz<R: Rng>(rng: &mut R, n: usize, max_rapidity: f64) -> Isometry {
    let mut g = Isometry::identity(n);
    for _ in 0..2 {
        let axis = rng.gen_range(1..n);
        g = g.compose(&Isometry::boost(n, axis, rng.gen_range(-max_rapidity..=max_rapidity)));
        for i in 1..n {
            for j in (i + 1)..n {
                g = g.compose(&Isometry::rotation(n, i, j, rng.gen_range(0.0..std::f64::consts::TAU)));
            }
        }
    }
    g
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize, half_width: f64) -> MinkVector {
    MinkVector(DVector::from_fn(n, |_, _| rng.gen_range(-half_width..half_width)))
}

/// Null rotation fixing e₀ + e₁ and moving e₂, with parameter s.
pub fn null_rotation(n: usize, s: f64) -> Isometry {
    let mut l = DMatrix::identity(n, n);
    l[(0, 0)] = 1.0 + s * s / 2.0;
    l[(0, 1)] = -s * s / 2.0;
    l[(0, 2)] = s;
    l[(1, 0)] = s * s / 2.0;
    l[(1, 1)] = 1.0 - s * s / 2.0;
    l[(1, 2)] = s;
    l[(2, 0)] = s;
    l[(2, 1)] = -s;
    Isometry::new(l, DVector::zeros(n), 1e-9).expect("null rotation is Lorentz")
}

/// Rotation angle that is either a rational multiple of 2π with small order or a
/// generic angle.
fn random_angle<R: Rng>(rng: &mut R) -> f64 {
    if rng.gen_bool(0.3) {
        let m = rng.gen_range(2..=8) as f64;
        let k = rng.gen_range(1..m as u32) as f64;
        std::f64::consts::TAU * k / m
    } else {
        rng.gen_range(0.3..2.8)
    }
}

/// Options for [`random_isometry`].
#[derive(Debug, Clone, Copy)]
pub struct SampleRanges {
    pub rapidity: (f64, f64),
    pub conjugation_rapidity: f64,
    pub translation: f64,
}

impl Default for SampleRanges {
    fn default() -> Self {
        SampleRanges { rapidity: (0.3, 1.2), conjugation_rapidity: 0.5, translation: 1.0 }
    }
}

/// Description of a generated sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub family: Family,
    pub parabolic_kind: Option<ParabolicKind>,
    pub tau_kind: Option<CausalKind>,
}

/// Random isometry of the requested family in a normal form, conjugated by a random
/// isometry. `variant` selects the translation type (taken modulo the available cases).
pub fn random_isometry<R: Rng>(
    rng: &mut R,
    n: usize,
    family: Family,
    variant: usize,
    ranges: &SampleRanges,
) -> (Isometry, SampleSpec) {
    let t = ranges.translation;
    let mut tau = DVector::<f64>::zeros(n);
    let mut spec = SampleSpec { family, parabolic_kind: None, tau_kind: None };
    let linear = match family {
        Family::Elliptic => {
            let mut l = Isometry::identity(n);
            let mut i = 1;
            while i + 1 < n {
                l = l.compose(&Isometry::rotation(n, i, i + 1, random_angle(rng)));
                i += 2;
            }
            // fixed space: e₀, plus e_{n−1} when n − 1 is odd
            let has_spatial_fixed = (n - 1) % 2 == 1;
            let cases: &[CausalKind] = if has_spatial_fixed {
                &[CausalKind::Timelike, CausalKind::Spacelike, CausalKind::Lightlike, CausalKind::Zero]
            } else {
                &[CausalKind::Timelike, CausalKind::Zero]
            };
            let kind = cases[variant % cases.len()];
            match kind {
                CausalKind::Timelike => {
                    tau[0] = rng.gen_range(0.3..1.0) * t;
                    if has_spatial_fixed {
                        tau[n - 1] = rng.gen_range(-0.5..0.5) * tau[0];
                    }
                }
                CausalKind::Spacelike => {
                    tau[n - 1] = rng.gen_range(0.3..1.0) * t;
                    tau[0] = rng.gen_range(-0.5..0.5) * tau[n - 1];
                }
                CausalKind::Lightlike => {
                    let a = rng.gen_range(0.3..1.0) * t;
                    tau[0] = a;
                    tau[n - 1] = if rng.gen_bool(0.5) { a } else { -a };
                }
                _ => {}
            }
            spec.tau_kind = Some(kind);
            // translation components in the image do not change the class
            tau[1] += rng.gen_range(-t..t);
            tau[2] += rng.gen_range(-t..t);
            l
        }
        Family::Hyperbolic | Family::Loxodromic => {
            let zeta = rng.gen_range(ranges.rapidity.0..ranges.rapidity.1) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let mut l = Isometry::boost(n, 1, zeta);
            if family == Family::Loxodromic {
                assert!(n >= 4, "loxodromic samples need n ≥ 4");
                l = l.compose(&Isometry::rotation(n, 2, 3, random_angle(rng)));
            }
            for k in 0..n {
                tau[k] = rng.gen_range(-t..t);
            }
            l
        }
        Family::Unipotent | Family::Parabolic => {
            let s = rng.gen_range(0.5..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let mut l = null_rotation(n, s);
            if family == Family::Parabolic {
                assert!(n >= 5, "parabolic samples need n ≥ 5");
                l = l.compose(&Isometry::rotation(n, 3, 4, random_angle(rng)));
            }
            // v₀ ∝ e₀ + e₁, transverse direction e₀ − e₁, tangent direction e_{n−1}
            let tangent_axis = if family == Family::Parabolic { 5 } else { 3 };
            let kinds: Vec<ParabolicKind> = if tangent_axis < n {
                vec![ParabolicKind::Linear, ParabolicKind::Tangent, ParabolicKind::Transverse]
            } else {
                vec![ParabolicKind::Linear, ParabolicKind::Transverse]
            };
            let kind = kinds[variant % kinds.len()];
            match kind {
                ParabolicKind::Transverse => {
                    let a = rng.gen_range(0.3..1.0) * t;
                    tau[0] = a;
                    tau[1] = -a;
                }
                ParabolicKind::Tangent => tau[tangent_axis] = rng.gen_range(0.3..1.0) * t,
                ParabolicKind::Linear => {}
            }
            // add an element of Im(L − id)
            let w = DVector::from_fn(n, |_, _| rng.gen_range(-t..t));
            tau += (l.linear() - DMatrix::identity(n, n)) * w;
            spec.parabolic_kind = Some(kind);
            l
        }
    };
    let g = linear.with_translation(&MinkVector(tau));
    let h = random_lorentz(rng, n, ranges.conjugation_rapidity)
        .with_translation(&random_point(rng, n, t));
    (g.conjugate_by(&h), spec)
}
