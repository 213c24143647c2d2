//! Model spacetimes: translation, Misner, unipotent and radiant standard
//! spacetimes, twisted products, and the symmetric extension of operators.

pub mod extension;
pub mod misner;
pub mod unipotent;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::Orientation;
use crate::error::{Error, Result};
use crate::holonomy::{admissibility_oriented, is_elementary, limit_set_approx, Admissibility, GroupSpec, LimitSet};
use crate::linalg;
use crate::mink::{Isometry, MinkVector};
use crate::penrose::LightPlane;

pub use extension::{symmetric_extension, ExtCase, SymExtProblem, SymExtResult};
pub use misner::{build_misner, MisnerElement, MisnerModel};
pub use unipotent::{build_unipotent, surface_completeness_probe, AProfile, AffineA, CompletenessReport, ProbePath, UnipotentModel};

/// Point with null coordinates x = (t + s)/√2, y = (s − t)/√2 and the rest z.
pub fn null_point(x: f64, y: f64, z: &[f64]) -> MinkVector {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = DVector::zeros(z.len() + 2);
    v[0] = r * (x - y);
    v[1] = r * (x + y);
    v.rows_mut(2, z.len()).copy_from_slice(z);
    MinkVector(v)
}

pub fn null_coords(p: &MinkVector) -> (f64, f64, Vec<f64>) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let v = &p.0;
    (r * (v[1] + v[0]), r * (v[1] - v[0]), v.iter().skip(2).copied().collect())
}

/// Quotient of Mⁿ by a lattice of spacelike translations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationModel {
    pub dim: usize,
    pub lattice: Vec<Vec<f64>>,
}

pub fn build_translation(dim: usize, lattice: Vec<Vec<f64>>) -> Result<TranslationModel> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    for t in &lattice {
        if t.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: t.len() });
        }
    }
    if !lattice.is_empty() {
        let k = lattice.len();
        let gram = DMatrix::from_fn(k, k, |i, j| linalg::ip_slice(&lattice[i], &lattice[j]));
        let (ev, _) = linalg::sym_eigen(&gram)?;
        if ev.iter().any(|&e| e <= 1e-12 * gram.amax()) {
            return Err(Error::invalid("lattice does not span a spacelike subspace of full rank"));
        }
    }
    Ok(TranslationModel { dim, lattice })
}

impl TranslationModel {
    pub fn generators(&self) -> Vec<Isometry> {
        self.lattice.iter().map(|t| Isometry::translation(&MinkVector::new(t))).collect()
    }
}

/// Future cone Ω⁺ of the origin divided by a nonelementary linear group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiantModel {
    pub spec: GroupSpec,
}

pub fn radiant_standard(spec: &GroupSpec) -> Result<RadiantModel> {
    if spec.generators().iter().any(|g| g.tau().amax() > spec.tol) {
        return Err(Error::invalid("nonzero translation parts; use the limit set and the convex domain instead"));
    }
    if is_elementary(spec)?.elementary {
        return Err(Error::invalid("elementary linear holonomy"));
    }
    Ok(RadiantModel { spec: spec.clone() })
}

impl RadiantModel {
    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn contains(&self, p: &MinkVector) -> bool {
        p.0[0] > 0.0 && p.sq() < 0.0
    }

    /// T(p) = √(−⟨p|p⟩).
    pub fn cosmological_time(&self, p: &MinkVector) -> Result<f64> {
        if !self.contains(p) {
            return Err(Error::invalid("point outside the future cone"));
        }
        Ok((-p.sq()).sqrt())
    }

    /// Points t(cosh r, sinh r ω) of the level T = t, with r < `max_rapidity`.
    pub fn level_samples<R: Rng>(&self, t: f64, count: usize, max_rapidity: f64, rng: &mut R) -> Vec<MinkVector> {
        let n = self.dim();
        (0..count)
            .map(|_| {
                let omega = loop {
                    let w = DVector::from_fn(n - 1, |_, _| rng.gen_range(-1.0..1.0));
                    let norm = w.norm();
                    if norm > 1e-3 && norm <= 1.0 {
                        break w / norm;
                    }
                };
                let r = rng.gen_range(0.0..max_rapidity);
                let mut v = DVector::zeros(n);
                v[0] = t * r.cosh();
                v.rows_mut(1, n - 1).copy_from(&(omega * (t * r.sinh())));
                MinkVector(v)
            })
            .collect()
    }

    /// Distance along the level through p and q, which must share T.
    pub fn level_distance(&self, p: &MinkVector, q: &MinkVector) -> Result<f64> {
        let t = self.cosmological_time(p)?;
        let tq = self.cosmological_time(q)?;
        if (t - tq).abs() > 1e-9 * t {
            return Err(Error::invalid("points on different levels"));
        }
        let a = MinkVector(&p.0 / t);
        let b = MinkVector(&q.0 / t);
        Ok(t * crate::domain::hyperbolic_distance(&a, &b))
    }

    /// max |T(γp) − T(p)| over generators and samples.
    pub fn invariance_residual(&self, samples: &[MinkVector]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for p in samples {
            let t = self.cosmological_time(p)?;
            for g in self.spec.generators() {
                worst = worst.max((self.cosmological_time(&g.act(p))? - t).abs());
            }
        }
        Ok(worst)
    }

    pub fn limit_set(&self, maxlen: usize) -> Result<LimitSet> {
        limit_set_approx(&self.spec, maxlen)
    }

    pub fn admissibility(&self, maxlen: usize, tol: f64, orientation: Orientation) -> Result<Admissibility> {
        admissibility_oriented(&self.spec, maxlen, tol, orientation)
    }
}

/// x ↦ Rx + w on the fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EuclideanIsometry {
    /// Row-major.
    pub rotation: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

impl EuclideanIsometry {
    pub fn identity(rank: usize) -> Self {
        let rotation = (0..rank).map(|i| (0..rank).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        EuclideanIsometry { rotation, translation: vec![0.0; rank] }
    }

    pub fn translation(w: Vec<f64>) -> Self {
        let mut g = EuclideanIsometry::identity(w.len());
        g.translation = w;
        g
    }

    fn matrix(&self) -> DMatrix<f64> {
        let k = self.translation.len();
        DMatrix::from_fn(k, k, |i, j| self.rotation[i][j])
    }

    fn is_linear_identity(&self, tol: f64) -> bool {
        let k = self.translation.len();
        (self.matrix() - DMatrix::identity(k, k)).amax() <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BaseModel {
    Translation(TranslationModel),
    Misner(MisnerModel),
    Unipotent(UnipotentModel),
    Radiant(RadiantModel),
}

impl BaseModel {
    pub fn dim(&self) -> usize {
        match self {
            BaseModel::Translation(m) => m.dim,
            BaseModel::Misner(m) => m.dim,
            BaseModel::Unipotent(m) => m.dim(),
            BaseModel::Radiant(m) => m.dim(),
        }
    }

    pub fn generator_count(&self) -> usize {
        match self {
            BaseModel::Translation(m) => m.lattice.len(),
            BaseModel::Misner(m) => m.generators().len(),
            BaseModel::Unipotent(m) => m.lattice.len(),
            BaseModel::Radiant(m) => m.spec.rank(),
        }
    }
}

/// Euclidean ℝᵏ, or a flat torus ℝᵏ/lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Fiber {
    Linear { rank: usize },
    Torus { lattice: Vec<Vec<f64>> },
}

impl Fiber {
    pub fn rank(&self) -> usize {
        match self {
            Fiber::Linear { rank } => *rank,
            Fiber::Torus { lattice } => lattice.first().map_or(0, Vec::len),
        }
    }
}

/// Ω ⊂ M^N with Γ preserving the timelike affine subspace origin + span(u_basis)
/// and acting on a chosen orthonormal basis of U⊥.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbientPresentation {
    pub origin: Vec<f64>,
    pub u_basis: Vec<Vec<f64>>,
    pub fiber_basis: Vec<Vec<f64>>,
    pub planes: Vec<LightPlane>,
    pub generators: Vec<Isometry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistedProduct {
    pub base: BaseModel,
    pub fiber: Fiber,
    pub monodromy: Vec<EuclideanIsometry>,
}

pub fn twisted_product(base: BaseModel, fiber: Fiber, monodromy: Vec<EuclideanIsometry>, ambient: Option<&AmbientPresentation>, tol: f64) -> Result<TwistedProduct> {
    if monodromy.len() != base.generator_count() {
        return Err(Error::invalid(format!("{} monodromy elements for {} base generators", monodromy.len(), base.generator_count())));
    }
    let k = fiber.rank();
    if let Fiber::Torus { lattice } = &fiber {
        if lattice.len() != k || lattice.iter().any(|w| w.len() != k) {
            return Err(Error::invalid("torus lattice must be a basis of the fiber"));
        }
        let m = DMatrix::from_fn(k, k, |r, c| lattice[c][r]);
        if m.determinant().abs() <= tol {
            return Err(Error::invalid("degenerate torus lattice"));
        }
    }
    for g in &monodromy {
        if g.translation.len() != k || g.rotation.len() != k || g.rotation.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch { expected: k, found: g.translation.len() });
        }
        let r = g.matrix();
        if (r.transpose() * &r - DMatrix::identity(k, k)).amax() > tol {
            return Err(Error::invalid("monodromy is not a Euclidean isometry"));
        }
    }
    let product = TwistedProduct { base, fiber, monodromy };
    if let Some(a) = ambient {
        product.check_ambient(a, tol)?;
    }
    Ok(product)
}

impl TwistedProduct {
    pub fn dim(&self) -> usize {
        self.base.dim() + self.fiber.rank()
    }

    pub fn is_linear(&self, tol: f64) -> bool {
        matches!(self.fiber, Fiber::Linear { .. }) && self.monodromy.iter().all(|g| g.translation.iter().all(|w| w.abs() <= tol))
    }

    /// Block sum of the base metric and the Euclidean fiber metric.
    pub fn metric(&self, base_metric: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let b = self.base.dim();
        if base_metric.shape() != (b, b) {
            return Err(Error::DimensionMismatch { expected: b, found: base_metric.nrows() });
        }
        let n = self.dim();
        let mut g = DMatrix::identity(n, n);
        g.view_mut((0, 0), (b, b)).copy_from(base_metric);
        Ok(g)
    }

    /// A translation base with untwisted monodromy is itself a translation spacetime.
    pub fn flatten(&self, tol: f64) -> Option<TranslationModel> {
        let BaseModel::Translation(base) = &self.base else {
            return None;
        };
        if !self.monodromy.iter().all(|g| g.is_linear_identity(tol)) {
            return None;
        }
        let mut lattice: Vec<Vec<f64>> = base.lattice.iter().zip(&self.monodromy).map(|(t, g)| t.iter().chain(&g.translation).copied().collect()).collect();
        if let Fiber::Torus { lattice: l } = &self.fiber {
            lattice.extend(l.iter().map(|w| std::iter::repeat_n(0.0, base.dim).chain(w.iter().copied()).collect()));
        }
        build_translation(self.dim(), lattice).ok()
    }

    /// Hypotheses recognising Γ\Ω as a twisted product over Γ\(U ∩ Ω).
    pub fn check_ambient(&self, a: &AmbientPresentation, tol: f64) -> Result<()> {
        let n = self.dim();
        let (b, k) = (self.base.dim(), self.fiber.rank());
        if a.origin.len() != n || a.u_basis.len() != b || a.fiber_basis.len() != k || a.u_basis.iter().chain(&a.fiber_basis).any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: a.origin.len() });
        }
        if a.generators.len() != self.monodromy.len() || a.generators.iter().any(|g| g.dim() != n) {
            return Err(Error::invalid("ambient generators do not match the monodromy"));
        }
        let u = DMatrix::from_fn(n, b, |r, c| a.u_basis[c][r]);
        let f = DMatrix::from_fn(n, k, |r, c| a.fiber_basis[c][r]);
        let eta = linalg::eta(n);
        if (f.transpose() * &eta * &f - DMatrix::identity(k, k)).amax() > tol {
            return Err(Error::invalid("fiber basis is not spacelike orthonormal"));
        }
        if (u.transpose() * &eta * &f).amax() > tol {
            return Err(Error::invalid("fiber basis is not orthogonal to U"));
        }
        let (gram_ev, _) = linalg::sym_eigen(&(u.transpose() * &eta * &u))?;
        if !gram_ev.iter().any(|&e| e < -tol) {
            return Err(Error::invalid("U is not timelike"));
        }
        // s ↦ translations along U⊥ preserve ⟨x|v⟩ iff v ⟂ U⊥
        for p in &a.planes {
            if p.v.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.v.dim() });
            }
            if (f.transpose() * &eta * &p.v.0).amax() > tol {
                return Err(Error::invalid("Ω is not invariant by translations along U⊥"));
            }
        }
        let pu = &u * (u.clone().pseudo_inverse(1e-12).map_err(Error::numerical)?);
        let origin = DVector::from_column_slice(&a.origin);
        for (g, m) in a.generators.iter().zip(&self.monodromy) {
            let lu = g.linear() * &u;
            let moved = g.act_raw(&origin) - &origin;
            if (&pu * &lu - &lu).amax() > tol * (1.0 + lu.amax()) || (&pu * &moved - &moved).amax() > tol * (1.0 + moved.amax()) {
                return Err(Error::invalid("generator does not preserve U"));
            }
            let block = f.transpose() * &eta * g.linear() * &f;
            if (block - m.matrix()).amax() > tol {
                return Err(Error::invalid("generator acts on U⊥ differently from its monodromy"));
            }
            if matches!(self.fiber, Fiber::Linear { .. }) && m.translation.iter().any(|w| w.abs() > tol) {
                return Err(Error::invalid("a Γ-invariant U forces linear monodromy"));
            }
        }
        Ok(())
    }
}
