//! Twisted cohomology H¹(Γ, ℝ^{1,n−1}) of a finitely presented group with fixed
//! linear part, the admissible cone probe, and the thrice-punctured sphere example
//! whose admissible cone is trivial.
//!
//! Cocycles are stored by their values on generators, concatenated into a vector of
//! length n·k.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, Family};
use crate::domain::Orientation;
use crate::error::{Error, Result};
use crate::holonomy::{admissibility_of, Admissibility, AdmissibilityStatus, GroupSpec, HolonomyTable};
use crate::linalg::{self, eta, lower, rank_info, svd_sorted, RankInfo};
use crate::mink::{Isometry, MinkVector};

/// Singular values below this fraction of the largest are discarded.
pub const RANK_REL: f64 = 1e-8;

/// Translation parts on the generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cocycle {
    pub values: Vec<MinkVector>,
}

impl Cocycle {
    pub fn from_coords(coords: &DVector<f64>, n: usize) -> Self {
        Cocycle { values: (0..coords.len() / n).map(|k| MinkVector(coords.rows(k * n, n).into_owned())).collect() }
    }

    pub fn coords(&self) -> DVector<f64> {
        DVector::from_iterator(self.values.iter().map(|v| v.0.len()).sum(), self.values.iter().flat_map(|v| v.0.iter().copied()))
    }

    pub fn taus(&self) -> Vec<DVector<f64>> {
        self.values.iter().map(|v| v.0.clone()).collect()
    }

    pub fn scaled(&self, c: f64) -> Cocycle {
        Cocycle { values: self.values.iter().map(|v| MinkVector(&v.0 * c)).collect() }
    }
}

/// Linear map τ ↦ (τ(r))_r from generator values to relation values, through
/// τ(a₁⋯a_m) = Σ L(a₁⋯a_{j−1}) τ(a_j) and τ(a⁻¹) = −L(a)⁻¹τ(a).
pub fn relation_matrix(spec: &GroupSpec) -> DMatrix<f64> {
    let n = spec.dim();
    let k = spec.rank();
    let rels = spec.relations();
    let mut m = DMatrix::zeros(n * rels.len(), n * k);
    for (r, word) in rels.iter().enumerate() {
        let mut prefix = DMatrix::<f64>::identity(n, n);
        for &a in word {
            let g = a.unsigned_abs() as usize - 1;
            let l = spec.generators()[g].linear();
            let block = if a > 0 { prefix.clone() } else { -(&prefix * linalg::lorentz_inverse(l)) };
            let mut view = m.view_mut((r * n, g * n), (n, n));
            view += block;
            prefix = if a > 0 { &prefix * l } else { &prefix * linalg::lorentz_inverse(l) };
        }
    }
    m
}

/// Linear map v ↦ (g_i v − v)_i whose image is B¹.
pub fn coboundary_map(spec: &GroupSpec) -> DMatrix<f64> {
    let n = spec.dim();
    let mut m = DMatrix::zeros(n * spec.rank(), n);
    for (i, g) in spec.generators().iter().enumerate() {
        m.view_mut((i * n, 0), (n, n)).copy_from(&(g.linear() - DMatrix::<f64>::identity(n, n)));
    }
    m
}

/// Subspace with an orthonormal basis and the rank decision behind it.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub basis: DMatrix<f64>,
    pub rank: RankInfo,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

fn check_linear_relations(spec: &GroupSpec) -> Result<()> {
    let res = spec.linear_part().relation_residual();
    if res > spec.tol * 1e3 {
        return Err(Error::invalid(format!("linear parts violate the relations (residual {res:.3e})")));
    }
    Ok(())
}

/// Z¹ as the kernel of the relation map.
pub fn cocycle_space(spec: &GroupSpec) -> Result<Subspace> {
    check_linear_relations(spec)?;
    let m = relation_matrix(spec);
    let dim = m.ncols();
    if m.nrows() == 0 {
        let rank = RankInfo { rank: 0, gap: f64::INFINITY, sigma: Vec::new() };
        return Ok(Subspace { basis: DMatrix::identity(dim, dim), rank });
    }
    let s = svd_sorted(&m);
    let rank = rank_info(&s.sigma, RANK_REL);
    let basis = s.v.columns(rank.rank, dim - rank.rank).into_owned();
    Ok(Subspace { basis, rank })
}

/// B¹ as the image of the coboundary map.
pub fn coboundary_space(spec: &GroupSpec) -> Result<Subspace> {
    let m = coboundary_map(spec);
    let s = svd_sorted(&m);
    let rank = rank_info(&s.sigma, RANK_REL);
    let basis = s.u.columns(0, rank.rank).into_owned();
    Ok(Subspace { basis, rank })
}

#[derive(Debug, Clone)]
pub struct Cohomology {
    pub z1: Subspace,
    pub b1: Subspace,
    /// Orthonormal basis of the orthogonal complement of B¹ inside Z¹, a section of
    /// Z¹ → H¹.
    pub h1: DMatrix<f64>,
    /// Largest distance of a unit coboundary from Z¹.
    pub containment_residual: f64,
}

impl Cohomology {
    pub fn new(spec: &GroupSpec) -> Result<Self> {
        let z1 = cocycle_space(spec)?;
        let b1 = coboundary_space(spec)?;
        let pz = linalg::projector(&z1.basis);
        let containment_residual = (&b1.basis - &pz * &b1.basis).amax();
        // orthogonal complement of B inside Z
        let reduced = &z1.basis - linalg::projector(&b1.basis) * &z1.basis;
        let h1 = linalg::image(&reduced, RANK_REL);
        Ok(Cohomology { z1, b1, h1, containment_residual })
    }

    pub fn dim(&self) -> usize {
        self.h1.ncols()
    }

    /// Class coordinates of a cocycle in the section basis.
    pub fn class_coords(&self, tau: &Cocycle) -> DVector<f64> {
        self.h1.transpose() * tau.coords()
    }
}

pub fn h1_dim(spec: &GroupSpec) -> Result<usize> {
    Ok(Cohomology::new(spec)?.dim())
}

/// Largest relation value τ(r) of a candidate cocycle.
pub fn cocycle_residual(spec: &GroupSpec, tau: &Cocycle) -> Result<f64> {
    if tau.values.len() != spec.rank() {
        return Err(Error::DimensionMismatch { expected: spec.rank(), found: tau.values.len() });
    }
    for v in &tau.values {
        v.check_dim(spec.dim())?;
    }
    Ok((relation_matrix(spec) * tau.coords()).amax())
}

/// Admissibility probes of many cocycles over one enumeration of the linear part.
#[derive(Debug, Clone)]
pub struct ConeProber {
    table: HolonomyTable,
    tol: f64,
}

impl ConeProber {
    pub fn new(spec: &GroupSpec, maxlen: usize, tol: f64) -> Result<Self> {
        Ok(ConeProber { table: HolonomyTable::new(spec, maxlen)?, tol })
    }

    pub fn maxlen(&self) -> usize {
        self.table.maxlen()
    }

    pub fn probe(&self, tau: &Cocycle, orientation: Orientation) -> Result<Admissibility> {
        let spec = self.table.spec();
        let res = cocycle_residual(spec, tau)?;
        if res > spec.tol * (1.0 + tau.coords().amax()) * 1e3 {
            return Err(Error::invalid(format!("not a cocycle (relation residual {res:.3e})")));
        }
        let ls = self.table.limit_set_with_cusps(&tau.taus())?;
        admissibility_of(&ls, orientation, self.tol)
    }
}

/// Future admissibility of the representation with linear part `spec` and
/// translation cocycle `tau`, at word length `maxlen`.
pub fn cone_probe(spec: &GroupSpec, tau: &Cocycle, maxlen: usize, tol: f64) -> Result<Admissibility> {
    ConeProber::new(spec, maxlen, tol)?.probe(tau, Orientation::Future)
}

/// Reflection of the hyperboloid in the geodesic through two ideal points.
fn edge_reflection(u: &DVector<f64>, w: &DVector<f64>) -> DMatrix<f64> {
    let n = eta(3) * u.cross(w);
    let nn = linalg::ip(&n, &n);
    DMatrix::<f64>::identity(3, 3) - (&n * lower(&n).transpose()) * (2.0 / nn)
}

/// Thrice-punctured sphere group in SO₀(1,2) from the ideal triangle with vertices
/// u_k at angles π/2 + 2πk/3: a = σ₁σ₂, b = σ₂σ₃, c = σ₃σ₁ for the edge
/// reflections σ₁ = [u₀u₁], σ₂ = [u₁u₂], σ₃ = [u₂u₀], and R the rotation by 2π/3.
#[derive(Debug, Clone)]
pub struct TriGroup {
    /// Generators a, b, c with the relation abc = 1.
    pub spec: GroupSpec,
    pub rotation: Isometry,
    /// Fixed isotropic directions α, β, κ of a, b, c (N = 1).
    pub fixed: [DVector<f64>; 3],
}

impl TriGroup {
    pub fn build(tol: f64) -> Result<Self> {
        let vertex = |k: usize| {
            let t = std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU * k as f64 / 3.0;
            DVector::from_vec(vec![1.0, t.cos(), t.sin()])
        };
        let u: Vec<DVector<f64>> = (0..3).map(vertex).collect();
        let s1 = edge_reflection(&u[0], &u[1]);
        let s2 = edge_reflection(&u[1], &u[2]);
        let s3 = edge_reflection(&u[2], &u[0]);
        let zero = DVector::zeros(3);
        let a = Isometry::new(&s1 * &s2, zero.clone(), tol)?;
        let b = Isometry::new(&s2 * &s3, zero.clone(), tol)?;
        let c = Isometry::new(&s3 * &s1, zero, tol)?;
        let spec = GroupSpec::new("thrice-punctured sphere", vec![a, b, c], vec![vec![1, 2, 3]], tol)?;
        let rotation = Isometry::rotation(3, 1, 2, std::f64::consts::TAU / 3.0);
        let unit = |v: &DVector<f64>| v / v.norm();
        Ok(TriGroup { spec, rotation, fixed: [unit(&u[1]), unit(&u[2]), unit(&u[0])] })
    }

    /// Matrix of τ ↦ R·τ, (R·τ)(γ) = R τ(R⁻¹γR), on generator coordinates.
    /// R⁻¹aR = c, R⁻¹bR = a, R⁻¹cR = b.
    pub fn rotation_action(&self) -> DMatrix<f64> {
        let r = self.rotation.linear();
        let mut m = DMatrix::zeros(9, 9);
        for (target, source) in [(0, 2), (1, 0), (2, 1)] {
            m.view_mut((3 * target, 3 * source), (3, 3)).copy_from(r);
        }
        m
    }

    /// Functionals τ ↦ (⟨τ(a)|α⟩, ⟨τ(b)|β⟩, ⟨τ(c)|κ⟩).
    pub fn orthogonality_functionals(&self) -> DMatrix<f64> {
        let mut f = DMatrix::zeros(3, 9);
        for (k, v) in self.fixed.iter().enumerate() {
            f.view_mut((k, 3 * k), (1, 3)).copy_from(&lower(v).transpose());
        }
        f
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub gap: f64,
    pub singular_values: Vec<f64>,
}

impl From<&RankInfo> for RankReport {
    fn from(r: &RankInfo) -> Self {
        RankReport { rank: r.rank, gap: r.gap, singular_values: r.sigma.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    /// Class coordinates of the probed cocycle in the H¹ section basis.
    pub class: Vec<f64>,
    pub statuses: Vec<AdmissibilityStatus>,
    pub first_infeasible_depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriReport {
    pub z1_dim: usize,
    pub b1_dim: usize,
    pub h1_dim: usize,
    pub e_dim: usize,
    pub delta_dim: usize,
    pub delta_e_intersection_dim: usize,
    /// Smallest kept over largest discarded singular value across the rank decisions.
    pub min_gap: f64,
    pub z1_rank: RankReport,
    pub b1_rank: RankReport,
    pub e_rank: RankReport,
    pub relation_residual: f64,
    pub permutation_residual: f64,
    pub order_three_residual: f64,
    pub fixed_vector_residual: f64,
    pub all_parabolic: bool,
    pub probe: Option<ProbeReport>,
}

/// Maximal word length of the admissibility cross-check.
pub const TRI_PROBE_MAXLEN: usize = 8;

/// Dimension counts of the thrice-punctured sphere example, and a cone probe of one
/// random nonzero class at word lengths 1..=`probe_maxlen` (0 skips it).
pub fn tri_experiment(tol: f64, probe_maxlen: usize, seed: u64) -> Result<TriReport> {
    let tri = TriGroup::build(tol)?;
    let spec = &tri.spec;
    let r = &tri.rotation;
    let [a, b, c] = [0, 1, 2].map(|i| &spec.generators()[i]);

    let relation_residual = spec.relation_residual();
    let permutation_residual = [(a, b), (b, c), (c, a)]
        .iter()
        .map(|(x, y)| x.conjugate_by(r).distance(y))
        .fold(0.0, f64::max);
    let order_three_residual = a.compose(r).pow(3).distance(&Isometry::identity(3));
    let rot = r.linear();
    let [alpha, beta, kappa] = &tri.fixed;
    let fixed_vector_residual = [
        (a.linear() * alpha - alpha).amax(),
        (b.linear() * beta - beta).amax(),
        (c.linear() * kappa - kappa).amax(),
        (rot * beta - kappa).amax(),
        (rot * rot * alpha - kappa).amax(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let worst = relation_residual.max(permutation_residual).max(order_three_residual).max(fixed_vector_residual);
    if worst > tol * 1e3 {
        return Err(Error::numerical(format!("construction residual {worst:.3e} above tolerance")));
    }
    let all_parabolic = [a, b, c].iter().all(|g| classify(g, tol).map(|k| k.family == Family::Unipotent).unwrap_or(false));

    let coh = Cohomology::new(spec)?;
    let fc = tri.orthogonality_functionals() * &coh.h1;
    let fs = svd_sorted(&fc);
    let e_rank = rank_info(&fs.sigma, RANK_REL);
    let e_dim = coh.dim() - e_rank.rank;
    let e_basis = fs.v.columns(e_rank.rank, coh.dim() - e_rank.rank).into_owned();

    let action = coh.h1.transpose() * tri.rotation_action() * &coh.h1;
    let delta = linalg::kernel(&(action - DMatrix::<f64>::identity(coh.dim(), coh.dim())), RANK_REL);
    let delta_e = linalg::intersect(&delta, &e_basis, RANK_REL);

    let gaps = [coh.z1.rank.gap, coh.b1.rank.gap, e_rank.gap];
    let min_gap = gaps.into_iter().fold(f64::INFINITY, f64::min);

    let probe = if probe_maxlen > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: DVector<f64> = DVector::from_fn(coh.dim(), |_, _| rng.gen_range(-1.0..1.0));
        let x = &x / x.norm();
        let tau = Cocycle::from_coords(&(&coh.h1 * &x), 3);
        let mut statuses = Vec::new();
        let mut first = None;
        for depth in 1..=probe_maxlen {
            let st = cone_probe(spec, &tau, depth, tol)?.status;
            statuses.push(st);
            if st == AdmissibilityStatus::Infeasible {
                first = Some(depth);
                break;
            }
        }
        Some(ProbeReport { class: x.as_slice().to_vec(), statuses, first_infeasible_depth: first })
    } else {
        None
    };

    Ok(TriReport {
        z1_dim: coh.z1.dim(),
        b1_dim: coh.b1.dim(),
        h1_dim: coh.dim(),
        e_dim,
        delta_dim: delta.ncols(),
        delta_e_intersection_dim: delta_e.ncols(),
        min_gap,
        z1_rank: (&coh.z1.rank).into(),
        b1_rank: (&coh.b1.rank).into(),
        e_rank: (&e_rank).into(),
        relation_residual,
        permutation_residual,
        order_three_residual,
        fixed_vector_residual,
        all_parabolic,
        probe,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::schottky_pair;

    #[test]
    fn free_group_counts() {
        let spec = schottky_pair(2.0, 1.0);
        assert_eq!(cocycle_space(&spec).unwrap().dim(), 6);
        assert_eq!(coboundary_space(&spec).unwrap().dim(), 3);
        assert_eq!(h1_dim(&spec).unwrap(), 3);
    }

    #[test]
    fn trivial_and_fixed_vector_cases() {
        let id = GroupSpec::new("id", vec![Isometry::identity(3)], vec![vec![1]], 1e-9).unwrap();
        assert_eq!(cocycle_space(&id).unwrap().dim(), 0);
        assert_eq!(coboundary_space(&id).unwrap().dim(), 0);
        assert_eq!(h1_dim(&id).unwrap(), 0);
        // rotations about e₀ fix e₀: B¹ loses one dimension
        let rot = GroupSpec::new("rot", vec![Isometry::rotation(3, 1, 2, 0.7)], Vec::new(), 1e-9).unwrap();
        assert_eq!(coboundary_space(&rot).unwrap().dim(), 2);
    }

    #[test]
    fn relation_matrix_matches_evaluation() {
        let tri = TriGroup::build(1e-9).unwrap();
        let m = relation_matrix(&tri.spec);
        let taus = [
            DVector::from_vec(vec![0.3, -0.1, 0.5]),
            DVector::from_vec(vec![0.2, 0.7, -0.4]),
            DVector::from_vec(vec![-0.6, 0.1, 0.9]),
        ];
        let rho = tri.spec.linear_part();
        let gens: Vec<Isometry> =
            rho.generators().iter().zip(&taus).map(|(g, t)| g.with_translation(&MinkVector(t.clone()))).collect();
        let abc = gens[0].compose(&gens[1]).compose(&gens[2]);
        let coords = Cocycle { values: taus.iter().map(|t| MinkVector(t.clone())).collect() }.coords();
        assert!((m * coords - abc.tau()).amax() < 1e-12);
    }

    #[test]
    fn coboundaries_are_cocycles() {
        let tri = TriGroup::build(1e-9).unwrap();
        let coh = Cohomology::new(&tri.spec).unwrap();
        assert!(coh.containment_residual < 1e-12);
        assert_eq!((coh.z1.dim(), coh.b1.dim(), coh.dim()), (6, 3, 3));
    }

    #[test]
    fn tri_dimensions() {
        let rep = tri_experiment(1e-9, 0, 1).unwrap();
        assert_eq!((rep.h1_dim, rep.e_dim, rep.delta_dim, rep.delta_e_intersection_dim), (3, 0, 1, 0));
        assert!(rep.min_gap >= 1e6, "{rep:?}");
        assert!(rep.all_parabolic);
    }

    #[test]
    fn tri_classes_are_not_admissible() {
        for seed in 0..3 {
            let p = tri_experiment(1e-9, TRI_PROBE_MAXLEN, seed).unwrap().probe.unwrap();
            assert_eq!(p.first_infeasible_depth, Some(2), "{p:?}");
        }
        let tri = TriGroup::build(1e-9).unwrap();
        let cob = Cocycle::from_coords(&(coboundary_map(&tri.spec) * DVector::from_row_slice(&[-0.4, 0.1, 0.7])), 3);
        let prober = ConeProber::new(&tri.spec, 4, 1e-9).unwrap();
        for o in [Orientation::Future, Orientation::Past] {
            assert_eq!(prober.probe(&cob, o).unwrap().status, AdmissibilityStatus::Feasible);
        }
    }
}
