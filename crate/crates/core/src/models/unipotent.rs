//! Unipotent spacetimes: a component Ω of the domain where the orbits of an
//! abelian group A ⊂ 𝒜 are spacelike, with the A-invariant Cauchy surface S_f.
//!
//! Points are written (x, y, z) with metric 2dxdy + dz², z ∈ ℝ^{n−2}.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{null_coords, null_point};
use crate::error::{Error, Result};
use crate::linalg;
use crate::mink::{Isometry, MinkVector};

/// g_{u,v,μ}(x, y, z) = (x + μ − ⟨z|v⟩ − ½y|v|², y, z + u + yv).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineA {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub mu: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl AffineA {
    pub fn apply(&self, x: f64, y: f64, z: &[f64]) -> (f64, f64, Vec<f64>) {
        let x1 = x + self.mu - dot(z, &self.v) - 0.5 * y * dot(&self.v, &self.v);
        let z1 = z.iter().zip(&self.u).zip(&self.v).map(|((zi, ui), vi)| zi + ui + y * vi).collect();
        (x1, y, z1)
    }

    pub fn apply_point(&self, p: &MinkVector) -> MinkVector {
        let (x, y, z) = null_coords(p);
        let (x1, y1, z1) = self.apply(x, y, &z);
        null_point(x1, y1, &z1)
    }

    /// self ∘ other = g_{u+u′, v+v′, μ+μ′−⟨u′|v⟩}.
    pub fn compose(&self, other: &AffineA) -> AffineA {
        AffineA {
            u: self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect(),
            v: self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect(),
            mu: self.mu + other.mu - dot(&other.u, &self.v),
        }
    }

    /// The same map in the standard coordinates of Mⁿ.
    pub fn isometry(&self) -> Isometry {
        let n = self.u.len() + 2;
        let origin = self.apply_point(&MinkVector::zeros(n));
        let mut l = DMatrix::zeros(n, n);
        for k in 0..n {
            let image = self.apply_point(&MinkVector::basis(n, k));
            l.set_column(k, &(&image.0 - &origin.0));
        }
        Isometry::new(l, origin.0, 1e-9).expect("elements of 𝒜 are isometries")
    }
}

/// Profile a(y) > 1 on the component, with f = ∫ a².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AProfile {
    /// 1 + 1/(y − y_j) + 1/(y_{j+1} − y), dropping the terms of infinite ends;
    /// the constant 2 on the whole line.
    Default,
    Constant { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnipotentModel {
    pub lambdas: Vec<f64>,
    /// Orthonormal basis e_i of ℝ^{n−2}.
    pub basis: Vec<Vec<f64>>,
    pub component: usize,
    pub profile: AProfile,
    /// Generators of Γ ⊂ A as t-vectors.
    pub lattice: Vec<Vec<f64>>,
    /// Ends of the component interval; None when infinite.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// Finite y_i = −1/λ_i, sorted and without repeats.
pub fn breakpoints(lambdas: &[f64]) -> Vec<f64> {
    let mut ys: Vec<f64> = lambdas.iter().filter(|l| **l != 0.0).map(|l| -1.0 / l).collect();
    ys.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    ys.dedup();
    ys
}

/// Component intervals of {y : 1 + yλ_i ≠ 0}, in increasing order.
pub fn components(lambdas: &[f64]) -> Vec<(Option<f64>, Option<f64>)> {
    let ys = breakpoints(lambdas);
    let mut out = Vec::with_capacity(ys.len() + 1);
    let mut lo = None;
    for &y in &ys {
        out.push((lo, Some(y)));
        lo = Some(y);
    }
    out.push((lo, None));
    out
}

/// Validated model. Fails when the profile does not make both end integrals of a diverge.
pub fn build_unipotent(lambdas: Vec<f64>, basis: Vec<Vec<f64>>, component: usize, lattice: Vec<Vec<f64>>, profile: AProfile) -> Result<UnipotentModel> {
    let m = UnipotentModel::new_unchecked(lambdas, basis, component, lattice, profile)?;
    if let AProfile::Constant { .. } = profile {
        if m.lower.is_some() || m.upper.is_some() {
            return Err(Error::invalid("constant profile has a finite integral toward a finite end"));
        }
    }
    Ok(m)
}

impl UnipotentModel {
    /// Checks everything except the divergence of the profile integrals; used for
    /// negative controls of the completeness probe.
    pub fn new_unchecked(lambdas: Vec<f64>, basis: Vec<Vec<f64>>, component: usize, lattice: Vec<Vec<f64>>, profile: AProfile) -> Result<Self> {
        let d = lambdas.len();
        if d == 0 {
            return Err(Error::invalid("need at least one λ (dimension ≥ 3)"));
        }
        if lambdas.iter().any(|l| !l.is_finite()) || lambdas.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid("λ must be finite and nondecreasing"));
        }
        if basis.len() != d || basis.iter().any(|e| e.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: basis.len() });
        }
        let e = DMatrix::from_fn(d, d, |r, c| basis[c][r]);
        if (e.transpose() * &e - DMatrix::identity(d, d)).amax() > 1e-10 {
            return Err(Error::invalid("basis is not orthonormal"));
        }
        let comps = components(&lambdas);
        let Some(&(lower, upper)) = comps.get(component) else {
            return Err(Error::invalid(format!("component index {component} out of range ({} components)", comps.len())));
        };
        if let AProfile::Constant { value } = profile {
            if !(value > 1.0 && value.is_finite()) {
                return Err(Error::invalid("constant profile must exceed 1"));
            }
        }
        for t in &lattice {
            if t.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: t.len() });
            }
        }
        if !lattice.is_empty() {
            let m = DMatrix::from_fn(d, lattice.len(), |r, c| lattice[c][r]);
            if linalg::rank_info(&linalg::svd_sorted(&m).sigma, 1e-10).rank < lattice.len() {
                return Err(Error::invalid("lattice generators are linearly dependent"));
            }
        }
        Ok(UnipotentModel { lambdas, basis, component, profile, lattice, lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len() + 2
    }

    /// y_i, None for λ_i = 0.
    pub fn y_i(&self) -> Vec<Option<f64>> {
        self.lambdas.iter().map(|&l| if l == 0.0 { None } else { Some(-1.0 / l) }).collect()
    }

    /// Base point y₀ of f.
    pub fn y_ref(&self) -> f64 {
        match (self.lower, self.upper) {
            (Some(a), Some(b)) => 0.5 * (a + b),
            (Some(a), None) => a + 1.0,
            (None, Some(b)) => b - 1.0,
            (None, None) => 0.0,
        }
    }

    fn coords(&self, z: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|e| dot(e, z)).collect()
    }

    fn z_from_coords(&self, c: &[f64]) -> Vec<f64> {
        let d = self.lambdas.len();
        (0..d).map(|r| self.basis.iter().zip(c).map(|(e, ci)| e[r] * ci).sum()).collect()
    }

    /// φ(t) with u = Σt_i e_i, v = Σλ_i t_i e_i, μ = −Σ(λ_i/2)t_i².
    pub fn phi(&self, t: &[f64]) -> AffineA {
        let u = self.z_from_coords(t);
        let lt: Vec<f64> = t.iter().zip(&self.lambdas).map(|(ti, li)| ti * li).collect();
        let v = self.z_from_coords(&lt);
        let mu = -t.iter().zip(&self.lambdas).map(|(ti, li)| 0.5 * li * ti * ti).sum::<f64>();
        AffineA { u, v, mu }
    }

    pub fn in_interval(&self, y: f64) -> bool {
        self.lower.is_none_or(|a| y > a) && self.upper.is_none_or(|b| y < b)
    }

    pub fn contains(&self, p: &MinkVector) -> bool {
        let (_, y, _) = null_coords(p);
        self.in_interval(y) && self.lambdas.iter().all(|l| 1.0 + y * l != 0.0)
    }

    pub fn a(&self, y: f64) -> f64 {
        match self.profile {
            AProfile::Constant { value } => value,
            AProfile::Default => match (self.lower, self.upper) {
                (None, None) => 2.0,
                (lo, hi) => 1.0 + lo.map_or(0.0, |a| 1.0 / (y - a)) + hi.map_or(0.0, |b| 1.0 / (b - y)),
            },
        }
    }

    fn antiderivative(&self, y: f64) -> f64 {
        match self.profile {
            AProfile::Constant { value } => value * value * y,
            AProfile::Default => match (self.lower, self.upper) {
                (None, None) => 4.0 * y,
                (Some(a), None) => {
                    let p = y - a;
                    y + 2.0 * p.ln() - 1.0 / p
                }
                (None, Some(b)) => {
                    let q = b - y;
                    y - 2.0 * q.ln() + 1.0 / q
                }
                (Some(a), Some(b)) => {
                    // a² = 1 + 1/p² + 1/q² + 2/p + 2/q + 2/(pq), 1/(pq) = (1/p + 1/q)/(b − a)
                    let (p, q) = (y - a, b - y);
                    let l = p.ln() - q.ln();
                    y - 1.0 / p + 1.0 / q + 2.0 * l + 2.0 * l / (b - a)
                }
            },
        }
    }

    /// f(y) = ∫_{y₀}^{y} a².
    pub fn f(&self, y: f64) -> f64 {
        self.antiderivative(y) - self.antiderivative(self.y_ref())
    }

    /// Φ(y, z) = f(y) + ½Σ z_i²/(y_i − y), terms with y_i = ∞ dropped.
    pub fn big_phi(&self, y: f64, z: &[f64]) -> f64 {
        let c = self.coords(z);
        let mut s = self.f(y);
        for (ci, yi) in c.iter().zip(self.y_i()) {
            if let Some(yi) = yi {
                s += 0.5 * ci * ci / (yi - y);
            }
        }
        s
    }

    pub fn surface_point(&self, y: f64, z: &[f64]) -> MinkVector {
        null_point(self.big_phi(y, z), y, z)
    }

    /// Induced metric 2f′dy² + Σ(dz_i − z_i dy/(y − y_i))² in the coordinates
    /// (y, c₁, …, c_{n−2}), c_i = ⟨z|e_i⟩.
    pub fn induced_metric(&self, y: f64, z: &[f64]) -> DMatrix<f64> {
        let d = self.lambdas.len();
        let c = self.coords(z);
        let a = self.a(y);
        let mut g = DMatrix::zeros(d + 1, d + 1);
        g[(0, 0)] = 2.0 * a * a;
        for (i, yi) in self.y_i().into_iter().enumerate() {
            // dz_i − w dy with w = z_i/(y − y_i)
            let w = yi.map_or(0.0, |yi| c[i] / (y - yi));
            g[(0, 0)] += w * w;
            g[(0, i + 1)] -= w;
            g[(i + 1, 0)] -= w;
            g[(i + 1, i + 1)] += 1.0;
        }
        g
    }

    /// 2f′dy² + Σ(y − y_i)²dζ_i² with ζ_i = z_i/(y − y_i) (ζ_i = z_i when y_i = ∞).
    pub fn zeta_metric(&self, y: f64) -> DMatrix<f64> {
        let d = self.lambdas.len();
        let a = self.a(y);
        let mut g = DMatrix::zeros(d + 1, d + 1);
        g[(0, 0)] = 2.0 * a * a;
        for (i, yi) in self.y_i().into_iter().enumerate() {
            g[(i + 1, i + 1)] = yi.map_or(1.0, |yi| (y - yi) * (y - yi));
        }
        g
    }

    /// |x − Φ(y, z)| at φ(t)·p for p on S_f.
    pub fn invariance_residual(&self, y: f64, z: &[f64], t: &[f64]) -> f64 {
        let (x1, y1, z1) = self.phi(t).apply(self.big_phi(y, z), y, z);
        (x1 - self.big_phi(y1, &z1)).abs() / (1.0 + x1.abs())
    }
}

/// Path on S_f in the (y, ζ) chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProbePath {
    /// From y₀ toward one end of the component, with dζ/dy fixed.
    Escape { upper: bool, zeta_rate: Vec<f64> },
    /// Straight segment between two points of the chart.
    Segment { y0: f64, y1: f64, zeta0: Vec<f64>, zeta1: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathReport {
    pub path: ProbePath,
    /// (distance to the end, or |y| for infinite ends; cumulated length).
    pub profile: Vec<(f64, f64)>,
    pub length: f64,
    /// Escape paths only: the length keeps growing decade after decade.
    pub divergent: bool,
    /// Escape path of finite length.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub paths: Vec<PathReport>,
    pub complete: bool,
}

type Chart = Box<dyn Fn(f64) -> f64>;

/// Decades sampled by escape paths.
pub const PROBE_DECADES: i32 = 12;
/// An escape diverges when the last decade adds at least this fraction of the one before.
pub const DIVERGENCE_RATIO: f64 = 0.9;

const GL_NODES: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL_WEIGHTS: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

/// 8-point Gauss–Legendre on 16 panels.
fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let panels = 16;
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            s += w * (f(mid - 0.5 * h * x) + f(mid + 0.5 * h * x));
        }
    }
    0.5 * h * s
}

fn speed(model: &UnipotentModel, y: f64, dy: f64, dzeta: &[f64]) -> f64 {
    let a = model.a(y);
    let mut q = 2.0 * a * a * dy * dy;
    for (yi, dz) in model.y_i().into_iter().zip(dzeta) {
        let w = yi.map_or(1.0, |yi| (y - yi) * (y - yi));
        q += w * dz * dz;
    }
    q.sqrt()
}

fn probe_path(model: &UnipotentModel, path: &ProbePath) -> Result<PathReport> {
    let d = model.lambdas.len();
    match path {
        ProbePath::Segment { y0, y1, zeta0, zeta1 } => {
            if zeta0.len() != d || zeta1.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: zeta0.len().min(zeta1.len()) });
            }
            if !model.in_interval(*y0) || !model.in_interval(*y1) {
                return Err(Error::invalid("segment leaves the component"));
            }
            let dz: Vec<f64> = zeta1.iter().zip(zeta0).map(|(a, b)| a - b).collect();
            let length = integrate(|t| speed(model, y0 + t * (y1 - y0), y1 - y0, &dz), 0.0, 1.0);
            Ok(PathReport { path: path.clone(), profile: vec![(0.0, length)], length, divergent: false, flagged: false })
        }
        ProbePath::Escape { upper, zeta_rate } => {
            if zeta_rate.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: zeta_rate.len() });
            }
            let y0 = model.y_ref();
            let end = if *upper { model.upper } else { model.lower };
            let sign = if *upper { 1.0 } else { -1.0 };
            // parametrise by u = log of the distance to the end (or of |y − y₀| + 1)
            let (u0, y_of_u, dy_du): (f64, Chart, Chart) = match end {
                Some(e) => {
                    let dist0 = (e - y0).abs();
                    (dist0.ln(), Box::new(move |u: f64| e - sign * u.exp()), Box::new(move |u: f64| -sign * u.exp()))
                }
                None => (0.0, Box::new(move |u: f64| y0 + sign * (u.exp() - 1.0)), Box::new(move |u: f64| sign * u.exp())),
            };
            let step = if end.is_some() { -std::f64::consts::LN_10 } else { std::f64::consts::LN_10 };
            let mut profile = Vec::new();
            let mut length = 0.0;
            let mut u = u0;
            for _ in 0..PROBE_DECADES {
                let (ua, ub) = (u, u + step);
                let seg = integrate(
                    |s| {
                        let dy = dy_du(s);
                        let dz: Vec<f64> = zeta_rate.iter().map(|r| r * dy).collect();
                        speed(model, y_of_u(s), dy, &dz)
                    },
                    ua.min(ub),
                    ua.max(ub),
                );
                length += seg;
                u = ub;
                profile.push((u.exp(), length));
            }
            let k = profile.len();
            let last = profile[k - 1].1 - profile[k - 2].1;
            let before = profile[k - 2].1 - profile[k - 3].1;
            let divergent = last > 0.0 && last >= DIVERGENCE_RATIO * before;
            Ok(PathReport { path: path.clone(), profile, length, divergent, flagged: !divergent })
        }
    }
}

/// Induced lengths along the given paths; complete when every escape path diverges.
pub fn surface_completeness_probe(model: &UnipotentModel, paths: &[ProbePath]) -> Result<CompletenessReport> {
    let paths = paths.iter().map(|p| probe_path(model, p)).collect::<Result<Vec<_>>>()?;
    let complete = paths.iter().all(|p| !p.flagged);
    Ok(CompletenessReport { paths, complete })
}

/// Escape paths toward every end of the component, with ζ fixed.
pub fn default_escape_paths(model: &UnipotentModel) -> Vec<ProbePath> {
    let d = model.lambdas.len();
    vec![ProbePath::Escape { upper: false, zeta_rate: vec![0.0; d] }, ProbePath::Escape { upper: true, zeta_rate: vec![0.0; d] }]
}

/// Largest |λ| coordinate difference used by samplers: points of S_f over a box in (y, ζ).
pub fn surface_samples(model: &UnipotentModel, ys: &[f64], zetas: &[Vec<f64>]) -> Vec<MinkVector> {
    let mut out = Vec::new();
    let yi = model.y_i();
    for &y in ys {
        for zeta in zetas {
            let c: Vec<f64> = zeta.iter().zip(&yi).map(|(zt, yi)| yi.map_or(*zt, |yi| zt * (y - yi))).collect();
            let z = model.z_from_coords(&c);
            out.push(model.surface_point(y, &z));
        }
    }
    out
}

/// Minkowski metric 2dxdy + dz² pulled back through (y, c) ↦ (Φ, y, Σc_i e_i) by
/// central differences; independent check of [`UnipotentModel::induced_metric`].
pub fn pullback_metric_fd(model: &UnipotentModel, y: f64, z: &[f64], h: f64) -> DMatrix<f64> {
    let d = model.lambdas.len();
    let c0 = model.coords(z);
    let embed = |q: &DVector<f64>| -> DVector<f64> {
        let c: Vec<f64> = q.rows(1, d).iter().copied().collect();
        let zz = model.z_from_coords(&c);
        null_point(model.big_phi(q[0], &zz), q[0], &zz).0
    };
    let mut q0 = DVector::zeros(d + 1);
    q0[0] = y;
    q0.rows_mut(1, d).copy_from_slice(&c0);
    let mut jac = DMatrix::zeros(d + 2, d + 1);
    for k in 0..=d {
        let mut qp = q0.clone();
        let mut qm = q0.clone();
        qp[k] += h;
        qm[k] -= h;
        jac.set_column(k, &((embed(&qp) - embed(&qm)) / (2.0 * h)));
    }
    jac.transpose() * linalg::eta(d + 2) * jac
}
