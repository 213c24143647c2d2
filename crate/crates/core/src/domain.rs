//! Regular convex domains Ω±(Λ) cut out by finitely many light-like half-spaces,
//! with the cosmological time T, the retraction π and the Gauss map n.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dedup::{vector_key, NearIndex};
use crate::error::{Error, Result};
use crate::linalg::{ip, lower};
use crate::lp::{compact_point, max_margin};
use crate::mink::{Isometry, MinkVector};
use crate::penrose::{act_on_j, normalize_direction, LightPlane};
use crate::qp::QpProblem;

/// Box radius of the feasibility programs, in units of [`LambdaSet::scale`].
pub const BOX_FACTOR: f64 = 1e3;
/// Directions closer than this (Euclidean, on normalised representatives) coincide.
pub const DIRECTION_TOL: f64 = 1e-8;
const BISECTION_STEPS: usize = 80;
const BRACKET_HI: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Future,
    Past,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Future => Orientation::Past,
            Orientation::Past => Orientation::Future,
        }
    }
}

/// Finite Λ ⊂ 𝒥; Ω⁺(Λ) = ⋂ {⟨x|v⟩ < s}, Ω⁻(Λ) = ⋂ {⟨x|v⟩ > s}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSet {
    pub planes: Vec<LightPlane>,
    pub orientation: Orientation,
}

/// x ↦ (−x₀, x₁, …) exchanges future and past.
fn time_flip(x: &DVector<f64>) -> DVector<f64> {
    let mut y = x.clone();
    y[0] = -y[0];
    y
}

impl LambdaSet {
    pub fn new(planes: Vec<LightPlane>, orientation: Orientation) -> Result<Self> {
        let Some(first) = planes.first() else {
            return Err(Error::invalid("Λ must contain at least one plane"));
        };
        let n = first.dim();
        for p in &planes {
            if p.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
            }
            if !p.v.is_finite() || !p.s.is_finite() {
                return Err(Error::NonFinite);
            }
            if p.v.0[0] <= 0.0 {
                return Err(Error::invalid("plane direction must be future oriented"));
            }
        }
        Ok(LambdaSet { planes, orientation })
    }

    pub fn future(planes: Vec<LightPlane>) -> Result<Self> {
        Self::new(planes, Orientation::Future)
    }

    pub fn dim(&self) -> usize {
        self.planes[0].dim()
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn scale(&self) -> f64 {
        self.planes.iter().fold(1.0f64, |m, p| m.max(p.s.abs()))
    }

    /// ⟨x|vᵢ⟩ − sᵢ, sign-adjusted so that Ω is where every entry is negative.
    pub fn signed_levels(&self, x: &DVector<f64>) -> Vec<f64> {
        let sign = match self.orientation {
            Orientation::Future => 1.0,
            Orientation::Past => -1.0,
        };
        self.planes.iter().map(|p| sign * p.level(x)).collect()
    }

    pub fn distinct_directions(&self) -> usize {
        let mut reps: Vec<&DVector<f64>> = Vec::new();
        let mut index = NearIndex::new(self.dim() as f64 * DIRECTION_TOL * 1.01);
        for p in &self.planes {
            let key = vector_key(p.v.as_slice());
            if !index.candidates(key).any(|r| (reps[r] - &p.v.0).amax() <= DIRECTION_TOL) {
                index.insert(key, reps.len());
                reps.push(&p.v.0);
            }
        }
        reps.len()
    }

    /// Image of Λ under the time flip; Ω±(Λ) maps onto Ω∓ of the result.
    pub fn time_reversed(&self) -> LambdaSet {
        let planes = self
            .planes
            .iter()
            .map(|p| {
                // w = −flip(v) is future and ⟨flip x|w⟩ = −⟨x|v⟩
                LightPlane { v: MinkVector(-time_flip(&p.v.0)), s: -p.s }
            })
            .collect();
        LambdaSet { planes, orientation: self.orientation.flipped() }
    }

    /// g·Λ, acting on 𝒥.
    pub fn transform(&self, g: &Isometry) -> LambdaSet {
        LambdaSet { planes: self.planes.iter().map(|p| act_on_j(g, p)).collect(), orientation: self.orientation }
    }

    /// Λ with the same directions and all levels negated, oriented the other way.
    pub fn antipodal(&self) -> LambdaSet {
        LambdaSet {
            planes: self.planes.iter().map(|p| LightPlane { v: p.v.clone(), s: -p.s }).collect(),
            orientation: self.orientation.flipped(),
        }
    }

    fn as_future(&self) -> (LambdaSet, bool) {
        match self.orientation {
            Orientation::Future => (self.clone(), false),
            Orientation::Past => (self.time_reversed(), true),
        }
    }
}

/// Outcome of the max-margin regularity test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regularity {
    pub regular: bool,
    /// Point of Ω of smallest ∞-norm among those at distance ≥ margin/2 from the planes.
    pub witness: Option<MinkVector>,
    /// Largest Euclidean distance to the planes inside the box, capped at the
    /// scale of Λ; negative when Ω is empty.
    pub margin: f64,
    pub directions: usize,
}

/// Regularity of Ω±(Λ) for the orientation carried by Λ: nonempty interior and
/// at least two directions.
pub fn is_regular(lambda: &LambdaSet, tol: f64) -> Result<Regularity> {
    let scale = lambda.scale();
    is_regular_within(lambda, tol, BOX_FACTOR * scale, scale)
}

/// [`is_regular`] with an explicit box radius; margins and `tol` are relative to `scale`.
pub fn is_regular_within(lambda: &LambdaSet, tol: f64, radius: f64, scale: f64) -> Result<Regularity> {
    if lambda.is_empty() {
        return Err(Error::invalid("empty Λ"));
    }
    let sign = match lambda.orientation {
        Orientation::Future => 1.0,
        Orientation::Past => -1.0,
    };
    let rows: Vec<DVector<f64>> = lambda.planes.iter().map(|p| lower(&p.v.0) * sign).collect();
    let rhs: Vec<f64> = lambda.planes.iter().map(|p| sign * p.s).collect();
    let sol = max_margin(&rows, &rhs, &[], radius, scale)?;
    let directions = lambda.distinct_directions();
    let nonempty = sol.margin > tol * scale;
    let witness = if nonempty {
        let x = compact_point(&rows, &rhs, 0.5 * sol.margin, radius)?.unwrap_or(sol.x);
        Some(MinkVector(x))
    } else {
        None
    };
    Ok(Regularity {
        regular: nonempty && directions >= 2,
        witness,
        margin: sol.margin,
        directions,
    })
}

pub fn is_future_regular(lambda: &LambdaSet, tol: f64) -> Result<Regularity> {
    is_regular(&LambdaSet { planes: lambda.planes.clone(), orientation: Orientation::Future }, tol)
}

pub fn is_past_regular(lambda: &LambdaSet, tol: f64) -> Result<Regularity> {
    is_regular(&LambdaSet { planes: lambda.planes.clone(), orientation: Orientation::Past }, tol)
}

/// Strict membership in the open domain, away from the planes by more than tol.
pub fn omega_membership(lambda: &LambdaSet, x: &MinkVector, tol: f64) -> bool {
    lambda.signed_levels(&x.0).iter().all(|&l| l < -tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CtOptions {
    pub tol: f64,
    pub parallel: bool,
}

impl Default for CtOptions {
    fn default() -> Self {
        CtOptions { tol: 1e-9, parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CtResult {
    #[serde(rename = "T")]
    pub t: f64,
    pub retraction: MinkVector,
    pub gauss: MinkVector,
    pub active_plane: usize,
    pub faces_feasible: usize,
}

type FaceOptimum = Option<(f64, DVector<f64>)>;

/// Best face value −⟨d|d⟩ with d = p − q, q on face i of the closed domain.
fn face_optimum(planes: &[LightPlane], depth: &[f64], i: usize, scale: f64) -> Result<FaceOptimum> {
    let n = planes[i].dim();
    let row = |j: usize| lower(&planes[j].v.0);
    let eq = vec![(row(i), -depth[i])];
    let ineq: Vec<(DVector<f64>, f64)> =
        (0..planes.len()).filter(|&j| j != i).map(|j| (row(j), -depth[j])).collect();
    let qp = QpProblem { h: crate::linalg::eta(n) * 2.0, g: DVector::zeros(n), eq, ineq };

    // vertical drop p − t e₀ onto plane i, if it stays in the closed domain
    let t = depth[i] / planes[i].v.0[0];
    let mut start = DVector::zeros(n);
    start[0] = t;
    let feas = 1e-10 * (1.0 + scale + t.abs());
    if qp.infeasibility(&start) > feas {
        let a: Vec<DVector<f64>> = qp.ineq.iter().map(|(r, _)| -r).collect();
        let b: Vec<f64> = qp.ineq.iter().map(|(_, v)| -v).collect();
        let sol = match max_margin(&a, &b, &qp.eq, BOX_FACTOR * scale, scale) {
            Ok(s) => s,
            Err(Error::Numerical(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if sol.margin < -1e-9 * scale {
            return Ok(None);
        }
        start = sol.x;
        let r = row(i);
        start += &r * ((-depth[i] - r.dot(&start)) / r.norm_squared());
        if qp.infeasibility(&start) > feas {
            return Ok(None);
        }
    }
    let sol = qp.solve(&start).map_err(|e| match e {
        Error::Unbounded(_) => Error::Unbounded("face problem is unbounded: Λ is not regular".into()),
        other => other,
    })?;
    Ok(Some((-sol.objective, sol.x)))
}

/// Cosmological time of p ∈ Ω±(Λ) through the per-face concave programs.
pub fn cosmological_time(lambda: &LambdaSet, p: &MinkVector, opts: &CtOptions) -> Result<CtResult> {
    p.check_dim(lambda.dim())?;
    if !p.is_finite() {
        return Err(Error::NonFinite);
    }
    let (fut, flipped) = lambda.as_future();
    let pf = if flipped { time_flip(&p.0) } else { p.0.clone() };
    let levels = fut.signed_levels(&pf);
    if levels.iter().any(|&l| l >= 0.0) {
        return Err(Error::invalid("point is outside the domain"));
    }
    if fut.distinct_directions() < 2 {
        return Err(Error::Unbounded("Λ has fewer than two directions".into()));
    }
    let depth: Vec<f64> = levels.iter().map(|l| -l).collect();
    let scale = fut.scale() + pf.amax();
    let solve = |i: usize| face_optimum(&fut.planes, &depth, i, scale);
    let faces: Vec<Result<FaceOptimum>> = if opts.parallel {
        (0..fut.len()).into_par_iter().map(solve).collect()
    } else {
        (0..fut.len()).map(solve).collect()
    };
    let mut best: Option<(usize, f64, DVector<f64>)> = None;
    let mut feasible = 0;
    for (i, f) in faces.into_iter().enumerate() {
        if let Some((val, d)) = f? {
            feasible += 1;
            if best.as_ref().is_none_or(|b| val > b.1) {
                best = Some((i, val, d));
            }
        }
    }
    let Some((active, val, d)) = best else {
        return Err(Error::numerical("no feasible face"));
    };
    if val <= 0.0 {
        return Err(Error::numerical("no timelike segment to the boundary"));
    }
    let t = val.sqrt();
    let (mut retraction, mut gauss) = (&pf - &d, d / t);
    if flipped {
        retraction = time_flip(&retraction);
        gauss = time_flip(&gauss);
    }
    Ok(CtResult { t, retraction: MinkVector(retraction), gauss: MinkVector(gauss), active_plane: active, faces_feasible: feasible })
}

/// Point of a level set S_t together with its Gauss vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelPoint {
    pub point: MinkVector,
    pub gauss: MinkVector,
    pub ray: usize,
}

/// Parameter r at which base + r·u enters Ω (all levels decrease along u).
fn entry_parameter(lambda: &LambdaSet, base: &DVector<f64>, u: &DVector<f64>) -> Result<f64> {
    let lv = lambda.signed_levels(base);
    let sign = match lambda.orientation {
        Orientation::Future => 1.0,
        Orientation::Past => -1.0,
    };
    let mut r: f64 = f64::NEG_INFINITY;
    for (p, l) in lambda.planes.iter().zip(lv) {
        let rate = sign * ip(u, &p.v.0);
        if rate >= 0.0 {
            return Err(Error::invalid("ray direction is not timelike towards the domain"));
        }
        r = r.max(l / -rate);
    }
    Ok(r)
}

/// Points of S_t = T⁻¹(t) by bisection along rays base + r·u. Directions must be
/// future (past for Ω⁻) timelike; base defaults to the regularity witness.
pub fn level_set_sample(
    lambda: &LambdaSet,
    t: f64,
    base: Option<&MinkVector>,
    directions: &[MinkVector],
    opts: &CtOptions,
) -> Result<Vec<Result<LevelPoint>>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("level must be positive"));
    }
    let base = match base {
        Some(b) => b.0.clone(),
        None => {
            let reg = is_regular(lambda, opts.tol)?;
            if !reg.regular {
                return Err(Error::invalid("Λ is not regular"));
            }
            reg.witness.expect("regular domains have a witness").0
        }
    };
    let inner = CtOptions { parallel: false, ..*opts };
    let sample = |(k, u): (usize, &MinkVector)| -> Result<LevelPoint> {
        let u = &u.0;
        let r0 = entry_parameter(lambda, &base, u)?;
        let at = |r: f64| MinkVector(&base + u * r);
        let (mut lo, mut hi) = (r0 + opts.tol, r0 + BRACKET_HI);
        if cosmological_time(lambda, &at(hi), &inner)?.t < t {
            return Err(Error::numerical(format!("ray {k} does not reach level {t} within the bracket")));
        }
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if cosmological_time(lambda, &at(mid), &inner)?.t < t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let point = at(0.5 * (lo + hi));
        let ct = cosmological_time(lambda, &point, &inner)?;
        Ok(LevelPoint { point, gauss: ct.gauss, ray: k })
    };
    let out = if opts.parallel {
        directions.par_iter().enumerate().map(sample).collect()
    } else {
        directions.iter().enumerate().map(sample).collect()
    };
    Ok(out)
}

/// Distance on the hyperboloid of unit timelike vectors, stable for nearby points.
pub fn hyperbolic_distance(a: &MinkVector, b: &MinkVector) -> f64 {
    let d = &a.0 - &b.0;
    let chord = ip(&d, &d).max(0.0).sqrt();
    2.0 * (0.5 * chord).asinh()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub pairs: usize,
    /// max d_hyp(n(p), n(p′)) / d(p, p′) with the chordal Minkowski distance.
    pub max_ratio: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Checks that the Gauss map of S_t is 1/t-Lipschitz on the given pairs.
pub fn gauss_lipschitz_check(
    lambda: &LambdaSet,
    t: f64,
    pairs: &[(MinkVector, MinkVector)],
    tol: f64,
    opts: &CtOptions,
) -> Result<LipschitzReport> {
    let mut max_ratio: f64 = 0.0;
    for (p, q) in pairs {
        let np = cosmological_time(lambda, p, opts)?.gauss;
        let nq = cosmological_time(lambda, q, opts)?.gauss;
        let d = &p.0 - &q.0;
        let chord = ip(&d, &d);
        if chord <= 0.0 {
            return Err(Error::invalid("pair is not spacelike separated"));
        }
        max_ratio = max_ratio.max(hyperbolic_distance(&np, &nq) / chord.sqrt());
    }
    let bound = 1.0 / t;
    Ok(LipschitzReport { pairs: pairs.len(), max_ratio, bound, holds: max_ratio <= bound * (1.0 + tol) })
}

/// T at p for a coarse and a refined sampling of the same Λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub coarse_size: usize,
    pub fine_size: usize,
    pub t_coarse: f64,
    pub t_fine: f64,
}

pub fn refinement_report(coarse: &LambdaSet, fine: &LambdaSet, p: &MinkVector, opts: &CtOptions) -> Result<RefinementReport> {
    Ok(RefinementReport {
        coarse_size: coarse.len(),
        fine_size: fine.len(),
        t_coarse: cosmological_time(coarse, p, opts)?.t,
        t_fine: cosmological_time(fine, p, opts)?.t,
    })
}

/// Light-like directions (1, ω)/√2 for `count` points ω on the unit sphere S^{n−2}:
/// equally spaced for n = 3, a Fibonacci lattice for n = 4, seeded Gaussian
/// samples otherwise.
pub fn sphere_directions<R: Rng>(n: usize, count: usize, rng: &mut R) -> Vec<MinkVector> {
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let omega: DVector<f64> = match n {
            3 => {
                let a = std::f64::consts::TAU * k as f64 / count as f64;
                DVector::from_vec(vec![a.cos(), a.sin()])
            }
            4 => {
                let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                let r = (1.0 - z * z).sqrt();
                let a = golden * k as f64;
                DVector::from_vec(vec![r * a.cos(), r * a.sin(), z])
            }
            _ => {
                let v = DVector::from_fn(n - 1, |_, _| {
                    let (u1, u2): (f64, f64) = (rng.gen_range(1e-12..1.0), rng.r#gen());
                    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
                });
                let nv = v.norm();
                v / nv
            }
        };
        let mut w = DVector::zeros(n);
        w[0] = 1.0;
        w.rows_mut(1, n - 1).copy_from(&omega);
        out.push(MinkVector(w / std::f64::consts::SQRT_2));
    }
    out
}

/// Λ approximating the light cone of `apex`: planes through apex in the given directions.
pub fn cone_lambda(apex: &MinkVector, directions: &[MinkVector]) -> Result<LambdaSet> {
    let planes = directions
        .iter()
        .map(|v| LightPlane::through(v, apex, 1e-9))
        .collect::<Result<Vec<_>>>()?;
    LambdaSet::future(planes)
}

/// The wedge bounded by the two null planes of the (e₀, e₁)-plane through the origin.
pub fn misner_wedge(n: usize) -> LambdaSet {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mk = |sign: f64| {
        let mut v = DVector::zeros(n);
        v[0] = r;
        v[1] = sign * r;
        LightPlane { v: MinkVector(v), s: 0.0 }
    };
    LambdaSet { planes: vec![mk(1.0), mk(-1.0)], orientation: Orientation::Future }
}

/// Random plane through a random point: direction uniform on the sphere, s from the point.
pub fn random_plane<R: Rng>(rng: &mut R, n: usize, spread: f64) -> LightPlane {
    let w = DVector::from_fn(n - 1, |_, _| rng.gen_range(-1.0..1.0));
    let mut v = DVector::zeros(n);
    v[0] = w.norm();
    v.rows_mut(1, n - 1).copy_from(&w);
    let v = normalize_direction(&MinkVector(v), 1e-9).expect("constructed null");
    LightPlane { s: rng.gen_range(-spread..spread), v }
}

/// Orthonormal basis of the spacelike complement of span(v₊, v₋) for the corner
/// of two null planes.
pub fn corner_complement(v_plus: &DVector<f64>, v_minus: &DVector<f64>) -> DMatrix<f64> {
    let n = v_plus.len();
    let mut rows = DMatrix::zeros(2, n);
    rows.set_row(0, &lower(v_plus).transpose());
    rows.set_row(1, &lower(v_minus).transpose());
    crate::linalg::kernel(&rows, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn misner_t(p: &DVector<f64>) -> f64 {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let (x, y) = (r * (p[1] + p[0]), r * (p[1] - p[0]));
        (-2.0 * x * y).sqrt()
    }

    #[test]
    fn wedge_regularity_and_membership() {
        let w = misner_wedge(3);
        let reg = is_future_regular(&w, 1e-9).unwrap();
        assert!(reg.regular);
        assert!(omega_membership(&w, reg.witness.as_ref().unwrap(), 1e-9));
        assert!(!omega_membership(&w, &MinkVector::new(&[1.0, 1.0, 0.0]), 1e-9));
        assert!(!omega_membership(&w, &MinkVector::new(&[-3.0, 0.0, 0.0]), 1e-9));
        let single = LambdaSet::future(vec![w.planes[0].clone()]).unwrap();
        let r1 = is_future_regular(&single, 1e-9).unwrap();
        assert!(!r1.regular && r1.directions == 1);
    }

    #[test]
    fn wedge_time_is_closed_form() {
        let w = misner_wedge(4);
        let p = MinkVector::new(&[2.0, 0.5, 0.3, -1.0]);
        let ct = cosmological_time(&w, &p, &CtOptions::default()).unwrap();
        assert!((ct.t - misner_t(&p.0)).abs() < 1e-12);
        // retraction lies on the corner {⟨π|v±⟩ = 0}
        for pl in &w.planes {
            assert!(pl.level(&ct.retraction.0).abs() < 1e-12);
        }
        assert!((ct.gauss.sq() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn time_along_the_gauss_direction() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let lambda = LambdaSet::future((0..3).map(|_| random_plane(&mut rng, 3, 1.0)).collect()).unwrap();
        let reg = is_future_regular(&lambda, 1e-9).unwrap();
        let p = reg.witness.unwrap();
        let ct = cosmological_time(&lambda, &p, &CtOptions::default()).unwrap();
        let q = MinkVector(&p.0 + &ct.gauss.0 * 1e-3);
        let ct2 = cosmological_time(&lambda, &q, &CtOptions::default()).unwrap();
        assert!((ct2.t - ct.t - 1e-3).abs() < 1e-10, "{ct:?} {ct2:?} {p:?} {lambda:?}");
    }

    #[test]
    fn past_domain_by_time_reversal() {
        let w = misner_wedge(3);
        let past = LambdaSet { orientation: Orientation::Past, ..w.clone() };
        let p = MinkVector::new(&[-2.0, 0.5, 0.0]);
        let ct = cosmological_time(&past, &p, &CtOptions::default()).unwrap();
        assert!((ct.t - 3.75f64.sqrt()).abs() < 1e-12);
        assert!(ct.gauss.0[0] < 0.0);
        let rev = w.time_reversed();
        assert_eq!(rev.orientation, Orientation::Past);
        assert!(omega_membership(&rev, &MinkVector::new(&[-1.0, 0.0, 0.0]), 1e-9));
    }

    #[test]
    fn level_set_of_wedge() {
        let w = misner_wedge(3);
        let dirs: Vec<MinkVector> =
            [0.0, 0.5, -0.8].iter().map(|&b: &f64| MinkVector::new(&[b.cosh(), b.sinh(), 0.2])).collect();
        let pts = level_set_sample(&w, 1.5, Some(&MinkVector::new(&[1.0, 0.0, 0.0])), &dirs, &CtOptions::default())
            .unwrap();
        for lp in pts {
            let lp = lp.unwrap();
            assert!((misner_t(&lp.point.0) - 1.5).abs() < 1e-9);
        }
    }

    #[test]
    fn hyperbolic_distance_on_a_geodesic() {
        let b = 0.37f64;
        let a = MinkVector::new(&[1.0, 0.0, 0.0]);
        let c = MinkVector::new(&[b.cosh(), b.sinh(), 0.0]);
        assert!((hyperbolic_distance(&a, &c) - b).abs() < 1e-15);
    }
}
