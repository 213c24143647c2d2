//! Mean curvature of spacelike graphs x₀ = φ(x⃗) by central differences.
//!
//! H = (1/(n−1)) div(∇φ/√(1−|∇φ|²)), the divergence of the future unit normal
//! averaged over the n−1 spatial directions. Future-expanding leaves (the
//! hyperboloid) are positive, future-converging ones negative.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Base finite-difference step, scaled by the local curvature radius.
pub const DEFAULT_STEP: f64 = 1e-4;

type Evaluator = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Graph of φ over the box [lo, hi] ⊂ ℝ^{n−1}.
pub struct GraphSurface {
    phi: Evaluator,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Declared bound on |∇φ|, below 1.
    pub lipschitz: f64,
}

impl std::fmt::Debug for GraphSurface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GraphSurface").field("lo", &self.lo).field("hi", &self.hi).field("lipschitz", &self.lipschitz).finish()
    }
}

/// Grid points per axis of the spacelike check in [`GraphSurface::new`].
const CHECK_GRID: usize = 9;

impl GraphSurface {
    pub fn new(phi: impl Fn(&[f64]) -> f64 + Send + Sync + 'static, lo: Vec<f64>, hi: Vec<f64>, lipschitz: f64) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        if lo.iter().zip(&hi).any(|(a, b)| a.partial_cmp(b) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::invalid("empty domain box"));
        }
        if !(0.0..1.0).contains(&lipschitz) {
            return Err(Error::invalid("Lipschitz bound must lie in [0, 1)"));
        }
        let s = GraphSurface { phi: Box::new(phi), lo, hi, lipschitz };
        let m = s.space_dim();
        let total = CHECK_GRID.pow(m as u32);
        for idx in 0..total {
            let mut rem = idx;
            let x: Vec<f64> = (0..m)
                .map(|i| {
                    let k = rem % CHECK_GRID;
                    rem /= CHECK_GRID;
                    let f = (k as f64 + 0.5) / CHECK_GRID as f64;
                    s.lo[i] + f * (s.hi[i] - s.lo[i])
                })
                .collect();
            let g = s.gradient(&x, 1e-5 * s.width());
            if g.norm() >= 1.0 {
                return Err(Error::invalid(format!("gradient norm {:.4} ≥ 1 at {x:?}", g.norm())));
            }
        }
        Ok(s)
    }

    /// n − 1.
    pub fn space_dim(&self) -> usize {
        self.lo.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.phi)(x)
    }

    fn width(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).fold(f64::INFINITY, f64::min)
    }

    fn shifted(&self, x: &[f64], moves: &[(usize, f64)]) -> f64 {
        let mut y = x.to_vec();
        for &(i, d) in moves {
            y[i] += d;
        }
        self.eval(&y)
    }

    pub fn gradient(&self, x: &[f64], h: f64) -> DVector<f64> {
        DVector::from_fn(x.len(), |i, _| (self.shifted(x, &[(i, h)]) - self.shifted(x, &[(i, -h)])) / (2.0 * h))
    }

    pub fn hessian(&self, x: &[f64], h: f64) -> DMatrix<f64> {
        let m = x.len();
        let f0 = self.eval(x);
        let mut hess = DMatrix::zeros(m, m);
        for i in 0..m {
            hess[(i, i)] = (self.shifted(x, &[(i, h)]) - 2.0 * f0 + self.shifted(x, &[(i, -h)])) / (h * h);
            for j in 0..i {
                let v = (self.shifted(x, &[(i, h), (j, h)]) - self.shifted(x, &[(i, h), (j, -h)]) - self.shifted(x, &[(i, -h), (j, h)])
                    + self.shifted(x, &[(i, -h), (j, -h)]))
                    / (4.0 * h * h);
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }
        hess
    }

    fn interior(&self, x: &[f64], h: f64) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(xi, (a, b))| *xi - 2.0 * h >= *a && *xi + 2.0 * h <= *b)
    }
}

/// H from ∇φ and the Hessian.
pub fn mean_curvature_from_derivatives(grad: &DVector<f64>, hess: &DMatrix<f64>) -> Result<f64> {
    let g2 = grad.norm_squared();
    if g2 >= 1.0 {
        return Err(Error::invalid("gradient is not spacelike"));
    }
    let w2 = 1.0 - g2;
    let div = (w2 * hess.trace() + (grad.transpose() * hess * grad)[(0, 0)]) / w2.powf(1.5);
    Ok(div / grad.len() as f64)
}

/// H at x, with an explicit step or the default scaled by the curvature radius.
pub fn mean_curvature(surface: &GraphSurface, x: &[f64], step: Option<f64>) -> Result<f64> {
    if x.len() != surface.space_dim() {
        return Err(Error::DimensionMismatch { expected: surface.space_dim(), found: x.len() });
    }
    let h = match step {
        Some(h) if h > 0.0 => h,
        Some(_) => return Err(Error::invalid("step must be positive")),
        None => {
            // pilot at a coarse step for the radius estimate
            let pilot = (1e-2 * surface.width()).min(1e-2);
            let rough = if surface.interior(x, pilot) { estimate(surface, x, pilot).unwrap_or(0.0) } else { 0.0 };
            let room = x.iter().zip(surface.lo.iter().zip(&surface.hi)).map(|(xi, (a, b))| (xi - a).min(b - xi)).fold(f64::INFINITY, f64::min);
            (DEFAULT_STEP * (1.0 / rough.abs().max(1e-12)).clamp(1e-2, 1e2)).min(0.25 * room)
        }
    };
    if !surface.interior(x, h) {
        return Err(Error::invalid("point is not interior to the domain"));
    }
    estimate(surface, x, h)
}

fn estimate(surface: &GraphSurface, x: &[f64], h: f64) -> Result<f64> {
    let value = mean_curvature_from_derivatives(&surface.gradient(x, h), &surface.hessian(x, h))?;
    if !value.is_finite() {
        return Err(Error::numerical("non-finite curvature estimate"));
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmcReport {
    pub is_cmc: bool,
    pub value: f64,
    pub spread: f64,
    pub estimates: Vec<f64>,
    pub sign_convention: String,
}

pub const SIGN_CONVENTION: &str = "divergence of the future unit normal over n-1; future-expanding positive, future-converging negative";

/// Minimum number of sample points of [`cmc_check`].
pub const CMC_MIN_POINTS: usize = 10;

pub fn cmc_check(surface: &GraphSurface, points: &[Vec<f64>], tol: f64, step: Option<f64>) -> Result<CmcReport> {
    if points.len() < CMC_MIN_POINTS {
        return Err(Error::invalid(format!("cmc_check needs at least {CMC_MIN_POINTS} points")));
    }
    let estimates = points.par_iter().map(|x| mean_curvature(surface, x, step)).collect::<Result<Vec<_>>>()?;
    Ok(summarize(estimates, tol))
}

fn summarize(estimates: Vec<f64>, tol: f64) -> CmcReport {
    let value = estimates.iter().sum::<f64>() / estimates.len() as f64;
    let (lo, hi) = estimates.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &e| (a.min(e), b.max(e)));
    let spread = hi - lo;
    CmcReport { is_cmc: spread <= tol * (1.0 + value.abs()), value, spread, estimates, sign_convention: SIGN_CONVENTION.into() }
}

/// φ sampled on a uniform grid; `values` is row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedGraph {
    pub axes: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl TabulatedGraph {
    /// Rows (x₁, …, x_{n−1}, φ) in any order, covering a full uniform grid.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::invalid("empty table"));
        };
        let m = first.len().saturating_sub(1);
        if m == 0 || rows.iter().any(|r| r.len() != m + 1) {
            return Err(Error::invalid("rows must all have n−1 coordinates and a value"));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut axes = Vec::with_capacity(m);
        for i in 0..m {
            let mut a: Vec<f64> = rows.iter().map(|r| r[i]).collect();
            a.sort_by(f64::total_cmp);
            a.dedup();
            if a.len() < 3 {
                return Err(Error::invalid(format!("axis {i} needs at least 3 grid values")));
            }
            let h = (a[a.len() - 1] - a[0]) / (a.len() - 1) as f64;
            if a.iter().enumerate().any(|(k, x)| (x - (a[0] + k as f64 * h)).abs() > 1e-9 * h.max(x.abs())) {
                return Err(Error::invalid(format!("axis {i} is not uniformly spaced")));
            }
            axes.push(a);
        }
        let total: usize = axes.iter().map(Vec::len).product();
        if total != rows.len() {
            return Err(Error::invalid(format!("{} rows for a grid of {total} nodes", rows.len())));
        }
        let mut values = vec![f64::NAN; total];
        for r in rows {
            let mut idx = 0;
            for (i, a) in axes.iter().enumerate() {
                let k = a.binary_search_by(|x| x.total_cmp(&r[i])).expect("coordinate is on its axis");
                idx = idx * a.len() + k;
            }
            if !values[idx].is_nan() {
                return Err(Error::invalid("duplicate grid node"));
            }
            values[idx] = r[m];
        }
        Ok(TabulatedGraph { axes, values })
    }

    fn at(&self, node: &[usize]) -> f64 {
        let idx = node.iter().zip(&self.axes).fold(0, |acc, (k, a)| acc * a.len() + k);
        self.values[idx]
    }

    fn spacing(&self, i: usize) -> f64 {
        self.axes[i][1] - self.axes[i][0]
    }

    /// (coordinates, H) at every node with a neighbour on both sides along each axis.
    pub fn interior_estimates(&self) -> Result<Vec<(Vec<f64>, f64)>> {
        let m = self.axes.len();
        let inner: Vec<usize> = self.axes.iter().map(|a| a.len() - 2).collect();
        let total: usize = inner.iter().product();
        let mut out = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let mut node = vec![0; m];
            for i in (0..m).rev() {
                node[i] = rem % inner[i] + 1;
                rem /= inner[i];
            }
            let moved = |moves: &[(usize, i64)]| {
                let mut nd = node.clone();
                for &(i, d) in moves {
                    nd[i] = (nd[i] as i64 + d) as usize;
                }
                self.at(&nd)
            };
            let f0 = self.at(&node);
            let grad = DVector::from_fn(m, |i, _| (moved(&[(i, 1)]) - moved(&[(i, -1)])) / (2.0 * self.spacing(i)));
            let mut hess = DMatrix::zeros(m, m);
            for i in 0..m {
                let hi = self.spacing(i);
                hess[(i, i)] = (moved(&[(i, 1)]) - 2.0 * f0 + moved(&[(i, -1)])) / (hi * hi);
                for j in 0..i {
                    let v = (moved(&[(i, 1), (j, 1)]) - moved(&[(i, 1), (j, -1)]) - moved(&[(i, -1), (j, 1)]) + moved(&[(i, -1), (j, -1)]))
                        / (4.0 * hi * self.spacing(j));
                    hess[(i, j)] = v;
                    hess[(j, i)] = v;
                }
            }
            let coords = node.iter().zip(&self.axes).map(|(k, a)| a[*k]).collect();
            out.push((coords, mean_curvature_from_derivatives(&grad, &hess)?));
        }
        Ok(out)
    }
}

/// [`cmc_check`] over the interior nodes of a table.
pub fn cmc_check_tabulated(graph: &TabulatedGraph, tol: f64) -> Result<CmcReport> {
    let est = graph.interior_estimates()?;
    if est.len() < CMC_MIN_POINTS {
        return Err(Error::invalid(format!("cmc_check needs at least {CMC_MIN_POINTS} interior nodes")));
    }
    Ok(summarize(est.into_iter().map(|(_, h)| h).collect(), tol))
}

/// Named graphs used by tests and the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceSpec {
    /// Level T = t of the future cone: √(t² + |x|²).
    Hyperboloid { t: f64 },
    /// Level T = t of the Misner wedge: √(t² + x₁²), constant in the other directions.
    MisnerLevel { t: f64 },
    /// Spacelike hyperplane; a translation-spacetime leaf when the slope vanishes.
    Plane {
        height: f64,
        #[serde(default)]
        slope: Vec<f64>,
    },
    /// Σ aᵢ sin(kᵢ·x + cᵢ) with seeded random modes.
    Bumpy { amplitude: f64, modes: usize, seed: u64 },
}

impl SurfaceSpec {
    /// The graph over [−half_width, half_width]^{n−1}.
    pub fn build(&self, n: usize, half_width: f64) -> Result<GraphSurface> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let m = n - 1;
        let (lo, hi) = (vec![-half_width; m], vec![half_width; m]);
        match self.clone() {
            SurfaceSpec::Hyperboloid { t } | SurfaceSpec::MisnerLevel { t } if t.is_nan() || t <= 0.0 => Err(Error::invalid("level t must be positive")),
            SurfaceSpec::Hyperboloid { t } => {
                let lip = half_width * (m as f64).sqrt() / (t * t + half_width * half_width * m as f64).sqrt();
                GraphSurface::new(move |x: &[f64]| (t * t + x.iter().map(|v| v * v).sum::<f64>()).sqrt(), lo, hi, lip)
            }
            SurfaceSpec::MisnerLevel { t } => {
                let lip = half_width / (t * t + half_width * half_width).sqrt();
                GraphSurface::new(move |x: &[f64]| (t * t + x[0] * x[0]).sqrt(), lo, hi, lip)
            }
            SurfaceSpec::Plane { height, slope } => {
                let slope = if slope.is_empty() { vec![0.0; m] } else { slope };
                if slope.len() != m {
                    return Err(Error::DimensionMismatch { expected: m, found: slope.len() });
                }
                let lip = slope.iter().map(|s| s * s).sum::<f64>().sqrt();
                if lip >= 1.0 {
                    return Err(Error::invalid("plane is not spacelike"));
                }
                GraphSurface::new(move |x: &[f64]| height + x.iter().zip(&slope).map(|(a, b)| a * b).sum::<f64>(), lo, hi, lip)
            }
            SurfaceSpec::Bumpy { amplitude, modes, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let waves: Vec<(f64, Vec<f64>, f64)> = (0..modes.max(1))
                    .map(|_| {
                        let k: Vec<f64> = (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect();
                        (amplitude * rng.gen_range(0.5..1.0), k, rng.gen_range(0.0..std::f64::consts::TAU))
                    })
                    .collect();
                let lip: f64 = waves.iter().map(|(a, k, _)| a.abs() * k.iter().map(|v| v * v).sum::<f64>().sqrt()).sum();
                if lip >= 1.0 {
                    return Err(Error::invalid("bumps too steep to be spacelike"));
                }
                GraphSurface::new(
                    move |x: &[f64]| waves.iter().map(|(a, k, c)| a * (k.iter().zip(x).map(|(ki, xi)| ki * xi).sum::<f64>() + c).sin()).sum(),
                    lo,
                    hi,
                    lip,
                )
            }
        }
    }

    /// Closed-form H where one exists.
    pub fn exact_mean_curvature(&self, n: usize) -> Option<f64> {
        match self {
            SurfaceSpec::Hyperboloid { t } => Some(1.0 / t),
            SurfaceSpec::MisnerLevel { t } => Some(1.0 / ((n - 1) as f64 * t)),
            SurfaceSpec::Plane { .. } => Some(0.0),
            SurfaceSpec::Bumpy { .. } => None,
        }
    }
}

/// Equally spaced grid of `per_axis`^{n−1} points filling a fraction of the box.
pub fn grid_points(surface: &GraphSurface, per_axis: usize, fill: f64) -> Vec<Vec<f64>> {
    let m = surface.space_dim();
    let total = per_axis.pow(m as u32);
    (0..total)
        .map(|idx| {
            let mut rem = idx;
            (0..m)
                .map(|i| {
                    let k = rem % per_axis;
                    rem /= per_axis;
                    let centre = 0.5 * (surface.lo[i] + surface.hi[i]);
                    let half = 0.5 * fill * (surface.hi[i] - surface.lo[i]);
                    let f = if per_axis == 1 { 0.0 } else { 2.0 * k as f64 / (per_axis - 1) as f64 - 1.0 };
                    centre + f * half
                })
                .collect()
        })
        .collect()
}
