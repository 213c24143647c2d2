//! Lightlike affine hyperplanes 𝒥⁺ ≈ 𝒮⁺ × ℝ and the action of isometries on them.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ip;
use crate::mink::{Isometry, MinkVector};

const SPHERE_STEP: f64 = 1e-5;

/// Lightlike hyperplane {⟨x|v⟩ = s} with v future, N(v) = 1. Its future half-space
/// is {⟨x|v⟩ < s}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightPlane {
    pub v: MinkVector,
    pub s: f64,
}

impl LightPlane {
    /// Validates a plane already in normal form.
    pub fn new(v: MinkVector, s: f64, tol: f64) -> Result<Self> {
        if !s.is_finite() || !v.is_finite() {
            return Err(Error::NonFinite);
        }
        let nv = v.norm();
        if (nv - 1.0).abs() > tol.max(1e-12) * 10.0 {
            return Err(Error::invalid(format!("direction has N(v) = {nv}, expected 1")));
        }
        if v.sq().abs() > tol.max(1e-12) * 10.0 {
            return Err(Error::invalid("direction is not lightlike"));
        }
        if v.0[0] <= 0.0 {
            return Err(Error::invalid("direction is not future oriented"));
        }
        Ok(LightPlane { v, s })
    }

    /// Normalises an arbitrary lightlike direction and keeps s as the level of the
    /// normalised direction.
    pub fn from_direction(w: &MinkVector, s: f64, tol: f64) -> Result<Self> {
        Ok(LightPlane { v: normalize_direction(w, tol)?, s })
    }

    /// The plane with direction v passing through the point p.
    pub fn through(v: &MinkVector, p: &MinkVector, tol: f64) -> Result<Self> {
        let v = normalize_direction(v, tol)?;
        let s = ip(&v.0, &p.0);
        Ok(LightPlane { v, s })
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    /// ⟨x|v⟩ − s; negative in the future half-space.
    pub fn level(&self, x: &DVector<f64>) -> f64 {
        ip(x, &self.v.0) - self.s
    }

    pub fn in_future(&self, x: &MinkVector) -> bool {
        self.level(&x.0) < 0.0
    }

    pub fn in_past(&self, x: &MinkVector) -> bool {
        self.level(&x.0) > 0.0
    }

    /// Spatial coordinates of δ⁺(P) (on the sphere of radius 1/√2) followed by s.
    pub fn sphere_coords(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.v.as_slice()[1..].to_vec();
        out.push(self.s);
        out
    }

    pub fn approx_eq(&self, other: &LightPlane, tol: f64) -> bool {
        let dv = (&self.v.0 - &other.v.0).amax();
        dv <= tol && (self.s - other.s).abs() <= tol * (1.0 + self.s.abs().max(other.s.abs()))
    }
}

/// ±w/N(w), oriented to the future.
pub fn normalize_direction(w: &MinkVector, tol: f64) -> Result<MinkVector> {
    let nw = w.norm();
    if !w.is_finite() {
        return Err(Error::NonFinite);
    }
    if nw == 0.0 {
        return Err(Error::invalid("zero direction"));
    }
    if w.sq().abs() > tol.max(1e-12) * 10.0 * nw * nw {
        return Err(Error::invalid("direction is not lightlike"));
    }
    let sign = if w.0[0] > 0.0 { 1.0 } else { -1.0 };
    Ok(MinkVector(&w.0 * (sign / nw)))
}

/// g.(v, s) = (L v / N(L v), (s + ⟨τ|L v⟩) / N(L v)).
pub fn act_on_j(g: &Isometry, p: &LightPlane) -> LightPlane {
    let lv = g.linear() * &p.v.0;
    let nl = lv.norm();
    let s = (p.s + ip(g.tau(), &lv)) / nl;
    LightPlane { v: MinkVector(lv / nl), s }
}

/// a(g, v) = 1 / N(L v).
pub fn expansion_factor(g: &Isometry, v: &MinkVector) -> f64 {
    1.0 / (g.linear() * &v.0).norm()
}

fn project_to_sphere(l: &nalgebra::DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
    let w = l * v;
    let nw = w.norm();
    w / nw
}

/// Local Lipschitz constant at v of the conformal action of L on 𝒮⁺, estimated by
/// central differences of step 1e−5 along an orthonormal tangent frame.
pub fn conformal_derivative(g: &Isometry, v: &MinkVector) -> f64 {
    let n = v.dim();
    let l = g.linear();
    let omega: DVector<f64> = v.0.rows(1, n - 1).into_owned();
    let omega = &omega / omega.norm();
    let h = SPHERE_STEP;
    let mut best: f64 = 0.0;
    for k in 0..(n - 1) {
        // Gram–Schmidt a tangent direction from the k-th spatial axis
        let mut xi = DVector::<f64>::zeros(n - 1);
        xi[k] = 1.0;
        xi -= &omega * omega.dot(&xi);
        let nx = xi.norm();
        if nx < 0.5 {
            continue;
        }
        xi /= nx;
        let point = |t: f64| {
            let sp = &omega * t.cos() + &xi * t.sin();
            let mut w = DVector::zeros(n);
            w[0] = 1.0;
            w.rows_mut(1, n - 1).copy_from(&sp);
            w / std::f64::consts::SQRT_2
        };
        let a = project_to_sphere(l, &point(h));
        let b = project_to_sphere(l, &point(-h));
        let chord_image = (a - b).norm();
        let chord = std::f64::consts::SQRT_2 * h.sin();
        best = best.max(chord_image / chord);
    }
    best
}

/// True iff the conformal action of L(g) on 𝒮⁺ expands at v.
pub fn is_expanding_at(g: &Isometry, v: &MinkVector) -> Result<bool> {
    if g.tau().amax() != 0.0 {
        return Err(Error::invalid("expansion domain is defined for linear isometries"));
    }
    Ok(conformal_derivative(g, v) > 1.0 + 1e-8)
}
