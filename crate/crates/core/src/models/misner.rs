//! Misner spacetimes: quotients of the wedge Ω = {xy < 0, x > 0} by discrete
//! subgroups of G₀ (boosts of the (x, y)-plane times translations in z).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{null_coords, null_point};
use crate::achronal::iterate_oracle;
use crate::domain::{cosmological_time, misner_wedge, CtOptions, LambdaSet};
use crate::error::{Error, Result};
use crate::mink::{Isometry, MinkVector};

/// Element of G₀: (x, y, z) ↦ (e^b x, e^{−b} y, z + w).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisnerElement {
    pub boost: f64,
    pub translation: Vec<f64>,
}

impl MisnerElement {
    pub fn pure_boost(boost: f64, n: usize) -> Self {
        MisnerElement { boost, translation: vec![0.0; n - 2] }
    }

    pub fn isometry(&self) -> Isometry {
        let n = self.translation.len() + 2;
        let mut tau = DVector::zeros(n);
        tau.rows_mut(2, n - 2).copy_from_slice(&self.translation);
        Isometry::boost(n, 1, self.boost).with_translation(&MinkVector(tau))
    }

    pub fn apply(&self, p: &MinkVector) -> MinkVector {
        let (x, y, mut z) = null_coords(p);
        for (zi, wi) in z.iter_mut().zip(&self.translation) {
            *zi += wi;
        }
        null_point(self.boost.exp() * x, (-self.boost).exp() * y, &z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisnerModel {
    pub dim: usize,
    pub t0: f64,
    /// Further generators besides γ₀.
    pub lattice: Vec<MisnerElement>,
}

/// Orbit sampling depth of the spacelike-orbit validation.
pub const ORBIT_CHECK_Q: u32 = 50;

impl MisnerModel {
    pub fn generators(&self) -> Vec<MisnerElement> {
        let mut g = vec![MisnerElement::pure_boost(self.t0, self.dim)];
        g.extend(self.lattice.iter().cloned());
        g
    }

    pub fn contains(&self, p: &MinkVector) -> bool {
        let (x, y, _) = null_coords(p);
        x > 0.0 && y < 0.0
    }

    /// x = e^{η+ν}, y = −e^{η−ν}.
    pub fn chart(&self, eta: f64, nu: f64, z: &[f64]) -> MinkVector {
        null_point((eta + nu).exp(), -(eta - nu).exp(), z)
    }

    pub fn chart_inverse(&self, p: &MinkVector) -> Result<(f64, f64, Vec<f64>)> {
        if !self.contains(p) {
            return Err(Error::invalid("point outside the Misner wedge"));
        }
        let (x, y, z) = null_coords(p);
        let (lx, ly) = (x.ln(), (-y).ln());
        Ok((0.5 * (lx + ly), 0.5 * (lx - ly), z))
    }

    /// Metric e^{2η}(−2dη² + 2dν² + e^{−2η}dz²) in the coordinates (η, ν, z).
    pub fn metric(&self, eta: f64) -> DMatrix<f64> {
        let w = (2.0 * eta).exp();
        let mut g = DMatrix::identity(self.dim, self.dim);
        g[(0, 0)] = -2.0 * w;
        g[(1, 1)] = 2.0 * w;
        g
    }

    /// The element acting in the chart: (η, ν, z) ↦ (η, ν + b, z + w).
    pub fn chart_shift(&self, g: &MisnerElement) -> (f64, Vec<f64>) {
        (g.boost, g.translation.clone())
    }

    pub fn lambda(&self) -> LambdaSet {
        misner_wedge(self.dim)
    }

    /// Cosmological time of Ω, equal to √(−2xy).
    pub fn cosmological_time(&self, p: &MinkVector) -> Result<f64> {
        Ok(cosmological_time(&self.lambda(), p, &CtOptions::default())?.t)
    }
}

/// Validated Misner model; `samples` are points of Ω on which every generator
/// orbit must be spacelike.
pub fn build_misner(dim: usize, t0: f64, lattice: Vec<MisnerElement>, samples: &[MinkVector], tol: f64) -> Result<MisnerModel> {
    if dim < 2 {
        return Err(Error::invalid("Misner spacetimes need dimension at least 2"));
    }
    if t0 == 0.0 || !t0.is_finite() {
        return Err(Error::invalid("t0 must be a nonzero finite number"));
    }
    for g in &lattice {
        if g.translation.len() != dim - 2 {
            return Err(Error::DimensionMismatch { expected: dim - 2, found: g.translation.len() });
        }
    }
    let model = MisnerModel { dim, t0, lattice };
    let gens: Vec<Isometry> = model.generators().iter().map(|g| g.isometry()).collect();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            if !a.compose(b).approx_eq(&b.compose(a), tol) {
                return Err(Error::invalid("lattice elements do not commute"));
            }
        }
    }
    for p in samples {
        if !model.contains(p) {
            return Err(Error::invalid("sample point outside the Misner wedge"));
        }
        for g in &gens {
            let rep = iterate_oracle(g, p, ORBIT_CHECK_Q, tol)?;
            if !rep.achronal {
                return Err(Error::invalid(format!("orbit of {:?} is not spacelike", p.as_slice())));
            }
        }
    }
    Ok(model)
}
