//! Minkowski space **M**ⁿ: vectors, the form ⟨·|·⟩ of signature (−,+,…,+),
//! causal characters and affine isometries with linear part in SO₀(1,n−1).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const MIN_DIM: usize = 3;

/// Point or vector of **M**ⁿ; component 0 is time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct MinkVector(pub DVector<f64>);

impl From<Vec<f64>> for MinkVector {
    fn from(v: Vec<f64>) -> Self {
        MinkVector(DVector::from_vec(v))
    }
}

impl From<MinkVector> for Vec<f64> {
    fn from(v: MinkVector) -> Self {
        v.0.as_slice().to_vec()
    }
}

impl From<DVector<f64>> for MinkVector {
    fn from(v: DVector<f64>) -> Self {
        MinkVector(v)
    }
}

impl MinkVector {
    pub fn new(coords: &[f64]) -> Self {
        MinkVector(DVector::from_column_slice(coords))
    }

    pub fn zeros(n: usize) -> Self {
        MinkVector(DVector::zeros(n))
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        MinkVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Euclidean norm N.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// ⟨x|x⟩.
    pub fn sq(&self) -> f64 {
        linalg::ip(&self.0, &self.0)
    }

    pub fn dot(&self, other: &MinkVector) -> Result<f64> {
        mink_product(self, other)
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.dim() });
        }
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(())
    }
}

pub fn mink_product(x: &MinkVector, y: &MinkVector) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    if x.dim() == 0 {
        return Err(Error::invalid("empty vector"));
    }
    Ok(linalg::ip(&x.0, &y.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalKind {
    Spacelike,
    Timelike,
    Lightlike,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeOrientation {
    Future,
    Past,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CausalCharacter {
    pub kind: CausalKind,
    pub orientation: TimeOrientation,
}

/// Sign of ⟨x|x⟩ with dead-band ±tol·N(x)². A vector with N(x) ≤ tol is zero.
pub fn causal_character(x: &MinkVector, tol: f64) -> CausalCharacter {
    causal_character_raw(&x.0, tol)
}

pub(crate) fn causal_character_raw(x: &DVector<f64>, tol: f64) -> CausalCharacter {
    let n2 = x.norm_squared();
    if n2.sqrt() <= tol {
        return CausalCharacter { kind: CausalKind::Zero, orientation: TimeOrientation::None };
    }
    let q = linalg::ip(x, x);
    let kind = if q > tol * n2 {
        CausalKind::Spacelike
    } else if q < -tol * n2 {
        CausalKind::Timelike
    } else {
        CausalKind::Lightlike
    };
    let orientation = match kind {
        CausalKind::Spacelike | CausalKind::Zero => TimeOrientation::None,
        _ if x[0] > 0.0 => TimeOrientation::Future,
        _ => TimeOrientation::Past,
    };
    CausalCharacter { kind, orientation }
}

/// Affine isometry x ↦ L x + τ with L ∈ SO₀(1,n−1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IsometryData", into = "IsometryData")]
pub struct Isometry {
    l: DMatrix<f64>,
    tau: DVector<f64>,
}

/// Row-major JSON form `{"L": [[…]], "tau": […]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsometryData {
    #[serde(rename = "L")]
    pub l: Vec<Vec<f64>>,
    pub tau: Vec<f64>,
}

impl TryFrom<IsometryData> for Isometry {
    type Error = Error;
    fn try_from(d: IsometryData) -> Result<Self> {
        let l = matrix_from_rows(&d.l)?;
        Isometry::new(l, DVector::from_vec(d.tau), DEFAULT_TOL)
    }
}

impl From<Isometry> for IsometryData {
    fn from(g: Isometry) -> Self {
        IsometryData { l: matrix_to_rows(&g.l), tau: g.tau.as_slice().to_vec() }
    }
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::invalid("ragged matrix rows"));
    }
    if r != c {
        return Err(Error::NotSquare { rows: r, cols: c });
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Residual max|LᵀηL − η| divided by max(1, max|L|²).
pub fn lorentz_residual(l: &DMatrix<f64>) -> f64 {
    let n = l.nrows();
    let e = linalg::eta(n);
    let r = l.transpose() * &e * l - &e;
    let s = linalg::max_abs(l).max(1.0);
    linalg::max_abs(&r) / (s * s)
}

impl Isometry {
    /// Validates L ∈ SO₀(1,n−1) and builds the isometry.
    pub fn new(l: DMatrix<f64>, tau: DVector<f64>, tol: f64) -> Result<Self> {
        let (r, c) = l.shape();
        if r != c {
            return Err(Error::NotSquare { rows: r, cols: c });
        }
        if r < MIN_DIM {
            return Err(Error::DimensionTooSmall(r));
        }
        if tau.len() != r {
            return Err(Error::DimensionMismatch { expected: r, found: tau.len() });
        }
        if l.iter().chain(tau.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let residual = lorentz_residual(&l);
        if residual > tol {
            return Err(Error::NotLorentz { residual });
        }
        if l[(0, 0)] <= 0.0 {
            return Err(Error::TimeReversing);
        }
        if l.determinant() <= 0.0 {
            return Err(Error::OrientationReversing);
        }
        Ok(Isometry { l, tau })
    }

    pub fn from_rows(rows: &[Vec<f64>], tau: &[f64], tol: f64) -> Result<Self> {
        Isometry::new(matrix_from_rows(rows)?, DVector::from_column_slice(tau), tol)
    }

    pub fn identity(n: usize) -> Self {
        Isometry { l: DMatrix::identity(n, n), tau: DVector::zeros(n) }
    }

    pub fn translation(tau: &MinkVector) -> Self {
        let n = tau.dim();
        Isometry { l: DMatrix::identity(n, n), tau: tau.0.clone() }
    }

    /// Boost of rapidity ζ in the (x₀, x_axis) plane.
    pub fn boost(n: usize, axis: usize, zeta: f64) -> Self {
        assert!(axis >= 1 && axis < n);
        let mut l = DMatrix::identity(n, n);
        let (c, s) = (zeta.cosh(), zeta.sinh());
        l[(0, 0)] = c;
        l[(axis, axis)] = c;
        l[(0, axis)] = s;
        l[(axis, 0)] = s;
        Isometry { l, tau: DVector::zeros(n) }
    }

    /// Rotation by θ in the spatial (x_i, x_j) plane.
    pub fn rotation(n: usize, i: usize, j: usize, theta: f64) -> Self {
        assert!(i >= 1 && j >= 1 && i < n && j < n && i != j);
        let mut l = DMatrix::identity(n, n);
        let (c, s) = (theta.cos(), theta.sin());
        l[(i, i)] = c;
        l[(j, j)] = c;
        l[(i, j)] = -s;
        l[(j, i)] = s;
        Isometry { l, tau: DVector::zeros(n) }
    }

    pub fn with_translation(&self, tau: &MinkVector) -> Self {
        Isometry { l: self.l.clone(), tau: tau.0.clone() }
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    pub fn linear(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn translation_part(&self) -> MinkVector {
        MinkVector(self.tau.clone())
    }

    pub fn tau(&self) -> &DVector<f64> {
        &self.tau
    }

    pub fn act(&self, x: &MinkVector) -> MinkVector {
        MinkVector(self.act_raw(&x.0))
    }

    pub fn act_raw(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.l * x + &self.tau
    }

    /// (self ∘ h)(x) = self(h(x)).
    pub fn compose(&self, h: &Isometry) -> Isometry {
        Isometry { l: &self.l * &h.l, tau: &self.l * &h.tau + &self.tau }
    }

    pub fn inverse(&self) -> Isometry {
        let li = linalg::lorentz_inverse(&self.l);
        let tau = -(&li * &self.tau);
        Isometry { l: li, tau }
    }

    /// gᵏ by repeated squaring; negative k uses the inverse.
    pub fn pow(&self, k: i64) -> Isometry {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut result = Isometry::identity(self.dim());
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        result
    }

    /// h ∘ self ∘ h⁻¹.
    pub fn conjugate_by(&self, h: &Isometry) -> Isometry {
        h.compose(self).compose(&h.inverse())
    }

    /// Max-entry distance between the augmented matrices [L | τ].
    pub fn distance(&self, other: &Isometry) -> f64 {
        let dl = linalg::max_abs(&(&self.l - &other.l));
        let dt = (&self.tau - &other.tau).amax();
        dl.max(dt)
    }

    pub fn scale(&self) -> f64 {
        linalg::max_abs(&self.l).max(self.tau.amax()).max(1.0)
    }

    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        self.distance(other) <= tol * self.scale().max(other.scale())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_examples() {
        let e0 = MinkVector::new(&[1.0, 0.0, 0.0]);
        assert_eq!(mink_product(&e0, &e0).unwrap(), -1.0);
        let l = MinkVector::new(&[1.0, 1.0, 0.0]);
        assert_eq!(mink_product(&l, &l).unwrap(), 0.0);
        let a = MinkVector::new(&[1.0, 2.0, 0.0]);
        let b = MinkVector::new(&[3.0, 0.0, 1.0]);
        assert_eq!(mink_product(&a, &b).unwrap(), -3.0);
        let c = MinkVector::new(&[1.0, 2.0, 0.0, 0.0]);
        assert!(matches!(mink_product(&a, &c), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn characters() {
        let c = causal_character(&MinkVector::new(&[1.0, 0.0, 0.0]), DEFAULT_TOL);
        assert_eq!((c.kind, c.orientation), (CausalKind::Timelike, TimeOrientation::Future));
        let c = causal_character(&MinkVector::new(&[0.0, 1.0, 0.0]), DEFAULT_TOL);
        assert_eq!((c.kind, c.orientation), (CausalKind::Spacelike, TimeOrientation::None));
        let c = causal_character(&MinkVector::new(&[1.0, 1.0, 0.0]), DEFAULT_TOL);
        assert_eq!((c.kind, c.orientation), (CausalKind::Lightlike, TimeOrientation::Future));
        let c = causal_character(&MinkVector::new(&[-2.0, 0.0, 1.0]), DEFAULT_TOL);
        assert_eq!((c.kind, c.orientation), (CausalKind::Timelike, TimeOrientation::Past));
        let c = causal_character(&MinkVector::zeros(3), DEFAULT_TOL);
        assert_eq!(c.kind, CausalKind::Zero);
    }

    #[test]
    fn validation_errors_are_distinct() {
        let id = DMatrix::<f64>::identity(3, 3);
        assert!(Isometry::new(id.clone(), DVector::zeros(3), DEFAULT_TOL).is_ok());
        let mut t = id.clone();
        t[(0, 0)] = -1.0;
        assert_eq!(Isometry::new(t, DVector::zeros(3), DEFAULT_TOL), Err(Error::TimeReversing));
        let mut o = id.clone();
        o[(1, 1)] = -1.0;
        assert_eq!(Isometry::new(o, DVector::zeros(3), DEFAULT_TOL), Err(Error::OrientationReversing));
        let mut bad = id.clone();
        bad[(1, 2)] = 0.1;
        assert!(matches!(Isometry::new(bad, DVector::zeros(3), DEFAULT_TOL), Err(Error::NotLorentz { .. })));
        assert!(matches!(
            Isometry::new(DMatrix::identity(2, 2), DVector::zeros(2), DEFAULT_TOL),
            Err(Error::DimensionTooSmall(2))
        ));
        let b = Isometry::boost(4, 2, 1.3);
        assert!(Isometry::new(b.linear().clone(), DVector::from_element(4, 0.5), DEFAULT_TOL).is_ok());
    }

    #[test]
    fn group_operations() {
        let g = Isometry::boost(3, 1, 0.4)
            .compose(&Isometry::rotation(3, 1, 2, 0.3))
            .with_translation(&MinkVector::new(&[0.1, 0.2, -0.3]));
        let x = MinkVector::new(&[0.3, -1.0, 2.0]);
        assert_eq!(Isometry::identity(3).act(&x), x);
        assert!(g.compose(&g.inverse()).approx_eq(&Isometry::identity(3), 1e-12));
        let t1 = Isometry::translation(&MinkVector::new(&[1.0, 2.0, 3.0]));
        let t2 = Isometry::translation(&MinkVector::new(&[-1.0, 0.5, 0.0]));
        assert_eq!(t1.compose(&t2).tau().as_slice(), &[0.0, 2.5, 3.0]);
        assert!(g.pow(3).approx_eq(&g.compose(&g).compose(&g), 1e-12));
        assert!(g.pow(-2).approx_eq(&g.inverse().compose(&g.inverse()), 1e-12));
    }

    #[test]
    fn json_round_trip() {
        let g = Isometry::boost(3, 1, 0.5);
        let s = serde_json::to_string(&g).unwrap();
        let h: Isometry = serde_json::from_str(&s).unwrap();
        assert_eq!(g, h);
        let bad = r#"{"L": [[-1,0,0],[0,1,0],[0,0,1]], "tau": [0,0,0]}"#;
        assert!(serde_json::from_str::<Isometry>(bad).is_err());
    }
}
