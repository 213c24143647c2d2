//! Extension of a symmetric map T: E → ℝᵈ (E ⊆ ℝᵈ) to a symmetric T̂ on ℝᵈ
//! keeping the bound that defines the unipotent interval (y₋, y₊).

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtCase {
    /// y₊ = −y₋ finite: |y₊T(u)| ≤ |u|.
    Bounded,
    /// y₊ = +∞: ⟨u|T(u)⟩ ≥ −y₋|T(u)|², with y₋ < 0.
    FutureInfinite,
    /// y₋ = −∞: ⟨u|T(u)⟩ ≤ −y₊|T(u)|², with y₊ > 0.
    PastInfinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymExtProblem {
    /// Orthonormal basis of E.
    pub basis: Vec<Vec<f64>>,
    /// T of each basis vector.
    pub images: Vec<Vec<f64>>,
    pub case: ExtCase,
    /// y₊ for bounded and past cases, y₋ for the future case.
    pub bound: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    1e-9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymExtResult {
    /// Row-major T̂.
    pub operator: Vec<Vec<f64>>,
    pub symmetry_residual: f64,
    pub restriction_residual: f64,
    /// Smallest eigenvalue of the bound form; nonnegative when the bound holds.
    pub bound_margin: f64,
    /// Values of k used by the limit scheme, when ‖T₀‖ = 1.
    pub shrink_steps: Option<Vec<usize>>,
}

/// Largest k of the shrink-and-limit scheme.
pub const SHRINK_K: usize = 64;
/// Successive Richardson values must agree to this.
pub const SHRINK_ACCEPT: f64 = 1e-8;

struct Data {
    u: DMatrix<f64>,
    m: DMatrix<f64>,
    d: usize,
}

impl SymExtProblem {
    fn data(&self) -> Result<Data> {
        let k = self.basis.len();
        if k == 0 || self.images.len() != k {
            return Err(Error::invalid("E needs a basis and one image per basis vector"));
        }
        let d = self.basis[0].len();
        if self.basis.iter().chain(&self.images).any(|v| v.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: 0 });
        }
        let u = DMatrix::from_fn(d, k, |r, c| self.basis[c][r]);
        let m = DMatrix::from_fn(d, k, |r, c| self.images[c][r]);
        if (u.transpose() * &u - DMatrix::identity(k, k)).amax() > self.tol {
            return Err(Error::invalid("basis of E is not orthonormal"));
        }
        Ok(Data { u, m, d })
    }

    /// Residual of ⟨u|Tu′⟩ = ⟨u′|Tu⟩ on E.
    pub fn symmetry_residual(&self) -> Result<f64> {
        let data = self.data()?;
        let t0 = data.u.transpose() * &data.m;
        Ok((&t0 - t0.transpose()).amax())
    }

    /// Validates the input invariants.
    pub fn validate(&self) -> Result<()> {
        let data = self.data()?;
        if !(self.bound.is_finite() && self.tol > 0.0) {
            return Err(Error::invalid("bound must be finite"));
        }
        match self.case {
            ExtCase::Bounded | ExtCase::PastInfinite if self.bound <= 0.0 => return Err(Error::invalid("y₊ must be positive")),
            ExtCase::FutureInfinite if self.bound >= 0.0 => return Err(Error::invalid("y₋ must be negative")),
            _ => {}
        }
        if self.symmetry_residual()? > self.tol {
            return Err(Error::invalid("T is not symmetric on E"));
        }
        let margin = bound_margin(self.case, self.bound, &data.u.transpose() * &data.m, &data.m)?;
        if margin < -self.tol {
            return Err(Error::invalid(format!("T violates the bound on E (margin {margin:.3e})")));
        }
        Ok(())
    }
}

/// Smallest eigenvalue of the bound form restricted to the columns: with S = QᵀT̂Q
/// and G = (T̂Q)ᵀ(T̂Q), the form is 1/y₊² − G (bounded), S + y₋G (future) or
/// −y₊G − S (past), scaled to be dimensionless.
fn bound_margin(case: ExtCase, y: f64, s: DMatrix<f64>, tq: &DMatrix<f64>) -> Result<f64> {
    let g = tq.transpose() * tq;
    let k = g.nrows();
    let s = 0.5 * (&s + s.transpose());
    let form = match case {
        ExtCase::Bounded => DMatrix::identity(k, k) - g * (y * y),
        ExtCase::FutureInfinite => s * y.abs() + g * (y * y.abs()),
        ExtCase::PastInfinite => -(g * (y * y)) - s * y,
    };
    let (ev, _) = linalg::sym_eigen(&form)?;
    Ok(ev.into_iter().fold(f64::INFINITY, f64::min))
}

/// Q(λ, v) = λ|v|² − ⟨(λ − T₀)⁻¹B′v | B′v⟩ as a matrix on E⊥ (v in W-coordinates).
fn q_form(lambda: f64, t0: &DMatrix<f64>, bp: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let k = t0.nrows();
    let shifted = DMatrix::identity(k, k) * lambda - t0;
    let inv = shifted.try_inverse().ok_or_else(|| Error::numerical("λ − T₀ is singular"))?;
    let m = bp.ncols();
    Ok(DMatrix::identity(m, m) * lambda - bp.transpose() * inv * bp)
}

/// Bounded case with y₊ normalised to 1 and ‖T₀‖ < 1.
fn bounded_extension(u: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let w = linalg::complement(u, 1e-10);
    let t0 = u.transpose() * m;
    let t0 = 0.5 * (&t0 + t0.transpose());
    if w.ncols() == 0 {
        return Ok(u * t0 * u.transpose());
    }
    // B: E → E⊥ and its dual B′: E⊥ → E
    let b = w.transpose() * m;
    let bp = b.transpose();
    let z = 0.5 * (q_form(-1.0, &t0, &bp)? + q_form(1.0, &t0, &bp)?);
    let z = 0.5 * (&z + z.transpose());
    Ok(u * &t0 * u.transpose() + u * &bp * w.transpose() + &w * &b * u.transpose() + &w * z * w.transpose())
}

/// (1 − 1/k)T for k = 2, 3, …, SHRINK_K, extrapolated to h = 1/k → 0 by Neville's
/// scheme; stops when two successive extrapolants agree.
fn shrink_and_limit(u: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<usize>)> {
    let mut hs: Vec<f64> = Vec::new();
    let mut row: Vec<DMatrix<f64>> = Vec::new();
    for k in 2..=SHRINK_K {
        let h = 1.0 / k as f64;
        let mut next = vec![bounded_extension(u, &(m * (1.0 - h)))?];
        for j in 1..=row.len() {
            let hj = hs[hs.len() - j];
            let step = (&next[j - 1] - &row[j - 1]) * (h / (hj - h));
            next.push(&next[j - 1] + step);
        }
        hs.push(h);
        let settled = row.last().is_some_and(|p| (next.last().expect("nonempty") - p).amax() <= SHRINK_ACCEPT);
        row = next;
        if settled {
            return Ok((row.pop().expect("nonempty"), (2..=k).collect()));
        }
    }
    Err(Error::numerical("shrink-and-limit did not settle by k = 64"))
}

/// Infinite cases: T̂ = T on K⊥ ∩ E and 0 on F⊥, with K = ker T, F = Im T.
fn infinite_extension(u: &DMatrix<f64>, m: &DMatrix<f64>, d: usize, y: f64, tol: f64) -> Result<DMatrix<f64>> {
    let k = u.ncols();
    let scale = 1.0 + m.amax();
    let svd = linalg::svd_sorted(m);
    let theta = tol * scale;
    let rank = svd.sigma.iter().filter(|&&x| x > theta).count();
    let ker_c = svd.v.columns(rank, k - rank).into_owned();
    let image = svd.u.columns(0, rank).into_owned();
    let f_perp = linalg::complement(&image, 1e-10);
    // K ⊆ E ∩ F⊥ = U·ker(T₀) always; equality is a rank count. On K⊥, T₀ ≥ |y|σ_min²
    // by the case bound, which fixes the matching threshold.
    let t0 = u.transpose() * m;
    let (ev, _) = linalg::sym_eigen(&(0.5 * (&t0 + t0.transpose())))?;
    let t0_rank = ev.iter().filter(|e| e.abs() > (0.5 * y.abs() * theta * theta).max(1e-13 * scale)).count();
    if t0_rank != rank {
        return Err(Error::invalid("ker T differs from E ∩ (Im T)⊥"));
    }
    // K⊥ inside E
    let kperp_c = if ker_c.ncols() == 0 { DMatrix::identity(k, k) } else { linalg::complement(&ker_c, 1e-10) };
    let kperp = u * &kperp_c;
    let cols = kperp.ncols() + f_perp.ncols();
    if cols != d {
        return Err(Error::invalid("K⊥ ⊕ F⊥ does not span the space"));
    }
    let mut basis = DMatrix::zeros(d, d);
    basis.view_mut((0, 0), (d, kperp.ncols())).copy_from(&kperp);
    basis.view_mut((0, kperp.ncols()), (d, f_perp.ncols())).copy_from(&f_perp);
    let mut images = DMatrix::zeros(d, d);
    images.view_mut((0, 0), (d, kperp.ncols())).copy_from(&(m * &kperp_c));
    let inv = basis.try_inverse().ok_or_else(|| Error::invalid("K⊥ and F⊥ are not transverse"))?;
    Ok(images * inv)
}

/// T̂ on ℝᵈ, symmetric, equal to T on E and obeying the case bound.
pub fn symmetric_extension(problem: &SymExtProblem) -> Result<SymExtResult> {
    problem.validate()?;
    let Data { u, m, d } = problem.data()?;
    let tol = problem.tol;
    let (t_hat, shrink_steps) = match problem.case {
        ExtCase::Bounded => {
            let y = problem.bound;
            let mn = &m * y;
            let t0 = u.transpose() * &mn;
            let (ev, _) = linalg::sym_eigen(&(0.5 * (&t0 + t0.transpose())))?;
            let norm0 = ev.iter().fold(0.0f64, |a, e| a.max(e.abs()));
            let (ext, steps) = if norm0 >= 1.0 - tol { shrink_and_limit(&u, &mn).map(|(e, s)| (e, Some(s)))? } else { (bounded_extension(&u, &mn)?, None) };
            (ext / y, steps)
        }
        ExtCase::FutureInfinite | ExtCase::PastInfinite => (infinite_extension(&u, &m, d, problem.bound, tol)?, None),
    };
    let symmetry_residual = (&t_hat - t_hat.transpose()).amax();
    let restriction_residual = (&t_hat * &u - &m).amax();
    let bound_margin = bound_margin(problem.case, problem.bound, t_hat.clone(), &t_hat)?;
    if symmetry_residual > 1e-10 * (1.0 + m.amax()) || restriction_residual > 1e-10 * (1.0 + m.amax()) || bound_margin < -tol.max(1e-8) {
        return Err(Error::numerical(format!(
            "construction failed: symmetry {symmetry_residual:.2e}, restriction {restriction_residual:.2e}, bound margin {bound_margin:.2e}"
        )));
    }
    Ok(SymExtResult { operator: crate::mink::matrix_to_rows(&t_hat), symmetry_residual, restriction_residual, bound_margin, shrink_steps })
}

/// Random orthogonal d×d matrix (QR of a uniform matrix).
fn random_orthogonal<R: Rng>(rng: &mut R, d: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0)).qr().q()
}

/// Valid random instance: T is the restriction to a random k-dimensional E of a
/// symmetric operator whose spectrum obeys the case bound. With `saturate`, an
/// eigenvector of eigenvalue ±1/y₊ lies in E (bounded case only). Some
/// eigenvalues are set to zero to exercise kernels.
pub fn random_problem<R: Rng>(rng: &mut R, case: ExtCase, d: usize, k: usize, bound: f64, saturate: bool) -> SymExtProblem {
    let q = random_orthogonal(rng, d);
    let top = 1.0 / bound.abs();
    let mut ev: Vec<f64> = (0..d)
        .map(|_| {
            if rng.gen_bool(0.2) {
                return 0.0;
            }
            match case {
                ExtCase::Bounded => rng.gen_range(-top..=top),
                ExtCase::FutureInfinite => rng.gen_range(0.0..=top),
                ExtCase::PastInfinite => rng.gen_range(-top..=0.0),
            }
        })
        .collect();
    if saturate {
        ev[0] = if rng.r#gen() { top } else { -top };
    }
    let t_hat = &q * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(ev)) * q.transpose();
    let u = q.columns(0, k) * random_orthogonal(rng, k);
    let m = &t_hat * &u;
    SymExtProblem {
        basis: (0..k).map(|c| u.column(c).iter().copied().collect()).collect(),
        images: (0..k).map(|c| m.column(c).iter().copied().collect()).collect(),
        case,
        bound,
        tol: 1e-9,
    }
}
