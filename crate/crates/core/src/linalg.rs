//! Dense helpers on top of nalgebra: Minkowski form, SVD ranks, kernels and images.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

/// η = diag(−1, 1, …, 1).
pub fn eta(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::identity(n, n);
    m[(0, 0)] = -1.0;
    m
}

/// ⟨x|y⟩ for equal-length vectors.
#[inline]
pub fn ip(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut s = -x[0] * y[0];
    for i in 1..x.len() {
        s += x[i] * y[i];
    }
    s
}

#[inline]
pub fn ip_slice(x: &[f64], y: &[f64]) -> f64 {
    let mut s = -x[0] * y[0];
    for i in 1..x.len() {
        s += x[i] * y[i];
    }
    s
}

/// η x, the vector whose Euclidean product realises ⟨x|·⟩.
pub fn lower(x: &DVector<f64>) -> DVector<f64> {
    let mut y = x.clone();
    y[0] = -y[0];
    y
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, &b| a.max(b.abs()))
}

/// Singular value decomposition with singular values sorted in decreasing order.
/// `u` is m×min(m, n), `v` is n×n; `sigma` has n entries, zero-padded when m < n.
pub struct SortedSvd {
    pub sigma: Vec<f64>,
    pub u: DMatrix<f64>,
    pub v: DMatrix<f64>,
}

/// # Panics
/// If the decomposition fails to converge, which only happens for non-finite input.
pub fn svd_sorted(a: &DMatrix<f64>) -> SortedSvd {
    let (m, n) = a.shape();
    let k = m.min(n);
    let fa = to_faer(a);
    let svd = fa.svd().expect("SVD of a finite matrix");
    let s = svd.S().column_vector();
    let mut sigma: Vec<f64> = (0..k).map(|i| s[i]).collect();
    sigma.resize(n, 0.0);
    let (fu, fv) = (svd.U(), svd.V());
    let u = DMatrix::from_fn(m, k, |i, j| fu[(i, j)]);
    let v = DMatrix::from_fn(n, n, |i, j| fv[(i, j)]);
    SortedSvd { sigma, u, v }
}

fn to_faer(a: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Rank decision from singular values with a threshold relative to the largest one.
#[derive(Debug, Clone, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    /// Smallest kept over largest discarded singular value, the latter floored at
    /// machine epsilon times the largest.
    pub gap: f64,
    pub sigma: Vec<f64>,
}

pub fn rank_info(sigma: &[f64], rel: f64) -> RankInfo {
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return RankInfo { rank: 0, gap: f64::INFINITY, sigma: sigma.to_vec() };
    }
    let rank = sigma.iter().filter(|&&s| s > rel * smax).count();
    let floor = f64::EPSILON * smax;
    let kept = if rank > 0 { sigma[rank - 1] } else { floor };
    let discarded = sigma.get(rank).copied().unwrap_or(0.0).max(floor);
    RankInfo { rank, gap: kept / discarded, sigma: sigma.to_vec() }
}

/// Orthonormal basis (columns) of ker A.
pub fn kernel(a: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if a.nrows() == 0 || max_abs(a) == 0.0 {
        return DMatrix::identity(n, n);
    }
    let s = svd_sorted(a);
    let r = rank_info(&s.sigma, rel).rank;
    s.v.columns(r, n - r).into_owned()
}

/// Orthonormal basis of ker A, discarding singular values above an absolute threshold.
pub fn kernel_abs(a: &DMatrix<f64>, thr: f64) -> DMatrix<f64> {
    let n = a.ncols();
    let s = svd_sorted(a);
    let r = s.sigma.iter().filter(|&&x| x > thr).count();
    s.v.columns(r, n - r).into_owned()
}

/// Orthonormal basis (columns) of Im A.
pub fn image(a: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    if a.ncols() == 0 || max_abs(a) == 0.0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let s = svd_sorted(a);
    let r = rank_info(&s.sigma, rel).rank;
    s.u.columns(0, r).into_owned()
}

/// Euclidean-orthogonal projector onto the span of the orthonormal columns of `q`.
pub fn projector(q: &DMatrix<f64>) -> DMatrix<f64> {
    q * q.transpose()
}

/// Orthonormal basis of the Euclidean orthogonal complement of the columns of `q`.
pub fn complement(q: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    if q.ncols() == 0 {
        return DMatrix::identity(q.nrows(), q.nrows());
    }
    kernel(&q.transpose(), rel)
}

/// Intersection of two subspaces given by orthonormal column bases.
pub fn intersect(a: &DMatrix<f64>, b: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    let n = a.nrows();
    if a.ncols() == 0 || b.ncols() == 0 {
        return DMatrix::zeros(n, 0);
    }
    let mut stacked = DMatrix::zeros(n, a.ncols() + b.ncols());
    stacked.view_mut((0, 0), (n, a.ncols())).copy_from(a);
    stacked.view_mut((0, a.ncols()), (n, b.ncols())).copy_from(&(-b));
    let k = kernel(&stacked, rel);
    if k.ncols() == 0 {
        return DMatrix::zeros(n, 0);
    }
    let w = a * k.rows(0, a.ncols());
    image(&w, rel)
}

/// Least-squares solution of A x = b through the pseudo-inverse.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>, rel: f64) -> DVector<f64> {
    let s = svd_sorted(a);
    let r = rank_info(&s.sigma, rel).rank;
    let mut x = DVector::zeros(a.ncols());
    for i in 0..r {
        let c = s.u.column(i).dot(b) / s.sigma[i];
        x += s.v.column(i) * c;
    }
    x
}

pub fn mat_pow(m: &DMatrix<f64>, k: u32) -> DMatrix<f64> {
    let n = m.nrows();
    let mut result = DMatrix::identity(n, n);
    let mut base = m.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    result
}

/// Eigenvalues of a square matrix.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<DVector<Complex<f64>>> {
    let ev = to_faer(m)
        .eigenvalues()
        .map_err(|_| Error::numerical("eigenvalue iteration did not converge"))?;
    Ok(DVector::from_iterator(ev.len(), ev.iter().map(|z| Complex::new(z.re, z.im))))
}

/// Eigenvalues (nondecreasing) and orthonormal eigenvectors of a symmetric matrix.
pub fn sym_eigen(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    let sym = faer::Mat::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let e = sym
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::numerical("symmetric eigenvalue iteration did not converge"))?;
    let s = e.S().column_vector();
    let u = e.U();
    Ok(((0..n).map(|i| s[i]).collect(), DMatrix::from_fn(n, n, |i, j| u[(i, j)])))
}

/// Lorentzian inverse η Lᵀ η of a matrix in O(1,n−1).
pub fn lorentz_inverse(l: &DMatrix<f64>) -> DMatrix<f64> {
    let mut m = l.transpose();
    let n = m.nrows();
    for i in 1..n {
        m[(0, i)] = -m[(0, i)];
        m[(i, 0)] = -m[(i, 0)];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_wide_matrix_is_complete() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let k = kernel(&a, 1e-12);
        assert_eq!(k.ncols(), 2);
        assert!((&a * &k).norm() < 1e-14);
    }

    #[test]
    fn svd_reconstructs_rank_deficient_rotation_minus_identity() {
        let l = DMatrix::from_row_slice(3, 3, &[
            1.2504871289953248, 0.6711438526410214, -0.33657686914750645,
            -0.06862592971219414, -0.5485770276016252, -0.8389116538805674,
            0.7476687378472552, 1.0721461261066976, -0.6399306414202314,
        ]);
        let a = l - DMatrix::identity(3, 3);
        let s = svd_sorted(&a);
        let rebuilt = &s.u * DMatrix::from_diagonal(&DVector::from_row_slice(&s.sigma)) * s.v.transpose();
        assert!((rebuilt - &a).amax() < 1e-14);
        assert!(s.sigma[2] < 1e-14 && (s.sigma[0] - 2.251165).abs() < 1e-5);
    }

    #[test]
    fn eigenvalues_of_rotation() {
        let r = DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let mut args: Vec<f64> = eigenvalues(&r).unwrap().iter().map(|z| z.im.atan2(z.re)).collect();
        args.sort_by(f64::total_cmp);
        let h = std::f64::consts::FRAC_PI_2;
        assert!((args[0] + h).abs() < 1e-14 && args[1].abs() < 1e-14 && (args[2] - h).abs() < 1e-14);
    }

    #[test]
    fn rank_gap_uses_epsilon_floor() {
        let info = rank_info(&[2.0, 1.0, 0.0], 1e-8);
        assert_eq!(info.rank, 2);
        assert!((info.gap - 1.0 / (2.0 * f64::EPSILON)).abs() < 1.0);
    }

    #[test]
    fn lorentz_inverse_matches_inverse() {
        let (c, s) = (0.7f64.cosh(), 0.7f64.sinh());
        let l = DMatrix::from_row_slice(3, 3, &[c, s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
        let li = lorentz_inverse(&l);
        assert!((&l * &li - DMatrix::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn intersection_of_planes_is_a_line() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let b = DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let c = intersect(&a, &b, 1e-10);
        assert_eq!(c.ncols(), 1);
        assert!((c[(1, 0)].abs() - 1.0).abs() < 1e-12);
    }
}
