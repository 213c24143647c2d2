//! Dense primal active-set method for small convex quadratic programs
//! minimise ½xᵀHx + gᵀx subject to equalities and `a·x ≥ b` inequalities.
//!
//! H only needs to be positive semidefinite on the feasible directions; flat
//! directions of descent are followed as rays until a constraint blocks them.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone)]
pub struct QpProblem {
    pub h: DMatrix<f64>,
    pub g: DVector<f64>,
    /// Rows `c` and values `d` with `c·x = d`.
    pub eq: Vec<(DVector<f64>, f64)>,
    /// Rows `a` and values `b` with `a·x ≥ b`.
    pub ineq: Vec<(DVector<f64>, f64)>,
}

#[derive(Debug, Clone)]
pub struct QpSolution {
    pub x: DVector<f64>,
    pub objective: f64,
    /// Indices of inequalities in the final working set.
    pub active: Vec<usize>,
    /// Lagrange multipliers of `active`, all nonnegative at optimality.
    pub multipliers: Vec<f64>,
    pub iterations: usize,
}

impl QpProblem {
    pub fn objective(&self, x: &DVector<f64>) -> f64 {
        0.5 * x.dot(&(&self.h * x)) + self.g.dot(x)
    }

    /// Largest violation of the constraints at x.
    pub fn infeasibility(&self, x: &DVector<f64>) -> f64 {
        let e = self.eq.iter().map(|(c, d)| (c.dot(x) - d).abs()).fold(0.0, f64::max);
        let i = self.ineq.iter().map(|(a, b)| (b - a.dot(x)).max(0.0)).fold(0.0, f64::max);
        e.max(i)
    }

    fn working_rows(&self, active: &[usize]) -> DMatrix<f64> {
        let n = self.g.len();
        let rows = self.eq.len() + active.len();
        let mut m = DMatrix::zeros(rows, n);
        for (r, (c, _)) in self.eq.iter().enumerate() {
            m.set_row(r, &c.transpose());
        }
        for (k, &j) in active.iter().enumerate() {
            m.set_row(self.eq.len() + k, &self.ineq[j].0.transpose());
        }
        m
    }

    /// Solves from a feasible starting point.
    pub fn solve(&self, x0: &DVector<f64>) -> Result<QpSolution> {
        let n = self.g.len();
        if self.h.shape() != (n, n) || x0.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x0.len() });
        }
        let scale = 1.0 + x0.amax() + self.ineq.iter().map(|(_, b)| b.abs()).fold(0.0, f64::max);
        let feas_tol = 1e-10 * scale;
        if self.infeasibility(x0) > feas_tol {
            return Err(Error::invalid("starting point is infeasible"));
        }
        let mut x = x0.clone();
        let mut active: Vec<usize> = Vec::new();
        for (j, (a, b)) in self.ineq.iter().enumerate() {
            if (a.dot(&x) - b).abs() <= feas_tol && self.independent(&active, j) {
                active.push(j);
            }
        }
        let max_iter = 50 * (n + self.ineq.len()) + 100;
        // set after an unblocked Newton step: x minimises on the working subspace
        let mut stationary = false;
        for it in 0..max_iter {
            let grad = &self.h * &x + &self.g;
            let rows = self.working_rows(&active);
            let z = if rows.nrows() == 0 { DMatrix::identity(n, n) } else { linalg::kernel(&rows, 1e-12) };
            let (step, ray) = if stationary { (DVector::zeros(n), false) } else { self.reduced_step(&z, &grad)? };
            stationary = false;
            let pnorm = step.norm();
            if !ray && pnorm <= 1e-12 * (1.0 + x.norm()) {
                let lambda = linalg::lstsq(&rows.transpose(), &grad, 1e-12);
                let mult: Vec<f64> = (0..active.len()).map(|k| lambda[self.eq.len() + k]).collect();
                // Bland: release the lowest-index constraint with a negative multiplier
                let thr = -1e-10 * (1.0 + grad.norm());
                let release = (0..active.len()).filter(|&k| mult[k] < thr).min_by_key(|&k| active[k]);
                match release {
                    Some(k) => {
                        active.remove(k);
                    }
                    None => {
                        self.project(&active, &mut x);
                        let objective = self.objective(&x);
                        return Ok(QpSolution { x, objective, active, multipliers: mult, iterations: it });
                    }
                }
                continue;
            }
            let mut alpha = if ray { f64::INFINITY } else { 1.0 };
            let mut blocking: Option<usize> = None;
            for (j, (a, b)) in self.ineq.iter().enumerate() {
                if active.contains(&j) {
                    continue;
                }
                let ap = a.dot(&step);
                if ap < -1e-9 * a.norm() * pnorm {
                    let aj = ((b - a.dot(&x)) / ap).max(0.0);
                    // ties go to the lowest index
                    let tie = 1e-14 * (1.0 + aj.abs());
                    if aj < alpha - tie || (aj <= alpha + tie && blocking.is_some_and(|bj| j < bj)) {
                        alpha = aj.min(alpha);
                        blocking = Some(j);
                    }
                }
            }
            if alpha.is_infinite() {
                return Err(Error::Unbounded("objective decreases without bound along a feasible ray".into()));
            }
            x += &step * alpha;
            match blocking {
                Some(j) => {
                    if self.independent(&active, j) {
                        active.push(j);
                        self.project(&active, &mut x);
                    }
                }
                None => stationary = true,
            }
        }
        Err(Error::numerical("active-set iteration limit reached"))
    }

    /// Least-norm correction putting x back on the working constraints.
    fn project(&self, active: &[usize], x: &mut DVector<f64>) {
        let rows = self.working_rows(active);
        if rows.nrows() == 0 {
            return;
        }
        let rhs = DVector::from_iterator(
            rows.nrows(),
            self.eq.iter().map(|(_, d)| *d).chain(active.iter().map(|&j| self.ineq[j].1)),
        );
        let r = rhs - &rows * &*x;
        *x += linalg::lstsq(&rows, &r, 1e-12);
    }

    fn independent(&self, active: &[usize], j: usize) -> bool {
        let before = self.working_rows(active);
        let mut with = active.to_vec();
        with.push(j);
        let after = self.working_rows(&with);
        let rank = |m: &DMatrix<f64>| {
            if m.nrows() == 0 {
                0
            } else {
                linalg::rank_info(&linalg::svd_sorted(m).sigma, 1e-10).rank
            }
        };
        rank(&after) > rank(&before)
    }

    /// Minimiser of the model in the null space Z, or a descent ray along a flat
    /// direction of the reduced Hessian.
    fn reduced_step(&self, z: &DMatrix<f64>, grad: &DVector<f64>) -> Result<(DVector<f64>, bool)> {
        let n = grad.len();
        if z.ncols() == 0 {
            return Ok((DVector::zeros(n), false));
        }
        let hz = z.transpose() * &self.h * z;
        let gz = z.transpose() * grad;
        let (vals, vecs) = linalg::sym_eigen(&hz)?;
        let hs = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut newton = DVector::zeros(z.ncols());
        let mut flat = DVector::zeros(z.ncols());
        for (k, &lam) in vals.iter().enumerate() {
            let u = vecs.column(k);
            let c = u.dot(&gz);
            if lam < -1e-8 * hs {
                return Err(Error::numerical("reduced Hessian is indefinite"));
            }
            if lam <= 1e-10 * hs {
                flat += u * c;
            } else {
                newton -= u * (c / lam);
            }
        }
        if flat.norm() > 1e-12 * (1.0 + grad.norm()) {
            let dir = z * (-flat);
            let nd = dir.norm();
            return Ok((dir / nd, true));
        }
        Ok((z * newton, false))
    }
}
