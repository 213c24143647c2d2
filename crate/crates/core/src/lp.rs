//! Maximum-margin feasibility for finite systems of half-spaces.

use microlp::{ComparisonOp, OptimizationDirection, Problem, SolveOutcome};
use nalgebra::DVector;

use crate::error::{Error, Result};

/// Optimal point and margin of [`max_margin`].
#[derive(Debug, Clone, PartialEq)]
pub struct MarginSolution {
    pub x: DVector<f64>,
    pub margin: f64,
}

/// Maximises m subject to `a_i·x + m‖a_i‖ ≤ b_i`, the equalities `c_k·x = d_k`,
/// `|x_j| ≤ radius` and `m ≤ cap`.
///
/// The optimum is the centre of the largest Euclidean ball inside the polyhedron
/// (clipped by the box); a negative margin measures infeasibility.
pub fn max_margin(
    a: &[DVector<f64>],
    b: &[f64],
    equalities: &[(DVector<f64>, f64)],
    radius: f64,
    cap: f64,
) -> Result<MarginSolution> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let n = a.first().map(|r| r.len()).or(equalities.first().map(|e| e.0.len())).unwrap_or(0);
    if n == 0 {
        return Err(Error::invalid("no constraints"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid("box radius must be positive"));
    }
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let xs: Vec<_> = (0..n).map(|_| lp.add_var(0.0, (-radius, radius))).collect();
    let m = lp.add_var(1.0, (f64::NEG_INFINITY, cap));
    for (row, &rhs) in a.iter().zip(b) {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        let mut terms: Vec<_> = xs.iter().zip(row.iter()).filter(|(_, c)| **c != 0.0).map(|(&v, &c)| (v, c)).collect();
        terms.push((m, row.norm()));
        lp.add_constraint(terms, ComparisonOp::Le, rhs);
    }
    for (row, rhs) in equalities {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        let terms: Vec<_> = xs.iter().zip(row.iter()).filter(|(_, c)| **c != 0.0).map(|(&v, &c)| (v, c)).collect();
        lp.add_constraint(terms, ComparisonOp::Eq, *rhs);
    }
    let outcome = lp.solve().map_err(|e| match e {
        microlp::Error::Infeasible => Error::numerical("equality constraints are infeasible within the box"),
        other => Error::numerical(format!("linear program failed: {other}")),
    })?;
    let SolveOutcome::Solution(sol) = outcome else {
        return Err(Error::numerical("linear program interrupted"));
    };
    let x = DVector::from_iterator(n, xs.iter().map(|&v| sol[v]));
    Ok(MarginSolution { x, margin: sol[m] })
}

/// Point of smallest ∞-norm with `a_i·x + margin‖a_i‖ ≤ b_i`, or None if there is none
/// inside the box.
pub fn compact_point(a: &[DVector<f64>], b: &[f64], margin: f64, radius: f64) -> Result<Option<DVector<f64>>> {
    let Some(n) = a.first().map(|r| r.len()) else {
        return Err(Error::invalid("no constraints"));
    };
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let xs: Vec<_> = (0..n).map(|_| lp.add_var(0.0, (-radius, radius))).collect();
    let u = lp.add_var(1.0, (0.0, radius));
    for &x in &xs {
        lp.add_constraint([(x, 1.0), (u, -1.0)], ComparisonOp::Le, 0.0);
        lp.add_constraint([(x, 1.0), (u, 1.0)], ComparisonOp::Ge, 0.0);
    }
    for (row, &rhs) in a.iter().zip(b) {
        let terms: Vec<_> = xs.iter().zip(row.iter()).filter(|(_, c)| **c != 0.0).map(|(&v, &c)| (v, c)).collect();
        lp.add_constraint(terms, ComparisonOp::Le, rhs - margin * row.norm());
    }
    match lp.solve() {
        Ok(SolveOutcome::Solution(sol)) => Ok(Some(DVector::from_iterator(n, xs.iter().map(|&v| sol[v])))),
        Ok(SolveOutcome::Interrupted(_)) => Err(Error::numerical("linear program interrupted")),
        Err(microlp::Error::Infeasible) => Ok(None),
        Err(e) => Err(Error::numerical(format!("linear program failed: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_centre_of_square() {
        let a = vec![
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![-1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0]),
            DVector::from_vec(vec![0.0, -1.0]),
        ];
        let b = vec![1.0, 1.0, 3.0, -1.0];
        let s = max_margin(&a, &b, &[], 100.0, f64::INFINITY).unwrap();
        assert!((s.margin - 1.0).abs() < 1e-9);
        assert!(s.x[0].abs() < 1e-9 && (s.x[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_system_has_negative_margin() {
        let a = vec![DVector::from_vec(vec![1.0]), DVector::from_vec(vec![-1.0])];
        let s = max_margin(&a, &[-1.0, -1.0], &[], 10.0, 1.0).unwrap();
        assert!((s.margin + 1.0).abs() < 1e-9);
    }

    #[test]
    fn compact_point_of_a_cone() {
        // x₂ ≥ |x₁| + 1, margin 0: closest point in ∞-norm is (0, 1)
        let a = vec![DVector::from_vec(vec![1.0, -1.0]), DVector::from_vec(vec![-1.0, -1.0])];
        let x = compact_point(&a, &[-1.0, -1.0], 0.0, 10.0).unwrap().unwrap();
        assert!(x[0].abs() < 1e-9 && (x[1] - 1.0).abs() < 1e-9);
        assert!(compact_point(&a, &[-1.0, -1.0], 0.0, 0.5).unwrap().is_none());
    }

    #[test]
    fn equality_restricts_the_centre() {
        let a = vec![DVector::from_vec(vec![-1.0, 0.0]), DVector::from_vec(vec![0.0, -1.0])];
        let eq = vec![(DVector::from_vec(vec![1.0, 1.0]), 4.0)];
        let s = max_margin(&a, &[0.0, 0.0], &eq, 10.0, f64::INFINITY).unwrap();
        assert!((s.margin - 2.0).abs() < 1e-9);
    }
}
