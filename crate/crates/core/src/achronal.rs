//! Achronal domains Ω_g = {x : |gᵠx − x|² > 0 for all q ≠ 0} of single isometries,
//! the causality sets U(g), a brute-force iteration oracle and visibility witnesses.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::classify::{analyze, Analysis, Family, ParabolicKind};
use crate::error::{Error, Result};
use crate::linalg::ip;
use crate::mink::{CausalKind, Isometry, MinkVector};
use crate::penrose::LightPlane;

/// Iterates beyond this Euclidean norm stop the oracle.
pub const ORACLE_NORM_GUARD: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AchronalKind {
    Empty,
    All,
    /// Complement of the affine subspace `center + span(basis)` of R-periodic points.
    ComplementOfFixedSet { center: MinkVector, basis: Vec<MinkVector> },
    /// {X Y < 0} with X = ⟨x − c|v₋⟩, Y = ⟨x − c|v₊⟩, ⟨v₊|v₋⟩ = 1, v₊ future.
    Wedge { center: MinkVector, v_plus: MinkVector, v_minus: MinkVector },
    /// Complement of the R-periodic points inside the degenerate hyperplane J^⊥.
    ComplementOfDegenerateHyperplane { hyperplane: LightPlane, center: MinkVector, periodic_basis: Vec<MinkVector> },
}

/// Three-state membership: `on_boundary` marks points within the dead-band of ∂Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub inside: bool,
    pub on_boundary: bool,
    /// Normalised signed distance-like margin; positive inside.
    pub margin: f64,
}

impl Membership {
    fn constant(inside: bool) -> Self {
        Membership { inside, on_boundary: false, margin: if inside { f64::INFINITY } else { f64::NEG_INFINITY } }
    }

    fn from_margin(margin: f64, band: f64) -> Self {
        Membership { inside: margin > band, on_boundary: margin.abs() <= band, margin }
    }
}

/// Ω_g with the spectral data of g precomputed.
#[derive(Debug, Clone)]
pub struct AchronalDomain {
    pub analysis: Analysis,
    pub kind: AchronalKind,
    tol: f64,
}

fn columns(m: &DMatrix<f64>) -> Vec<MinkVector> {
    (0..m.ncols()).map(|j| MinkVector(m.column(j).into_owned())).collect()
}

impl AchronalDomain {
    pub fn new(g: &Isometry, tol: f64) -> Result<Self> {
        let analysis = analyze(g, tol)?;
        let kind = kind_from_analysis(&analysis)?;
        Ok(AchronalDomain { analysis, kind, tol })
    }

    pub fn family(&self) -> Family {
        self.analysis.class.family
    }

    /// Euclidean distance from x′ to the periodic subspace, relative to 1 + N(x′).
    fn periodic_distance(&self, xc: &DVector<f64>) -> f64 {
        let pb = &self.analysis.periodic;
        let proj = pb * (pb.transpose() * xc);
        (xc - proj).norm() / (1.0 + xc.norm())
    }

    pub fn membership(&self, x: &MinkVector) -> Membership {
        self.membership_with_band(x, self.tol)
    }

    /// Membership with an explicit boundary dead-band on the normalised margin.
    pub fn membership_with_band(&self, x: &MinkVector, band: f64) -> Membership {
        match &self.kind {
            AchronalKind::Empty => Membership::constant(false),
            AchronalKind::All => Membership::constant(true),
            AchronalKind::ComplementOfFixedSet { center, .. } => {
                let xc = &x.0 - &center.0;
                Membership::from_margin(self.periodic_distance(&xc), band)
            }
            AchronalKind::Wedge { center, v_plus, v_minus } => {
                let xc = &x.0 - &center.0;
                let s = 1.0 + xc.norm();
                let margin = -ip(&xc, &v_minus.0) * ip(&xc, &v_plus.0) / (s * s);
                Membership::from_margin(margin, band)
            }
            AchronalKind::ComplementOfDegenerateHyperplane { hyperplane, center, .. } => {
                let xc = &x.0 - &center.0;
                let a = ip(&xc, &hyperplane.v.0).abs() / (1.0 + xc.norm());
                let d = self.periodic_distance(&xc);
                Membership::from_margin(a.max(d), band)
            }
        }
    }

    /// Membership in U(g).
    pub fn u_membership(&self, x: &MinkVector) -> Membership {
        let class = &self.analysis.class;
        match class.family {
            Family::Elliptic => {
                let spacelike = class.elliptic_tau_character.map(|c| c.kind) == Some(CausalKind::Spacelike);
                if spacelike {
                    self.membership(x)
                } else {
                    Membership::constant(false)
                }
            }
            Family::Unipotent | Family::Parabolic if class.parabolic_kind == Some(ParabolicKind::Linear) => {
                let AchronalKind::ComplementOfDegenerateHyperplane { hyperplane, center, .. } = &self.kind else {
                    unreachable!("linear parabolic domains are hyperplane complements")
                };
                let xc = &x.0 - &center.0;
                let a = ip(&xc, &hyperplane.v.0).abs() / (1.0 + xc.norm());
                Membership::from_margin(a, self.tol)
            }
            _ => self.membership(x),
        }
    }
}

fn kind_from_analysis(a: &Analysis) -> Result<AchronalKind> {
    let class = &a.class;
    let center = MinkVector(a.center.clone());
    Ok(match class.family {
        Family::Elliptic => match class.elliptic_tau_character.map(|c| c.kind) {
            Some(CausalKind::Timelike) => AchronalKind::Empty,
            Some(CausalKind::Spacelike) => AchronalKind::All,
            Some(CausalKind::Lightlike) | Some(CausalKind::Zero) => {
                AchronalKind::ComplementOfFixedSet { center, basis: columns(&a.periodic) }
            }
            None => return Err(Error::numerical("elliptic class without translation character")),
        },
        Family::Hyperbolic | Family::Loxodromic => {
            let (ep, em) = a.boost_axes.clone().expect("boost axes for boost families");
            let c = ip(&ep, &em);
            // v₋ = e₋ / c is past-pointing with ⟨v₊|v₋⟩ = 1
            AchronalKind::Wedge { center, v_plus: MinkVector(ep), v_minus: MinkVector(em / c) }
        }
        Family::Unipotent | Family::Parabolic => match class.parabolic_kind.expect("kind for nilpotent families") {
            ParabolicKind::Tangent => AchronalKind::All,
            ParabolicKind::Transverse => AchronalKind::Empty,
            ParabolicKind::Linear => {
                let v0 = class.witnesses.as_ref().expect("frame").v0.clone();
                let s = ip(&a.center, &v0.0);
                AchronalKind::ComplementOfDegenerateHyperplane {
                    hyperplane: LightPlane { v: v0, s },
                    center,
                    periodic_basis: columns(&a.periodic),
                }
            }
        },
    })
}

pub fn achronal_kind(g: &Isometry, tol: f64) -> Result<AchronalKind> {
    Ok(AchronalDomain::new(g, tol)?.kind)
}

pub fn in_achronal(g: &Isometry, x: &MinkVector, tol: f64) -> Result<Membership> {
    Ok(AchronalDomain::new(g, tol)?.membership(x))
}

pub fn in_u(g: &Isometry, x: &MinkVector, tol: f64) -> Result<Membership> {
    Ok(AchronalDomain::new(g, tol)?.u_membership(x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// ⟨gᵠx − x|gᵠx − x⟩ > −tol for every examined q.
    pub achronal: bool,
    /// Some examined separation lies in [−tol, tol].
    pub on_boundary: bool,
    /// The norm guard stopped the iteration before a violation was found.
    pub indeterminate: bool,
    /// Smallest |q| with a causal separation, if any.
    pub witness_q: Option<i64>,
    pub min_separation: f64,
}

/// Brute-force check of the definition of Ω_g over 0 < |q| ≤ q_max.
///
/// The separation of gᵠx from x is evaluated as that of g^{q₁}x and g^{−q₂}x with
/// q₁ + q₂ = q, q₁ − q₂ ∈ {0, 1}; both are isometric images of the same pair, and the
/// balanced split keeps iterate norms at the square root of the one-sided growth.
/// Negative q give the same separations as positive ones.
pub fn iterate_oracle(g: &Isometry, x: &MinkVector, q_max: u32, tol: f64) -> Result<OracleReport> {
    if q_max == 0 {
        return Err(Error::invalid("q_max must be at least 1"));
    }
    let ginv = g.inverse();
    let half = q_max.div_ceil(2) as usize;
    let mut fwd = vec![x.0.clone()];
    let mut bwd = vec![x.0.clone()];
    let mut min_sep = f64::INFINITY;
    let mut witness = None;
    let mut guard_hit = false;
    for q in 1..=q_max as usize {
        let (q1, q2) = (q.div_ceil(2), q / 2);
        if q1 >= fwd.len() {
            let y = g.act_raw(&fwd[q1 - 1]);
            if y.norm() > ORACLE_NORM_GUARD {
                guard_hit = true;
                break;
            }
            fwd.push(y);
        }
        if q2 >= bwd.len() && q2 <= half {
            let y = ginv.act_raw(&bwd[q2 - 1]);
            if y.norm() > ORACLE_NORM_GUARD {
                guard_hit = true;
                break;
            }
            bwd.push(y);
        }
        let d = &fwd[q1] - &bwd[q2];
        let sep = ip(&d, &d);
        min_sep = min_sep.min(sep);
        if sep <= -tol {
            witness = Some(q as i64);
            break;
        }
    }
    let achronal = witness.is_none();
    Ok(OracleReport {
        achronal,
        on_boundary: min_sep.abs() <= tol,
        indeterminate: achronal && guard_hit,
        witness_q: witness,
        min_separation: min_sep,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityWitness {
    pub x: MinkVector,
    /// "lemma" when the candidate from the leading-term sign analysis verified.
    pub source: String,
    /// Fraction of q in (50, 100] (best direction) with gᵠx − x₀ causal.
    pub causal_fraction: f64,
}

fn causal_fraction(g: &Isometry, x: &DVector<f64>, x0: &DVector<f64>) -> f64 {
    let mut best: f64 = 0.0;
    for h in [g.clone(), g.inverse()] {
        let mut y = x.clone();
        let mut hits = 0;
        for q in 1..=100 {
            y = h.act_raw(&y);
            if q > 50 {
                let d = &y - x0;
                if ip(&d, &d) <= 0.0 {
                    hits += 1;
                }
            }
        }
        best = best.max(hits as f64 / 50.0);
    }
    best
}

/// Point x with infinitely many g-iterates causally related to x₀ (g unipotent or
/// parabolic). Candidates from the sign of the leading term are tried first, then
/// timelike offsets of x₀; each is checked on 100 iterates.
pub fn visibility_witness(g: &Isometry, x0: &MinkVector, tol: f64) -> Result<VisibilityWitness> {
    let a = analyze(g, tol)?;
    if !a.class.family.is_nilpotent_type() {
        return Err(Error::invalid("visibility witnesses need a unipotent or parabolic isometry"));
    }
    let frame = a.class.witnesses.as_ref().expect("frame");
    let kind = a.class.parabolic_kind.expect("kind");
    let n = g.dim();
    let p = &a.p;
    let tau = g.tau();
    let vn = &frame.vn.0;
    let mut lemma = Vec::new();
    match kind {
        ParabolicKind::Transverse => {
            let p2t = p * (p * tau);
            for sgn in [1.0, -1.0] {
                let x = &x0.0 + vn * sgn;
                if ip(&p2t, &x) > 0.0 {
                    lemma.push(x);
                }
            }
        }
        ParabolicKind::Linear | ParabolicKind::Tangent => {
            let pt = p * tau;
            for sgn in [1.0, -1.0] {
                let x = &x0.0 + vn * sgn;
                let lead = &(p * (p * &x)) + &pt;
                if ip(&lead, &x0.0) > 0.0 {
                    lemma.push(x);
                }
            }
        }
    }
    let mut e0 = DVector::zeros(n);
    e0[0] = 1.0;
    let fallback = vec![&x0.0 + &e0, &x0.0 - &e0, &x0.0 + &e0 * 10.0, &x0.0 - &e0 * 10.0];
    for (source, cands) in [("lemma", lemma), ("fallback", fallback)] {
        for x in cands {
            let frac = causal_fraction(g, &x, &x0.0);
            if frac >= 0.5 {
                return Ok(VisibilityWitness { x: MinkVector(x), source: source.into(), causal_fraction: frac });
            }
        }
    }
    Err(Error::numerical("no visibility witness verified within the candidate budget"))
}

/// Fraction helper for callers that want to verify a supplied point.
pub fn visibility_fraction(g: &Isometry, x: &MinkVector, x0: &MinkVector) -> f64 {
    causal_fraction(g, &x.0, &x0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mink::DEFAULT_TOL;

    #[test]
    fn boost_wedge() {
        let g = Isometry::boost(3, 1, 0.8);
        let d = AchronalDomain::new(&g, DEFAULT_TOL).unwrap();
        assert!(matches!(d.kind, AchronalKind::Wedge { .. }));
        // timelike points relative to the fixed axis are inside, spacelike outside
        assert!(d.membership(&MinkVector::new(&[1.0, 0.2, 3.0])).inside);
        assert!(!d.membership(&MinkVector::new(&[0.2, 1.0, 3.0])).inside);
        let axis = d.membership(&MinkVector::new(&[0.0, 0.0, 5.0]));
        assert!(!axis.inside && axis.on_boundary);
    }

    #[test]
    fn elliptic_cases() {
        let r = Isometry::rotation(3, 1, 2, 1.0);
        let tl = r.with_translation(&MinkVector::new(&[1.0, 0.0, 0.0]));
        assert_eq!(achronal_kind(&tl, DEFAULT_TOL).unwrap(), AchronalKind::Empty);
        let r4 = Isometry::rotation(4, 1, 2, 1.0);
        let sl = r4.with_translation(&MinkVector::new(&[0.0, 0.0, 0.0, 1.0]));
        assert_eq!(achronal_kind(&sl, DEFAULT_TOL).unwrap(), AchronalKind::All);
        let ll = r4.with_translation(&MinkVector::new(&[1.0, 0.0, 0.0, 1.0]));
        let d = AchronalDomain::new(&ll, DEFAULT_TOL).unwrap();
        assert!(matches!(d.kind, AchronalKind::ComplementOfFixedSet { .. }));
        assert!(d.membership(&MinkVector::new(&[0.0, 1.0, 0.0, 0.0])).inside);
        assert!(!d.membership(&MinkVector::new(&[3.0, 0.0, 0.0, 1.0])).inside);
    }

    #[test]
    fn oracle_examples() {
        let x = MinkVector::new(&[0.3, -0.2, 1.0]);
        assert!(iterate_oracle(&Isometry::identity(3), &x, 10, DEFAULT_TOL).unwrap().achronal);
        let t = Isometry::translation(&MinkVector::new(&[1.0, 0.0, 0.0]));
        let rep = iterate_oracle(&t, &x, 10, DEFAULT_TOL).unwrap();
        assert!(!rep.achronal);
        assert_eq!(rep.witness_q, Some(1));
    }
}
