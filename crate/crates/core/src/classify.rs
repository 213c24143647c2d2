//! Conjugacy families of isometries: elliptic, hyperbolic, unipotent, loxodromic, parabolic.
//!
//! L is split into a rotation part R (semisimple, unit-circle spectrum) commuting with
//! either a boost A (real eigenvalues e^{±ζ}) or a unipotent factor id + p.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, eigenvalues, ip};
use crate::mink::{causal_character_raw, CausalCharacter, Isometry, MinkVector};

/// |λ| − 1 within this band counts as the unit circle.
pub const SPECTRAL_BAND: f64 = 1e-7;
/// Largest rotation order detected as finite.
pub const MAX_ROTATION_ORDER: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Elliptic,
    Hyperbolic,
    Unipotent,
    Loxodromic,
    Parabolic,
}

impl Family {
    pub fn has_boost(self) -> bool {
        matches!(self, Family::Hyperbolic | Family::Loxodromic)
    }

    pub fn is_nilpotent_type(self) -> bool {
        matches!(self, Family::Unipotent | Family::Parabolic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParabolicKind {
    Linear,
    Tangent,
    Transverse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnipotentFrame {
    /// Future isotropic generator of J = I ∩ I^⊥, N = 1.
    pub v0: MinkVector,
    /// p(v_n).
    pub v1: MinkVector,
    /// Lightlike, ⟨v0|vn⟩ ≠ 0, N = 1.
    pub vn: MinkVector,
    /// τ reduced modulo Im(L − id).
    pub tau_normalized: MinkVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoClass {
    pub family: Family,
    pub parabolic_kind: Option<ParabolicKind>,
    pub witnesses: Option<UnipotentFrame>,
    pub boost_strength: Option<f64>,
    pub elliptic_tau_character: Option<CausalCharacter>,
    pub pure_translation: bool,
    pub rotation_trivial: bool,
    /// Order of the rotation part when finite and at most 64.
    pub rotation_order: Option<u32>,
}

impl IsoClass {
    /// Family name with its qualifier, e.g. "parabolic (tangent)".
    pub fn label(&self) -> String {
        let family = match self.family {
            Family::Elliptic => "elliptic",
            Family::Hyperbolic => "hyperbolic",
            Family::Unipotent => "unipotent",
            Family::Loxodromic => "loxodromic",
            Family::Parabolic => "parabolic",
        };
        let qualifier = if self.pure_translation {
            Some("pure translation")
        } else {
            self.parabolic_kind.map(|k| match k {
                ParabolicKind::Linear => "linear",
                ParabolicKind::Tangent => "tangent",
                ParabolicKind::Transverse => "transverse",
            })
        };
        match qualifier {
            Some(q) => format!("{family} ({q})"),
            None => family.to_string(),
        }
    }
}

/// Full spectral decomposition behind a classification.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub class: IsoClass,
    /// Rotation part R.
    pub rotation: DMatrix<f64>,
    /// Nilpotent part p of the unipotent factor (zero outside unipotent/parabolic).
    pub p: DMatrix<f64>,
    /// Future null eigenvectors (e₊ for e^ζ, e₋ for e^{−ζ}), N = 1.
    pub boost_axes: Option<(DVector<f64>, DVector<f64>)>,
    /// Translation reduced modulo Im(L − id).
    pub tau_reduced: DVector<f64>,
    /// A point c with g(c) = c + tau_reduced.
    pub center: DVector<f64>,
    /// Subspace on which R has finite order (orthonormal columns).
    pub periodic: DMatrix<f64>,
}

pub fn classify(g: &Isometry, tol: f64) -> Result<IsoClass> {
    Ok(analyze(g, tol)?.class)
}

pub fn unipotent_frame(g: &Isometry, tol: f64) -> Result<UnipotentFrame> {
    let a = analyze(g, tol)?;
    a.class
        .witnesses
        .ok_or_else(|| Error::invalid(format!("{:?} isometry has no unipotent frame (p = 0)", a.class.family)))
}

pub fn parabolic_kind(g: &Isometry, tol: f64) -> Result<ParabolicKind> {
    let a = analyze(g, tol)?;
    a.class
        .parabolic_kind
        .ok_or_else(|| Error::invalid(format!("{:?} isometry is not unipotent or parabolic", a.class.family)))
}

pub fn analyze(g: &Isometry, tol: f64) -> Result<Analysis> {
    analyze_with_band(g, tol, SPECTRAL_BAND)
}

pub fn analyze_with_band(g: &Isometry, tol: f64, band: f64) -> Result<Analysis> {
    let n = g.dim();
    let l = g.linear();
    let tau = g.tau();
    let id = DMatrix::<f64>::identity(n, n);
    let lm = l - &id;
    let scale = l.norm().max(1.0);

    let eig = eigenvalues(l)?;
    let rho = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);

    // A perturbed Jordan block can push |λ| past the band by ~ε^{1/3}; a genuine
    // boost also has two independent null eigendirections.
    if rho > 1.0 + band {
        let ep = future_null_eigvec(l, rho);
        let em = future_null_eigvec(l, 1.0 / rho);
        if ip(&ep, &em).abs() > 1e-8 {
            return analyze_boost(g, band, rho, ep, em);
        }
    }

    // Generalised eigenspace G of eigenvalue 1 is ker (L − id)³; its invariant
    // complement H is the image.
    let lm_norm = lm.norm();
    let m3 = &lm * &lm * &lm;
    let thr = band * lm_norm.powi(3) + 1e-14 * scale.powi(3);
    let svd = linalg::svd_sorted(&m3);
    let h_dim = svd.sigma.iter().filter(|&&s| s > thr).count();
    let gb = svd.v.columns(h_dim, n - h_dim).into_owned();
    let hb = svd.u.columns(0, h_dim).into_owned();
    let mut basis = DMatrix::zeros(n, n);
    basis.view_mut((0, 0), (n, n - h_dim)).copy_from(&gb);
    basis.view_mut((0, n - h_dim), (n, h_dim)).copy_from(&hb);
    let binv = basis
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::numerical("degenerate spectral splitting"))?;
    let mut sel = DMatrix::zeros(n, n);
    for i in 0..(n - h_dim) {
        sel[(i, i)] = 1.0;
    }
    let pg = &basis * sel * binv;
    let p = &lm * &pg;
    let p_norm = p.norm();

    if p_norm <= band * scale {
        return analyze_elliptic(g, tol, band);
    }

    let pn = linalg::mat_pow(&p, n as u32);
    if pn.norm() > tol.max(1e3 * f64::EPSILON) * p_norm.powi(n as i32) * scale {
        return Err(Error::numerical("unipotent factor is not nilpotent"));
    }
    let rotation = &id + &lm * (&id - &pg);
    let rotation_trivial = (&rotation - &id).norm() <= band * scale;
    let family = if rotation_trivial { Family::Unipotent } else { Family::Parabolic };

    let im = linalg::image(&lm, band);
    let tau_reduced = tau - &im * (im.transpose() * tau);
    let center = linalg::lstsq(&lm, &(&tau_reduced - tau), band);
    let frame = build_frame(&p, &pg, &tau_reduced, tol)?;

    let kthr = tol * (1.0 + tau.norm()) * scale;
    let kind = if ip(&tau_reduced, &frame.v0.0).abs() > kthr {
        ParabolicKind::Transverse
    } else if tau_reduced.norm() > kthr {
        ParabolicKind::Tangent
    } else {
        ParabolicKind::Linear
    };
    let (order, periodic) = rotation_periodicity(&rotation, band)?;

    Ok(Analysis {
        class: IsoClass {
            family,
            parabolic_kind: Some(kind),
            witnesses: Some(frame),
            boost_strength: None,
            elliptic_tau_character: None,
            pure_translation: false,
            rotation_trivial,
            rotation_order: order,
        },
        rotation,
        p,
        boost_axes: None,
        tau_reduced,
        center,
        periodic,
    })
}

/// Component of τ in ker(L − id) along Im(L − id), for semisimple L.
fn split_fixed(lm: &DMatrix<f64>, tau: &DVector<f64>, band: f64) -> (DVector<f64>, DVector<f64>) {
    let n = tau.len();
    let kb = linalg::kernel(lm, band);
    let ib = linalg::image(lm, band);
    let k = kb.ncols();
    if k == 0 {
        return (DVector::zeros(n), linalg::lstsq(lm, &(-tau), band));
    }
    let mut basis = DMatrix::zeros(n, k + ib.ncols());
    basis.view_mut((0, 0), (n, k)).copy_from(&kb);
    basis.view_mut((0, k), (n, ib.ncols())).copy_from(&ib);
    let c = linalg::lstsq(&basis, tau, 1e-12);
    let fixed = &kb * c.rows(0, k);
    let center = linalg::lstsq(lm, &(&fixed - tau), band);
    (fixed, center)
}

fn analyze_elliptic(g: &Isometry, tol: f64, band: f64) -> Result<Analysis> {
    let n = g.dim();
    let l = g.linear();
    let id = DMatrix::<f64>::identity(n, n);
    let lm = l - &id;
    let scale = l.norm().max(1.0);
    let rotation_trivial = lm.norm() <= band * scale;
    let (tau_fixed, center) = if rotation_trivial {
        (g.tau().clone(), DVector::zeros(n))
    } else {
        split_fixed(&lm, g.tau(), band)
    };
    let character = causal_character_raw(&tau_fixed, tol * (1.0 + g.tau().norm()) * scale);
    let (order, periodic) = rotation_periodicity(l, band)?;
    Ok(Analysis {
        class: IsoClass {
            family: Family::Elliptic,
            parabolic_kind: None,
            witnesses: None,
            boost_strength: None,
            elliptic_tau_character: Some(character),
            pure_translation: rotation_trivial && g.tau().norm() > tol,
            rotation_trivial,
            rotation_order: order,
        },
        rotation: l.clone(),
        p: DMatrix::zeros(n, n),
        boost_axes: None,
        tau_reduced: tau_fixed,
        center,
        periodic,
    })
}

pub(crate) fn future_null_eigvec(l: &DMatrix<f64>, lambda: f64) -> DVector<f64> {
    let n = l.nrows();
    let m = l - DMatrix::<f64>::identity(n, n) * lambda;
    let svd = linalg::svd_sorted(&m);
    let mut v: DVector<f64> = svd.v.column(n - 1).into_owned();
    if v[0] < 0.0 {
        v = -v;
    }
    let nv = v.norm();
    v / nv
}

fn analyze_boost(g: &Isometry, band: f64, rho: f64, ep: DVector<f64>, em: DVector<f64>) -> Result<Analysis> {
    let n = g.dim();
    let l = g.linear();
    let id = DMatrix::<f64>::identity(n, n);
    let lm = l - &id;
    let scale = l.norm().max(1.0);
    let c = ip(&ep, &em);
    let pb = (&ep * linalg::lower(&em).transpose() + &em * linalg::lower(&ep).transpose()) / c;
    let pw = &id - &pb;
    let rotation = l * &pw + &pb;
    let rotation_trivial = (&lm * &pw).norm() <= band * scale;
    let (tau_fixed, center) = split_fixed(&lm, g.tau(), band);
    let (order, periodic) = rotation_periodicity(&rotation, band)?;
    Ok(Analysis {
        class: IsoClass {
            family: if rotation_trivial { Family::Hyperbolic } else { Family::Loxodromic },
            parabolic_kind: None,
            witnesses: None,
            boost_strength: Some(rho.ln()),
            elliptic_tau_character: None,
            pure_translation: false,
            rotation_trivial,
            rotation_order: order,
        },
        rotation,
        p: DMatrix::zeros(n, n),
        boost_axes: Some((ep, em)),
        tau_reduced: tau_fixed,
        center,
        periodic,
    })
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Finite order of R (if ≤ 64) and the subspace on which R is periodic.
///
/// When the rotation angles are all rational with small denominators the periodic
/// subspace is ker(R^m − id) for their common order m; otherwise only the fixed
/// space of R is used.
pub fn rotation_periodicity(r: &DMatrix<f64>, band: f64) -> Result<(Option<u32>, DMatrix<f64>)> {
    let n = r.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let eig = eigenvalues(r)?;
    let mut all_rational = true;
    let mut order: u32 = 1;
    let mut partial: u32 = 1;
    let angle_tol = 10.0 * band;
    for z in eig.iter() {
        let theta = z.im.atan2(z.re).abs();
        if theta < angle_tol {
            continue;
        }
        let frac = theta / std::f64::consts::TAU;
        let found = (1..=MAX_ROTATION_ORDER).find(|&m| {
            let x = frac * m as f64;
            (x - x.round()).abs() <= angle_tol * m as f64
        });
        match found {
            Some(m) => {
                partial = partial / gcd(partial, m) * m;
                order = order / gcd(order, m) * m;
            }
            None => all_rational = false,
        }
    }
    let scale = linalg::max_abs(r).max(1.0);
    let thr = 1e-6 * scale;
    let periodic = if partial <= MAX_ROTATION_ORDER && partial > 1 {
        linalg::kernel_abs(&(linalg::mat_pow(r, partial) - &id), thr * partial as f64)
    } else {
        linalg::kernel_abs(&(r - &id), thr)
    };
    let order = if all_rational && order <= MAX_ROTATION_ORDER { Some(order) } else { None };
    Ok((order, periodic))
}

/// Frame (v0, v1, vn) of the unipotent factor id + p, with vn taken inside the
/// generalised eigenspace G (so R-invariant).
fn build_frame(p: &DMatrix<f64>, pg: &DMatrix<f64>, tau_reduced: &DVector<f64>, tol: f64) -> Result<UnipotentFrame> {
    let n = p.nrows();
    let p2 = p * p;
    let p_norm = p.norm();
    let mut v0 = if p2.norm() > 1e3 * f64::EPSILON.max(tol * 1e-3) * p_norm * p_norm {
        let (mut best, mut best_norm) = (0, 0.0);
        for k in 0..n {
            let c = p2.column(k).norm();
            if c > best_norm {
                best = k;
                best_norm = c;
            }
        }
        p2.column(best).into_owned()
    } else {
        let im = linalg::image(p, 1e-8);
        let ker = linalg::kernel(p, 1e-8);
        let j = linalg::intersect(&im, &ker, 1e-8);
        if j.ncols() == 0 {
            return Err(Error::numerical("Im p ∩ ker p is trivial"));
        }
        j.column(0).into_owned()
    };
    if v0[0] < 0.0 {
        v0 = -v0;
    }
    v0 /= v0.norm();

    let mut candidates: Vec<DVector<f64>> = (0..n)
        .map(|k| {
            let mut e = DVector::zeros(n);
            e[k] = 1.0;
            pg * e
        })
        .collect();
    candidates.push(pg * linalg::lower(&v0));
    let score = |x: &DVector<f64>| {
        let nx = x.norm();
        if nx == 0.0 {
            0.0
        } else {
            ip(x, &v0).abs() / nx
        }
    };
    let mut x = candidates
        .into_iter()
        .max_by(|a, b| score(a).total_cmp(&score(b)))
        .expect("nonempty candidates");
    let c = ip(&x, &v0);
    if c.abs() < 1e-12 * x.norm() {
        return Err(Error::numerical("no vector pairs with v0"));
    }
    x += &v0 * (-ip(&x, &x) / (2.0 * c));
    let vn = &x / x.norm();
    let v1 = p * &vn;
    let w = &p2 * &vn;
    if w.norm() > 1e-12 * p_norm * p_norm {
        v0 = if w[0] < 0.0 { -w } else { w };
        v0 /= v0.norm();
    }
    if ip(&v1, &v1) <= 0.0 {
        return Err(Error::numerical("frame vector v1 is not spacelike"));
    }
    Ok(UnipotentFrame {
        v0: MinkVector(v0),
        v1: MinkVector(v1),
        vn: MinkVector(vn),
        tau_normalized: MinkVector(tau_reduced.clone()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarReport {
    pub samples: usize,
    /// max |⟨x|p y⟩ + ⟨p x|y⟩ + ⟨p x|p y⟩| / (N(x) N(y) max(1, ‖L‖²)).
    pub max_residual: f64,
}

/// Evaluates ⟨x|p(y)⟩ + ⟨p(x)|y⟩ + ⟨p(x)|p(y)⟩ with p = L − id on random pairs.
pub fn verify_star_identity(g: &Isometry, samples: usize, seed: u64) -> StarReport {
    verify_star_matrix(g.linear(), samples, seed)
}

/// Same as [`verify_star_identity`] for an arbitrary (possibly corrupted) matrix.
pub fn verify_star_matrix(l: &DMatrix<f64>, samples: usize, seed: u64) -> StarReport {
    let n = l.nrows();
    let p = l - DMatrix::<f64>::identity(n, n);
    let s = linalg::max_abs(l).max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let y = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let px = &p * &x;
        let py = &p * &y;
        let r = ip(&x, &py) + ip(&px, &y) + ip(&px, &py);
        worst = worst.max(r.abs() / (x.norm() * y.norm() * s * s));
    }
    StarReport { samples, max_residual: worst }
}
