//! Finitely generated groups of isometries: word balls, loxodromic elements and
//! their repulsive fixed planes, the limit set Λ(ρ) and admissibility.
//!
//! Words are sequences of nonzero letters: `k` is the k-th generator (1-based),
//! `-k` its inverse.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::classify::{analyze, future_null_eigvec};
use crate::dedup::{key_weight, vector_key, NearIndex};
use crate::domain::{is_regular_within, LambdaSet, Orientation, BOX_FACTOR};
use crate::error::{Error, Result};
use crate::linalg::{self, ip};
use crate::mink::{Isometry, MinkVector, DEFAULT_TOL};
use crate::penrose::LightPlane;

pub type Word = Vec<i32>;

/// Cap on the number of distinct enumerated elements.
pub const DEFAULT_WORD_CAP: usize = 100_000;
/// Spectral radius threshold ρ > 1 + band for loxodromic detection.
pub const LOXODROMIC_BAND: f64 = 1e-7;
/// Joint (v, s) tolerance for identifying fixed planes.
pub const PLANE_TOL: f64 = 1e-8;
/// Cusp orbits use the powers p^(±2^j) for j = 1..=CUSP_DOUBLINGS.
pub const CUSP_DOUBLINGS: u32 = 20;
/// Words up to this length are scanned for unipotent elements and seed planes.
const CUSP_WORDLEN: usize = 2;
const CUSP_SEEDS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecData", into = "GroupSpecData")]
pub struct GroupSpec {
    pub name: String,
    generators: Vec<Isometry>,
    inverses: Vec<Isometry>,
    relations: Vec<Word>,
    pub tol: f64,
}

/// JSON form `{name, dimension, generators: [{L, tau}], relations: [[±idx]], tol}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpecData {
    #[serde(default)]
    pub name: String,
    pub dimension: usize,
    pub generators: Vec<Isometry>,
    #[serde(default)]
    pub relations: Vec<Word>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

impl TryFrom<GroupSpecData> for GroupSpec {
    type Error = Error;
    fn try_from(d: GroupSpecData) -> Result<Self> {
        if let Some(g) = d.generators.iter().find(|g| g.dim() != d.dimension) {
            return Err(Error::DimensionMismatch { expected: d.dimension, found: g.dim() });
        }
        GroupSpec::new(&d.name, d.generators, d.relations, d.tol)
    }
}

impl From<GroupSpec> for GroupSpecData {
    fn from(s: GroupSpec) -> Self {
        let dimension = s.dim();
        GroupSpecData { name: s.name, dimension, generators: s.generators, relations: s.relations, tol: s.tol }
    }
}

impl GroupSpec {
    pub fn new(name: &str, generators: Vec<Isometry>, relations: Vec<Word>, tol: f64) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::invalid("a group needs at least one generator"));
        };
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        let n = first.dim();
        if let Some(g) = generators.iter().find(|g| g.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: g.dim() });
        }
        let inverses = generators.iter().map(Isometry::inverse).collect();
        let spec = GroupSpec { name: name.to_string(), generators, inverses, relations, tol };
        for (k, r) in spec.relations.iter().enumerate() {
            spec.check_word(r)?;
            let res = spec.evaluate(r)?.distance(&Isometry::identity(n));
            let scale = r.iter().map(|&a| spec.letter(a).scale()).fold(1.0, f64::max);
            if res > tol * scale * r.len().max(1) as f64 {
                return Err(Error::invalid(format!("relation {k} has residual {res:.3e}")));
            }
        }
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn relations(&self) -> &[Word] {
        &self.relations
    }

    fn check_word(&self, w: &[i32]) -> Result<()> {
        let k = self.rank() as i32;
        match w.iter().find(|&&a| a == 0 || a.abs() > k) {
            Some(a) => Err(Error::invalid(format!("letter {a} outside ±1..±{k}"))),
            None => Ok(()),
        }
    }

    /// Letters in enumeration order 1, −1, 2, −2, …
    pub fn alphabet(&self) -> Vec<i32> {
        (1..=self.rank() as i32).flat_map(|k| [k, -k]).collect()
    }

    pub fn letter(&self, a: i32) -> &Isometry {
        let i = a.unsigned_abs() as usize - 1;
        if a > 0 {
            &self.generators[i]
        } else {
            &self.inverses[i]
        }
    }

    pub fn evaluate(&self, w: &[i32]) -> Result<Isometry> {
        self.check_word(w)?;
        Ok(w.iter().fold(Isometry::identity(self.dim()), |acc, &a| acc.compose(self.letter(a))))
    }

    /// Largest relation residual max|ρ(r) − id|.
    pub fn relation_residual(&self) -> f64 {
        let id = Isometry::identity(self.dim());
        self.relations
            .iter()
            .filter_map(|r| self.evaluate(r).ok())
            .map(|g| g.distance(&id))
            .fold(0.0, f64::max)
    }

    /// Same generators with the translation parts dropped.
    pub fn linear_part(&self) -> GroupSpec {
        let n = self.dim();
        let gens = self.generators.iter().map(|g| g.with_translation(&MinkVector::zeros(n))).collect();
        GroupSpec::new(&self.name, gens, self.relations.clone(), self.tol).expect("linear part of a valid spec")
    }

    /// Same linear parts with new translation parts on the generators.
    pub fn with_translations(&self, taus: &[DVector<f64>]) -> Result<GroupSpec> {
        if taus.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: taus.len() });
        }
        let gens = self
            .generators
            .iter()
            .zip(taus)
            .map(|(g, t)| {
                MinkVector(t.clone()).check_dim(self.dim())?;
                Ok(g.with_translation(&MinkVector(t.clone())))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupSpec::new(&self.name, gens, self.relations.clone(), self.tol)
    }

    /// Generators h g h⁻¹.
    pub fn conjugate_by(&self, h: &Isometry) -> Result<GroupSpec> {
        let gens = self.generators.iter().map(|g| g.conjugate_by(h)).collect();
        GroupSpec::new(&self.name, gens, self.relations.clone(), self.tol)
    }
}

/// Distinct elements of length 1..=maxlen in breadth-first order, each recorded
/// with its shortest word.
#[derive(Debug, Clone)]
pub struct WordBall {
    pub words: Vec<Word>,
    pub elements: Vec<Isometry>,
    /// Index of the element obtained by dropping the last letter (None for letters).
    pub parent: Vec<Option<usize>>,
    pub maxlen: usize,
}

fn element_key(g: &Isometry) -> f64 {
    let s = g.scale();
    let l = g.linear();
    let mut k = 0.0;
    for (i, x) in l.iter().chain(g.tau().iter()).enumerate() {
        k += x * key_weight(i);
    }
    k / s
}

impl WordBall {
    pub fn build(spec: &GroupSpec, maxlen: usize, cap: usize) -> Result<WordBall> {
        if maxlen == 0 {
            return Err(Error::invalid("maxlen must be at least 1"));
        }
        let n = spec.dim();
        let entries = (n * n + n) as f64;
        let tol = spec.tol;
        let mut index = NearIndex::new(2.0 * entries * tol * 1.01);
        let mut all: Vec<Isometry> = vec![Isometry::identity(n)];
        index.insert(element_key(&all[0]), 0);
        let mut ball = WordBall { words: Vec::new(), elements: Vec::new(), parent: Vec::new(), maxlen };
        let alphabet = spec.alphabet();
        // frontier: (index into ball, last letter)
        let mut frontier: Vec<(Option<usize>, i32)> = vec![(None, 0)];
        for _ in 0..maxlen {
            let mut next = Vec::new();
            for &(p, last) in &frontier {
                for &a in &alphabet {
                    if a == -last {
                        continue;
                    }
                    let g = match p {
                        Some(i) => ball.elements[i].compose(spec.letter(a)),
                        None => spec.letter(a).clone(),
                    };
                    let key = element_key(&g);
                    if index.candidates(key).any(|j| all[j].approx_eq(&g, tol)) {
                        continue;
                    }
                    index.insert(key, all.len());
                    all.push(g.clone());
                    let mut w = p.map(|i| ball.words[i].clone()).unwrap_or_default();
                    w.push(a);
                    next.push((Some(ball.elements.len()), a));
                    ball.words.push(w);
                    ball.elements.push(g);
                    ball.parent.push(p);
                    if ball.elements.len() > cap {
                        return Err(Error::LimitExceeded(format!("more than {cap} elements up to length {maxlen}")));
                    }
                }
            }
            frontier = next;
        }
        Ok(ball)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Translation parts of every element for new generator translations, through
    /// τ(w a) = τ(w) + L(w) τ(a).
    pub fn translations(&self, spec: &GroupSpec, taus: &[DVector<f64>]) -> Result<Vec<DVector<f64>>> {
        let twisted = spec.with_translations(taus)?;
        let mut out: Vec<DVector<f64>> = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let a = *self.words[i].last().expect("nonempty word");
            let letter = twisted.letter(a).tau();
            let t = match self.parent[i] {
                Some(p) => &out[p] + self.elements[p].linear() * letter,
                None => letter.clone(),
            };
            out.push(t);
        }
        Ok(out)
    }
}

pub fn enumerate_words(spec: &GroupSpec, maxlen: usize) -> Result<Vec<(Word, Isometry)>> {
    let ball = WordBall::build(spec, maxlen, DEFAULT_WORD_CAP)?;
    Ok(ball.words.into_iter().zip(ball.elements).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoxodromicDatum {
    pub word: Word,
    /// Eigenvalue λ ∈ (0, 1) of the linear part on plane.v.
    pub contraction: f64,
    pub plane: LightPlane,
}

/// Contraction λ < 1 and its future null eigenvector (N = 1) when L is loxodromic.
///
/// Eigenvalues of a long parabolic word are useless: a rounded 3×3 Jordan block of
/// norm S has eigenvalues spread by ε^{1/3}·S. The trace is linear in the entries,
/// so in SO₀(1,2) ρ + 1/ρ = tr L − 1 is decided to ε·S. In higher dimension
/// tr L > n certifies a boost; below that the eigenvalues are used with the
/// Jordan-block dead band.
pub fn loxodromic_eigen(l: &DMatrix<f64>) -> Result<Option<(f64, DVector<f64>)>> {
    let n = l.nrows();
    let size = l.norm();
    let trace_noise = 100.0 * f64::EPSILON * size * n as f64;
    let tr = l.trace();
    let rho = if n == 3 {
        let c = tr - 1.0;
        if c <= 2.0 + (2.0 * LOXODROMIC_BAND).max(trace_noise) {
            return Ok(None);
        }
        0.5 * (c + (c * c - 4.0).sqrt())
    } else {
        let rho = linalg::eigenvalues(l)?.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let certified = tr > n as f64 + trace_noise;
        let jordan = 10.0 * f64::EPSILON.cbrt() * size;
        if !certified && rho <= 1.0 + LOXODROMIC_BAND.max(jordan) {
            return Ok(None);
        }
        if rho <= 1.0 + LOXODROMIC_BAND {
            return Ok(None);
        }
        rho
    };
    let v = future_null_eigvec(&linalg::lorentz_inverse(l), rho);
    Ok(Some((1.0 / rho, v)))
}

fn fixed_plane(v: DVector<f64>, lambda: f64, tau: &DVector<f64>) -> LightPlane {
    let s = -ip(tau, &v) / (1.0 / lambda - 1.0);
    LightPlane { v: MinkVector(v), s }
}

pub fn repulsive_fixed_plane(g: &Isometry) -> Result<LoxodromicDatum> {
    match loxodromic_eigen(g.linear())? {
        Some((lambda, v)) => Ok(LoxodromicDatum { word: Vec::new(), contraction: lambda, plane: fixed_plane(v, lambda, g.tau()) }),
        None => Err(Error::invalid("isometry is not loxodromic")),
    }
}

/// Repulsive fixed planes of the loxodromic elements of a word ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSet {
    pub data: Vec<LoxodromicDatum>,
    /// Images of short-word planes under high powers of unipotent elements.
    #[serde(default)]
    pub cusp: Vec<LightPlane>,
    pub words: usize,
    pub maxlen: usize,
}

impl LimitSet {
    pub fn planes(&self) -> Vec<LightPlane> {
        self.data.iter().map(|d| d.plane.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// No loxodromic element was found.
    pub fn nonloxodromic(&self) -> bool {
        self.data.is_empty()
    }

    pub fn lambda(&self, orientation: Orientation) -> Option<LambdaSet> {
        LambdaSet::new(self.planes(), orientation).ok()
    }

    /// Largest |s| over the fixed planes, at least 1; the cusp planes do not count.
    pub fn scale(&self) -> f64 {
        self.data.iter().fold(1.0f64, |m, d| m.max(d.plane.s.abs()))
    }

    /// Fills `cusp` from the short words of ρ.
    pub fn with_cusps(mut self, rho: &GroupSpec) -> Result<LimitSet> {
        self.cusp = cusp_planes(rho, &self)?;
        Ok(self)
    }
}

fn is_unipotent(l: &DMatrix<f64>) -> Result<bool> {
    let n = l.nrows() as f64;
    let off = (l - DMatrix::identity(l.nrows(), l.ncols())).amax();
    Ok(off > 1e-9 && (l.trace() - n).abs() <= 1e-9 * n * (1.0 + l.amax()) && loxodromic_eigen(l)?.is_none())
}

/// Logarithm of the affine matrix [[L, τ], [0, 1]] of a unipotent isometry, as the
/// finite series in A − I.
fn affine_log(g: &Isometry) -> DMatrix<f64> {
    let n = g.dim();
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m.view_mut((0, 0), (n, n)).copy_from(&(g.linear() - DMatrix::identity(n, n)));
    m.view_mut((0, n), (n, 1)).copy_from(g.tau());
    let mut log = DMatrix::zeros(n + 1, n + 1);
    let mut pw = m.clone();
    for j in 1..=n {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        log += &pw * (sign / j as f64);
        pw = &pw * &m;
    }
    log
}

/// exp(k·log) as a polynomial in k; exact up to roundoff for nilpotent `log`.
fn affine_exp(log: &DMatrix<f64>, k: f64) -> DMatrix<f64> {
    let d = log.nrows();
    let x = log * k;
    let mut out = DMatrix::identity(d, d);
    let mut term = DMatrix::identity(d, d);
    for j in 1..d {
        term = &term * &x / j as f64;
        out += &term;
    }
    out
}

/// Planes p^k·P for unipotent words p and fixed planes P of short words, with
/// k = ±2, ±4, …, ±2^CUSP_DOUBLINGS. Λ(ρ) is ρ-invariant, so each lies in Λ(ρ).
pub fn cusp_planes(rho: &GroupSpec, limit: &LimitSet) -> Result<Vec<LightPlane>> {
    let seeds: Vec<&LightPlane> =
        limit.data.iter().filter(|d| d.word.len() <= CUSP_WORDLEN).map(|d| &d.plane).take(CUSP_SEEDS).collect();
    if seeds.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut seen: Vec<Isometry> = Vec::new();
    for (_, g) in enumerate_words(rho, CUSP_WORDLEN)? {
        if !is_unipotent(g.linear())? || seen.iter().any(|h| h.approx_eq(&g, rho.tol) || h.approx_eq(&g.inverse(), rho.tol)) {
            continue;
        }
        let log = affine_log(&g);
        let n = rho.dim();
        for j in 1..=CUSP_DOUBLINGS {
            let k = 2f64.powi(j as i32);
            let powers = [affine_exp(&log, k), affine_exp(&log, -k)];
            for (fwd, back) in [(&powers[0], &powers[1]), (&powers[1], &powers[0])] {
                let l = fwd.view((0, 0), (n, n)).into_owned();
                // ⟨τ_k|L^k v⟩ = −⟨τ_{−k}|v⟩ avoids cancelling the large terms
                let t_back: DVector<f64> = back.view((0, n), (n, 1)).column(0).into_owned();
                for p in &seeds {
                    let lv = &l * &p.v.0;
                    let nl = lv.norm();
                    let s = (p.s - ip(&t_back, &p.v.0)) / nl;
                    out.push(LightPlane { v: MinkVector(lv / nl), s });
                }
            }
        }
        seen.push(g);
    }
    Ok(out)
}

/// Linear-part data of a word ball, reusable across translation parts.
#[derive(Debug, Clone)]
pub struct HolonomyTable {
    spec: GroupSpec,
    ball: WordBall,
    lox: Vec<Option<(f64, DVector<f64>)>>,
}

impl HolonomyTable {
    /// Enumerates the linear parts of `spec`.
    pub fn new(spec: &GroupSpec, maxlen: usize) -> Result<Self> {
        let linear = spec.linear_part();
        let ball = WordBall::build(&linear, maxlen, DEFAULT_WORD_CAP)?;
        let lox = ball.elements.iter().map(|g| loxodromic_eigen(g.linear())).collect::<Result<Vec<_>>>()?;
        Ok(HolonomyTable { spec: linear, ball, lox })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn maxlen(&self) -> usize {
        self.ball.maxlen
    }

    pub fn loxodromic_count(&self) -> usize {
        self.lox.iter().flatten().count()
    }

    /// Limit set of the representation with the given generator translations.
    pub fn limit_set(&self, taus: &[DVector<f64>]) -> Result<LimitSet> {
        let t = self.ball.translations(&self.spec, taus)?;
        let candidates = self
            .lox
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.as_ref().map(|(lambda, v)| (i, *lambda, fixed_plane(v.clone(), *lambda, &t[i]))));
        Ok(collect_planes(candidates, &self.ball, self.spec.dim()))
    }

    /// [`HolonomyTable::limit_set`] with the cusp orbit planes.
    pub fn limit_set_with_cusps(&self, taus: &[DVector<f64>]) -> Result<LimitSet> {
        self.limit_set(taus)?.with_cusps(&self.spec.with_translations(taus)?)
    }
}

fn collect_planes(
    candidates: impl Iterator<Item = (usize, f64, LightPlane)>,
    ball: &WordBall,
    n: usize,
) -> LimitSet {
    let mut index = NearIndex::new(n as f64 * PLANE_TOL * 1.01);
    let mut data: Vec<LoxodromicDatum> = Vec::new();
    for (i, lambda, plane) in candidates {
        let key = vector_key(plane.v.as_slice());
        if index.candidates(key).any(|j| data[j].plane.approx_eq(&plane, PLANE_TOL)) {
            continue;
        }
        index.insert(key, data.len());
        data.push(LoxodromicDatum { word: ball.words[i].clone(), contraction: lambda, plane });
    }
    LimitSet { data, cusp: Vec::new(), words: ball.len(), maxlen: ball.maxlen }
}

pub fn limit_set_approx(spec: &GroupSpec, maxlen: usize) -> Result<LimitSet> {
    let ball = WordBall::build(spec, maxlen, DEFAULT_WORD_CAP)?;
    let mut candidates = Vec::new();
    for (i, g) in ball.elements.iter().enumerate() {
        if let Some((lambda, v)) = loxodromic_eigen(g.linear())? {
            candidates.push((i, lambda, fixed_plane(v, lambda, g.tau())));
        }
    }
    collect_planes(candidates.into_iter(), &ball, spec.dim()).with_cusps(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdmissibilityStatus {
    Feasible,
    Infeasible,
    Nonloxodromic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub status: AdmissibilityStatus,
    pub orientation: Orientation,
    pub witness: Option<MinkVector>,
    /// Max-min distance to the planes (negative when the intersection is empty).
    pub margin: f64,
    pub planes: usize,
    pub maxlen: usize,
}

/// Feasibility of Ω±(Λ) for an enumerated limit set, fixed planes and cusp
/// planes together, in the box of radius BOX_FACTOR times the scale of the fixed
/// planes. Feasible only holds at the enumerated depth.
pub fn admissibility_of(limit: &LimitSet, orientation: Orientation, tol: f64) -> Result<Admissibility> {
    if limit.is_empty() {
        return Ok(Admissibility {
            status: AdmissibilityStatus::Nonloxodromic,
            orientation,
            witness: None,
            margin: 0.0,
            planes: 0,
            maxlen: limit.maxlen,
        });
    }
    let mut planes = limit.planes();
    planes.extend(limit.cusp.iter().cloned());
    let lambda = LambdaSet::new(planes, orientation)?;
    let scale = limit.scale();
    let reg = is_regular_within(&lambda, tol, BOX_FACTOR * scale, scale)?;
    let status = if reg.witness.is_some() { AdmissibilityStatus::Feasible } else { AdmissibilityStatus::Infeasible };
    Ok(Admissibility { status, orientation, witness: reg.witness, margin: reg.margin, planes: lambda.len(), maxlen: limit.maxlen })
}

pub fn admissibility(spec: &GroupSpec, maxlen: usize, tol: f64) -> Result<Admissibility> {
    admissibility_oriented(spec, maxlen, tol, Orientation::Future)
}

pub fn admissibility_oriented(spec: &GroupSpec, maxlen: usize, tol: f64, orientation: Orientation) -> Result<Admissibility> {
    admissibility_of(&limit_set_approx(spec, maxlen)?, orientation, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementaryKind {
    FixedPointInterior,
    FixedIsotropicDirection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Elementarity {
    pub elementary: bool,
    pub kind: Option<ElementaryKind>,
    /// Common fixed vector (timelike) or eigendirection (lightlike), N = 1.
    pub direction: Option<MinkVector>,
}

/// Common eigenvectors of the generator linear parts.
pub fn is_elementary(spec: &GroupSpec) -> Result<Elementarity> {
    let n = spec.dim();
    let id = DMatrix::<f64>::identity(n, n);
    let ls: Vec<&DMatrix<f64>> = spec.generators().iter().map(Isometry::linear).collect();
    let tol = spec.tol.max(1e-12) * 100.0;

    let mut stacked = DMatrix::zeros(n * ls.len(), n);
    for (k, l) in ls.iter().enumerate() {
        stacked.view_mut((k * n, 0), (n, n)).copy_from(&(*l - &id));
    }
    let fixed = linalg::kernel(&stacked, tol);
    let mut candidates: Vec<DVector<f64>> = Vec::new();
    if fixed.ncols() > 0 {
        let gram = fixed.transpose() * linalg::eta(n) * &fixed;
        let (vals, vecs) = linalg::sym_eigen(&gram)?;
        if vals[0] < -tol {
            let mut t = &fixed * vecs.column(0);
            if t[0] < 0.0 {
                t = -t;
            }
            let nt = t.norm();
            return Ok(Elementarity {
                elementary: true,
                kind: Some(ElementaryKind::FixedPointInterior),
                direction: Some(MinkVector(t / nt)),
            });
        }
        for (k, &val) in vals.iter().enumerate() {
            if val.abs() <= tol {
                candidates.push(&fixed * vecs.column(k));
            }
        }
    }
    for g in spec.generators() {
        if let Some((_, v)) = loxodromic_eigen(g.linear())? {
            candidates.push(v);
            let rho = linalg::eigenvalues(g.linear())?.iter().map(|z| z.norm()).fold(0.0, f64::max);
            candidates.push(future_null_eigvec(g.linear(), rho));
        } else if let Ok(a) = analyze(&g.with_translation(&MinkVector::zeros(n)), spec.tol) {
            if let Some(frame) = a.class.witnesses {
                candidates.push(frame.v0.0);
            }
        }
    }
    for c in candidates {
        let c = &c / c.norm();
        if ip(&c, &c).abs() > tol.sqrt() {
            continue;
        }
        let common = ls.iter().all(|l| {
            let lc = *l * &c;
            let along = c.dot(&lc);
            (&lc - &c * along).norm() <= tol * l.norm()
        });
        if common {
            let c = if c[0] < 0.0 { -c } else { c };
            return Ok(Elementarity {
                elementary: true,
                kind: Some(ElementaryKind::FixedIsotropicDirection),
                direction: Some(MinkVector(c)),
            });
        }
    }
    Ok(Elementarity { elementary: false, kind: None, direction: None })
}

/// Rank-2 Schottky group in SO₀(1,2): boosts of rapidity `zeta` along e₁ and along
/// the direction at angle `angle` in the spatial plane.
pub fn schottky_pair(zeta: f64, angle: f64) -> GroupSpec {
    let a = Isometry::boost(3, 1, zeta);
    let r = Isometry::rotation(3, 1, 2, angle);
    let b = a.conjugate_by(&r);
    GroupSpec::new("schottky", vec![a, b], Vec::new(), DEFAULT_TOL).expect("Schottky generators are valid")
}
