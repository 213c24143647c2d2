use std::path::Path;

use minkgh_core::achronal::{iterate_oracle, AchronalDomain};
use minkgh_core::classify::classify;
use minkgh_core::cohomology::{cocycle_residual, tri_experiment, Cocycle, Cohomology, ConeProber, TRI_PROBE_MAXLEN};
use minkgh_core::curvature::{cmc_check, cmc_check_tabulated, grid_points, SurfaceSpec, TabulatedGraph, CMC_MIN_POINTS};
use minkgh_core::domain::{cosmological_time, is_regular, level_set_sample, CtOptions, LambdaSet, Orientation};
use minkgh_core::holonomy::{admissibility_of, is_elementary, limit_set_approx, GroupSpec};
use minkgh_core::models::extension::{symmetric_extension, SymExtProblem};
use minkgh_core::models::unipotent::{components, default_escape_paths, surface_completeness_probe, surface_samples, AProfile};
use minkgh_core::models::{
    build_misner, build_translation, build_unipotent, radiant_standard, twisted_product, AmbientPresentation, BaseModel, EuclideanIsometry,
    Fiber, MisnerElement,
};
use minkgh_core::penrose::{act_on_j, conformal_derivative, expansion_factor, LightPlane};
use minkgh_core::{Isometry, MinkVector};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::io::{parse_json, read_csv_rows, read_json, read_text, CliError, CliResult, Table};

/// Word length of `group` and `cocycle` when --maxlen is absent.
pub const DEFAULT_MAXLEN: usize = 6;

#[derive(Debug, Clone)]
pub struct Config {
    pub dim: Option<usize>,
    pub tol: f64,
    pub maxlen: Option<usize>,
    pub seed: u64,
}

impl Config {
    fn check_dim(&self, found: usize) -> CliResult<()> {
        match self.dim {
            Some(n) if n != found => Err(CliError::validation(format!("--dim {n} but the input has dimension {found}"))),
            _ => Ok(()),
        }
    }

    fn ct_options(&self, parallel: bool) -> CtOptions {
        CtOptions { tol: self.tol, parallel }
    }
}

pub struct Output {
    pub result: Value,
    pub tables: Vec<Table>,
}

fn at(pointer: String, e: minkgh_core::Error) -> CliError {
    match CliError::from(e) {
        CliError::Validation { message, .. } => CliError::Validation { message, pointer: Some(pointer) },
        other => other,
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn coord_header(prefix: &str, range: std::ops::Range<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Points from a JSON list of coordinate lists or a CSV of rows.
fn read_points(path: &Path, n: usize) -> CliResult<Vec<MinkVector>> {
    let rows: Vec<Vec<f64>> = if is_csv(path) { read_csv_rows(path)? } else { read_json(path)? };
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != n {
                return Err(CliError::Validation { message: format!("point has {} coordinates, expected {n}", r.len()), pointer: Some(format!("/{i}")) });
            }
            if r.iter().any(|x| !x.is_finite()) {
                return Err(CliError::Validation { message: "non-finite coordinate".into(), pointer: Some(format!("/{i}")) });
            }
            Ok(MinkVector::from(r))
        })
        .collect()
}

fn validate_planes(planes: Vec<LightPlane>, prefix: &str, tol: f64) -> CliResult<Vec<LightPlane>> {
    planes.into_iter().enumerate().map(|(i, p)| LightPlane::new(p.v, p.s, tol).map_err(|e| at(format!("{prefix}/{i}"), e))).collect()
}

fn read_isometry(cfg: &Config, path: &Path) -> CliResult<Isometry> {
    let g: Isometry = read_json(path)?;
    cfg.check_dim(g.dim())?;
    Ok(g)
}

fn read_spec(cfg: &Config, path: &Path) -> CliResult<GroupSpec> {
    let spec: GroupSpec = read_json(path)?;
    cfg.check_dim(spec.dim())?;
    Ok(spec)
}

pub fn classify_cmd(cfg: &Config, iso: &Path) -> CliResult<Output> {
    let g = read_isometry(cfg, iso)?;
    let class = classify(&g, cfg.tol)?;
    let kind = AchronalDomain::new(&g, cfg.tol)?.kind;
    Ok(Output { result: json!({ "label": class.label(), "class": class, "achronal_kind": kind }), tables: Vec::new() })
}

pub fn achronal_cmd(cfg: &Config, iso: &Path, points: &Path, oracle: Option<u32>) -> CliResult<Output> {
    let g = read_isometry(cfg, iso)?;
    let n = g.dim();
    let pts = read_points(points, n)?;
    let domain = AchronalDomain::new(&g, cfg.tol)?;
    let reports = pts
        .par_iter()
        .map(|p| {
            let oracle = oracle.map(|q| iterate_oracle(&g, p, q, cfg.tol)).transpose()?;
            Ok((domain.membership(p), domain.u_membership(p), oracle))
        })
        .collect::<minkgh_core::Result<Vec<_>>>()?;

    let mut header = coord_header("x", 0..n);
    header.extend(["inside", "on_boundary", "margin", "in_u"].map(String::from));
    if oracle.is_some() {
        header.extend(["oracle_achronal", "oracle_on_boundary"].map(String::from));
    }
    let mut table = Table::new("membership", header);
    let mut entries = Vec::with_capacity(pts.len());
    let mut disagreements = 0;
    for (p, (m, u, o)) in pts.iter().zip(&reports) {
        let mut row = p.as_slice().to_vec();
        row.extend([flag(m.inside), flag(m.on_boundary), m.margin, flag(u.inside)]);
        if let Some(o) = o {
            row.extend([flag(o.achronal), flag(o.on_boundary)]);
            if !m.on_boundary && !o.on_boundary && m.inside != o.achronal {
                disagreements += 1;
            }
        }
        table.rows.push(row);
        entries.push(json!({ "point": p, "membership": m, "u_membership": u, "oracle": o }));
    }
    let inside = reports.iter().filter(|r| r.0.inside).count();
    let result = json!({
        "kind": domain.kind,
        "points": entries,
        "inside_count": inside,
        "oracle_q_max": oracle,
        "oracle_disagreements": oracle.map(|_| disagreements),
    });
    Ok(Output { result, tables: vec![table] })
}

pub fn penrose_cmd(cfg: &Config, iso: &Path, planes: &Path) -> CliResult<Output> {
    let g = read_isometry(cfg, iso)?;
    let n = g.dim();
    let planes = validate_planes(read_json(planes)?, "", cfg.tol)?;
    if let Some(i) = planes.iter().position(|p| p.dim() != n) {
        return Err(CliError::Validation { message: format!("plane has dimension {}, expected {n}", planes[i].dim()), pointer: Some(format!("/{i}")) });
    }
    let mut header = coord_header("x", 1..n);
    header.push("s".into());
    header.extend(coord_header("image_x", 1..n));
    header.extend(["image_s", "expansion_factor", "conformal_derivative"].map(String::from));
    let mut table = Table::new("planes", header);
    let mut entries = Vec::with_capacity(planes.len());
    for p in &planes {
        let image = act_on_j(&g, p);
        let a = expansion_factor(&g, &p.v);
        let c = conformal_derivative(&g, &p.v);
        let mut row = p.sphere_coords();
        row.extend(image.sphere_coords());
        row.extend([a, c]);
        table.rows.push(row);
        entries.push(json!({ "plane": p, "image": image, "expansion_factor": a, "conformal_derivative": c }));
    }
    Ok(Output { result: json!({ "planes": entries }), tables: vec![table] })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LambdaFile {
    planes: Vec<LightPlane>,
    #[serde(default = "future")]
    orientation: Orientation,
}

fn future() -> Orientation {
    Orientation::Future
}

fn read_lambda(cfg: &Config, path: &Path) -> CliResult<LambdaSet> {
    let text = read_text(path)?;
    let what = path.display().to_string();
    let is_list = text.trim_start().starts_with('[');
    let (planes, orientation, prefix) = if is_list {
        (parse_json::<Vec<LightPlane>>(&text, &what)?, Orientation::Future, "")
    } else {
        let f: LambdaFile = parse_json(&text, &what)?;
        (f.planes, f.orientation, "/planes")
    };
    let planes = validate_planes(planes, prefix, cfg.tol)?;
    let lambda = LambdaSet::new(planes, orientation)?;
    cfg.check_dim(lambda.dim())?;
    Ok(lambda)
}

/// Unit timelike directions t(cosh r, sinh r ω), r < 1, toward the domain.
fn ray_directions(rng: &mut ChaCha8Rng, n: usize, count: usize, orientation: Orientation) -> Vec<MinkVector> {
    let sign = if orientation == Orientation::Future { 1.0 } else { -1.0 };
    (0..count)
        .map(|_| {
            let omega = loop {
                let w = DVector::from_fn(n - 1, |_, _| rng.gen_range(-1.0..1.0));
                let norm = w.norm();
                if norm > 1e-3 && norm <= 1.0 {
                    break w / norm;
                }
            };
            let r: f64 = rng.gen_range(0.0..1.0);
            let mut v = DVector::zeros(n);
            v[0] = sign * r.cosh();
            v.rows_mut(1, n - 1).copy_from(&(omega * r.sinh()));
            MinkVector(v)
        })
        .collect()
}

pub fn domain_cmd(cfg: &Config, lambda: &Path, points: Option<&Path>, level: Option<f64>, rays: usize) -> CliResult<Output> {
    let lambda = read_lambda(cfg, lambda)?;
    let n = lambda.dim();
    let regularity = is_regular(&lambda, cfg.tol)?;
    let mut tables = Vec::new();

    let mut times = Vec::new();
    if let Some(path) = points {
        let pts = read_points(path, n)?;
        let opts = cfg.ct_options(false);
        let results: Vec<_> = pts.par_iter().map(|p| cosmological_time(&lambda, p, &opts)).collect();
        let mut header = coord_header("x", 0..n);
        header.push("T".into());
        let mut table = Table::new("points", header);
        for (p, r) in pts.iter().zip(results) {
            let mut row = p.as_slice().to_vec();
            match r {
                Ok(ct) => {
                    row.push(ct.t);
                    times.push(json!({ "point": p, "ct": ct }));
                }
                Err(e) if e.is_numerical() => return Err(e.into()),
                Err(e) => {
                    row.push(f64::NAN);
                    times.push(json!({ "point": p, "error": e.to_string() }));
                }
            }
            table.rows.push(row);
        }
        tables.push(table);
    }

    let mut level_report = Value::Null;
    if let Some(t) = level {
        if !regularity.regular {
            return Err(CliError::validation("level sets need a regular domain"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let dirs = ray_directions(&mut rng, n, rays, lambda.orientation);
        let samples = level_set_sample(&lambda, t, None, &dirs, &cfg.ct_options(true))?;
        let mut header = coord_header("x", 0..n);
        header.extend(coord_header("gauss", 0..n));
        header.push("ray".into());
        let mut table = Table::new("level_set", header);
        let mut failures = Vec::new();
        for (k, s) in samples.into_iter().enumerate() {
            match s {
                Ok(lp) => {
                    let mut row = lp.point.as_slice().to_vec();
                    row.extend_from_slice(lp.gauss.as_slice());
                    row.push(lp.ray as f64);
                    table.rows.push(row);
                }
                Err(e) => failures.push(json!({ "ray": k, "error": e.to_string() })),
            }
        }
        level_report = json!({ "t": t, "rays": rays, "sampled": table.rows.len(), "failures": failures });
        tables.push(table);
    }

    let result = json!({
        "planes": lambda.len(),
        "orientation": lambda.orientation,
        "distinct_directions": lambda.distinct_directions(),
        "regularity": regularity,
        "times": times,
        "level_set": level_report,
    });
    Ok(Output { result, tables })
}

fn limit_table(name: &str, n: usize, planes: &[LightPlane]) -> Table {
    let mut header = coord_header("x", 1..n);
    header.push("s".into());
    let mut t = Table::new(name, header);
    t.rows = planes.iter().map(LightPlane::sphere_coords).collect();
    t
}

pub fn group_cmd(cfg: &Config, spec: &Path) -> CliResult<Output> {
    let spec = read_spec(cfg, spec)?;
    let maxlen = cfg.maxlen.unwrap_or(DEFAULT_MAXLEN);
    let elementarity = is_elementary(&spec)?;
    let limit = limit_set_approx(&spec, maxlen)?;
    let future = admissibility_of(&limit, Orientation::Future, cfg.tol)?;
    let past = admissibility_of(&limit, Orientation::Past, cfg.tol)?;
    let mut planes = limit.planes();
    planes.extend(limit.cusp.iter().cloned());
    let result = json!({
        "name": spec.name,
        "dimension": spec.dim(),
        "rank": spec.rank(),
        "relation_residual": spec.relation_residual(),
        "elementarity": elementarity,
        "limit_set": {
            "words": limit.words,
            "maxlen": limit.maxlen,
            "fixed_planes": limit.data.len(),
            "cusp_planes": limit.cusp.len(),
        },
        "admissibility": { "future": future, "past": past },
    });
    Ok(Output { result, tables: vec![limit_table("limit_set", spec.dim(), &planes)] })
}

pub fn cocycle_cmd(cfg: &Config, spec: &Path, cocycle: &Path) -> CliResult<Output> {
    let spec = read_spec(cfg, spec)?;
    let tau: Cocycle = read_json(cocycle)?;
    if tau.values.len() != spec.rank() {
        return Err(CliError::validation(format!("{} translation vectors for {} generators", tau.values.len(), spec.rank())));
    }
    if let Some(i) = tau.values.iter().position(|v| v.dim() != spec.dim()) {
        return Err(CliError::Validation { message: format!("vector has dimension {}, expected {}", tau.values[i].dim(), spec.dim()), pointer: Some(format!("/{i}")) });
    }
    let maxlen = cfg.maxlen.unwrap_or(DEFAULT_MAXLEN);
    let coh = Cohomology::new(&spec)?;
    let residual = cocycle_residual(&spec, &tau)?;
    let class: Vec<f64> = coh.class_coords(&tau).iter().copied().collect();
    let prober = ConeProber::new(&spec, maxlen, cfg.tol)?;
    let future = prober.probe(&tau, Orientation::Future)?;
    let past = prober.probe(&tau, Orientation::Past)?;
    let class_norm = class.iter().map(|c| c * c).sum::<f64>().sqrt();
    let result = json!({
        "z1_dim": coh.z1.dim(),
        "b1_dim": coh.b1.dim(),
        "h1_dim": coh.dim(),
        "containment_residual": coh.containment_residual,
        "cocycle_residual": residual,
        "class": class,
        "coboundary": class_norm <= cfg.tol * (1.0 + tau.coords().amax()),
        "admissibility": { "future": future, "past": past },
    });
    Ok(Output { result, tables: Vec::new() })
}

pub fn tri_cmd(cfg: &Config) -> CliResult<Output> {
    cfg.check_dim(3)?;
    let report = tri_experiment(cfg.tol, cfg.maxlen.unwrap_or(TRI_PROBE_MAXLEN), cfg.seed)?;
    Ok(Output { result: serde_json::to_value(report).map_err(|e| CliError::Numerical(e.to_string()))?, tables: Vec::new() })
}

fn default_samples() -> usize {
    16
}

fn default_tol_field() -> f64 {
    1e-9
}

fn default_rapidity() -> f64 {
    1.5
}

fn default_level() -> f64 {
    1.0
}

/// `model` input, tagged by family.
#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum ModelInput {
    Translation {
        dim: usize,
        #[serde(default)]
        lattice: Vec<Vec<f64>>,
    },
    Misner {
        dim: usize,
        t0: f64,
        #[serde(default)]
        lattice: Vec<MisnerElement>,
        #[serde(default)]
        samples: Vec<MinkVector>,
    },
    Unipotent {
        lambdas: Vec<f64>,
        basis: Vec<Vec<f64>>,
        component: usize,
        #[serde(default)]
        lattice: Vec<Vec<f64>>,
        #[serde(default = "default_profile")]
        profile: AProfile,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Radiant {
        spec: GroupSpec,
        #[serde(default = "default_level")]
        level: f64,
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default = "default_rapidity")]
        max_rapidity: f64,
    },
    Extension(SymExtProblem),
    Twisted {
        base: Box<ModelInput>,
        fiber: Fiber,
        monodromy: Vec<EuclideanIsometry>,
        #[serde(default)]
        ambient: Option<AmbientPresentation>,
        #[serde(default = "default_tol_field")]
        tol: f64,
    },
}

fn default_profile() -> AProfile {
    AProfile::Default
}

impl ModelInput {
    fn family(&self) -> &'static str {
        match self {
            ModelInput::Translation { .. } => "translation",
            ModelInput::Misner { .. } => "misner",
            ModelInput::Unipotent { .. } => "unipotent",
            ModelInput::Radiant { .. } => "radiant",
            ModelInput::Extension(_) => "extension",
            ModelInput::Twisted { .. } => "twisted",
        }
    }
}

/// y values spread over the component interval.
fn interval_grid(lower: Option<f64>, upper: Option<f64>, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| {
            let f = (k as f64 + 0.5) / count as f64;
            match (lower, upper) {
                (Some(a), Some(b)) => a + f * (b - a),
                (Some(a), None) => a + f / (1.0 - f),
                (None, Some(b)) => b - (1.0 - f) / f,
                (None, None) => (std::f64::consts::PI * (f - 0.5)).tan(),
            }
        })
        .collect()
}

/// Builds the model and its report; `base` receives the validated base model of a
/// twisted product.
fn build_model(cfg: &Config, input: ModelInput, tables: &mut Vec<Table>) -> CliResult<(Value, Option<BaseModel>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match input {
        ModelInput::Translation { dim, lattice } => {
            cfg.check_dim(dim)?;
            let m = build_translation(dim, lattice)?;
            let gens = m.generators();
            Ok((json!({ "model": m, "generators": gens }), Some(BaseModel::Translation(m))))
        }
        ModelInput::Misner { dim, t0, lattice, samples } => {
            cfg.check_dim(dim)?;
            if let Some(i) = samples.iter().position(|p| p.dim() != dim) {
                return Err(CliError::Validation { message: format!("sample has dimension {}, expected {dim}", samples[i].dim()), pointer: Some(format!("/samples/{i}")) });
            }
            let m = build_misner(dim, t0, lattice, &samples, cfg.tol)?;
            let gens: Vec<Isometry> = m.generators().iter().map(MisnerElement::isometry).collect();
            let times = samples.iter().map(|p| m.cosmological_time(p)).collect::<minkgh_core::Result<Vec<_>>>()?;
            Ok((json!({ "model": m, "generators": gens, "sample_times": times }), Some(BaseModel::Misner(m))))
        }
        ModelInput::Unipotent { lambdas, basis, component, lattice, profile, samples } => {
            let m = build_unipotent(lambdas, basis, component, lattice, profile)?;
            cfg.check_dim(m.dim())?;
            let probe = surface_completeness_probe(&m, &default_escape_paths(&m))?;
            let d = m.lambdas.len();
            let ys = interval_grid(m.lower, m.upper, samples);
            let zetas: Vec<Vec<f64>> = (0..samples).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let pts = surface_samples(&m, &ys, &zetas);
            let mut table = Table::new("surface", coord_header("x", 0..m.dim()));
            table.rows = pts.iter().map(|p| p.as_slice().to_vec()).collect();
            tables.push(table);
            let report = json!({
                "model": m,
                "components": components(&m.lambdas),
                "y_ref": m.y_ref(),
                "completeness": probe,
                "surface_points": pts.len(),
            });
            Ok((report, Some(BaseModel::Unipotent(m))))
        }
        ModelInput::Radiant { spec, level, samples, max_rapidity } => {
            cfg.check_dim(spec.dim())?;
            if !(level > 0.0 && level.is_finite()) {
                return Err(CliError::Validation { message: "level must be positive".into(), pointer: Some("/level".into()) });
            }
            if !(max_rapidity > 0.0 && max_rapidity.is_finite()) {
                return Err(CliError::Validation { message: "max_rapidity must be positive".into(), pointer: Some("/max_rapidity".into()) });
            }
            let m = radiant_standard(&spec)?;
            let maxlen = cfg.maxlen.unwrap_or(DEFAULT_MAXLEN);
            let pts = m.level_samples(level, samples, max_rapidity, &mut rng);
            let residual = m.invariance_residual(&pts)?;
            let future = m.admissibility(maxlen, cfg.tol, Orientation::Future)?;
            let mut header = coord_header("x", 0..m.dim());
            header.push("T".into());
            let mut table = Table::new("level", header);
            for p in &pts {
                let mut row = p.as_slice().to_vec();
                row.push(m.cosmological_time(p)?);
                table.rows.push(row);
            }
            tables.push(table);
            let report = json!({ "model": m, "level": level, "invariance_residual": residual, "admissibility": future });
            Ok((report, Some(BaseModel::Radiant(m))))
        }
        ModelInput::Extension(problem) => {
            cfg.check_dim(problem.basis.first().map_or(0, Vec::len))?;
            let r = symmetric_extension(&problem)?;
            Ok((json!({ "problem": problem, "extension": r }), None))
        }
        ModelInput::Twisted { base, fiber, monodromy, ambient, tol } => {
            let family = base.family();
            let inner_cfg = Config { dim: None, ..cfg.clone() };
            let (base_report, base_model) = build_model(&inner_cfg, *base, &mut Vec::new())?;
            let Some(base_model) = base_model else {
                return Err(CliError::Validation { message: format!("{family} is not a base family"), pointer: Some("/base/family".into()) });
            };
            let tp = twisted_product(base_model, fiber, monodromy, ambient.as_ref(), tol)?;
            cfg.check_dim(tp.dim())?;
            let flat = tp.flatten(tol);
            let report = json!({
                "dimension": tp.dim(),
                "linear": tp.is_linear(tol),
                "ambient_checked": ambient.is_some(),
                "flattened": flat,
                "product": tp,
                "base_report": base_report,
            });
            Ok((report, None))
        }
    }
}

pub fn model_cmd(cfg: &Config, path: &Path) -> CliResult<Output> {
    let input: ModelInput = read_json(path)?;
    let family = input.family();
    let mut tables = Vec::new();
    let (mut report, _) = build_model(cfg, input, &mut tables)?;
    report["family"] = json!(family);
    Ok(Output { result: report, tables })
}

fn default_half_width() -> f64 {
    1.0
}

fn default_per_axis() -> usize {
    5
}

fn default_fill() -> f64 {
    0.8
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CmcInput {
    surface: SurfaceSpec,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default = "default_half_width")]
    half_width: f64,
    #[serde(default = "default_per_axis")]
    per_axis: usize,
    #[serde(default = "default_fill")]
    fill: f64,
    #[serde(default)]
    step: Option<f64>,
}

pub fn cmc_cmd(cfg: &Config, path: &Path) -> CliResult<Output> {
    if is_csv(path) {
        let rows = read_csv_rows(path)?;
        let graph = TabulatedGraph::from_rows(&rows)?;
        let n = graph.axes.len() + 1;
        cfg.check_dim(n)?;
        let report = cmc_check_tabulated(&graph, cfg.tol)?;
        let mut header = coord_header("x", 1..n);
        header.push("H".into());
        let mut table = Table::new("estimates", header);
        for (x, h) in graph.interior_estimates()? {
            let mut row = x;
            row.push(h);
            table.rows.push(row);
        }
        return Ok(Output { result: json!({ "source": "table", "dimension": n, "report": report }), tables: vec![table] });
    }
    let input: CmcInput = read_json(path)?;
    let n = match (input.dim, cfg.dim) {
        (Some(a), Some(b)) if a != b => return Err(CliError::validation(format!("--dim {b} but the input has dimension {a}"))),
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(CliError::Validation { message: "dimension missing: give \"dim\" or --dim".into(), pointer: Some("/dim".into()) }),
    };
    if !(input.half_width > 0.0 && input.fill > 0.0 && input.fill <= 1.0) {
        return Err(CliError::validation("half_width must be positive and fill in (0, 1]"));
    }
    let surface = input.surface.build(n, input.half_width)?;
    let points = grid_points(&surface, input.per_axis, input.fill);
    if points.len() < CMC_MIN_POINTS {
        return Err(CliError::Validation { message: format!("{} grid points, at least {CMC_MIN_POINTS} needed", points.len()), pointer: Some("/per_axis".into()) });
    }
    let report = cmc_check(&surface, &points, cfg.tol, input.step)?;
    let mut header = coord_header("x", 1..n);
    header.push("H".into());
    let mut table = Table::new("estimates", header);
    for (x, h) in points.iter().zip(&report.estimates) {
        let mut row = x.clone();
        row.push(*h);
        table.rows.push(row);
    }
    let result = json!({
        "source": input.surface,
        "dimension": n,
        "exact": input.surface.exact_mean_curvature(n),
        "report": report,
    });
    Ok(Output { result, tables: vec![table] })
}
