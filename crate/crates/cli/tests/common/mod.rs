#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use minkgh_core::domain::misner_wedge;
use minkgh_core::holonomy::schottky_pair;
use minkgh_core::penrose::LightPlane;
use minkgh_core::{Isometry, MinkVector};
use serde_json::{json, Value};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_minkgh"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

/// Runs a subcommand expected to succeed and returns the report.
pub fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

pub fn write(dir: &Path, name: &str, value: &Value) -> String {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(value).unwrap()).unwrap();
    p.display().to_string()
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

/// Input files shared by the command-line tests.
pub struct Fixtures {
    pub dir: tempfile::TempDir,
    pub translation: String,
    pub boost: String,
    pub points: String,
    pub planes: String,
    pub wedge: String,
    pub wedge_points: String,
    pub schottky: String,
    pub cocycle: String,
    pub models: Vec<(&'static str, String)>,
    pub cmc_json: String,
    pub cmc_csv: String,
}

impl Fixtures {
    pub fn path(&self) -> &Path {
        self.dir.path()
    }
}

pub fn fixtures() -> Fixtures {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let translation = write(d, "translation.json", &json!(Isometry::translation(&MinkVector::new(&[0.0, 1.0, 0.0]))));
    let boost = write(d, "boost.json", &json!(Isometry::boost(3, 1, 0.5).with_translation(&MinkVector::new(&[0.0, 0.0, 1.0]))));
    let points = write(d, "points.json", &json!([[0.0, 0.0, 0.0], [0.2, 1.0, 0.5], [1.0, 0.3, -2.0], [-0.5, 2.0, 0.1], [3.0, 0.0, 0.0]]));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let planes: Vec<LightPlane> = [0.0f64, 1.0, 2.5, 4.0]
        .iter()
        .enumerate()
        .map(|(k, a)| LightPlane::new(MinkVector::new(&[r, r * a.cos(), r * a.sin()]), k as f64 * 0.3 - 0.4, 1e-9).unwrap())
        .collect();
    let planes = write(d, "planes.json", &json!(planes));
    let wedge = write(d, "wedge.json", &json!(misner_wedge(3)));
    let wedge_points = write_text(d, "wedge_points.csv", "x0,x1,x2\n1.0,0.2,0.0\n2.0,-1.0,3.0\n0.5,0.7,0.0\n");
    let schottky = write(d, "schottky.json", &json!(schottky_pair(2.0, FRAC_PI_2)));
    let cocycle = write(d, "cocycle.json", &json!([[0.004, -0.002, 0.003], [0.001, 0.005, -0.002]]));

    let spec = json!(schottky_pair(2.0, FRAC_PI_2));
    let models = vec![
        ("translation", write(d, "m_translation.json", &json!({ "family": "translation", "dim": 3, "lattice": [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }))),
        (
            "misner",
            write(d, "m_misner.json", &json!({ "family": "misner", "dim": 3, "t0": 0.5, "lattice": [], "samples": [[1.0, 0.2, 0.0], [2.0, -1.0, 0.5]] })),
        ),
        (
            "unipotent",
            write(
                d,
                "m_unipotent.json",
                &json!({ "family": "unipotent", "lambdas": [-1.0, 0.5], "basis": [[1.0, 0.0], [0.0, 1.0]], "component": 1,
                          "lattice": [[1.0, 0.0], [0.0, 1.0]], "samples": 8 }),
            ),
        ),
        ("radiant", write(d, "m_radiant.json", &json!({ "family": "radiant", "spec": spec, "level": 1.5, "samples": 12 }))),
        (
            "extension",
            write(d, "m_extension.json", &json!({ "family": "extension", "basis": [[1.0, 0.0, 0.0]], "images": [[0.5, 0.3, 0.0]], "case": "bounded", "bound": 1.0 })),
        ),
        (
            "twisted",
            write(
                d,
                "m_twisted.json",
                &json!({ "family": "twisted", "base": { "family": "misner", "dim": 3, "t0": 0.5 },
                          "fiber": { "kind": "torus", "lattice": [[1.0]] },
                          "monodromy": [{ "rotation": [[1.0]], "translation": [0.3] }] }),
            ),
        ),
    ];
    let cmc_json = write(d, "hyperboloid.json", &json!({ "surface": { "kind": "hyperboloid", "t": 1.0 }, "dim": 3, "half_width": 2.0, "per_axis": 5 }));
    let mut csv = String::from("x1,x2,phi\n");
    for i in 0..9 {
        for j in 0..9 {
            let (x, y) = (-1.0 + 0.25 * i as f64, -1.0 + 0.25 * j as f64);
            csv.push_str(&format!("{x},{y},{}\n", 0.5 + 0.1 * x - 0.2 * y));
        }
    }
    let cmc_csv = write_text(d, "plane.csv", &csv);
    Fixtures { dir, translation, boost, points, planes, wedge, wedge_points, schottky, cocycle, models, cmc_json, cmc_csv }
}

/// Argument lists covering every subcommand.
pub fn all_invocations(f: &Fixtures) -> Vec<(String, Vec<String>)> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut out = vec![
        ("classify".to_string(), s(&["classify", &f.boost])),
        ("achronal".to_string(), s(&["achronal", &f.boost, &f.points, "--oracle", "50"])),
        ("penrose-act".to_string(), s(&["penrose-act", &f.boost, &f.planes])),
        ("domain".to_string(), s(&["domain", &f.wedge, "--points", &f.wedge_points, "--level", "1.2", "--rays", "8"])),
        ("group".to_string(), s(&["group", &f.schottky, "--maxlen", "4"])),
        ("cocycle".to_string(), s(&["cocycle", &f.schottky, &f.cocycle, "--maxlen", "4"])),
        ("tri".to_string(), s(&["tri", "--seed", "3"])),
        ("cmc".to_string(), s(&["cmc", &f.cmc_json])),
        ("cmc-table".to_string(), s(&["cmc", &f.cmc_csv])),
    ];
    for (family, path) in &f.models {
        out.push((format!("model-{family}"), s(&["model", path, "--seed", "5", "--maxlen", "4"])));
    }
    out
}

pub fn out_dir(base: &Path, name: &str) -> PathBuf {
    base.join(name)
}
