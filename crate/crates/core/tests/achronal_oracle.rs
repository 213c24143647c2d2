use minkgh_core::achronal::{iterate_oracle, AchronalDomain};
use minkgh_core::classify::Family;
use minkgh_core::samples::{random_isometry, random_point, SampleRanges};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FAMILIES: [(Family, &[usize]); 5] = [
    (Family::Elliptic, &[3, 4, 5]),
    (Family::Hyperbolic, &[3, 4]),
    (Family::Loxodromic, &[4, 5]),
    (Family::Unipotent, &[3, 4, 5]),
    (Family::Parabolic, &[5, 6]),
];

#[derive(Default, Debug)]
struct Tally {
    compared: usize,
    excluded: usize,
    disagreements: usize,
}

fn run(seed: u64, per_family: usize, points: usize, band: f64) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    let ranges = SampleRanges { rapidity: (0.1, 0.27), ..SampleRanges::default() };
    for (family, dims) in FAMILIES {
        for k in 0..per_family {
            let n = dims[k % dims.len()];
            let (g, spec) = random_isometry(&mut rng, n, family, k, &ranges);
            let dom = AchronalDomain::new(&g, 1e-9).unwrap();
            for _ in 0..points {
                let x = random_point(&mut rng, n, 3.0);
                let m = dom.membership_with_band(&x, band);
                let o = iterate_oracle(&g, &x, 200, 1e-9).unwrap();
                if m.on_boundary || o.on_boundary || o.indeterminate {
                    tally.excluded += 1;
                    if std::env::var("SHOW_EXCL").is_ok() {
                        eprintln!("EXCL {family:?} {:?} order={:?} m={} ob={} ind={} minsep={}", spec.tau_kind.or(None), dom.analysis.class.rotation_order, m.margin, o.on_boundary, o.indeterminate, o.min_separation);
                    }
                    continue;
                }
                tally.compared += 1;
                if m.inside != o.achronal {
                    tally.disagreements += 1;
                    eprintln!("{spec:?} n={n} x={:?} margin={} oracle={o:?}", x.as_slice(), m.margin);
                }
            }
        }
    }
    tally
}

#[test]
fn closed_forms_agree_with_oracle() {
    let t = run(2024, 8, 40, 1e-6);
    assert_eq!(t.disagreements, 0, "{t:?}");
    assert!(t.compared > 9 * t.excluded, "{t:?}");
}

#[test]
#[ignore]
fn full_scale_tally() {
    let start = std::time::Instant::now();
    let t = run(7, 50, 40, 1e-6);
    eprintln!("{t:?} in {:?}", start.elapsed());
    assert_eq!(t.disagreements, 0);
}
