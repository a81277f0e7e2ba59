use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_complex::Complex64;
use proptest::prelude::*;
use roughscat::forward::*;
use roughscat::kernels::*;
use roughscat_cli::config::RunConfig;
use roughscat_cli::formats::*;

const SMALL: &str = "# low-frequency run\nsurface.name = example1\nmedium.omega = 4\ngeometry.A = 4\ngeometry.N = 8\nimaging.nx1 = 21\nimaging.nx2 = 11\n";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_roughscat"));
    for (k, _) in std::env::vars() {
        if k.starts_with("ROUGHSCAT_") {
            c.env_remove(k);
        }
    }
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn small_dir() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.cfg");
    fs::write(&cfg, SMALL).unwrap();
    (dir, cfg)
}

fn simulate(dir: &Path, name: &str) -> Vec<u8> {
    let o = run(dir, &["--config", "small.cfg", "simulate", "--out", name]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    fs::read(dir.join(name)).unwrap()
}

#[test]
fn simulate_writes_deterministic_complete_dataset() {
    let (dir, _) = small_dir();
    let a = simulate(dir.path(), "a.txt");
    let b = simulate(dir.path(), "b.txt");
    assert_eq!(a, b);
    let d = read_dataset(&dir.path().join("a.txt")).unwrap();
    assert_eq!(d.count(), 17);
    let text = String::from_utf8(a).unwrap();
    let body = text.split("---\n").nth(1).unwrap();
    assert_eq!(body.lines().count(), 1 + 17 * 17 * 2);
    assert!(body.starts_with("source_index,receiver_index,polarization,us1_re,us1_im,us2_re,us2_im,pus1_re"));
    // no stray temporary files are left behind
    let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 3, "{names:?}");
}

#[test]
fn simulate_without_surface_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--set", "geometry.N=8", "simulate", "--out", "x.txt"]);
    assert_eq!(code(&o), 2);
    assert!(!dir.path().join("x.txt").exists());
}

#[test]
fn config_errors_exit_2() {
    let (dir, _) = small_dir();
    let d = dir.path();
    assert_eq!(code(&run(d, &["--set", "medium.mu=-1", "verify", "--suite", "funk-hecke"])), 2);
    assert_eq!(code(&run(d, &["--set", "nosuch.key=1", "verify", "--suite", "funk-hecke"])), 2);
    assert_eq!(code(&run(d, &["--config", "missing.cfg", "verify", "--suite", "funk-hecke"])), 2);
    assert_eq!(code(&run(d, &["frobnicate"])), 2);
    assert_eq!(code(&run(d, &["--help"])), 0);
    // a source inside the surface is a configuration problem
    let o = run(d, &["--config", "small.cfg", "--set", "geometry.H=0.05", "simulate", "--out", "x.txt"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn environment_overrides_config_file() {
    let (dir, _) = small_dir();
    let o = bin()
        .current_dir(dir.path())
        .env("ROUGHSCAT_GEOMETRY_N", "5")
        .args(["--config", "small.cfg", "simulate", "--out", "e.txt"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(read_dataset(&dir.path().join("e.txt")).unwrap().count(), 11);
    // flags beat the environment
    let o = bin()
        .current_dir(dir.path())
        .env("ROUGHSCAT_GEOMETRY_N", "5")
        .args(["--config", "small.cfg", "--set", "geometry.N=4", "simulate", "--out", "f.txt"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(read_dataset(&dir.path().join("f.txt")).unwrap().count(), 9);
    let o = bin().current_dir(dir.path()).env("ROUGHSCAT_GEOMETRY_N", "many").args(["verify", "--suite", "funk-hecke"]).output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn corrupt_records_noise_and_is_reproducible() {
    let (dir, _) = small_dir();
    let d = dir.path();
    let clean = simulate(d, "clean.txt");
    for out in ["n1.txt", "n2.txt"] {
        let o = run(d, &["corrupt", "clean.txt", "--delta", "0.2", "--seed", "7", "--out", out]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let n1 = fs::read(d.join("n1.txt")).unwrap();
    assert_eq!(n1, fs::read(d.join("n2.txt")).unwrap());
    let text = String::from_utf8(n1).unwrap();
    assert!(text.contains("\nnoise.delta = 0.2\n") && text.contains("\nnoise.seed = 7\n"));
    let noisy = read_dataset(&d.join("n1.txt")).unwrap();
    assert_eq!(noisy.meta.noise, Some(NoiseInfo { delta: 0.2, seed: 7 }));
    // a different seed gives different values
    assert_eq!(code(&run(d, &["corrupt", "clean.txt", "--delta", "0.2", "--seed", "8", "--out", "n3.txt"])), 0);
    assert_ne!(read_dataset(&d.join("n3.txt")).unwrap().us_values(), noisy.us_values());
    // delta = 0 leaves the payload untouched
    assert_eq!(code(&run(d, &["corrupt", "clean.txt", "--delta", "0", "--out", "z.txt"])), 0);
    let payload = |b: &[u8]| String::from_utf8(b.to_vec()).unwrap().split("---\n").nth(1).unwrap().to_string();
    assert_eq!(payload(&clean), payload(&fs::read(d.join("z.txt")).unwrap()));
    assert_eq!(code(&run(d, &["corrupt", "clean.txt", "--delta", "-0.1", "--out", "bad.txt"])), 2);
    assert!(!d.join("bad.txt").exists());
    // noise is applied once
    assert_eq!(code(&run(d, &["corrupt", "n1.txt", "--delta", "0.1", "--out", "twice.txt"])), 2);
}

fn image_rows(path: &Path) -> Vec<[f64; 3]> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect()
}

#[test]
fn image_ridge_and_render() {
    let (dir, _) = small_dir();
    let d = dir.path();
    simulate(d, "data.txt");
    let args = ["--config", "small.cfg", "image", "data.txt", "--out", "img.csv", "--ridge", "ridge.csv"];
    assert_eq!(code(&run(d, &args)), 0);
    let rows = image_rows(&d.join("img.csv"));
    assert_eq!(rows.len(), 21 * 11);
    assert!(rows.iter().all(|r| r[2] >= 0.0));
    // x1 runs fastest
    assert_eq!(rows[0][0], -6.0);
    assert_eq!(rows[1][1], 0.0);
    assert_eq!(rows[21][1], 0.12);
    let ridge = fs::read_to_string(d.join("ridge.csv")).unwrap();
    assert!(ridge.starts_with("x1,x2_ridge\n"));
    assert_eq!(ridge.lines().count(), 22);
    let first = fs::read(d.join("img.csv")).unwrap();
    assert_eq!(code(&run(d, &args)), 0);
    assert_eq!(first, fs::read(d.join("img.csv")).unwrap());

    let norm = ["--config", "small.cfg", "--set", "imaging.normalize=true", "image", "data.txt", "--out", "norm.csv"];
    assert_eq!(code(&run(d, &norm)), 0);
    let max = image_rows(&d.join("norm.csv")).iter().fold(0.0f64, |m, r| m.max(r[2]));
    assert_eq!(max, 1.0);

    for _ in 0..2 {
        assert_eq!(code(&run(d, &["render", "img.csv", "--out", "img.pgm"])), 0);
    }
    let pgm = fs::read_to_string(d.join("img.pgm")).unwrap();
    assert!(pgm.starts_with("P2\n21 11\n65535\n"));
    assert_eq!(code(&run(d, &["render", "img.csv", "--out", "again.pgm"])), 0);
    assert_eq!(pgm, fs::read_to_string(d.join("again.pgm")).unwrap());
    let pixels: Vec<Vec<u32>> = pgm.lines().skip(3).map(|l| l.split(' ').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(pixels.len(), 11);
    assert!(pixels.iter().all(|r| r.len() == 21));
    // top row is the largest x2
    let top: Vec<f64> = rows[10 * 21..].iter().map(|r| r[2]).collect();
    let max = rows.iter().fold(0.0f64, |m, r| m.max(r[2]));
    for (p, v) in pixels[0].iter().zip(&top) {
        assert_eq!(*p, (v / max * 65535.0).round() as u32);
    }
}

#[test]
fn image_rejects_mismatched_configuration() {
    let (dir, _) = small_dir();
    let d = dir.path();
    simulate(d, "data.txt");
    for set in ["geometry.N=9", "geometry.A=5", "medium.omega=5"] {
        let o = run(d, &["--config", "small.cfg", "--set", set, "image", "data.txt", "--out", "x.csv"]);
        assert_eq!(code(&o), 2, "{set}");
    }
    assert!(!d.join("x.csv").exists());
    assert_eq!(code(&run(d, &["image", "missing.txt", "--out", "x.csv"])), 2);
    fs::write(d.join("broken.txt"), "surface.name = flat\n---\nnot,a,dataset\n").unwrap();
    assert_eq!(code(&run(d, &["image", "broken.txt", "--out", "x.csv"])), 2);
}

#[test]
fn render_contract() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut csv = String::from("x1,x2,value\n");
    for x2 in [0.0, 0.5] {
        for x1 in [0.0, 1.0, 2.0] {
            csv.push_str(&format!("{x1},{x2},3.5\n"));
        }
    }
    fs::write(d.join("c.csv"), &csv).unwrap();
    assert_eq!(code(&run(d, &["render", "c.csv", "--out", "c.pgm"])), 0);
    assert_eq!(fs::read_to_string(d.join("c.pgm")).unwrap(), "P2\n3 2\n65535\n65535 65535 65535\n65535 65535 65535\n");
    for bad in ["x1,x2,value\n0,0,1\n1,0,zz\n", "a,b,c\n0,0,1\n", "x1,x2,value\n0,0,1\n1,0,1\n0,1,1\n", "x1,x2,value\n0,0,-1\n"] {
        fs::write(d.join("bad.csv"), bad).unwrap();
        assert_eq!(code(&run(d, &["render", "bad.csv", "--out", "bad.pgm"])), 2, "{bad}");
    }
    assert!(!d.join("bad.pgm").exists());
}

#[test]
fn verify_exit_codes() {
    let (dir, _) = small_dir();
    let d = dir.path();
    let o = run(d, &["verify", "--suite", "funk-hecke", "--out", "fh.txt"]);
    assert_eq!(code(&o), 0);
    let report = fs::read_to_string(d.join("fh.txt")).unwrap();
    assert_eq!(report.lines().filter(|l| l.starts_with("PASS funk-hecke")).count(), 4);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), report);
    assert_eq!(code(&run(d, &["verify", "--suite", "im-gamma,navier"])), 0);
    assert_eq!(code(&run(d, &["--set", "geometry.A=20", "verify", "--suite", "hk-identity"])), 0);
    let o = run(d, &["--set", "geometry.A=2", "verify", "--suite", "hk-identity", "--out", "hk.txt"]);
    assert_eq!(code(&o), 1);
    assert!(fs::read_to_string(d.join("hk.txt")).unwrap().starts_with("FAIL hk-identity"));
    assert_eq!(code(&run(d, &["verify", "--suite", "no-such-suite"])), 2);
    // a tighter tolerance than roundoff turns a pass into a failure
    assert_eq!(code(&run(d, &["verify", "--suite", "navier", "--tol", "1e-20"])), 1);
    assert_eq!(code(&run(d, &["verify", "--suite", "navier", "--tol", "-1"])), 2);
}

#[test]
fn verify_solver_suites_on_small_problem() {
    let (dir, _) = small_dir();
    let o = run(dir.path(), &["--config", "small.cfg", "--threads", "2", "verify", "--suite", "reciprocity,boundary"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

fn small_meta(noise: Option<NoiseInfo>) -> DatasetMeta {
    let m = ElasticMedium::new(1.3, 0.7, 5.0).unwrap();
    DatasetMeta {
        medium: m,
        params: GeneralizedStressParams::traction(&m),
        geometry: MeasurementGeometry::new(1.5, 3.0, 2).unwrap(),
        surface: SurfaceProfile::from_spec("sines", Some("0.1; 0.05,2.5,0.3")).unwrap(),
        bie: BIEConfig::for_aperture(&m, 3.0),
        noise,
    }
}

#[test]
fn header_round_trip_preserves_metadata_and_fingerprint() {
    let meta = small_meta(Some(NoiseInfo { delta: 0.4, seed: 99 }));
    let d = CauchyDataSet::from_fn(meta, |k, i, j| {
        let v = Complex64::new(k as f64 + 0.1, i as f64 / 3.0);
        (Vec2C::new(v, v * j as f64), Vec2C::new(-v, v.conj()))
    })
    .unwrap();
    let back = parse_dataset(&dataset_to_string(&d)).unwrap();
    assert_eq!(back, d);
    assert_eq!(back.fingerprint(), d.fingerprint());
    let mut cfg = RunConfig::new();
    for (k, v) in dataset_header(&d.meta) {
        cfg.set(&k, &v).unwrap();
    }
    assert_eq!(meta_from_header(&cfg).unwrap(), d.meta);
}

#[test]
fn dataset_parser_rejects_damage() {
    let d = CauchyDataSet::from_fn(small_meta(None), |_, _, _| (Vec2C::ZERO, Vec2C::ZERO)).unwrap();
    let text = dataset_to_string(&d);
    let mut lines: Vec<&str> = text.lines().collect();
    assert!(parse_dataset(&lines[..lines.len() - 1].join("\n")).is_err());
    let dup = lines[lines.len() - 2];
    let n = lines.len();
    lines[n - 1] = dup;
    assert!(parse_dataset(&lines.join("\n")).is_err());
    assert!(parse_dataset(&text.replace("---\n", "")).is_err());
    assert!(parse_dataset(&text.replace("geometry.N = 2\n", "")).is_err());
    assert!(parse_dataset(&text.replace(",1,0.0", ",3,0.0")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dataset_values_round_trip_exactly(bits in prop::collection::vec(any::<u64>(), 8 * 50)) {
        let vals: Vec<f64> = bits.iter().map(|b| {
            let v = f64::from_bits(*b);
            if v.is_finite() { v } else { 0.0 }
        }).collect();
        let d = CauchyDataSet::from_fn(small_meta(None), |k, i, j| {
            let o = ((k * 5 + i) * 2 + j - 1) * 8;
            let c = |a: usize| Complex64::new(vals[o + a], vals[o + a + 1]);
            (Vec2C::new(c(0), c(2)), Vec2C::new(c(4), c(6)))
        }).unwrap();
        let back = parse_dataset(&dataset_to_string(&d)).unwrap();
        for (a, b) in d.us_values().iter().chain(d.pus_values()).zip(back.us_values().iter().chain(back.pus_values())) {
            for (p, q) in [(a.x1, b.x1), (a.x2, b.x2)] {
                prop_assert_eq!(p.re.to_bits(), q.re.to_bits());
                prop_assert_eq!(p.im.to_bits(), q.im.to_bits());
            }
        }
    }

    #[test]
    fn pgm_is_linear_in_the_maximum(values in prop::collection::vec(0.0..1e3f64, 12), scale in 1e-3..1e3f64) {
        let table = |s: f64| ImageTable {
            x1: vec![0.0, 1.0, 2.0, 3.0],
            x2: vec![0.0, 1.0, 2.0],
            values: values.iter().map(|v| v * s).collect(),
        };
        let a = render_pgm(&table(1.0));
        prop_assert!(a.starts_with("P2\n4 3\n65535\n"));
        let max = values.iter().fold(0.0f64, |m, v| m.max(*v));
        if max > 0.0 {
            prop_assert!(a.lines().skip(3).flat_map(|l| l.split(' ')).any(|p| p == "65535"));
        }
        // scaling the image leaves pixels within one level
        let b = render_pgm(&table(scale));
        for (p, q) in a.split_whitespace().zip(b.split_whitespace()).skip(4) {
            let (p, q): (i64, i64) = (p.parse().unwrap(), q.parse().unwrap());
            prop_assert!((p - q).abs() <= 1);
        }
    }
}
