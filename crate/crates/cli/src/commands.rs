use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roughscat::forward::{add_noise, generate_dataset, incident_field, CauchyDataSet, DensitySolution, ForwardSolver};
use roughscat::imaging::{compute_image, extract_ridge};
use roughscat::kernels::{gamma, im_gamma_half, CirclePart, Vec2, Vec2C};
use roughscat::verify::{
    check_boundary_condition, check_funk_hecke, check_hk_identity, check_navier_residual, check_reciprocity,
    IdentityReport,
};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult, EXIT_OK, EXIT_VERIFY_FAILED};
use crate::formats::{
    dataset_to_string, image_to_string, parse_image, read_dataset, read_text, render_pgm, ridge_to_string, write_atomic,
};

pub const SUITES: [&str; 6] = ["funk-hecke", "im-gamma", "hk-identity", "navier", "reciprocity", "boundary"];

/// Tolerances of the suites that have no core default.
pub const IM_GAMMA_TOL: f64 = 1e-8;
pub const IM_GAMMA_PAIRS: usize = 100;
/// Trapezoid intervals per shear wavelength on the measurement line.
pub const HK_POINTS_PER_WAVELENGTH: f64 = 20.0;
/// Finite-difference step of the Navier suite times k_s; balances the
/// fourth-order truncation error against roundoff.
pub const NAVIER_STEP_KS: f64 = 3e-3;

fn output(explicit: Option<&Path>, cfg: &RunConfig, key: &str) -> CliResult<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| cfg.path(key))
        .ok_or_else(|| CliError::usage(format!("no output path: pass --out or set {key}")))
}

fn input(explicit: Option<&Path>, cfg: &RunConfig, key: &str) -> CliResult<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| cfg.path(key))
        .ok_or_else(|| CliError::usage(format!("no input file: pass a path or set {key}")))
}

pub fn simulate(cfg: &RunConfig, out: Option<&Path>) -> CliResult<CauchyDataSet> {
    let surface = cfg.surface()?;
    let out = output(out, cfg, "paths.dataset")?;
    let medium = cfg.medium()?;
    let params = cfg.stress(&medium)?;
    let geometry = cfg.geometry()?;
    let bie = cfg.bie(&medium, &geometry)?;
    let d = generate_dataset(&surface, &geometry, &medium, &params, &bie)?;
    write_atomic(&out, dataset_to_string(&d).as_bytes())?;
    eprintln!("wrote {} ({} records, {} nodes)", out.display(), d.us_values().len(), d.meta.bie.node_count);
    Ok(d)
}

pub fn corrupt(
    cfg: &RunConfig,
    input_path: Option<&Path>,
    delta: Option<f64>,
    seed: Option<u64>,
    out: Option<&Path>,
) -> CliResult<CauchyDataSet> {
    let delta = delta
        .or_else(|| cfg.real("noise.delta"))
        .ok_or_else(|| CliError::usage("no noise level: pass --delta or set noise.delta"))?;
    let seed = seed.or_else(|| cfg.seed("noise.seed")).unwrap_or(0);
    let out = out.map(Path::to_path_buf).ok_or_else(|| CliError::usage("corrupt needs --out"))?;
    let d = read_dataset(&input(input_path, cfg, "paths.dataset")?)?;
    let noisy = add_noise(&d, delta, seed)?;
    write_atomic(&out, dataset_to_string(&noisy).as_bytes())?;
    Ok(noisy)
}

/// Any geometry, medium or stress key given in the config must agree with
/// the dataset.
fn check_consistency(cfg: &RunConfig, d: &CauchyDataSet) -> CliResult<()> {
    let mismatch = |what: &str| CliError::usage(format!("{what} in the config does not match the dataset"));
    if ["geometry.H", "geometry.A", "geometry.N"].iter().any(|k| cfg.contains(k)) && cfg.geometry()? != d.meta.geometry {
        return Err(mismatch("geometry"));
    }
    if ["medium.mu", "medium.lambda", "medium.omega"].iter().any(|k| cfg.contains(k)) && cfg.medium()? != d.meta.medium {
        return Err(mismatch("medium"));
    }
    if (cfg.contains("stress.mu_t") || cfg.contains("stress.lambda_t")) && cfg.stress(&d.meta.medium)? != d.meta.params {
        return Err(mismatch("stress parameters"));
    }
    Ok(())
}

pub fn image(cfg: &RunConfig, dataset: Option<&Path>, out: Option<&Path>, ridge: Option<&Path>) -> CliResult<()> {
    let out = output(out, cfg, "paths.image")?;
    let ridge = ridge.map(Path::to_path_buf).or_else(|| cfg.path("paths.ridge"));
    let d = read_dataset(&input(dataset, cfg, "paths.dataset")?)?;
    check_consistency(cfg, &d)?;
    let img = compute_image(&d, &d.meta.medium, &d.meta.params, &cfg.grid()?, &cfg.imaging()?)?;
    write_atomic(&out, image_to_string(&img).as_bytes())?;
    if let Some(r) = ridge {
        write_atomic(&r, ridge_to_string(&extract_ridge(&img)).as_bytes())?;
    }
    Ok(())
}

pub fn render(cfg: &RunConfig, image_path: Option<&Path>, out: Option<&Path>) -> CliResult<()> {
    let out = output(out, cfg, "paths.pgm")?;
    let path = input(image_path, cfg, "paths.image")?;
    let table = parse_image(&read_text(&path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    write_atomic(&out, render_pgm(&table).as_bytes())
}

fn regate(r: IdentityReport, tol: Option<f64>) -> IdentityReport {
    match tol {
        Some(t) if r.relative => r.with_tolerance(t),
        Some(t) => r.with_abs_tolerance(t),
        None => r,
    }
}

/// Expand a comma-separated selector; `all` (or nothing) selects every suite.
pub fn select_suites(selector: Option<&str>) -> CliResult<Vec<&'static str>> {
    let sel = selector.unwrap_or("all");
    if sel.trim() == "all" {
        return Ok(SUITES.to_vec());
    }
    sel.split(',')
        .map(str::trim)
        .map(|s| {
            SUITES
                .iter()
                .find(|n| **n == s)
                .copied()
                .ok_or_else(|| CliError::usage(format!("unknown suite '{s}' (known: all, {})", SUITES.join(", "))))
        })
        .collect()
}

fn run_suite(cfg: &RunConfig, suite: &str) -> CliResult<Vec<IdentityReport>> {
    let medium = cfg.medium()?;
    let params = cfg.stress(&medium)?;
    let geometry = cfg.geometry()?;
    let ks = medium.ks();
    let lambda_s = medium.shear_wavelength();
    let reports = match suite {
        "funk-hecke" => {
            let m = cfg.imaging()?.m;
            let x = Vec2::new(0.3, 0.2);
            let dir = Vec2::new(0.6, 0.8);
            [0.0, 1.0, 10.0, 40.0]
                .iter()
                .map(|kr| check_funk_hecke(ks, x, x + dir.scale(kr / ks), m))
                .collect::<roughscat::Result<Vec<_>>>()?
        }
        "im-gamma" => {
            let m = cfg.imaging()?.m;
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let (mut err, mut left, mut right) = (0.0f64, 0.0f64, 0.0f64);
            for _ in 0..IM_GAMMA_PAIRS {
                let x = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let r = rng.gen_range(0.01..40.0) / ks;
                let y = x + Vec2::new(a.cos(), a.sin()).scale(r);
                let full = im_gamma_half(&medium, x, y, CirclePart::Full, m)?.re();
                let exact = gamma(&medium, x, y)?.im();
                for (p, q) in full.iter().flatten().zip(exact.iter().flatten()) {
                    err = err.max((p - q).abs());
                    left = left.max(p.abs());
                    right = right.max(q.abs());
                }
            }
            let p = vec![("pairs".to_string(), IM_GAMMA_PAIRS.to_string()), ("M".to_string(), m.to_string())];
            vec![IdentityReport::new("im-gamma", p, left, right, err).with_abs_tolerance(IM_GAMMA_TOL)]
        }
        "hk-identity" => {
            let h = geometry.line_height();
            let a = geometry.half_aperture();
            let x = Vec2::new(0.0, h - 1.0);
            let n_quad = (2.0 * a / lambda_s * HK_POINTS_PER_WAVELENGTH).ceil() as usize;
            vec![check_hk_identity(&medium, &params, x, x, h, a, n_quad.max(2))?]
        }
        "navier" => {
            let y = Vec2::new(0.1, -0.3);
            let x = y + Vec2::new(0.6, 0.8).scale(lambda_s);
            (1..=2)
                .map(|k| {
                    let field = |p: Vec2| gamma(&medium, p, y).map(|g| g.col(k)).unwrap_or(Vec2C::ZERO);
                    check_navier_residual(&field, &medium, x, NAVIER_STEP_KS / ks)
                })
                .collect::<roughscat::Result<Vec<_>>>()?
        }
        "reciprocity" => {
            let surface = cfg.surface()?;
            let bie = cfg.bie(&medium, &geometry)?;
            let h = geometry.line_height();
            let (x, y) = (Vec2::new(1.0, h), Vec2::new(-2.0, h - 0.5));
            vec![check_reciprocity(&surface, &medium, &bie, x, y, Vec2::E1, Vec2::E2)?]
        }
        "boundary" => {
            let surface = cfg.surface()?;
            let bie = cfg.bie(&medium, &geometry)?;
            let solver = ForwardSolver::new(&surface, &medium, &bie)?;
            let y = Vec2::new(0.7, geometry.line_height());
            let phi = solver.solve_point_sources(&[y])?;
            let density = DensitySolution {
                values: (0..solver.node_count()).map(|j| Vec2C::new(phi[(2 * j, 1)], phi[(2 * j + 1, 1)])).collect(),
            };
            let inc = |x: Vec2| incident_field(&medium, y, 2, x);
            vec![check_boundary_condition(solver.mesh(), &density, &inc, &medium, solver.eta(), bie.window())?]
        }
        other => return Err(CliError::usage(format!("unknown suite '{other}'"))),
    };
    Ok(reports)
}

/// Run the selected suites; returns the report text and the exit code.
pub fn verify(cfg: &RunConfig, selector: Option<&str>, tol: Option<f64>, out: Option<&Path>) -> CliResult<(String, i32)> {
    let suites = select_suites(selector.or(cfg.text("verify.suite")))?;
    let tol = tol.or_else(|| cfg.real("verify.tol"));
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::usage(format!("tolerance must be positive, got {t}")));
        }
    }
    let mut text = String::new();
    let mut failed = 0;
    let mut total = 0;
    for s in suites {
        for r in run_suite(cfg, s)? {
            let r = regate(r, tol);
            total += 1;
            failed += usize::from(!r.passed);
            text.push_str(&format!("{r}\n"));
        }
    }
    text.push_str(&format!("# {} of {total} checks passed\n", total - failed));
    if let Some(p) = out.map(Path::to_path_buf).or_else(|| cfg.path("paths.report")) {
        write_atomic(&p, text.as_bytes())?;
    }
    Ok((text, if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED }))
}
