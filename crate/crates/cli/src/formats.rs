//! Dataset, image, ridge and PGM files.
//!
//! Floats in CSV payloads are written as `{:.16e}` (17 significant digits),
//! which reproduces every f64 exactly when read back.

use std::io::Write;
use std::path::Path;

use roughscat::forward::{CauchyDataSet, DatasetMeta, NoiseInfo};
use roughscat::imaging::ImageGrid;
use roughscat::kernels::Vec2C;
use num_complex::Complex64;

use crate::config::{parse_pairs, RunConfig};
use crate::error::{CliError, CliResult};

pub const DATASET_COLUMNS: [&str; 11] = [
    "source_index",
    "receiver_index",
    "polarization",
    "us1_re",
    "us1_im",
    "us2_re",
    "us2_im",
    "pus1_re",
    "pus1_im",
    "pus2_re",
    "pus2_im",
];

pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write `bytes` next to `path` and rename into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::usage(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

/// Header lines describing `meta`, in the config key syntax.
pub fn dataset_header(meta: &DatasetMeta) -> Vec<(String, String)> {
    let mut h: Vec<(String, String)> = vec![("surface.name".into(), meta.surface.name().into())];
    if let Some(c) = meta.surface.coefficients() {
        h.push(("surface.coefficients".into(), c));
    }
    let g = &meta.geometry;
    let b = &meta.bie;
    let reals = [
        ("medium.mu", meta.medium.mu()),
        ("medium.lambda", meta.medium.lambda()),
        ("medium.omega", meta.medium.omega()),
        ("stress.mu_t", meta.params.mu_t()),
        ("stress.lambda_t", meta.params.lambda_t()),
        ("geometry.H", g.line_height()),
        ("geometry.A", g.half_aperture()),
    ];
    h.extend(reals.iter().map(|(k, v)| (k.to_string(), v.to_string())));
    h.push(("geometry.N".into(), g.n().to_string()));
    h.push(("bie.eta_re".into(), b.eta.re.to_string()));
    h.push(("bie.eta_im".into(), b.eta.im.to_string()));
    h.push(("bie.nodes".into(), b.node_count.to_string()));
    h.push(("bie.A_f".into(), b.truncation_halfwidth.to_string()));
    h.push(("bie.taper".into(), b.taper_fraction.to_string()));
    h.push(("bie.cap".into(), b.cap_length.to_string()));
    if let Some(n) = meta.noise {
        h.push(("noise.delta".into(), n.delta.to_string()));
        h.push(("noise.seed".into(), n.seed.to_string()));
    }
    h
}

pub fn dataset_to_string(d: &CauchyDataSet) -> String {
    let mut out = String::from("# roughscat dataset\n");
    for (k, v) in dataset_header(&d.meta) {
        out.push_str(&format!("{k} = {v}\n"));
    }
    out.push_str("---\n");
    out.push_str(&DATASET_COLUMNS.join(","));
    out.push('\n');
    let m = d.count();
    for k in 0..m {
        for i in 0..m {
            for j in 1..=2 {
                let (u, p) = (d.us(k, i, j), d.pus(k, i, j));
                out.push_str(&format!("{k},{i},{j}"));
                for c in [u.x1, u.x2, p.x1, p.x2] {
                    out.push(',');
                    out.push_str(&fmt_real(c.re));
                    out.push(',');
                    out.push_str(&fmt_real(c.im));
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Rebuild dataset metadata from a parsed header.
pub fn meta_from_header(cfg: &RunConfig) -> CliResult<DatasetMeta> {
    for key in ["surface.name", "stress.mu_t", "stress.lambda_t", "geometry.H", "geometry.A", "geometry.N", "bie.nodes"] {
        if !cfg.contains(key) {
            return Err(CliError::usage(format!("dataset header is missing {key}")));
        }
    }
    let medium = cfg.medium()?;
    let geometry = cfg.geometry()?;
    let noise = match (cfg.real("noise.delta"), cfg.seed("noise.seed")) {
        (None, None) => None,
        (Some(delta), Some(seed)) if delta >= 0.0 => Some(NoiseInfo { delta, seed }),
        _ => return Err(CliError::usage("dataset header has an incomplete or invalid noise record")),
    };
    Ok(DatasetMeta {
        medium,
        params: cfg.stress(&medium)?,
        geometry,
        surface: cfg.surface()?,
        bie: cfg.bie(&medium, &geometry)?,
        noise,
    })
}

pub fn parse_dataset(text: &str) -> CliResult<CauchyDataSet> {
    let (pairs, used) = parse_pairs(text, true)?;
    let mut cfg = RunConfig::new();
    for (k, v) in pairs {
        cfg.set(&k, &v)?;
    }
    let meta = meta_from_header(&cfg)?;
    let m = meta.geometry.count();
    let total = m * m * 2;
    let body: String = text.lines().skip(used).map(|l| format!("{l}\n")).collect();
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
    let bad = |msg: String| CliError::usage(format!("dataset records: {msg}"));
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(DATASET_COLUMNS.iter().copied()) {
        return Err(bad(format!("expected columns {}", DATASET_COLUMNS.join(","))));
    }
    let mut us = vec![Vec2C::ZERO; total];
    let mut pus = vec![Vec2C::ZERO; total];
    let mut seen = vec![false; total];
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let idx = |c: usize| -> CliResult<usize> {
            rec[c].parse().map_err(|_| bad(format!("row {}: bad index '{}'", row + 1, &rec[c])))
        };
        let (k, i, j) = (idx(0)?, idx(1)?, idx(2)?);
        if k >= m || i >= m || !(j == 1 || j == 2) {
            return Err(bad(format!("row {}: index ({k}, {i}, {j}) out of range", row + 1)));
        }
        let mut v = [0.0f64; 8];
        for (c, slot) in v.iter_mut().enumerate() {
            *slot = rec[3 + c]
                .parse()
                .map_err(|_| bad(format!("row {}: bad number '{}'", row + 1, &rec[3 + c])))?;
        }
        let at = (k * m + i) * 2 + (j - 1);
        if std::mem::replace(&mut seen[at], true) {
            return Err(bad(format!("row {}: duplicate record ({k}, {i}, {j})", row + 1)));
        }
        let c = |a: usize| Complex64::new(v[a], v[a + 1]);
        us[at] = Vec2C::new(c(0), c(2));
        pus[at] = Vec2C::new(c(4), c(6));
    }
    let found = seen.iter().filter(|s| **s).count();
    if found != total {
        return Err(bad(format!("expected {total} records, found {found}")));
    }
    Ok(CauchyDataSet::new(meta, us, pus)?)
}

pub fn read_dataset(path: &Path) -> CliResult<CauchyDataSet> {
    parse_dataset(&read_text(path)?).map_err(|e| CliError { code: e.code, message: format!("{}: {e}", path.display()) })
}

/// Image CSV: provenance as `#` comments, then x1,x2,value with x1 fastest.
pub fn image_to_string(img: &ImageGrid) -> String {
    let g = &img.grid;
    let p = &img.provenance;
    let mut out = format!(
        "# dataset_id = {}\n# M = {}\n# normalize = {}\nx1,x2,value\n",
        p.dataset_id, p.config.m, p.config.normalize
    );
    for i2 in 0..g.nx2 {
        for i1 in 0..g.nx1 {
            out.push_str(&format!("{},{},{}\n", fmt_real(g.x1(i1)), fmt_real(g.x2(i2)), fmt_real(img.get(i1, i2))));
        }
    }
    out
}

pub fn ridge_to_string(ridge: &[(f64, f64)]) -> String {
    let mut out = String::from("x1,x2_ridge\n");
    for &(x1, x2) in ridge {
        out.push_str(&format!("{},{}\n", fmt_real(x1), fmt_real(x2)));
    }
    out
}

/// Values of an image CSV on its rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageTable {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    /// values[i2 * nx1 + i1]
    pub values: Vec<f64>,
}

pub fn parse_image(text: &str) -> CliResult<ImageTable> {
    let bad = |msg: String| CliError::usage(format!("image CSV: {msg}"));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(["x1", "x2", "value"]) {
        return Err(bad("expected columns x1,x2,value".into()));
    }
    let mut rows = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let mut v = [0.0f64; 3];
        for (c, slot) in v.iter_mut().enumerate() {
            *slot = rec[c].parse().map_err(|_| bad(format!("row {}: bad number '{}'", n + 1, &rec[c])))?;
        }
        if !v.iter().all(|x| x.is_finite()) || v[2] < 0.0 {
            return Err(bad(format!("row {}: values must be finite and the image nonnegative", n + 1)));
        }
        rows.push(v);
    }
    if rows.is_empty() {
        return Err(bad("no records".into()));
    }
    let axis = |c: usize| {
        let mut a: Vec<f64> = rows.iter().map(|r| r[c]).collect();
        a.sort_by(f64::total_cmp);
        a.dedup();
        a
    };
    let (x1, x2) = (axis(0), axis(1));
    if x1.len() * x2.len() != rows.len() {
        return Err(bad(format!("{} records do not form a {}×{} grid", rows.len(), x1.len(), x2.len())));
    }
    let mut values = vec![f64::NAN; rows.len()];
    for r in &rows {
        let i1 = x1.binary_search_by(|v| v.total_cmp(&r[0])).unwrap();
        let i2 = x2.binary_search_by(|v| v.total_cmp(&r[1])).unwrap();
        let slot = &mut values[i2 * x1.len() + i1];
        if !slot.is_nan() {
            return Err(bad(format!("duplicate cell ({}, {})", r[0], r[1])));
        }
        *slot = r[2];
    }
    Ok(ImageTable { x1, x2, values })
}

/// ASCII PGM, maxval 65535, scaled by the image maximum; the top row is the
/// largest x2. An all-zero image renders black.
pub fn render_pgm(t: &ImageTable) -> String {
    let (w, h) = (t.x1.len(), t.x2.len());
    let max = t.values.iter().fold(0.0f64, |m, v| m.max(*v));
    let mut out = format!("P2\n{w} {h}\n65535\n");
    for i2 in (0..h).rev() {
        let row: Vec<String> = (0..w)
            .map(|i1| {
                let v = t.values[i2 * w + i1];
                let level = if max > 0.0 { (v / max * 65535.0).round() } else { 0.0 };
                (level as u32).to_string()
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
