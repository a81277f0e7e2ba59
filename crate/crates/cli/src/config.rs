//! Flat `key = value` run configuration.
//!
//! Precedence, lowest first: built-in defaults, the config file, environment
//! variables (`ROUGHSCAT_` + key upper-cased with dots as underscores, so
//! `geometry.N` is `ROUGHSCAT_GEOMETRY_N`), then `--set key=value` and flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use roughscat::forward::{BIEConfig, MeasurementGeometry, SurfaceProfile};
use roughscat::imaging::{ImagingConfig, SamplingGrid};
use roughscat::kernels::{ElasticMedium, GeneralizedStressParams};

use crate::error::{CliError, CliResult};

pub const ENV_PREFIX: &str = "ROUGHSCAT_";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Text,
    Real,
    Count,
    Seed,
    Flag,
}

const KEYS: &[(&str, Kind)] = &[
    ("surface.name", Kind::Text),
    ("surface.coefficients", Kind::Text),
    ("medium.mu", Kind::Real),
    ("medium.lambda", Kind::Real),
    ("medium.omega", Kind::Real),
    ("stress.mu_t", Kind::Real),
    ("stress.lambda_t", Kind::Real),
    ("geometry.H", Kind::Real),
    ("geometry.A", Kind::Real),
    ("geometry.N", Kind::Count),
    ("bie.eta_re", Kind::Real),
    ("bie.eta_im", Kind::Real),
    ("bie.nodes", Kind::Count),
    ("bie.A_f", Kind::Real),
    ("bie.taper", Kind::Real),
    ("bie.cap", Kind::Real),
    ("imaging.x1_min", Kind::Real),
    ("imaging.x1_max", Kind::Real),
    ("imaging.x2_min", Kind::Real),
    ("imaging.x2_max", Kind::Real),
    ("imaging.nx1", Kind::Count),
    ("imaging.nx2", Kind::Count),
    ("imaging.M", Kind::Count),
    ("imaging.normalize", Kind::Flag),
    ("noise.delta", Kind::Real),
    ("noise.seed", Kind::Seed),
    ("paths.dataset", Kind::Text),
    ("paths.image", Kind::Text),
    ("paths.ridge", Kind::Text),
    ("paths.report", Kind::Text),
    ("paths.pgm", Kind::Text),
    ("verify.suite", Kind::Text),
    ("verify.tol", Kind::Real),
];

fn kind_of(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, t)| *t)
}

/// Every recognised key.
pub fn known_keys() -> impl Iterator<Item = &'static str> {
    KEYS.iter().map(|(k, _)| *k)
}

/// Environment variable that overrides `key`.
pub fn env_name(key: &str) -> String {
    format!("{ENV_PREFIX}{}", key.to_uppercase().replace('.', "_"))
}

/// Parse `key = value` lines; blank lines and `#` comments are skipped.
/// Stops at a line `---` if `stop_at_separator` is set and reports how many
/// lines were consumed.
pub fn parse_pairs(text: &str, stop_at_separator: bool) -> CliResult<(Vec<(String, String)>, usize)> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let t = line.trim();
        if stop_at_separator && t == "---" {
            return Ok((out, no + 1));
        }
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("line {}: expected 'key = value', got '{t}'", no + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    if stop_at_separator {
        return Err(CliError::usage("header is not terminated by a '---' line"));
    }
    let n = text.lines().count();
    Ok((out, n))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// Config file (optional) plus environment overrides, validated.
    pub fn load(path: Option<&Path>, env: impl Fn(&str) -> Option<String>) -> CliResult<Self> {
        let mut cfg = RunConfig::new();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", p.display())))?;
            cfg.merge_text(&text).map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?;
        }
        for key in known_keys() {
            if let Some(v) = env(&env_name(key)) {
                cfg.set(key, &v).map_err(|e| CliError::usage(format!("{}: {e}", env_name(key))))?;
            }
        }
        Ok(cfg)
    }

    pub fn merge_text(&mut self, text: &str) -> CliResult<()> {
        let (pairs, _) = parse_pairs(text, false)?;
        for (k, v) in pairs {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    /// Set one key, checking that it is known and that the value parses.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let kind = kind_of(key).ok_or_else(|| CliError::usage(format!("unknown config key '{key}'")))?;
        let ok = match kind {
            Kind::Text => true,
            Kind::Real => value.parse::<f64>().is_ok_and(f64::is_finite),
            Kind::Count => value.parse::<usize>().is_ok(),
            Kind::Seed => value.parse::<u64>().is_ok(),
            Kind::Flag => parse_flag(value).is_some(),
        };
        if !ok {
            return Err(CliError::usage(format!("invalid value '{value}' for {key}")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Apply a `key=value` assignment from the command line.
    pub fn assign(&mut self, pair: &str) -> CliResult<()> {
        let (k, v) = pair.split_once('=').ok_or_else(|| CliError::usage(format!("expected key=value, got '{pair}'")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    // values were checked in `set`
    pub fn real(&self, key: &str) -> Option<f64> {
        self.text(key).map(|v| v.parse().unwrap())
    }

    pub fn count(&self, key: &str) -> Option<usize> {
        self.text(key).map(|v| v.parse().unwrap())
    }

    pub fn seed(&self, key: &str) -> Option<u64> {
        self.text(key).map(|v| v.parse().unwrap())
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        self.text(key).and_then(parse_flag)
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.text(key).map(PathBuf::from)
    }

    /// Defaults mu = lambda = 1, omega = 15.
    pub fn medium(&self) -> CliResult<ElasticMedium> {
        Ok(ElasticMedium::new(
            self.real("medium.mu").unwrap_or(1.0),
            self.real("medium.lambda").unwrap_or(1.0),
            self.real("medium.omega").unwrap_or(15.0),
        )?)
    }

    /// Pseudo-stress unless both `stress.mu_t` and `stress.lambda_t` are given.
    pub fn stress(&self, medium: &ElasticMedium) -> CliResult<GeneralizedStressParams> {
        match (self.real("stress.mu_t"), self.real("stress.lambda_t")) {
            (None, None) => Ok(GeneralizedStressParams::pseudo(medium)),
            (Some(mt), Some(lt)) => Ok(GeneralizedStressParams::new(medium, mt, lt)?),
            _ => Err(CliError::usage("stress.mu_t and stress.lambda_t must be given together")),
        }
    }

    /// Defaults H = 2, A = 20, N = 100.
    pub fn geometry(&self) -> CliResult<MeasurementGeometry> {
        Ok(MeasurementGeometry::new(
            self.real("geometry.H").unwrap_or(2.0),
            self.real("geometry.A").unwrap_or(20.0),
            self.count("geometry.N").unwrap_or(100),
        )?)
    }

    pub fn surface(&self) -> CliResult<SurfaceProfile> {
        let name = self.text("surface.name").ok_or_else(|| CliError::usage("surface.name is required"))?;
        Ok(SurfaceProfile::from_spec(name, self.text("surface.coefficients"))?)
    }

    /// Solver defaults follow the aperture; eta defaults to k_s.
    pub fn bie(&self, medium: &ElasticMedium, geometry: &MeasurementGeometry) -> CliResult<BIEConfig> {
        let mut c = BIEConfig::for_aperture(medium, geometry.half_aperture());
        if self.contains("bie.eta_re") || self.contains("bie.eta_im") {
            c.eta = Complex64::new(self.real("bie.eta_re").unwrap_or(c.eta.re), self.real("bie.eta_im").unwrap_or(0.0));
        }
        c.node_count = self.count("bie.nodes").unwrap_or(c.node_count);
        c.truncation_halfwidth = self.real("bie.A_f").unwrap_or(c.truncation_halfwidth);
        c.taper_fraction = self.real("bie.taper").unwrap_or(c.taper_fraction);
        c.cap_length = self.real("bie.cap").unwrap_or(c.cap_length);
        c.validate()?;
        Ok(c)
    }

    /// Defaults to the 241 × 61 grid over [−6, 6] × [0, 1.2].
    pub fn grid(&self) -> CliResult<SamplingGrid> {
        let d = SamplingGrid::figure_default();
        Ok(SamplingGrid::new(
            self.real("imaging.x1_min").unwrap_or(d.x1_min),
            self.real("imaging.x1_max").unwrap_or(d.x1_max),
            self.real("imaging.x2_min").unwrap_or(d.x2_min),
            self.real("imaging.x2_max").unwrap_or(d.x2_max),
            self.count("imaging.nx1").unwrap_or(d.nx1),
            self.count("imaging.nx2").unwrap_or(d.nx2),
        )?)
    }

    pub fn imaging(&self) -> CliResult<ImagingConfig> {
        let d = ImagingConfig::default();
        let c = ImagingConfig {
            m: self.count("imaging.M").unwrap_or(d.m),
            normalize: self.flag("imaging.normalize").unwrap_or(d.normalize),
        };
        c.validate()?;
        Ok(c)
    }

    /// (delta, seed); delta defaults to 0 and seed to 0.
    pub fn noise(&self) -> CliResult<(f64, u64)> {
        let delta = self.real("noise.delta").unwrap_or(0.0);
        if delta < 0.0 {
            return Err(CliError::usage(format!("noise.delta must be >= 0, got {delta}")));
        }
        Ok((delta, self.seed("noise.seed").unwrap_or(0)))
    }

    /// Re-validate every physical quantity the config mentions.
    pub fn validate(&self) -> CliResult<()> {
        let m = self.medium()?;
        self.stress(&m)?;
        let g = self.geometry()?;
        self.bie(&m, &g)?;
        self.grid()?;
        self.imaging()?;
        self.noise()?;
        if self.contains("surface.name") || self.contains("surface.coefficients") {
            self.surface()?;
        }
        Ok(())
    }
}

fn parse_flag(v: &str) -> Option<bool> {
    match v {
        "true" | "1" | "yes" | "on" => Some(true),
        "false" | "0" | "no" | "off" => Some(false),
        _ => None,
    }
}
