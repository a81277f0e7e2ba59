use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sha2::{Digest, Sha256};

use super::geometry::MeasurementGeometry;
use super::mesh::BIEConfig;
use super::problem::ForwardSolver;
use super::surface::SurfaceProfile;
use crate::error::{Error, Result};
use crate::kernels::{ElasticMedium, GeneralizedStressParams, Vec2, Vec2C};

/// Minimum source-to-surface distance, in shear wavelengths.
pub const SOURCE_STANDOFF: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseInfo {
    pub delta: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetMeta {
    pub medium: ElasticMedium,
    pub params: GeneralizedStressParams,
    pub geometry: MeasurementGeometry,
    pub surface: SurfaceProfile,
    /// Solver settings with the node count actually used.
    pub bie: BIEConfig,
    pub noise: Option<NoiseInfo>,
}

/// Scattered displacement and generalized stress on the measurement line.
/// Entry (k, i, j): receiver x_i, source y_k, polarization e_j (j = 1, 2).
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyDataSet {
    pub meta: DatasetMeta,
    us: Vec<Vec2C>,
    pus: Vec<Vec2C>,
}

impl CauchyDataSet {
    /// Build from flat arrays in (k, i, j) row-major order.
    pub fn new(meta: DatasetMeta, us: Vec<Vec2C>, pus: Vec<Vec2C>) -> Result<Self> {
        let m = meta.geometry.count();
        let len = m * m * 2;
        if us.len() != len || pus.len() != len {
            return Err(Error::Config(format!(
                "dataset needs {len} entries per field, got {} and {}",
                us.len(),
                pus.len()
            )));
        }
        if !us.iter().chain(&pus).all(|v| v.is_finite()) {
            return Err(Error::Domain("dataset contains non-finite values".into()));
        }
        Ok(CauchyDataSet { meta, us, pus })
    }

    pub fn from_fn(meta: DatasetMeta, f: impl Fn(usize, usize, usize) -> (Vec2C, Vec2C)) -> Result<Self> {
        let m = meta.geometry.count();
        let (mut us, mut pus) = (Vec::with_capacity(2 * m * m), Vec::with_capacity(2 * m * m));
        for k in 0..m {
            for i in 0..m {
                for j in 1..=2 {
                    let (u, p) = f(k, i, j);
                    us.push(u);
                    pus.push(p);
                }
            }
        }
        Self::new(meta, us, pus)
    }

    /// Points per line, 2N + 1.
    pub fn count(&self) -> usize {
        self.meta.geometry.count()
    }

    fn index(&self, k: usize, i: usize, j: usize) -> usize {
        assert!(j == 1 || j == 2, "polarization must be 1 or 2, got {j}");
        (k * self.count() + i) * 2 + (j - 1)
    }

    pub fn us(&self, k: usize, i: usize, j: usize) -> Vec2C {
        self.us[self.index(k, i, j)]
    }

    pub fn pus(&self, k: usize, i: usize, j: usize) -> Vec2C {
        self.pus[self.index(k, i, j)]
    }

    pub fn us_values(&self) -> &[Vec2C] {
        &self.us
    }

    pub fn pus_values(&self) -> &[Vec2C] {
        &self.pus
    }

    /// Short SHA-256 digest of the metadata and every value.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{:?}", self.meta).as_bytes());
        for v in self.us.iter().chain(&self.pus) {
            for c in [v.x1, v.x2] {
                h.update(c.re.to_le_bytes());
                h.update(c.im.to_le_bytes());
            }
        }
        h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Solve the forward problem for every source and polarization and record
/// the Cauchy data; `params` is the stress used for the data.
pub fn generate_dataset(
    surface: &SurfaceProfile,
    geometry: &MeasurementGeometry,
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    bie_config: &BIEConfig,
) -> Result<CauchyDataSet> {
    bie_config.validate()?;
    let a_f = bie_config.truncation_halfwidth;
    let (_, top, _) = surface.bounds(a_f);
    if geometry.line_height() <= top {
        return Err(Error::Config(format!(
            "measurement line H = {} must lie above the surface (max height {top})",
            geometry.line_height()
        )));
    }
    if geometry.half_aperture() > bie_config.window() {
        return Err(Error::Config(format!(
            "aperture {} exceeds the unmodified surface window {}",
            geometry.half_aperture(),
            bie_config.window()
        )));
    }
    let solver = ForwardSolver::new(surface, medium, bie_config)?;
    let points = geometry.points();
    let standoff = SOURCE_STANDOFF * medium.shear_wavelength();
    for (k, &y) in points.iter().enumerate() {
        let d = solver.clearance(y)?;
        if d < standoff {
            return Err(Error::TooClose(format!("source {k} is {d:.3e} from the surface, below {standoff:.3e}")));
        }
    }
    let phi = solver.solve_point_sources(&points)?;
    let us = solver.displacement(&phi, &points)?;
    let pus = solver.stress(&phi, &points, Vec2::E2, params)?;
    let mut bie = *bie_config;
    bie.node_count = solver.node_count();
    let meta = DatasetMeta {
        medium: *medium,
        params: *params,
        geometry: *geometry,
        surface: surface.clone(),
        bie,
        noise: None,
    };
    // column 2k + j - 1 of the solution holds source k, polarization j
    CauchyDataSet::from_fn(meta, |k, i, j| {
        let c = 2 * k + j - 1;
        (
            Vec2C::new(us[(2 * i, c)], us[(2 * i + 1, c)]),
            Vec2C::new(pus[(2 * i, c)], pus[(2 * i + 1, c)]),
        )
    })
}

/// `u + delta (z1 + i z2) max|u|` per scalar component, the max taken over
/// receivers and components within each (source, polarization) slice.
/// Displacements are perturbed first, then stresses, each in (k, j, i, c)
/// order from one ChaCha8 stream.
pub fn add_noise(dataset: &CauchyDataSet, delta: f64, seed: u64) -> Result<CauchyDataSet> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("noise level must be a finite number >= 0, got {delta}")));
    }
    if dataset.meta.noise.is_some() {
        return Err(Error::Config("dataset already carries noise".into()));
    }
    let mut out = dataset.clone();
    out.meta.noise = Some(NoiseInfo { delta, seed });
    if delta == 0.0 {
        return Ok(out);
    }
    let m = dataset.count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perturb = |values: &mut Vec<Vec2C>| {
        for k in 0..m {
            for j in 0..2 {
                let idx = |i: usize| (k * m + i) * 2 + j;
                let scale = (0..m).fold(0.0f64, |s, i| s.max(values[idx(i)].max_abs())) * delta;
                for i in 0..m {
                    let v = &mut values[idx(i)];
                    for c in [&mut v.x1, &mut v.x2] {
                        let z1: f64 = StandardNormal.sample(&mut rng);
                        let z2: f64 = StandardNormal.sample(&mut rng);
                        c.re += scale * z1;
                        c.im += scale * z2;
                    }
                }
            }
        }
    };
    perturb(&mut out.us);
    perturb(&mut out.pus);
    Ok(out)
}
