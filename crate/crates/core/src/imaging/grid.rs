use crate::error::{Error, Result};
use crate::kernels::Vec2;

/// Uniform nx1 × nx2 grid of sampling points, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingGrid {
    pub x1_min: f64,
    pub x1_max: f64,
    pub x2_min: f64,
    pub x2_max: f64,
    pub nx1: usize,
    pub nx2: usize,
}

impl SamplingGrid {
    pub fn new(x1_min: f64, x1_max: f64, x2_min: f64, x2_max: f64, nx1: usize, nx2: usize) -> Result<Self> {
        let g = SamplingGrid { x1_min, x1_max, x2_min, x2_max, nx1, nx2 };
        g.validate()?;
        Ok(g)
    }

    /// x1 ∈ [-6, 6], x2 ∈ [0, 1.2] at 0.05 spacing (241 × 61).
    pub fn figure_default() -> Self {
        SamplingGrid { x1_min: -6.0, x1_max: 6.0, x2_min: 0.0, x2_max: 1.2, nx1: 241, nx2: 61 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx1 < 2 || self.nx2 < 2 {
            return Err(Error::Config(format!("grid needs at least 2 × 2 points, got {} × {}", self.nx1, self.nx2)));
        }
        let ok = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ok(self.x1_min, self.x1_max) || !ok(self.x2_min, self.x2_max) {
            return Err(Error::Config("grid ranges must be finite and nonempty".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx1 * self.nx2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x1(&self, i1: usize) -> f64 {
        self.x1_min + i1 as f64 * (self.x1_max - self.x1_min) / (self.nx1 - 1) as f64
    }

    pub fn x2(&self, i2: usize) -> f64 {
        self.x2_min + i2 as f64 * (self.x2_max - self.x2_min) / (self.nx2 - 1) as f64
    }

    pub fn point(&self, i1: usize, i2: usize) -> Vec2 {
        Vec2::new(self.x1(i1), self.x2(i2))
    }

    /// Cell sizes (dx1, dx2).
    pub fn cell(&self) -> (f64, f64) {
        (
            (self.x1_max - self.x1_min) / (self.nx1 - 1) as f64,
            (self.x2_max - self.x2_min) / (self.nx2 - 1) as f64,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagingConfig {
    /// Nodes on the lower half circle of directions.
    pub m: usize,
    /// Scale the image so its maximum is 1.
    pub normalize: bool,
}

impl Default for ImagingConfig {
    fn default() -> Self {
        ImagingConfig { m: 256, normalize: false }
    }
}

impl ImagingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m < 8 {
            return Err(Error::Config(format!("imaging needs M >= 8, got {}", self.m)));
        }
        Ok(())
    }
}

/// Where an image came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageProvenance {
    /// Fingerprint of the dataset (empty for synthetic images).
    pub dataset_id: String,
    pub config: ImagingConfig,
}

/// Nonnegative image values; `values[i2 * nx1 + i1]` sits at `grid.point(i1, i2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    pub grid: SamplingGrid,
    values: Vec<f64>,
    pub provenance: ImageProvenance,
}

impl ImageGrid {
    pub fn new(grid: SamplingGrid, values: Vec<f64>, provenance: ImageProvenance) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() {
            return Err(Error::Config(format!("image needs {} values, got {}", grid.len(), values.len())));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Domain(format!("image values must be finite and >= 0, found {v}")));
        }
        Ok(ImageGrid { grid, values, provenance })
    }

    pub fn get(&self, i1: usize, i2: usize) -> f64 {
        self.values[i2 * self.grid.nx1 + i1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| m.max(v))
    }

    /// Divide by the maximum (no-op for an all-zero image).
    pub fn normalized(mut self) -> Self {
        let m = self.max();
        if m > 0.0 {
            for v in &mut self.values {
                *v /= m;
            }
        }
        self
    }
}

/// Column-wise argmax: for each x1, the x2 of the largest value, ties going
/// to the smaller x2.
pub fn extract_ridge(image: &ImageGrid) -> Vec<(f64, f64)> {
    let g = &image.grid;
    (0..g.nx1)
        .map(|i1| {
            let mut best = 0;
            for i2 in 1..g.nx2 {
                if image.get(i1, i2) > image.get(i1, best) {
                    best = i2;
                }
            }
            (g.x1(i1), g.x2(best))
        })
        .collect()
}
