//! I(z) = Σ_j h Σ_k | h Σ_i [Pu^s·conj(Γ(x_i,z)e_j) - u^s·conj(Π⁽¹⁾(x_i,z)e_j)]
//!                    - 2i e_jᵀ Im₋Γ(z,y_k) e_j |²
//!
//! with Π⁽¹⁾ taken for the line normal (0, 1) and Im₋Γ by the trapezoid rule
//! on the lower half circle of directions.

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{ImageGrid, ImageProvenance, ImagingConfig, SamplingGrid};
use crate::error::{Error, Result};
use crate::forward::CauchyDataSet;
use crate::kernels::green::gamma_pi1;
use crate::kernels::{CirclePart, CircleRule, ElasticMedium, GeneralizedStressParams, Vec2, Vec2C};

/// Everything about I(z) that does not depend on z.
pub struct ImagingPlan<'a> {
    dataset: &'a CauchyDataSet,
    medium: ElasticMedium,
    params: GeneralizedStressParams,
    config: ImagingConfig,
    receivers: Vec<Vec2>,
    h: f64,
    line: f64,
    rule: CircleRule,
    // w_m c e^{-i k y_k·d_m} for source k, direction m (m fastest)
    src_p: Vec<Complex64>,
    src_s: Vec<Complex64>,
}

impl<'a> ImagingPlan<'a> {
    pub fn new(
        dataset: &'a CauchyDataSet,
        medium: &ElasticMedium,
        params: &GeneralizedStressParams,
        config: &ImagingConfig,
    ) -> Result<Self> {
        config.validate()?;
        let geometry = dataset.meta.geometry;
        let rule = CircleRule::new(CirclePart::Minus, config.m)?;
        let receivers = geometry.points();
        let cp = 1.0 / (8.0 * std::f64::consts::PI * (medium.lambda() + 2.0 * medium.mu()));
        let cs = 1.0 / (8.0 * std::f64::consts::PI * medium.mu());
        let (kp, ks) = (medium.kp(), medium.ks());
        let mut src_p = Vec::with_capacity(receivers.len() * rule.dirs.len());
        let mut src_s = Vec::with_capacity(src_p.capacity());
        for y in &receivers {
            for (d, w) in rule.dirs.iter().zip(&rule.weights) {
                let t = y.dot(*d);
                src_p.push(Complex64::from_polar(w * cp, -kp * t));
                src_s.push(Complex64::from_polar(w * cs, -ks * t));
            }
        }
        Ok(ImagingPlan {
            dataset,
            medium: *medium,
            params: *params,
            config: *config,
            receivers,
            h: geometry.spacing(),
            line: geometry.line_height(),
            rule,
            src_p,
            src_s,
        })
    }

    pub fn indicator(&self, z: Vec2) -> Result<f64> {
        if !(z.x2 < self.line) {
            return Err(Error::Domain(format!("sampling point ({}, {}) is not below the measurement line", z.x1, z.x2)));
        }
        let nd = self.rule.dirs.len();
        let (kp, ks) = (self.medium.kp(), self.medium.ks());
        let ep: Vec<Complex64> = self.rule.dirs.iter().map(|d| Complex64::from_polar(1.0, kp * z.dot(*d))).collect();
        let es: Vec<Complex64> = self.rule.dirs.iter().map(|d| Complex64::from_polar(1.0, ks * z.dot(*d))).collect();
        // conjugated kernel columns [Γe_1, Γe_2, Π⁽¹⁾e_1, Π⁽¹⁾e_2] per receiver
        let kernels: Vec<[Vec2C; 4]> = self
            .receivers
            .iter()
            .map(|&x| {
                let (g, p) = gamma_pi1(&self.medium, &self.params, x, z, Vec2::E2)?;
                let (g, p) = (g.conj(), p.conj());
                Ok([g.col(1), g.col(2), p.col(1), p.col(2)])
            })
            .collect::<Result<_>>()?;
        let n = self.receivers.len();
        let (us, pus) = (self.dataset.us_values(), self.dataset.pus_values());
        let two_i = Complex64::new(0.0, 2.0);
        let mut total = 0.0;
        for j in 0..2 {
            let mut sum = 0.0;
            for k in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for (i, kern) in kernels.iter().enumerate() {
                    let idx = (k * n + i) * 2 + j;
                    s += pus[idx].dot(kern[j]) - us[idx].dot(kern[2 + j]);
                }
                let mut bg = Complex64::new(0.0, 0.0);
                let (tp, ts) = (&self.src_p[k * nd..(k + 1) * nd], &self.src_s[k * nd..(k + 1) * nd]);
                for m in 0..nd {
                    let dj = if j == 0 { self.rule.dirs[m].x1 } else { self.rule.dirs[m].x2 };
                    let d2 = dj * dj;
                    bg += tp[m] * ep[m] * d2 + ts[m] * es[m] * (1.0 - d2);
                }
                sum += (s * self.h - two_i * bg).norm_sqr();
            }
            total += self.h * sum;
        }
        Ok(total)
    }

    fn finish(&self, grid: &SamplingGrid, values: Vec<f64>) -> Result<ImageGrid> {
        let provenance = ImageProvenance { dataset_id: self.dataset.fingerprint(), config: self.config };
        let image = ImageGrid::new(*grid, values, provenance)?;
        Ok(if self.config.normalize { image.normalized() } else { image })
    }

    fn check_grid(&self, grid: &SamplingGrid) -> Result<Vec<Vec2>> {
        grid.validate()?;
        if !(grid.x2_max < self.line) {
            return Err(Error::Config(format!(
                "sampling grid top {} must lie below the measurement line {}",
                grid.x2_max, self.line
            )));
        }
        Ok((0..grid.nx2).flat_map(|i2| (0..grid.nx1).map(move |i1| grid.point(i1, i2))).collect())
    }
}

/// I(z) at a single point.
pub fn indicator_at(
    dataset: &CauchyDataSet,
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    z: Vec2,
    config: &ImagingConfig,
) -> Result<f64> {
    ImagingPlan::new(dataset, medium, params, config)?.indicator(z)
}

/// I over the grid, grid points in parallel. Each value is computed with a
/// fixed summation order, so the result does not depend on the thread count.
pub fn compute_image(
    dataset: &CauchyDataSet,
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    grid: &SamplingGrid,
    config: &ImagingConfig,
) -> Result<ImageGrid> {
    let plan = ImagingPlan::new(dataset, medium, params, config)?;
    let points = plan.check_grid(grid)?;
    let values = points.par_iter().map(|&z| plan.indicator(z)).collect::<Result<Vec<_>>>()?;
    plan.finish(grid, values)
}

/// Single-threaded [`compute_image`].
pub fn compute_image_serial(
    dataset: &CauchyDataSet,
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    grid: &SamplingGrid,
    config: &ImagingConfig,
) -> Result<ImageGrid> {
    let plan = ImagingPlan::new(dataset, medium, params, config)?;
    let points = plan.check_grid(grid)?;
    let values = points.iter().map(|&z| plan.indicator(z)).collect::<Result<Vec<_>>>()?;
    plan.finish(grid, values)
}
