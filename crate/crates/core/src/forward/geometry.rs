use crate::error::{Error, Result};
use crate::kernels::Vec2;

/// Receivers and sources share the grid `(-A + i h, H)`, `h = A/N`,
/// `i = 0..=2N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementGeometry {
    h_line: f64,
    a: f64,
    n: usize,
}

impl MeasurementGeometry {
    pub fn new(h_line: f64, a: f64, n: usize) -> Result<Self> {
        if !h_line.is_finite() {
            return Err(Error::Config(format!("line height must be finite, got {h_line}")));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Config(format!("half-aperture must be positive, got {a}")));
        }
        if n < 1 {
            return Err(Error::Config("N must be at least 1".into()));
        }
        Ok(MeasurementGeometry { h_line, a, n })
    }

    pub fn line_height(&self) -> f64 {
        self.h_line
    }

    pub fn half_aperture(&self) -> f64 {
        self.a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of points, 2N + 1.
    pub fn count(&self) -> usize {
        2 * self.n + 1
    }

    pub fn spacing(&self) -> f64 {
        self.a / self.n as f64
    }

    pub fn point(&self, i: usize) -> Vec2 {
        Vec2::new(-self.a + i as f64 * self.spacing(), self.h_line)
    }

    pub fn points(&self) -> Vec<Vec2> {
        (0..self.count()).map(|i| self.point(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_symmetric() {
        let g = MeasurementGeometry::new(2.0, 20.0, 100).unwrap();
        assert_eq!(g.count(), 201);
        assert_eq!(g.point(0), Vec2::new(-20.0, 2.0));
        assert_eq!(g.point(100), Vec2::new(0.0, 2.0));
        assert!((g.point(200).x1 - 20.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(MeasurementGeometry::new(2.0, 0.0, 10).is_err());
        assert!(MeasurementGeometry::new(2.0, 1.0, 0).is_err());
        assert!(MeasurementGeometry::new(f64::NAN, 1.0, 3).is_err());
    }
}
