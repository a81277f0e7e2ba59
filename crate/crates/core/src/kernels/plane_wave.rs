//! Plane-wave (circle) quadratures: Funk–Hecke and the imaginary part of Γ.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::medium::ElasticMedium;
use super::tensor::{Mat2C, Vec2};
use crate::error::{Error, Result};

/// Which arc of the unit circle of directions d = (cos φ, sin φ) to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CirclePart {
    /// φ ∈ [0, π], d2 >= 0.
    Plus,
    /// φ ∈ [-π, 0], d2 <= 0.
    Minus,
    Full,
}

impl std::str::FromStr for CirclePart {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(CirclePart::Plus),
            "minus" => Ok(CirclePart::Minus),
            "full" => Ok(CirclePart::Full),
            _ => Err(Error::Domain(format!("unknown circle part '{s}'"))),
        }
    }
}

/// Directions and trapezoid weights (summing to the arc length).
///
/// Each half uses M+1 equispaced nodes with halved endpoint weights; the full
/// circle is the periodic 2M-point rule, i.e. the sum of both halves.
#[derive(Debug, Clone)]
pub struct CircleRule {
    pub dirs: Vec<Vec2>,
    pub weights: Vec<f64>,
}

impl CircleRule {
    pub fn new(part: CirclePart, m: usize) -> Result<Self> {
        if m < 8 {
            return Err(Error::Domain(format!("circle quadrature needs M >= 8, got {m}")));
        }
        let h = PI / m as f64;
        let mut dirs = Vec::new();
        let mut weights = Vec::new();
        match part {
            CirclePart::Plus | CirclePart::Minus => {
                let start = if part == CirclePart::Plus { 0.0 } else { -PI };
                for i in 0..=m {
                    let phi = start + i as f64 * h;
                    dirs.push(Vec2::new(phi.cos(), phi.sin()));
                    weights.push(if i == 0 || i == m { 0.5 * h } else { h });
                }
            }
            CirclePart::Full => {
                for i in 0..2 * m {
                    let phi = -PI + i as f64 * h;
                    dirs.push(Vec2::new(phi.cos(), phi.sin()));
                    weights.push(h);
                }
            }
        }
        Ok(CircleRule { dirs, weights })
    }
}

/// (1/2π) ∫ e^{ik(x-y)·d} ds(d) by the periodic trapezoid rule with 2M nodes.
pub fn funk_hecke_quadrature(k: f64, x: Vec2, y: Vec2, m: usize) -> Result<Complex64> {
    let rule = CircleRule::new(CirclePart::Full, m)?;
    let d = x - y;
    // uniform weights 2π/(2M): a plain mean, exact for x == y
    let mut s = Complex64::new(0.0, 0.0);
    for dir in &rule.dirs {
        s += Complex64::from_polar(1.0, k * d.dot(*dir));
    }
    Ok(s / rule.dirs.len() as f64)
}

/// Plane-wave representation of the imaginary part of Γ over an arc:
/// (1/8π)[(1/(λ+2μ)) ∫ d⊗d e^{ik_p(x-y)·d} + (1/μ) ∫ (I - d⊗d) e^{ik_s(x-y)·d}].
///
/// Over the full circle this is real and equals Im Γ(x, y); over a half
/// circle it is complex in general.
pub fn im_gamma_half(medium: &ElasticMedium, x: Vec2, y: Vec2, part: CirclePart, m: usize) -> Result<Mat2C> {
    let rule = CircleRule::new(part, m)?;
    Ok(im_gamma_with_rule(medium, x, y, &rule))
}

pub(crate) fn im_gamma_with_rule(medium: &ElasticMedium, x: Vec2, y: Vec2, rule: &CircleRule) -> Mat2C {
    let cp = 1.0 / (8.0 * PI * (medium.lambda() + 2.0 * medium.mu()));
    let cs = 1.0 / (8.0 * PI * medium.mu());
    let d = x - y;
    let (kp, ks) = (medium.kp(), medium.ks());
    let mut acc = [Complex64::new(0.0, 0.0); 3]; // 11, 12, 22
    for (dir, w) in rule.dirs.iter().zip(&rule.weights) {
        let t = d.dot(*dir);
        let ep = Complex64::from_polar(w * cp, kp * t);
        let es = Complex64::from_polar(w * cs, ks * t);
        let (d11, d12, d22) = (dir.x1 * dir.x1, dir.x1 * dir.x2, dir.x2 * dir.x2);
        acc[0] += ep * d11 + es * (1.0 - d11);
        acc[1] += (ep - es) * d12;
        acc[2] += ep * d22 + es * (1.0 - d22);
    }
    Mat2C::new(acc[0], acc[1], acc[1], acc[2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_arc_length() {
        for (part, len) in [(CirclePart::Plus, PI), (CirclePart::Minus, PI), (CirclePart::Full, 2.0 * PI)] {
            let r = CircleRule::new(part, 16).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert!((s - len).abs() < 1e-14);
        }
    }

    #[test]
    fn minus_half_points_down() {
        let r = CircleRule::new(CirclePart::Minus, 32).unwrap();
        assert!(r.dirs.iter().all(|d| d.x2 <= 1e-15));
        let r = CircleRule::new(CirclePart::Plus, 32).unwrap();
        assert!(r.dirs.iter().all(|d| d.x2 >= -1e-15));
    }

    #[test]
    fn small_m_rejected() {
        assert!(CircleRule::new(CirclePart::Full, 7).is_err());
    }
}
