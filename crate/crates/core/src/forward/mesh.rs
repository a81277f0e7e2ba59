//! Truncated surface closed into a smooth obstacle, and its Nyström nodes.
//!
//! The rough surface is kept on `|x1| <= (1 - 2 taper) A_f`, blended to a
//! constant height towards `x1 = ±A_f`, and closed by two smooth caps and a
//! flat bottom. The closed curve is C^∞ and traversed clockwise, so the left
//! normal of the tangent points out of the obstacle (up on the surface).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::surface::SurfaceProfile;
use crate::error::{Error, Result};
use crate::kernels::{ElasticMedium, Vec2};

/// Default number of nodes per shear wavelength when `node_count` is 0.
pub const DEFAULT_POINTS_PER_WAVELENGTH: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BIEConfig {
    /// Coupling parameter of the combined layer, Re(eta) > 0.
    pub eta: Complex64,
    /// Total nodes on the closed curve; 0 selects an automatic count.
    pub node_count: usize,
    /// Half-width A_f of the retained surface.
    pub truncation_halfwidth: f64,
    /// Fraction of A_f at each end over which the profile is blended flat.
    pub taper_fraction: f64,
    /// Length of each side cap.
    pub cap_length: f64,
}

impl BIEConfig {
    /// Defaults for a measurement half-aperture `a`: eta = k_s,
    /// A_f = a + max(10, a/2), taper 0.1, automatic node count.
    pub fn for_aperture(medium: &ElasticMedium, a: f64) -> Self {
        BIEConfig {
            eta: Complex64::new(medium.ks(), 0.0),
            node_count: 0,
            truncation_halfwidth: a + f64::max(10.0, 0.5 * a),
            taper_fraction: 0.1,
            cap_length: 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta.re > 0.0) || !self.eta.im.is_finite() {
            return Err(Error::Config(format!("Re(eta) must be positive, got {}", self.eta)));
        }
        if self.node_count != 0 && self.node_count < 16 {
            return Err(Error::Config(format!("node_count must be >= 16, got {}", self.node_count)));
        }
        if !(self.truncation_halfwidth > 0.0 && self.truncation_halfwidth.is_finite()) {
            return Err(Error::Config("truncation half-width must be positive".into()));
        }
        if !(self.taper_fraction > 0.0 && self.taper_fraction < 0.5) {
            return Err(Error::Config(format!(
                "taper_fraction must lie in (0, 0.5), got {}",
                self.taper_fraction
            )));
        }
        if !(self.cap_length > 0.0 && self.cap_length.is_finite()) {
            return Err(Error::Config("cap length must be positive".into()));
        }
        Ok(())
    }

    /// Half-width of the region where the surface is unmodified.
    pub fn window(&self) -> f64 {
        (1.0 - 2.0 * self.taper_fraction) * self.truncation_halfwidth
    }
}

/// C^∞ step: 0 for u <= 0, 1 for u >= 1. Returns (S, S', S'').
fn smooth_step(u: f64) -> (f64, f64, f64) {
    if u <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if u >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    // S = 1/(1 + e^g), g = 1/u - 1/(1-u)
    let v = 1.0 - u;
    let g = 1.0 / u - 1.0 / v;
    let dg = -1.0 / (u * u) - 1.0 / (v * v);
    let ddg = 2.0 / (u * u * u) - 2.0 / (v * v * v);
    let s = if g > 0.0 {
        let e = (-g).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + g.exp())
    };
    let q = s * (1.0 - s);
    let ds = -q * dg;
    let dds = -ds * (1.0 - 2.0 * s) * dg - q * ddg;
    (s, ds, dds)
}

const GL_NODES: usize = 12;

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Position, first and second parameter derivatives at a curve parameter.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub pos: Vec2,
    pub d1: Vec2,
    pub d2: Vec2,
}

/// The closed curve. Parameter t in [0, period): top from x1 = -A_f to A_f,
/// right cap, bottom from right to left, left cap.
#[derive(Debug, Clone)]
pub struct ClosedSurface {
    profile: SurfaceProfile,
    half_width: f64,
    blend_start: f64,
    blend_end: f64,
    level: f64,
    cap: f64,
    depth: f64,
    gl: (Vec<f64>, Vec<f64>),
}

impl ClosedSurface {
    pub fn new(profile: &SurfaceProfile, config: &BIEConfig) -> Result<Self> {
        config.validate()?;
        let a_f = config.truncation_halfwidth;
        let blend_start = config.window();
        let blend_end = blend_start + 0.8 * (a_f - blend_start);
        let (lo, hi, _) = profile.bounds(a_f);
        let mut c = ClosedSurface {
            profile: profile.clone(),
            half_width: a_f,
            blend_start,
            blend_end,
            level: 0.5 * (lo + hi),
            cap: config.cap_length,
            depth: 0.0,
            gl: gauss_legendre(GL_NODES),
        };
        c.depth = -c.cap_offset(c.cap).x2;
        Ok(c)
    }

    pub fn period(&self) -> f64 {
        4.0 * self.half_width + 2.0 * self.cap
    }

    pub fn profile(&self) -> &SurfaceProfile {
        &self.profile
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Height of the flat bottom.
    pub fn bottom(&self) -> f64 {
        self.level - self.depth
    }

    /// Blend weight b(s): 1 in the unmodified window, 0 near the ends.
    pub fn blend(&self, s: f64) -> (f64, f64, f64) {
        let w = self.blend_end - self.blend_start;
        let u = (s.abs() - self.blend_start) / w;
        let (st, dst, ddst) = smooth_step(u);
        (1.0 - st, -dst * s.signum() / w, -ddst / (w * w))
    }

    /// Height of the top boundary at x1 = s (blended profile).
    pub fn top(&self, s: f64) -> (f64, f64, f64) {
        let (f, df, ddf) = self.profile.eval(s);
        let (b, db, ddb) = self.blend(s);
        let g = f - self.level;
        (self.level + b * g, db * g + b * df, ddb * g + 2.0 * db * df + b * ddf)
    }

    fn heading(&self, sigma: f64, base: f64) -> (f64, f64) {
        let (s, ds, _) = smooth_step(sigma / self.cap);
        (base - PI * s, -PI * ds / self.cap)
    }

    /// Displacement along the right cap after arclength `sigma`.
    fn cap_offset(&self, sigma: f64) -> Vec2 {
        if sigma <= 0.0 {
            return Vec2::default();
        }
        let panels = 32;
        let h = sigma / panels as f64;
        let (xs, ws) = &self.gl;
        let mut acc = Vec2::default();
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in xs.iter().zip(ws) {
                let (th, _) = self.heading(mid + 0.5 * h * x, 0.0);
                acc = acc + Vec2::new(th.cos(), th.sin()).scale(0.5 * h * w);
            }
        }
        acc
    }

    pub fn eval(&self, t: f64) -> CurvePoint {
        let a_f = self.half_width;
        let t = t.rem_euclid(self.period());
        if t < 2.0 * a_f {
            let s = -a_f + t;
            let (y, dy, ddy) = self.top(s);
            return CurvePoint {
                pos: Vec2::new(s, y),
                d1: Vec2::new(1.0, dy),
                d2: Vec2::new(0.0, ddy),
            };
        }
        let t = t - 2.0 * a_f;
        if t < self.cap {
            let (th, dth) = self.heading(t, 0.0);
            let tan = Vec2::new(th.cos(), th.sin());
            return CurvePoint {
                pos: Vec2::new(a_f, self.level) + self.cap_offset(t),
                d1: tan,
                d2: tan.perp().scale(dth),
            };
        }
        let t = t - self.cap;
        if t < 2.0 * a_f {
            return CurvePoint {
                pos: Vec2::new(a_f - t, self.bottom()),
                d1: Vec2::new(-1.0, 0.0),
                d2: Vec2::default(),
            };
        }
        let t = t - 2.0 * a_f;
        let (th, dth) = self.heading(t, -PI);
        let tan = Vec2::new(th.cos(), th.sin());
        // The left cap is the right cap rotated by pi.
        CurvePoint {
            pos: Vec2::new(-a_f, self.bottom()) - self.cap_offset(t),
            d1: tan,
            d2: tan.perp().scale(dth),
        }
    }

    /// Is the point outside the obstacle and above the top boundary?
    pub fn is_above(&self, x: Vec2) -> bool {
        if x.x1.abs() <= self.half_width {
            x.x2 > self.top(x.x1).0
        } else {
            x.x2 > self.level
        }
    }
}

/// One Nyström node.
#[derive(Debug, Clone, Copy)]
pub struct MeshNode {
    /// Curve parameter t.
    pub param: f64,
    pub point: Vec2,
    /// Outward unit normal (into the exterior domain).
    pub normal: Vec2,
    /// Unit tangent in the direction of increasing t.
    pub tangent: Vec2,
    /// |dx/dt|; equals sqrt(1 + f'^2) on the top.
    pub jacobian: f64,
    /// Signed curvature, positive when bending toward the normal.
    pub curvature: f64,
    /// Blend weight: 1 in the unmodified window, 0 on the closure.
    pub taper: f64,
}

#[derive(Debug, Clone)]
pub struct BoundaryMesh {
    pub nodes: Vec<MeshNode>,
    /// Parameter spacing.
    pub spacing: f64,
    pub period: f64,
    pub curve: ClosedSurface,
}

impl BoundaryMesh {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest physical distance between neighbouring nodes.
    pub fn max_spacing(&self) -> f64 {
        self.nodes.iter().fold(0.0, |m, n| m.max(n.jacobian * self.spacing))
    }

    /// Quadrature weight of node j for surface integrals.
    pub fn weight(&self, j: usize) -> f64 {
        self.nodes[j].jacobian * self.spacing
    }

    pub fn node_at(&self, t: f64) -> MeshNode {
        make_node(&self.curve, t)
    }

    /// Distance from x to the nearest node.
    pub fn distance_to_nodes(&self, x: Vec2) -> f64 {
        self.nodes.iter().fold(f64::INFINITY, |m, n| m.min((n.point - x).norm()))
    }
}

fn make_node(curve: &ClosedSurface, t: f64) -> MeshNode {
    let cp = curve.eval(t);
    let speed = cp.d1.norm();
    let tangent = cp.d1.scale(1.0 / speed);
    let normal = tangent.perp();
    let on_top = t.rem_euclid(curve.period()) < 2.0 * curve.half_width();
    MeshNode {
        param: t,
        point: cp.pos,
        normal,
        tangent,
        jacobian: speed,
        curvature: normal.dot(cp.d2) / (speed * speed),
        taper: if on_top { curve.blend(cp.pos.x1).0 } else { 0.0 },
    }
}

/// Automatic node count: `ppw` nodes per shear wavelength at the densest
/// part of the curve, rounded up to a multiple of 8.
pub fn auto_node_count(profile: &SurfaceProfile, config: &BIEConfig, medium: &ElasticMedium, ppw: f64) -> Result<usize> {
    let curve = ClosedSurface::new(profile, config)?;
    let (_, _, slope) = profile.bounds(config.truncation_halfwidth);
    let max_speed = (1.0 + slope * slope).sqrt();
    let target = medium.shear_wavelength() / ppw;
    let n = (curve.period() * max_speed / target).ceil() as usize;
    Ok(n.div_ceil(8) * 8)
}

/// Nodes at uniform parameter spacing on the closed curve.
pub fn build_mesh(surface: &SurfaceProfile, config: &BIEConfig) -> Result<BoundaryMesh> {
    let n = config.node_count;
    if n < 16 {
        return Err(Error::Config(format!("node_count must be >= 16, got {n}")));
    }
    if n % 2 != 0 {
        return Err(Error::Config(format!("node_count must be even, got {n}")));
    }
    let curve = ClosedSurface::new(surface, config)?;
    let period = curve.period();
    let spacing = period / n as f64;
    let nodes = (0..n).map(|j| make_node(&curve, j as f64 * spacing)).collect();
    Ok(BoundaryMesh { nodes, spacing, period, curve })
}
