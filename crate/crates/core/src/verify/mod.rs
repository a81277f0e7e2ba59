//! Numerical checks of the identities the method relies on. Every check
//! returns an [`IdentityReport`] and has no side effects.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forward::solver::trace_at_midpoints;
use crate::forward::{BIEConfig, BoundaryMesh, DensitySolution, ForwardSolver, SurfaceProfile};
use crate::kernels::green::gamma_pi1;
use crate::kernels::{
    bessel_j, funk_hecke_quadrature, im_gamma_half, CirclePart, ElasticMedium, GeneralizedStressParams, Mat2C, Vec2,
    Vec2C,
};

/// Floor of the denominator in relative errors.
pub const REL_FLOOR: f64 = 1e-300;

/// Directions on the half circle used for Im₊Γ in the Helmholtz–Kirchhoff check.
pub const HK_CIRCLE_NODES: usize = 1024;

/// Default tolerances.
pub const FUNK_HECKE_TOL: f64 = 1e-10;
pub const HK_TOL: f64 = 0.1;
pub const RECIPROCITY_TOL: f64 = 1e-3;
pub const BOUNDARY_TOL: f64 = 1e-3;
pub const NAVIER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub name: String,
    pub parameters: Vec<(String, String)>,
    /// Magnitudes of the two sides.
    pub left: f64,
    pub right: f64,
    pub abs_error: f64,
    /// abs_error / max(right, REL_FLOOR).
    pub rel_error: f64,
    pub tolerance: f64,
    /// Whether the tolerance applies to the relative (else absolute) error.
    pub relative: bool,
    pub passed: bool,
}

impl IdentityReport {
    pub fn new(name: &str, parameters: Vec<(String, String)>, left: f64, right: f64, abs_error: f64) -> Self {
        let rel_error = abs_error / right.abs().max(REL_FLOOR);
        let mut r = IdentityReport {
            name: name.to_string(),
            parameters,
            left,
            right,
            abs_error,
            rel_error,
            tolerance: 0.0,
            relative: true,
            passed: false,
        };
        r = r.with_tolerance(f64::INFINITY);
        r
    }

    /// Gate the relative error at `tol`.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self.relative = true;
        self.passed = self.rel_error <= tol;
        self
    }

    /// Gate the absolute error at `tol`.
    pub fn with_abs_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self.relative = false;
        self.passed = self.abs_error <= tol;
        self
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} left={:.17e} right={:.17e} abs_error={:.6e} rel_error={:.6e} tol={:.3e} ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.left,
            self.right,
            self.abs_error,
            self.rel_error,
            self.tolerance,
            if self.relative { "relative" } else { "absolute" },
        )?;
        for (k, v) in &self.parameters {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

fn param(k: &str, v: impl fmt::Display) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn vec_str(v: Vec2) -> String {
    format!("({},{})", v.x1, v.x2)
}

/// J0(k|x-y|) against the 2M-point circle average of e^{ik(x-y)·d}.
pub fn check_funk_hecke(k: f64, x: Vec2, y: Vec2, m: usize) -> Result<IdentityReport> {
    let q = funk_hecke_quadrature(k, x, y, m)?;
    let j0 = bessel_j(0, k * (x - y).norm())?;
    let params = vec![param("k", k), param("x", vec_str(x)), param("y", vec_str(y)), param("M", m)];
    Ok(IdentityReport::new("funk-hecke", params, q.norm(), j0.abs(), (q - j0).norm()).with_tolerance(FUNK_HECKE_TOL))
}

/// Trapezoid quadrature over ξ = (t, H), |t| <= A, of
/// Π⁽¹⁾(ξ,x)ᵀ conj(Γ(ξ,y)) − Γ(ξ,x)ᵀ conj(Π⁽¹⁾(ξ,y)) with normal (0, 1),
/// using n_quad intervals.
pub fn hk_left(
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    x: Vec2,
    y: Vec2,
    h_line: f64,
    a: f64,
    n_quad: usize,
) -> Result<Mat2C> {
    if !(x.x2 < h_line && y.x2 < h_line) {
        return Err(Error::Domain(format!("points must lie below the line x2 = {h_line}")));
    }
    if !(a > 0.0) || n_quad < 2 {
        return Err(Error::Domain("aperture must be positive and n_quad >= 2".into()));
    }
    let h = 2.0 * a / n_quad as f64;
    let mut acc = Mat2C::ZERO;
    for i in 0..=n_quad {
        let xi = Vec2::new(-a + i as f64 * h, h_line);
        let (gx, px) = gamma_pi1(medium, params, xi, x, Vec2::E2)?;
        let (gy, py) = gamma_pi1(medium, params, xi, y, Vec2::E2)?;
        let w = if i == 0 || i == n_quad { 0.5 * h } else { h };
        acc = acc + (px.transpose().matmul(&gy.conj()) - gx.transpose().matmul(&py.conj())) * w;
    }
    Ok(acc)
}

/// Truncated line integral against 2i Im₊Γ(y, x); errors are matrix max-norms.
pub fn check_hk_identity(
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    x: Vec2,
    y: Vec2,
    h_line: f64,
    a: f64,
    n_quad: usize,
) -> Result<IdentityReport> {
    let left = hk_left(medium, params, x, y, h_line, a, n_quad)?;
    let right = im_gamma_half(medium, y, x, CirclePart::Plus, HK_CIRCLE_NODES)? * Complex64::new(0.0, 2.0);
    let p = vec![
        param("x", vec_str(x)),
        param("y", vec_str(y)),
        param("H", h_line),
        param("A", a),
        param("n_quad", n_quad),
    ];
    Ok(IdentityReport::new("hk-identity", p, left.max_abs(), right.max_abs(), (left - right).max_abs())
        .with_tolerance(HK_TOL))
}

/// u^s(x; y, p)·q against u^s(y; x, q)·p from one factored system.
#[allow(clippy::too_many_arguments)]
pub fn check_reciprocity(
    surface: &SurfaceProfile,
    medium: &ElasticMedium,
    bie_config: &BIEConfig,
    x: Vec2,
    y: Vec2,
    p: Vec2,
    q: Vec2,
) -> Result<IdentityReport> {
    let solver = ForwardSolver::new(surface, medium, bie_config)?;
    let standoff = 0.3 * medium.shear_wavelength();
    for pt in [x, y] {
        let d = solver.clearance(pt)?;
        if d < standoff {
            return Err(Error::TooClose(format!("point {} is {d:.3e} from the surface, below {standoff:.3e}", vec_str(pt))));
        }
    }
    let phi = solver.solve_point_sources(&[y, x])?;
    let at_x = solver.displacement(&phi, &[x])?;
    let at_y = solver.displacement(&phi, &[y])?;
    // columns: 0, 1 = source y with e1, e2; 2, 3 = source x
    let field = |u: &faer::Mat<Complex64>, c0: usize, pol: Vec2| {
        Vec2C::new(u[(0, c0)], u[(1, c0)]) * pol.x1 + Vec2C::new(u[(0, c0 + 1)], u[(1, c0 + 1)]) * pol.x2
    };
    let left = field(&at_x, 0, p).dot_real(q);
    let right = field(&at_y, 2, q).dot_real(p);
    let params = vec![
        param("x", vec_str(x)),
        param("y", vec_str(y)),
        param("p", vec_str(p)),
        param("q", vec_str(q)),
        param("nodes", solver.node_count()),
    ];
    Ok(IdentityReport::new("reciprocity", params, left.norm(), right.norm(), (left - right).norm())
        .with_tolerance(RECIPROCITY_TOL))
}

/// sup |u^s + u^i| at parameter midpoints of the top surface with both
/// neighbouring nodes inside `|x1| <= window`, relative to sup |u^i| at
/// those nodes. `incident` gives u^i at a surface point.
pub fn check_boundary_condition(
    mesh: &BoundaryMesh,
    density: &DensitySolution,
    incident: &dyn Fn(Vec2) -> Result<Vec2C>,
    medium: &ElasticMedium,
    eta: Complex64,
    window: f64,
) -> Result<IdentityReport> {
    let n = mesh.len();
    let top_end = 2.0 * mesh.curve.half_width();
    let indices: Vec<usize> = (0..n)
        .filter(|&i| {
            let (a, b) = (&mesh.nodes[i], &mesh.nodes[(i + 1) % n]);
            i + 1 < n && b.param < top_end && a.point.x1.abs() <= window && b.point.x1.abs() <= window
        })
        .collect();
    if indices.is_empty() {
        return Err(Error::Domain("no surface midpoints inside the window".into()));
    }
    let params = GeneralizedStressParams::pseudo(medium);
    let traces = trace_at_midpoints(mesh, medium, &params, eta, density, &indices)?;
    let mut residual = 0.0f64;
    let mut scale = 0.0f64;
    for (&i, us) in indices.iter().zip(&traces) {
        let mid = mesh.node_at(mesh.nodes[i].param + 0.5 * mesh.spacing);
        residual = residual.max((*us + incident(mid.point)?).max_abs());
        scale = scale.max(incident(mesh.nodes[i].point)?.max_abs());
    }
    let p = vec![param("nodes", n), param("midpoints", indices.len()), param("window", window)];
    Ok(IdentityReport::new("boundary-condition", p, residual, scale, residual).with_tolerance(BOUNDARY_TOL))
}

/// Fourth-order five-point central differences of `field` at x along each
/// axis (mixed derivatives by nesting the first-derivative stencil).
fn fd_second_derivatives(field: &dyn Fn(Vec2) -> Vec2C, x: Vec2, h: f64) -> [Vec2C; 3] {
    const D1: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
    const D2: [(f64, f64); 5] = [(-2.0, -1.0), (-1.0, 16.0), (0.0, -30.0), (1.0, 16.0), (2.0, -1.0)];
    let at = |s1: f64, s2: f64| field(x + Vec2::new(s1 * h, s2 * h));
    let mut d11 = Vec2C::ZERO;
    let mut d22 = Vec2C::ZERO;
    for (s, c) in D2 {
        d11 = d11 + at(s, 0.0) * c;
        d22 = d22 + at(0.0, s) * c;
    }
    let mut d12 = Vec2C::ZERO;
    for (s1, c1) in D1 {
        for (s2, c2) in D1 {
            d12 = d12 + at(s1, s2) * (c1 * c2);
        }
    }
    let h2 = h * h;
    [d11 * (1.0 / (12.0 * h2)), d12 * (1.0 / (144.0 * h2)), d22 * (1.0 / (12.0 * h2))]
}

/// μΔu + (λ+μ)∇div u + ω²u at x by finite differences, relative to |ω²u(x)|.
pub fn check_navier_residual(field: &dyn Fn(Vec2) -> Vec2C, medium: &ElasticMedium, x: Vec2, step: f64) -> Result<IdentityReport> {
    if !(step > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let [d11, d12, d22] = fd_second_derivatives(field, x, step);
    let (mu, la, w2) = (medium.mu(), medium.lambda(), medium.omega() * medium.omega());
    let u = field(x);
    let lap = d11 + d22;
    let grad_div = Vec2C::new(d11.x1 + d12.x2, d12.x1 + d22.x2);
    let r = lap * mu + grad_div * (la + mu) + u * w2;
    let p = vec![param("x", vec_str(x)), param("step", step)];
    Ok(IdentityReport::new("navier-residual", p, r.norm(), (u * w2).norm(), r.norm()).with_tolerance(NAVIER_TOL))
}
