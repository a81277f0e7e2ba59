//! Navier fundamental solution, its P/S split and the generalized-stress kernels.
//!
//! Every kernel here is radial: `a(r) I + b(r) R̂R̂ᵀ` with `R = x - y`. The
//! Hankel pieces are combined so that the `1/r^n` singularities shared by the
//! shear and compressional terms cancel analytically; only the regular part
//! `H1(z) + 2i/(pi z)` of H1 is ever differenced.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bessel::{bessel_pair, BesselPair, EULER_GAMMA};
use super::medium::{ElasticMedium, GeneralizedStressParams};
use super::tensor::{Mat2C, Vec2};
use crate::error::{Error, Result};

/// Separations below this are treated as coincident.
pub const R_MIN: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);
const QUARTER_I: Complex64 = Complex64::new(0.0, 0.25);

fn separation(x: Vec2, y: Vec2) -> Result<(f64, Vec2)> {
    let d = x - y;
    let r = d.norm();
    if !(r >= R_MIN) {
        return Err(Error::Singularity(format!(
            "points ({}, {}) and ({}, {}) are closer than {R_MIN}",
            x.x1, x.x2, y.x1, y.x2
        )));
    }
    Ok((r, d.scale(1.0 / r)))
}

/// Radial kernel `a I + b R̂R̂ᵀ` together with `a'` and `b'`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Radial {
    pub a: Complex64,
    pub da: Complex64,
    pub b: Complex64,
    pub db: Complex64,
}

impl Radial {
    pub fn matrix(&self, rh: Vec2) -> Mat2C {
        Mat2C::iso_plus_dyad(self.a, self.b, rh)
    }

    /// Column k is the generalized stress, at normal `n`, of the x-gradient of
    /// column k of the kernel.
    pub fn stress(&self, rh: Vec2, r: f64, n: Vec2, mu: f64, params: &GeneralizedStressParams) -> Mat2C {
        let (mu_t, la_t) = (params.mu_t(), params.lambda_t());
        let rn = rh.dot(n);
        let b_r = self.b / r;
        let c1 = mu + mu_t;
        let w = Vec2::new(rh.x2, -rh.x1);
        let np = n.perp();
        let mut m = Mat2C::iso_plus_dyad(self.da * rn, self.db * rn - b_r * (2.0 * rn), rh) * c1;
        m = m + (Mat2C::outer(n, rh) + Mat2C::outer(rh, n)) * (b_r * c1);
        m = m + Mat2C::outer(n, rh) * ((self.da + self.db + b_r) * la_t);
        m = m - Mat2C::outer(np, w) * ((b_r - self.da) * mu_t);
        m
    }
}

/// Regular parts of Phi_k = (i/4) H0(k r) and its first three radial
/// derivatives. The omitted universal parts are
/// `-1/(2 pi r)`, `+1/(2 pi r^2)` and `-1/(pi r^3)`.
#[derive(Debug, Clone, Copy)]
struct Helmholtz {
    phi: Complex64,
    d1: Complex64,
    d2: Complex64,
    d3: Complex64,
}

impl Helmholtz {
    fn new(k: f64, r: f64, bp: &BesselPair) -> Self {
        let h0 = bp.h0();
        let h1r = bp.h1_reg();
        let k2 = k * k;
        let h1 = h1r - I * (2.0 / (PI * k * r));
        Helmholtz {
            phi: QUARTER_I * h0,
            d1: -QUARTER_I * (k * h1r),
            d2: QUARTER_I * (-k2 * h0 + k * h1r / r),
            d3: QUARTER_I * (k2 * k * h1 + k2 * h0 / r - 2.0 * k * h1r / (r * r)),
        }
    }

    fn full_d1(&self, r: f64) -> Complex64 {
        self.d1 - 1.0 / (2.0 * PI * r)
    }

    fn full_d2(&self, r: f64) -> Complex64 {
        self.d2 + 1.0 / (2.0 * PI * r * r)
    }

    fn full_d3(&self, r: f64) -> Complex64 {
        self.d3 - 1.0 / (PI * r * r * r)
    }
}

/// Same four values for the coefficient of ln r in Phi_k: -J0(k r)/(2 pi).
#[derive(Debug, Clone, Copy)]
struct HelmholtzLog {
    phi: f64,
    d1: f64,
    d2: f64,
    d3: f64,
}

impl HelmholtzLog {
    fn new(k: f64, r: f64, j0: f64, j1: f64) -> Self {
        let c = 1.0 / (2.0 * PI);
        let k2 = k * k;
        HelmholtzLog {
            phi: -c * j0,
            d1: c * k * j1,
            d2: c * (k2 * j0 - k * j1 / r),
            d3: -c * (k2 * k * j1 + k2 * j0 / r - 2.0 * k * j1 / (r * r)),
        }
    }
}

/// Assemble `a = phi_s/mu + psi'/(w^2 r)` and `b = (psi'' - psi'/r)/w^2` with
/// psi = phi_s - phi_p, plus their derivatives. Arguments are (phi_s, phi_s')
/// and the derivatives of psi.
#[allow(clippy::too_many_arguments)]
fn combine<T>(mu: f64, w2: f64, r: f64, phi_s: T, dphi_s: T, p1: T, p2: T, p3: T) -> (T, T, T, T)
where
    T: Copy
        + std::ops::Add<Output = T>
        + std::ops::Sub<Output = T>
        + std::ops::Mul<f64, Output = T>,
{
    let ir = 1.0 / r;
    let iw = 1.0 / w2;
    let a = phi_s * (1.0 / mu) + p1 * (ir * iw);
    let b = (p2 - p1 * ir) * iw;
    let da = dphi_s * (1.0 / mu) + (p2 * ir - p1 * (ir * ir)) * iw;
    let db = (p3 - p2 * ir + p1 * (ir * ir)) * iw;
    (a, da, b, db)
}

pub(crate) fn gamma_radial(medium: &ElasticMedium, r: f64) -> Radial {
    let (kp, ks) = (medium.kp(), medium.ks());
    let hs = Helmholtz::new(ks, r, &bessel_pair(ks * r));
    let hp = Helmholtz::new(kp, r, &bessel_pair(kp * r));
    gamma_from(medium, r, &hs, &hp)
}

fn gamma_from(medium: &ElasticMedium, r: f64, hs: &Helmholtz, hp: &Helmholtz) -> Radial {
    let w2 = medium.omega() * medium.omega();
    let (a, da, b, db) = combine(
        medium.mu(),
        w2,
        r,
        hs.phi,
        hs.full_d1(r),
        hs.d1 - hp.d1,
        hs.d2 - hp.d2,
        hs.d3 - hp.d3,
    );
    Radial { a, da, b, db }
}

fn log_from(medium: &ElasticMedium, r: f64, ls: &HelmholtzLog, lp: &HelmholtzLog) -> Radial {
    let w2 = medium.omega() * medium.omega();
    let (a, da, b, db) = combine(
        medium.mu(),
        w2,
        r,
        ls.phi,
        ls.d1,
        ls.d1 - lp.d1,
        ls.d2 - lp.d2,
        ls.d3 - lp.d3,
    );
    Radial {
        a: a.into(),
        da: da.into(),
        b: b.into(),
        db: db.into(),
    }
}

/// Compressional part: -(1/w^2) Hess Phi_kp.
fn p_part(medium: &ElasticMedium, r: f64, hp: &Helmholtz) -> Radial {
    let iw = 1.0 / (medium.omega() * medium.omega());
    let (d1, d2, d3) = (hp.full_d1(r), hp.full_d2(r), hp.full_d3(r));
    let ir = 1.0 / r;
    Radial {
        a: -d1 * ir * iw,
        da: -(d2 * ir - d1 * ir * ir) * iw,
        b: -(d2 - d1 * ir) * iw,
        db: -(d3 - d2 * ir + d1 * ir * ir) * iw,
    }
}

/// Shear part: (1/w^2)(ks^2 I + Hess) Phi_ks.
fn s_part(medium: &ElasticMedium, r: f64, hs: &Helmholtz) -> Radial {
    let iw = 1.0 / (medium.omega() * medium.omega());
    let ks2 = medium.ks() * medium.ks();
    let (d1, d2, d3) = (hs.full_d1(r), hs.full_d2(r), hs.full_d3(r));
    let ir = 1.0 / r;
    Radial {
        a: (hs.phi * ks2 + d1 * ir) * iw,
        da: (d1 * ks2 + d2 * ir - d1 * ir * ir) * iw,
        b: (d2 - d1 * ir) * iw,
        db: (d3 - d2 * ir + d1 * ir * ir) * iw,
    }
}

/// Fundamental solution of the Helmholtz equation, (i/4) H0(k|x-y|).
pub fn helmholtz_phi(k: f64, x: Vec2, y: Vec2) -> Result<Complex64> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("wavenumber must be positive, got {k}")));
    }
    let (r, _) = separation(x, y)?;
    Ok(QUARTER_I * bessel_pair(k * r).h0())
}

/// Green's tensor of the Navier equation.
pub fn gamma(medium: &ElasticMedium, x: Vec2, y: Vec2) -> Result<Mat2C> {
    let (r, rh) = separation(x, y)?;
    Ok(gamma_radial(medium, r).matrix(rh))
}

/// Compressional and shear parts (Γ_p, Γ_s) of the Green's tensor.
pub fn gamma_split(medium: &ElasticMedium, x: Vec2, y: Vec2) -> Result<(Mat2C, Mat2C)> {
    let (r, rh) = separation(x, y)?;
    let hs = Helmholtz::new(medium.ks(), r, &bessel_pair(medium.ks() * r));
    let hp = Helmholtz::new(medium.kp(), r, &bessel_pair(medium.kp() * r));
    Ok((p_part(medium, r, &hp).matrix(rh), s_part(medium, r, &hs).matrix(rh)))
}

fn check_normal(n: Vec2) -> Result<()> {
    if (n.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("normal ({}, {}) is not a unit vector", n.x1, n.x2)));
    }
    Ok(())
}

/// Stress of Γ(·, y) in its first argument: column k is P^(x)(Γ(·,y) e_k) at x.
pub fn pi1(
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    x: Vec2,
    y: Vec2,
    normal_at_x: Vec2,
) -> Result<Mat2C> {
    check_normal(normal_at_x)?;
    let (r, rh) = separation(x, y)?;
    Ok(gamma_radial(medium, r).stress(rh, r, normal_at_x, medium.mu(), params))
}

/// Stress in the second argument: entry (j,k) is component k of P^(y) applied
/// to row j of Γ(x, ·).
pub fn pi2(
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    x: Vec2,
    y: Vec2,
    normal_at_y: Vec2,
) -> Result<Mat2C> {
    check_normal(normal_at_y)?;
    let (r, rh) = separation(x, y)?;
    Ok(-gamma_radial(medium, r)
        .stress(rh, r, normal_at_y, medium.mu(), params)
        .transpose())
}

/// Compressional and shear parts of Π⁽¹⁾.
pub fn pi1_split(
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    x: Vec2,
    y: Vec2,
    normal_at_x: Vec2,
) -> Result<(Mat2C, Mat2C)> {
    check_normal(normal_at_x)?;
    let (r, rh) = separation(x, y)?;
    let hs = Helmholtz::new(medium.ks(), r, &bessel_pair(medium.ks() * r));
    let hp = Helmholtz::new(medium.kp(), r, &bessel_pair(medium.kp() * r));
    let mu = medium.mu();
    Ok((
        p_part(medium, r, &hp).stress(rh, r, normal_at_x, mu, params),
        s_part(medium, r, &hs).stress(rh, r, normal_at_x, mu, params),
    ))
}

/// Everything the Nyström assembly needs for one node pair: Γ, Π⁽²⁾ and the
/// coefficients of ln r in both.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairKernels {
    pub gamma: Mat2C,
    pub pi2: Mat2C,
    pub gamma_log: Mat2C,
    pub pi2_log: Mat2C,
}

pub(crate) fn pair_kernels(
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    x: Vec2,
    y: Vec2,
    normal_at_y: Vec2,
) -> PairKernels {
    let d = x - y;
    let r = d.norm();
    let rh = d.scale(1.0 / r);
    let (kp, ks) = (medium.kp(), medium.ks());
    let bs = bessel_pair(ks * r);
    let bp = bessel_pair(kp * r);
    let g = gamma_from(medium, r, &Helmholtz::new(ks, r, &bs), &Helmholtz::new(kp, r, &bp));
    let l = log_from(
        medium,
        r,
        &HelmholtzLog::new(ks, r, bs.j0, bs.j1),
        &HelmholtzLog::new(kp, r, bp.j0, bp.j1),
    );
    let mu = medium.mu();
    PairKernels {
        gamma: g.matrix(rh),
        pi2: -g.stress(rh, r, normal_at_y, mu, params).transpose(),
        gamma_log: l.matrix(rh),
        pi2_log: -l.stress(rh, r, normal_at_y, mu, params).transpose(),
    }
}

/// Γ and Π⁽²⁾ without the log parts, for field evaluation.
pub(crate) fn gamma_pi2(
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    x: Vec2,
    y: Vec2,
    normal_at_y: Vec2,
) -> (Mat2C, Mat2C) {
    let d = x - y;
    let r = d.norm();
    let rh = d.scale(1.0 / r);
    let g = gamma_radial(medium, r);
    (
        g.matrix(rh),
        -g.stress(rh, r, normal_at_y, medium.mu(), params).transpose(),
    )
}

/// Γ and Π⁽¹⁾ sharing one set of Bessel evaluations.
pub(crate) fn gamma_pi1(
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    x: Vec2,
    y: Vec2,
    normal_at_x: Vec2,
) -> Result<(Mat2C, Mat2C)> {
    let (r, rh) = separation(x, y)?;
    let g = gamma_radial(medium, r);
    Ok((g.matrix(rh), g.stress(rh, r, normal_at_x, medium.mu(), params)))
}

/// Coefficient of ln r in Γ at r = 0: `l I` with the returned `l`.
pub fn gamma_log_at_zero(medium: &ElasticMedium) -> f64 {
    let (mu, la) = (medium.mu(), medium.lambda());
    -(1.0 / (4.0 * PI)) * (1.0 / mu + 1.0 / (la + 2.0 * mu))
}

/// Limit of Γ(r) - (ln r) L(r) as r -> 0, written as `a I + b t̂t̂ᵀ` where t̂ is
/// the direction of approach. Returns (a, b).
pub fn gamma_smooth_at_zero(medium: &ElasticMedium) -> (Complex64, Complex64) {
    let mu = medium.mu();
    let (kp, ks) = (medium.kp(), medium.ks());
    let w2 = medium.omega() * medium.omega();
    let (ks2, kp2) = (ks * ks, kp * kp);
    let cs = (0.5 * ks).ln() + EULER_GAMMA;
    let cp = (0.5 * kp).ln() + EULER_GAMMA;
    let a = Complex64::new(
        -cs / (2.0 * PI * mu) + (ks2 * (cs - 0.5) - kp2 * (cp - 0.5)) / (4.0 * PI * w2),
        1.0 / (4.0 * mu) - (ks2 - kp2) / (8.0 * w2),
    );
    let b = Complex64::new((ks2 - kp2) / (4.0 * PI * w2), 0.0);
    (a, b)
}

/// Limit of Π⁽²⁾(x(t), x(s)) as s -> t for the pseudo-stress, on a curve with
/// unit normal `n`, unit tangent `t` and signed curvature `kappa`
/// (positive when the curve bends toward `n`).
pub fn double_layer_diagonal(medium: &ElasticMedium, kappa: f64, n: Vec2, t: Vec2) -> Mat2C {
    let (mu, la) = (medium.mu(), medium.lambda());
    let x = (la + mu) / (2.0 * PI * (la + 3.0 * mu));
    let iso = Mat2C::identity() * (kappa / (4.0 * PI));
    iso - (Mat2C::outer(n, n) - Mat2C::outer(t, t)) * (0.5 * kappa * x)
}

/// Im Γ(x, x) = (1/8)(1/mu + 1/(lambda + 2 mu)) I.
pub fn im_gamma_coincident(medium: &ElasticMedium) -> f64 {
    0.125 * (1.0 / medium.mu() + 1.0 / (medium.lambda() + 2.0 * medium.mu()))
}
