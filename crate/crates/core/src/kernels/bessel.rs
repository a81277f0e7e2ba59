//! Bessel functions J0, J1, Y0, Y1 and Hankel functions of the first kind.
//!
//! Three regimes: power series for `t <= 2`, Miller backward recurrence with
//! Neumann series for the Y functions on `2 < t < 25`, and the Hankel
//! asymptotic expansion beyond that. The alternating power series loses
//! digits quickly past t ~ 4, so it is only used where the Neumann form of
//! `Y1 + 2/(pi t)` would cancel.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_MAX: f64 = 2.0;
const ASYMPTOTIC_MIN: f64 = 25.0;

/// J0, J1, Y0 and the regular part of Y1 at a single argument.
///
/// `y1_reg` is `Y1(t) + 2/(pi t)`, which stays bounded at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPair {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1_reg: f64,
}

impl BesselPair {
    pub fn y1(&self, t: f64) -> f64 {
        self.y1_reg - 2.0 / (std::f64::consts::PI * t)
    }

    pub fn h0(&self) -> Complex64 {
        Complex64::new(self.j0, self.y0)
    }

    /// H1(t) + 2i/(pi t).
    pub fn h1_reg(&self) -> Complex64 {
        Complex64::new(self.j1, self.y1_reg)
    }
}

/// Evaluate all four functions at `t > 0`. No argument checking.
pub fn bessel_pair(t: f64) -> BesselPair {
    if t <= SERIES_MAX {
        series(t)
    } else if t < ASYMPTOTIC_MIN {
        miller(t)
    } else {
        asymptotic(t)
    }
}

/// J0 and J1 only, `t >= 0`.
pub fn bessel_j01(t: f64) -> (f64, f64) {
    if t <= SERIES_MAX {
        series_j(t)
    } else if t < ASYMPTOTIC_MIN {
        let p = miller(t);
        (p.j0, p.j1)
    } else {
        let p = asymptotic(t);
        (p.j0, p.j1)
    }
}

fn series_j(t: f64) -> (f64, f64) {
    let q = -0.25 * t * t;
    let mut term = 1.0;
    let mut j0 = 1.0;
    let mut term1 = 0.5 * t;
    let mut j1 = term1;
    for p in 1..60 {
        let pf = p as f64;
        term *= q / (pf * pf);
        term1 *= q / (pf * (pf + 1.0));
        j0 += term;
        j1 += term1;
        if term.abs() < 1e-18 && term1.abs() < 1e-18 {
            break;
        }
    }
    (j0, j1)
}

fn series(t: f64) -> BesselPair {
    use std::f64::consts::PI;
    let q = -0.25 * t * t;
    let (j0, j1) = series_j(t);
    // Y0: (2/pi)(ln(t/2)+gamma) J0 - (2/pi) sum H_p q^p / (p!)^2
    // Y1 + 2/(pi t): (2/pi) ln(t/2) J1 - (1/pi)(t/2) sum [psi(p+1)+psi(p+2)] q^p / (p!(p+1)!)
    let mut harm = 0.0;
    let mut term0 = 1.0;
    let mut term1 = 1.0;
    let mut s0 = 0.0;
    let mut s1 = 1.0 - 2.0 * EULER_GAMMA; // p = 0: psi(1)+psi(2) = -2 gamma + 1
    for p in 1..60 {
        let pf = p as f64;
        harm += 1.0 / pf;
        term0 *= q / (pf * pf);
        term1 *= q / (pf * (pf + 1.0));
        s0 += harm * term0;
        let psi_sum = 2.0 * (harm - EULER_GAMMA) + 1.0 / (pf + 1.0);
        let d1 = psi_sum * term1;
        s1 += d1;
        if (harm * term0).abs() < 1e-18 && d1.abs() < 1e-18 {
            break;
        }
    }
    let lg = (0.5 * t).ln();
    let y0 = (2.0 / PI) * (lg + EULER_GAMMA) * j0 - (2.0 / PI) * s0;
    let y1_reg = (2.0 / PI) * lg * j1 - (0.5 * t / PI) * s1;
    BesselPair { j0, j1, y0, y1_reg }
}

fn miller(t: f64) -> BesselPair {
    use std::f64::consts::PI;
    let m = 2 * (((t + 40.0) / 2.0).ceil() as usize);
    let two_over_t = 2.0 / t;
    // Backward recurrence J_{k-1} = (2k/t) J_k - J_{k+1}.
    let mut jkp1 = 0.0;
    let mut jk = 1e-30;
    let mut norm = 0.0; // J0 + 2 sum J_{2k}
    let mut sy0 = 0.0; // sum (-1)^k J_{2k} / k
    let mut sy1 = 0.0; // sum (-1)^k (J_{2k-1} - J_{2k+1}) / k
    let mut j1 = 0.0;
    for k in (1..=m).rev() {
        let jkm1 = (k as f64) * two_over_t * jk - jkp1;
        if k % 2 == 0 {
            let half = (k / 2) as f64;
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            norm += 2.0 * jk;
            sy0 += sign * jk / half;
            sy1 += sign * (jkm1 - jkp1) / half;
        }
        if k == 1 {
            j1 = jk;
        }
        jkp1 = jk;
        jk = jkm1;
        if jk.abs() > 1e200 {
            jk *= 1e-200;
            jkp1 *= 1e-200;
            norm *= 1e-200;
            sy0 *= 1e-200;
            sy1 *= 1e-200;
            j1 *= 1e-200;
        }
    }
    let j0_raw = jk;
    norm += j0_raw;
    let scale = 1.0 / norm;
    let j0 = j0_raw * scale;
    let j1 = j1 * scale;
    let sy0 = sy0 * scale;
    let sy1 = sy1 * scale;
    let lg = (0.5 * t).ln() + EULER_GAMMA;
    let y0 = (2.0 / PI) * lg * j0 - (4.0 / PI) * sy0;
    let y1 = -(2.0 / PI) * j0 / t + (2.0 / PI) * lg * j1 + (2.0 / PI) * sy1;
    BesselPair {
        j0,
        j1,
        y0,
        y1_reg: y1 + 2.0 / (PI * t),
    }
}

/// Sum of the Hankel asymptotic series: P + iQ with
/// H_nu(t) = sqrt(2/(pi t)) e^{i(t - nu pi/2 - pi/4)} (P + iQ).
fn asymptotic_factor(nu: f64, t: f64) -> Complex64 {
    let mu = 4.0 * nu * nu;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= Complex64::new(0.0, (mu - odd * odd) / (kf * 8.0 * t));
        let mag = term.norm();
        if mag > last {
            break;
        }
        sum += term;
        last = mag;
        if mag < 1e-17 {
            break;
        }
    }
    sum
}

fn asymptotic(t: f64) -> BesselPair {
    use std::f64::consts::{FRAC_1_SQRT_2, PI};
    let amp = (2.0 / (PI * t)).sqrt();
    let (s, c) = t.sin_cos();
    // e^{i(t - pi/4)} and e^{i(t - 3pi/4)} from sin t, cos t directly.
    let e0 = Complex64::new((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2);
    let e1 = Complex64::new((s - c) * FRAC_1_SQRT_2, -(c + s) * FRAC_1_SQRT_2);
    let h0 = amp * e0 * asymptotic_factor(0.0, t);
    let h1 = amp * e1 * asymptotic_factor(1.0, t);
    BesselPair {
        j0: h0.re,
        j1: h1.re,
        y0: h0.im,
        y1_reg: h1.im + 2.0 / (PI * t),
    }
}

fn check_order(order: i32) -> Result<()> {
    if order == 0 || order == 1 {
        Ok(())
    } else {
        Err(Error::Domain(format!("unsupported Bessel order {order}")))
    }
}

/// J_order(t) for order 0 or 1 and t >= 0.
pub fn bessel_j(order: i32, t: f64) -> Result<f64> {
    check_order(order)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("Bessel J argument must be >= 0, got {t}")));
    }
    let (j0, j1) = bessel_j01(t);
    Ok(if order == 0 { j0 } else { j1 })
}

/// Y_order(t) for order 0 or 1 and t > 0.
pub fn bessel_y(order: i32, t: f64) -> Result<f64> {
    check_order(order)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("Bessel Y argument must be > 0, got {t}")));
    }
    let p = bessel_pair(t);
    Ok(if order == 0 { p.y0 } else { p.y1(t) })
}

/// H^(1)_order(t) = J_order(t) + i Y_order(t) for t > 0.
pub fn hankel1(order: i32, t: f64) -> Result<Complex64> {
    check_order(order)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("Hankel argument must be > 0, got {t}")));
    }
    let p = bessel_pair(t);
    Ok(if order == 0 {
        p.h0()
    } else {
        Complex64::new(p.j1, p.y1(t))
    })
}
