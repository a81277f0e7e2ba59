use crate::error::{Error, Result};

/// Homogeneous isotropic elastic medium at a fixed angular frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticMedium {
    mu: f64,
    lambda: f64,
    omega: f64,
    kp: f64,
    ks: f64,
}

impl ElasticMedium {
    pub fn new(mu: f64, lambda: f64, omega: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::Domain(format!("mu must be positive, got {mu}")));
        }
        if !(lambda + mu >= 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("lambda + mu must be >= 0, got lambda = {lambda}")));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("omega must be positive, got {omega}")));
        }
        Ok(ElasticMedium {
            mu,
            lambda,
            omega,
            kp: omega / (2.0 * mu + lambda).sqrt(),
            ks: omega / mu.sqrt(),
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn kp(&self) -> f64 {
        self.kp
    }

    pub fn ks(&self) -> f64 {
        self.ks
    }

    pub fn shear_wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.ks
    }
}

/// Coefficients of the generalized stress operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedStressParams {
    mu_t: f64,
    lambda_t: f64,
}

impl GeneralizedStressParams {
    /// The sum `mu_t + lambda_t` must reproduce `mu + lambda` up to rounding
    /// of the caller's arithmetic (a few ulps).
    pub fn new(medium: &ElasticMedium, mu_t: f64, lambda_t: f64) -> Result<Self> {
        let target = medium.mu() + medium.lambda();
        let tol = 8.0 * f64::EPSILON * target.abs().max(mu_t.abs()).max(lambda_t.abs()).max(1.0);
        if !(mu_t.is_finite() && lambda_t.is_finite()) || (mu_t + lambda_t - target).abs() > tol {
            return Err(Error::Domain(format!(
                "stress parameters must satisfy mu_t + lambda_t = mu + lambda = {target}, got {mu_t} + {lambda_t}"
            )));
        }
        Ok(GeneralizedStressParams { mu_t, lambda_t })
    }

    /// The pseudo-stress pair that removes the Cauchy-singular part of the
    /// double-layer kernel.
    pub fn pseudo(medium: &ElasticMedium) -> Self {
        let (mu, la) = (medium.mu(), medium.lambda());
        let mu_t = mu * (mu + la) / (3.0 * mu + la);
        GeneralizedStressParams {
            mu_t,
            lambda_t: (mu + la) - mu_t,
        }
    }

    /// The physical traction: mu_t = mu, lambda_t = lambda.
    pub fn traction(medium: &ElasticMedium) -> Self {
        GeneralizedStressParams {
            mu_t: medium.mu(),
            lambda_t: medium.lambda(),
        }
    }

    pub fn mu_t(&self) -> f64 {
        self.mu_t
    }

    pub fn lambda_t(&self) -> f64 {
        self.lambda_t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers() {
        let m = ElasticMedium::new(1.0, 1.0, 15.0).unwrap();
        assert!((m.kp() - 15.0 / 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(m.ks(), 15.0);
        assert!(m.kp() <= m.ks());
    }

    #[test]
    fn rejects_bad_media() {
        assert!(ElasticMedium::new(0.0, 1.0, 1.0).is_err());
        assert!(ElasticMedium::new(1.0, -1.5, 1.0).is_err());
        assert!(ElasticMedium::new(1.0, 1.0, -2.0).is_err());
        assert!(ElasticMedium::new(1.0, -1.0, 1.0).is_ok());
    }

    #[test]
    fn stress_constraint() {
        let m = ElasticMedium::new(1.0, 1.0, 15.0).unwrap();
        assert!(GeneralizedStressParams::new(&m, 0.5, 1.5).is_ok());
        assert!(GeneralizedStressParams::new(&m, 0.5, 1.4).is_err());
        let p = GeneralizedStressParams::pseudo(&m);
        assert!((p.mu_t() - 0.5).abs() < 1e-15);
        assert!((p.lambda_t() - 1.5).abs() < 1e-15);
    }
}
