use num_complex::Complex64;

use super::medium::{ElasticMedium, GeneralizedStressParams};
use super::tensor::{Vec2, Vec2C};
use crate::error::{Error, Result};

/// Displacement Jacobian, `jac[a][c] = ∂u_a/∂x_c`.
pub type Jacobian = [[Complex64; 2]; 2];

/// Generalized stress vector
/// `(mu + mu_t) ∂u/∂n + lambda_t n div u - mu_t n⊥ div⊥ u` with
/// n⊥ = (-n2, n1) and div⊥ u = ∂1 u2 - ∂2 u1.
///
/// `value` is accepted for interface symmetry; the stress only depends on
/// derivatives.
pub fn stress_apply(
    params: &GeneralizedStressParams,
    medium: &ElasticMedium,
    _value: Vec2C,
    jacobian: &Jacobian,
    normal: Vec2,
) -> Result<Vec2C> {
    if (normal.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "normal ({}, {}) is not a unit vector",
            normal.x1, normal.x2
        )));
    }
    Ok(stress_unchecked(params, medium.mu(), jacobian, normal))
}

pub(crate) fn stress_unchecked(
    params: &GeneralizedStressParams,
    mu: f64,
    j: &Jacobian,
    n: Vec2,
) -> Vec2C {
    let c1 = mu + params.mu_t();
    let dn1 = j[0][0] * n.x1 + j[0][1] * n.x2;
    let dn2 = j[1][0] * n.x1 + j[1][1] * n.x2;
    let div = j[0][0] + j[1][1];
    let curl = j[1][0] - j[0][1];
    let np = n.perp();
    Vec2C::new(
        dn1 * c1 + div * (params.lambda_t() * n.x1) - curl * (params.mu_t() * np.x1),
        dn2 * c1 + div * (params.lambda_t() * n.x2) - curl * (params.mu_t() * np.x2),
    )
}
