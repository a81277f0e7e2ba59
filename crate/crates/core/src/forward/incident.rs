use crate::error::{Error, Result};
use crate::kernels::{gamma, pi1, ElasticMedium, GeneralizedStressParams, Vec2, Vec2C};

fn check_polarization(j: usize) -> Result<()> {
    if j == 1 || j == 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("polarization must be 1 or 2, got {j}")))
    }
}

/// Point source `u^i(x; y, e_j) = Γ(x, y) e_j`.
pub fn incident_field(medium: &ElasticMedium, y: Vec2, j: usize, x: Vec2) -> Result<Vec2C> {
    check_polarization(j)?;
    Ok(gamma(medium, x, y)?.col(j))
}

/// Generalized stress of the point source at x for the given normal.
pub fn incident_stress(
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    y: Vec2,
    j: usize,
    x: Vec2,
    normal: Vec2,
) -> Result<Vec2C> {
    check_polarization(j)?;
    Ok(pi1(medium, params, x, y, normal)?.col(j))
}
