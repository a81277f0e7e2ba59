//! Special functions and elastodynamic kernels.

pub mod bessel;
pub mod green;
pub mod medium;
pub mod plane_wave;
pub mod stress;
pub mod tensor;

pub use bessel::{bessel_j, bessel_y, hankel1};
pub use green::{
    double_layer_diagonal, gamma, gamma_log_at_zero, gamma_smooth_at_zero, gamma_split, helmholtz_phi,
    im_gamma_coincident, pi1, pi1_split, pi2, R_MIN,
};
pub use medium::{ElasticMedium, GeneralizedStressParams};
pub use plane_wave::{funk_hecke_quadrature, im_gamma_half, CirclePart, CircleRule};
pub use stress::{stress_apply, Jacobian};
pub use tensor::{Mat2C, Vec2, Vec2C};
