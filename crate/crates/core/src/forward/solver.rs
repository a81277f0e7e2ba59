//! Nyström discretization of the combined-layer equation
//! `(I + D - i eta S) phi = rhs` on the closed curve, with
//! `D phi = 2 ∫ Π⁽²⁾ phi ds` and `S phi = 2 ∫ Γ phi ds`.
//!
//! Log-singular kernels are split as `k = k1 ln(4 sin²((t-s)/2)) + k2` and the
//! log part is integrated with the Kress weights, so the rule converges
//! super-algebraically on the C^∞ curve.

use std::f64::consts::PI;

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::{Mat, MatRef};
use num_complex::Complex64;
use rayon::prelude::*;

use super::mesh::BoundaryMesh;
use crate::error::{Error, Result};
use crate::kernels::green::{gamma_pi2, pair_kernels};
use crate::kernels::stress::stress_unchecked;
use crate::kernels::{
    double_layer_diagonal, gamma_log_at_zero, gamma_smooth_at_zero, ElasticMedium, GeneralizedStressParams, Mat2C,
    Vec2, Vec2C,
};

/// Relative residual accepted from the dense solve.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-11;

/// Dense column-major system matrix of size 2n × 2n; unknown 2j + c is
/// component c of the density at node j.
#[derive(Debug, Clone)]
pub struct SystemMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl SystemMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim + row]
    }

    pub fn as_mat(&self) -> MatRef<'_, Complex64> {
        MatRef::from_column_major_slice(&self.data, self.dim, self.dim)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.is_finite())
    }
}

/// Kress weights R(d) for node differences d = 0..n-1 (n = 2m nodes), shifted
/// by `offset` nodes: the weight of node j for the target parameter
/// t_j + (d + offset) 2π/n.
pub fn kress_weights(n: usize, offset: f64) -> Vec<f64> {
    let m = n / 2;
    let mf = m as f64;
    (0..n)
        .map(|d| {
            let arg = PI * (d as f64 + offset) / mf;
            let mut s = 0.0;
            for k in 1..m {
                s += (k as f64 * arg).cos() / k as f64;
            }
            -(2.0 * PI / mf) * s - (PI / (mf * mf)) * (mf * arg).cos()
        })
        .collect()
}

/// Kernel blocks k1 (log coefficient) and k2 (smooth remainder) for target
/// parameter difference `dtau` (in [0, 2π) scale) between distinct points.
#[allow(clippy::too_many_arguments)]
fn split_kernel(
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    eta: Complex64,
    x: Vec2,
    y: Vec2,
    n_y: Vec2,
    jac: f64,
    dtau: f64,
) -> (Mat2C, Mat2C) {
    let pk = pair_kernels(medium, params, x, y, n_y);
    let ieta = Complex64::new(0.0, 1.0) * eta;
    let k = (pk.pi2 - pk.gamma * ieta) * (2.0 * jac);
    let k1 = (pk.pi2_log - pk.gamma_log * ieta) * jac;
    let s = (0.5 * dtau).sin();
    let lg = (4.0 * s * s).ln();
    (k1, k - k1 * lg)
}

/// Assemble the 2n × 2n Nyström matrix. `params` must be the pseudo-stress
/// pair: the diagonal limit of the double-layer kernel is only finite and
/// known in closed form for that choice.
pub fn assemble_system(
    mesh: &BoundaryMesh,
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    eta: Complex64,
) -> Result<SystemMatrix> {
    if !(eta.re > 0.0) {
        return Err(Error::Assembly(format!("Re(eta) must be positive, got {eta}")));
    }
    let pseudo = GeneralizedStressParams::pseudo(medium);
    if (params.mu_t() - pseudo.mu_t()).abs() > 1e-12 * pseudo.mu_t().abs().max(1.0) {
        return Err(Error::Assembly(
            "the double-layer diagonal requires the pseudo-stress parameters".into(),
        ));
    }
    let n = mesh.len();
    if n < 16 || n % 2 != 0 {
        return Err(Error::Assembly(format!("node count must be even and >= 16, got {n}")));
    }
    let dim = 2 * n;
    let weights = kress_weights(n, 0.0);
    let h = 2.0 * PI / n as f64;
    let ieta = Complex64::new(0.0, 1.0) * eta;
    let l0 = gamma_log_at_zero(medium);
    let (ma, mb) = gamma_smooth_at_zero(medium);
    let param_scale = mesh.period / (2.0 * PI);

    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    data.par_chunks_mut(2 * dim).enumerate().for_each(|(j, cols)| {
        let nj = &mesh.nodes[j];
        let jac = nj.jacobian * param_scale;
        for i in 0..n {
            let block = if i == j {
                let k1 = Mat2C::identity() * (-ieta * (l0 * jac));
                let smooth = Mat2C::identity() * (ma + 0.5 * l0 * (jac * jac).ln())
                    + Mat2C::outer(nj.tangent, nj.tangent) * mb;
                let dl = double_layer_diagonal(medium, nj.curvature, nj.normal, nj.tangent);
                let k2 = (dl - smooth * ieta) * (2.0 * jac);
                Mat2C::identity() + k1 * weights[0] + k2 * h
            } else {
                let d = if i > j { i - j } else { n + i - j };
                let (k1, k2) = split_kernel(
                    medium,
                    params,
                    eta,
                    mesh.nodes[i].point,
                    nj.point,
                    nj.normal,
                    jac,
                    h * d as f64,
                );
                k1 * weights[d] + k2 * h
            };
            cols[2 * i] = block.a11;
            cols[2 * i + 1] = block.a21;
            cols[dim + 2 * i] = block.a12;
            cols[dim + 2 * i + 1] = block.a22;
        }
    });
    let m = SystemMatrix { dim, data };
    if !m.is_finite() {
        return Err(Error::Assembly("non-finite matrix entry".into()));
    }
    Ok(m)
}

/// LU factorization kept together with the matrix for residual checks.
pub struct Factorization {
    matrix: SystemMatrix,
    lu: PartialPivLu<Complex64>,
}

impl Factorization {
    pub fn new(matrix: SystemMatrix) -> Self {
        // Sequential factorization: bit-identical results for any thread count.
        faer::set_global_parallelism(faer::Par::Seq);
        let lu = matrix.as_mat().partial_piv_lu();
        Factorization { matrix, lu }
    }

    pub fn matrix(&self) -> &SystemMatrix {
        &self.matrix
    }

    /// Solve for every column of `rhs`, verifying the relative residual of each.
    pub fn solve(&self, rhs: &Mat<Complex64>) -> Result<Mat<Complex64>> {
        self.solve_labeled(rhs, |c| format!("right-hand side {c}"))
    }

    /// As [`Factorization::solve`], naming a failing column with `label`.
    pub fn solve_labeled(&self, rhs: &Mat<Complex64>, label: impl Fn(usize) -> String) -> Result<Mat<Complex64>> {
        faer::set_global_parallelism(faer::Par::Seq);
        let x = self.lu.solve(rhs);
        let r = self.matrix.as_mat() * &x - rhs;
        let a_max = self.matrix.data.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        for c in 0..rhs.ncols() {
            let col_norm = |m: &Mat<Complex64>| (0..m.nrows()).map(|i| m[(i, c)].norm_sqr()).sum::<f64>().sqrt();
            let (rn, bn, xn) = (col_norm(&r), col_norm(rhs), col_norm(&x));
            let ok = if bn == 0.0 { xn == 0.0 } else { rn <= SOLVE_RESIDUAL_TOL * bn };
            if !ok || !xn.is_finite() {
                return Err(Error::Solve(format!(
                    "{}: relative residual {:.3e} (condition estimate >= {:.3e})",
                    label(c),
                    rn / bn,
                    a_max * xn / bn
                )));
            }
        }
        Ok(x)
    }
}

/// Layer density at the mesh nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySolution {
    pub values: Vec<Vec2C>,
}

impl DensitySolution {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn from_column(m: &Mat<Complex64>, c: usize) -> Self {
        let n = m.nrows() / 2;
        DensitySolution {
            values: (0..n).map(|j| Vec2C::new(m[(2 * j, c)], m[(2 * j + 1, c)])).collect(),
        }
    }

    pub fn to_column(&self) -> Mat<Complex64> {
        Mat::from_fn(2 * self.values.len(), 1, |r, _| self.values[r / 2].component(r % 2 + 1))
    }
}

/// Pack per-node right-hand sides into a 2n × m matrix.
pub fn rhs_matrix(rhs_list: &[Vec<Vec2C>]) -> Result<Mat<Complex64>> {
    let n = rhs_list.first().map_or(0, Vec::len);
    if rhs_list.iter().any(|r| r.len() != n) {
        return Err(Error::Solve("right-hand sides have different lengths".into()));
    }
    Ok(Mat::from_fn(2 * n, rhs_list.len(), |r, c| rhs_list[c][r / 2].component(r % 2 + 1)))
}

/// Factor once and solve for every right-hand side.
pub fn solve_densities(matrix: &SystemMatrix, rhs_list: &[Vec<Vec2C>]) -> Result<Vec<DensitySolution>> {
    let b = rhs_matrix(rhs_list)?;
    if b.nrows() != matrix.dim() {
        return Err(Error::Solve(format!(
            "right-hand side length {} does not match system size {}",
            b.nrows(),
            matrix.dim()
        )));
    }
    let x = Factorization::new(matrix.clone()).solve(&b)?;
    Ok((0..x.ncols()).map(|c| DensitySolution::from_column(&x, c)).collect())
}

/// Combined-layer potential `u(x) = Σ_j [Π⁽²⁾(x,y_j) - i eta Γ(x,y_j)] φ_j w_j`
/// as a (2P × 2n) matrix acting on stacked densities.
#[derive(Debug, Clone, Copy)]
pub struct LayerPotential<'a> {
    pub mesh: &'a BoundaryMesh,
    pub medium: &'a ElasticMedium,
    pub params: &'a GeneralizedStressParams,
    pub eta: Complex64,
}

impl<'a> LayerPotential<'a> {
    /// Reject points on or below the surface or closer than one mesh spacing.
    pub fn check_point(&self, x: Vec2) -> Result<()> {
        let spacing = self.mesh.max_spacing();
        if !self.mesh.curve.is_above(x) || self.mesh.distance_to_nodes(x) < spacing {
            return Err(Error::TooClose(format!(
                "point ({}, {}) must lie above the surface and at least {spacing:.3e} from it",
                x.x1, x.x2
            )));
        }
        Ok(())
    }

    pub fn matrix(&self, points: &[Vec2]) -> Result<Mat<Complex64>> {
        for &x in points {
            self.check_point(x)?;
        }
        let rows = 2 * points.len();
        let n = self.mesh.len();
        let ieta = Complex64::new(0.0, 1.0) * self.eta;
        let mut data = vec![Complex64::new(0.0, 0.0); rows * 2 * n];
        data.par_chunks_mut(2 * rows).enumerate().for_each(|(j, cols)| {
            let node = &self.mesh.nodes[j];
            let w = self.mesh.weight(j);
            for (p, &x) in points.iter().enumerate() {
                let (g, pi) = gamma_pi2(self.medium, self.params, x, node.point, node.normal);
                let b = (pi - g * ieta) * w;
                cols[2 * p] = b.a11;
                cols[2 * p + 1] = b.a21;
                cols[rows + 2 * p] = b.a12;
                cols[rows + 2 * p + 1] = b.a22;
            }
        });
        Ok(Mat::from_fn(rows, 2 * n, |r, c| data[c * rows + r]))
    }

    /// Displacement at each point for each density column: result row 2p + c
    /// is component c at point p.
    pub fn displacement(&self, densities: &Mat<Complex64>, points: &[Vec2]) -> Result<Mat<Complex64>> {
        faer::set_global_parallelism(faer::Par::Seq);
        Ok(self.matrix(points)? * densities)
    }

    /// Generalized stress (with `data_params`) at each point for each density
    /// column, from a 4th-order central-difference Jacobian with step `step`.
    pub fn stress(
        &self,
        densities: &Mat<Complex64>,
        points: &[Vec2],
        normal: Vec2,
        data_params: &GeneralizedStressParams,
        step: f64,
    ) -> Result<Mat<Complex64>> {
        if (normal.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("stress normal must be a unit vector".into()));
        }
        let ncols = densities.ncols();
        // grad[c] holds ∂_c u for all points, same layout as displacement.
        let mut grad = [Mat::<Complex64>::zeros(2 * points.len(), ncols), Mat::zeros(2 * points.len(), ncols)];
        for (c, dir) in [Vec2::E1, Vec2::E2].into_iter().enumerate() {
            for (s, coef) in [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)] {
                let shifted: Vec<Vec2> = points.iter().map(|&x| x + dir.scale(s * step)).collect();
                let u = self.displacement(densities, &shifted)?;
                grad[c] += u * faer::Scale(Complex64::new(coef / (12.0 * step), 0.0));
            }
        }
        let mu = self.medium.mu();
        let mut out = Mat::<Complex64>::zeros(2 * points.len(), ncols);
        for p in 0..points.len() {
            for col in 0..ncols {
                let jac = [
                    [grad[0][(2 * p, col)], grad[1][(2 * p, col)]],
                    [grad[0][(2 * p + 1, col)], grad[1][(2 * p + 1, col)]],
                ];
                let s = stress_unchecked(data_params, mu, &jac, normal);
                out[(2 * p, col)] = s.x1;
                out[(2 * p + 1, col)] = s.x2;
            }
        }
        Ok(out)
    }
}

/// Boundary value of the combined layer at the parameter midpoints
/// t_i + h/2 for the given node indices: `½ (φ + Kφ)` with φ interpolated
/// trigonometrically and K integrated with half-shifted Kress weights.
pub fn trace_at_midpoints(
    mesh: &BoundaryMesh,
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    eta: Complex64,
    density: &DensitySolution,
    indices: &[usize],
) -> Result<Vec<Vec2C>> {
    let n = mesh.len();
    if density.len() != n {
        return Err(Error::Domain(format!("density has {} nodes, mesh has {n}", density.len())));
    }
    let h = 2.0 * PI / n as f64;
    let weights = kress_weights(n, 0.5);
    // trigonometric interpolation weights for offsets d + 1/2
    let interp: Vec<f64> = (0..n)
        .map(|d| {
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            sign / ((0.5 * (d as f64 + 0.5) * h).tan() * n as f64)
        })
        .collect();
    let scale = mesh.period / (2.0 * PI);
    Ok(indices
        .par_iter()
        .map(|&i| {
            let mid = mesh.node_at(mesh.nodes[i].param + 0.5 * mesh.spacing);
            let mut phi = Vec2C::ZERO;
            let mut k_phi = Vec2C::ZERO;
            for j in 0..n {
                let d = (i + n - j) % n;
                let node = &mesh.nodes[j];
                phi = phi + density.values[j] * interp[d];
                let (k1, k2) = split_kernel(
                    medium,
                    params,
                    eta,
                    mid.point,
                    node.point,
                    node.normal,
                    node.jacobian * scale,
                    h * (d as f64 + 0.5),
                );
                k_phi = k_phi + (k1 * weights[d] + k2 * h).mul_vec(density.values[j]);
            }
            (phi + k_phi) * 0.5
        })
        .collect())
}

/// Default finite-difference step for receiver stresses.
pub fn stress_step(medium: &ElasticMedium) -> f64 {
    1e-4 / medium.ks()
}

/// u^s at one point.
pub fn evaluate_scattered(
    density: &DensitySolution,
    mesh: &BoundaryMesh,
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    eta: Complex64,
    x: Vec2,
) -> Result<Vec2C> {
    let lp = LayerPotential { mesh, medium, params, eta };
    let u = lp.displacement(&density.to_column(), &[x])?;
    Ok(Vec2C::new(u[(0, 0)], u[(1, 0)]))
}

/// Generalized stress of u^s at one point. The stress coefficients default to
/// the layer's own; pass other data coefficients through [`LayerPotential::stress`].
pub fn evaluate_scattered_stress(
    density: &DensitySolution,
    mesh: &BoundaryMesh,
    medium: &ElasticMedium,
    params: &GeneralizedStressParams,
    eta: Complex64,
    x: Vec2,
    normal: Vec2,
) -> Result<Vec2C> {
    let lp = LayerPotential { mesh, medium, params, eta };
    let s = lp.stress(&density.to_column(), &[x], normal, params, stress_step(medium))?;
    Ok(Vec2C::new(s[(0, 0)], s[(1, 0)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::green::pair_kernels;

    #[test]
    fn kress_weights_integrate_log_kernel() {
        // ∫ ln(4 sin²(s/2)) cos(k s) ds = -2π/k for k >= 1, 0 for k = 0
        let n = 32;
        let w = kress_weights(n, 0.0);
        for k in 0..(n / 2) {
            let q: f64 = (0..n)
                .map(|d| w[d] * (k as f64 * 2.0 * PI * d as f64 / n as f64).cos())
                .sum();
            let exact = if k == 0 { 0.0 } else { -2.0 * PI / k as f64 };
            assert!((q - exact).abs() < 1e-12, "k = {k}: {q}");
        }
        let w = kress_weights(n, 0.5);
        for k in 0..(n / 2) {
            let q: f64 = (0..n)
                .map(|d| w[d] * (k as f64 * 2.0 * PI * (d as f64 + 0.5) / n as f64).cos())
                .sum();
            let exact = if k == 0 { 0.0 } else { -2.0 * PI / k as f64 };
            assert!((q - exact).abs() < 1e-12, "offset, k = {k}: {q}");
        }
    }

    #[test]
    fn double_layer_diagonal_matches_limit_on_circle() {
        // Circle of radius rho traversed clockwise: outward normal = left normal,
        // curvature toward the normal = -1/rho.
        let m = ElasticMedium::new(1.0, 1.3, 7.0).unwrap();
        let p = GeneralizedStressParams::pseudo(&m);
        let rho = 0.8;
        let at = |t: f64| Vec2::new(rho * t.cos(), -rho * t.sin());
        let t0: f64 = 0.4;
        let normal = Vec2::new(t0.cos(), -t0.sin());
        let tangent = Vec2::new(-t0.sin(), -t0.cos());
        assert!((tangent.perp() - normal).norm() < 1e-15);
        let expected = double_layer_diagonal(&m, -1.0 / rho, normal, tangent);
        // one-sided error is odd in d and O(d ln d), so the symmetric mean is sharp
        let side = |d: f64| {
            let s = t0 + d;
            pair_kernels(&m, &p, at(t0), at(s), Vec2::new(s.cos(), -s.sin()))
        };
        let scale = expected.max_abs();
        for d in [1e-4f64, -1e-4] {
            let pk = side(d);
            assert!((pk.pi2 - expected).max_abs() < 5e-3 * scale, "d = {d}: {:?} vs {:?}", pk.pi2, expected);
            // log coefficient of the double-layer kernel vanishes at coincidence
            assert!(pk.pi2_log.max_abs() < 1e-2 * scale);
        }
        let mean = (side(1e-4).pi2 + side(-1e-4).pi2) * 0.5;
        assert!((mean - expected).max_abs() < 1e-4 * scale, "{mean:?} vs {expected:?}");
    }
}
