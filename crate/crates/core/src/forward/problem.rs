use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;

use super::mesh::{auto_node_count, build_mesh, BIEConfig, BoundaryMesh, DEFAULT_POINTS_PER_WAVELENGTH};
use super::solver::{assemble_system, stress_step, Factorization, LayerPotential};
use super::surface::SurfaceProfile;
use crate::error::{Error, Result};
use crate::kernels::{gamma, ElasticMedium, GeneralizedStressParams, Vec2, Vec2C};

/// Assembled and factored exterior Dirichlet problem for one surface.
pub struct ForwardSolver {
    mesh: BoundaryMesh,
    medium: ElasticMedium,
    layer_params: GeneralizedStressParams,
    eta: Complex64,
    factorization: Factorization,
}

impl ForwardSolver {
    /// Build the mesh (resolving an automatic node count) and factor the system.
    pub fn new(surface: &SurfaceProfile, medium: &ElasticMedium, config: &BIEConfig) -> Result<Self> {
        config.validate()?;
        let mut config = *config;
        if config.node_count == 0 {
            config.node_count = auto_node_count(surface, &config, medium, DEFAULT_POINTS_PER_WAVELENGTH)?;
        }
        let mesh = build_mesh(surface, &config)?;
        let layer_params = GeneralizedStressParams::pseudo(medium);
        let matrix = assemble_system(&mesh, medium, &layer_params, config.eta)?;
        Ok(ForwardSolver {
            mesh,
            medium: *medium,
            layer_params,
            eta: config.eta,
            factorization: Factorization::new(matrix),
        })
    }

    pub fn mesh(&self) -> &BoundaryMesh {
        &self.mesh
    }

    pub fn node_count(&self) -> usize {
        self.mesh.len()
    }

    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    pub fn potential(&self) -> LayerPotential<'_> {
        LayerPotential { mesh: &self.mesh, medium: &self.medium, params: &self.layer_params, eta: self.eta }
    }

    /// Densities for boundary data `g`, one column per data set; `g` is given
    /// as a function of (column, node point).
    pub fn solve_dirichlet<F>(&self, columns: usize, g: F) -> Result<Mat<Complex64>>
    where
        F: Fn(usize, Vec2) -> Result<Vec2C> + Sync,
    {
        self.solve_dirichlet_labeled(columns, g, |c| format!("right-hand side {c}"))
    }

    fn solve_dirichlet_labeled<F>(&self, columns: usize, g: F, label: impl Fn(usize) -> String) -> Result<Mat<Complex64>>
    where
        F: Fn(usize, Vec2) -> Result<Vec2C> + Sync,
    {
        let n = self.mesh.len();
        let cols: Vec<Vec<Vec2C>> = (0..columns)
            .into_par_iter()
            .map(|c| self.mesh.nodes.iter().map(|node| g(c, node.point)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        // the combined layer has jump 1/2: (I + D - i eta S) phi = 2 g
        let rhs = Mat::from_fn(2 * n, columns, |r, c| cols[c][r / 2].component(r % 2 + 1) * 2.0);
        self.factorization.solve_labeled(&rhs, label)
    }

    /// Densities for point sources: column 2k + (j - 1) is source k with
    /// polarization e_j.
    pub fn solve_point_sources(&self, sources: &[Vec2]) -> Result<Mat<Complex64>> {
        self.solve_dirichlet_labeled(
            2 * sources.len(),
            |c, x| Ok(-gamma(&self.medium, x, sources[c / 2])?.col(c % 2 + 1)),
            |c| format!("source {}, polarization {}", c / 2, c % 2 + 1),
        )
    }

    pub fn displacement(&self, densities: &Mat<Complex64>, points: &[Vec2]) -> Result<Mat<Complex64>> {
        self.potential().displacement(densities, points)
    }

    /// Generalized stress with coefficients `params` and normal `normal`.
    pub fn stress(
        &self,
        densities: &Mat<Complex64>,
        points: &[Vec2],
        normal: Vec2,
        params: &GeneralizedStressParams,
    ) -> Result<Mat<Complex64>> {
        self.potential().stress(densities, points, normal, params, stress_step(&self.medium))
    }

    /// Smallest distance from `x` to the mesh nodes, with an error if `x`
    /// is not above the surface.
    pub fn clearance(&self, x: Vec2) -> Result<f64> {
        if !self.mesh.curve.is_above(x) {
            return Err(Error::TooClose(format!("point ({}, {}) is not above the surface", x.x1, x.x2)));
        }
        Ok(self.mesh.distance_to_nodes(x))
    }
}
