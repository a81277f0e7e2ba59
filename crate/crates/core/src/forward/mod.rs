//! Synthetic Cauchy data from a Nyström solver on the truncated surface.

pub mod dataset;
pub mod geometry;
pub mod incident;
pub mod mesh;
pub mod problem;
pub mod solver;
pub mod surface;

pub use dataset::{add_noise, generate_dataset, CauchyDataSet, DatasetMeta, NoiseInfo};
pub use geometry::MeasurementGeometry;
pub use incident::{incident_field, incident_stress};
pub use mesh::{build_mesh, BIEConfig, BoundaryMesh, ClosedSurface, MeshNode};
pub use problem::ForwardSolver;
pub use solver::{
    assemble_system, evaluate_scattered, evaluate_scattered_stress, solve_densities, DensitySolution, LayerPotential,
    SystemMatrix,
};
pub use surface::{SineTerm, SurfaceProfile};
