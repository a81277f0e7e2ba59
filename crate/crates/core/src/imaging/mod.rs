//! Direct imaging of the surface from near-field Cauchy data.

pub mod grid;
pub mod indicator;

pub use grid::{extract_ridge, ImageGrid, ImageProvenance, ImagingConfig, SamplingGrid};
pub use indicator::{compute_image, compute_image_serial, indicator_at, ImagingPlan};
