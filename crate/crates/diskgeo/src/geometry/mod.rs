//! Metric layer: nested polar meshes, shortest-path distances `d_τ` and
//! `d_φ`, the bounded metric `ρ_τ`, its explicit surrogate, metric balls and
//! their Euclidean inclusions.
//!
//! The `d_φ` density is the radial derivative `φ'(|γ(t)|)` evaluated at the
//! path point (so radial geodesics telescope to potential differences);
//! readers comparing against the complex-gradient convention `|∂φ|` should
//! rescale by the factor 2 between the two.

mod cache;
mod dijkstra;
mod engine;
mod mesh;

pub use cache::{cache_dir, cache_key};
pub use engine::{
    scalar_subadditivity_violations, BallResult, DistanceResult, GeoConfig, GeodesicEngine,
    InclusionReport, MetricReport, RhoValue,
};
pub use mesh::{radial_quadrature, segment_lengths, DiskMesh, MeshParams, Metric};

use num_complex::Complex64;

use crate::weight::WeightModel;
use crate::Result;

/// Builds the mesh at `level` with default parameters for the model (building
/// the chain of coarser levels it nests into).
pub fn build_mesh(model: &WeightModel, level: u32) -> Result<DiskMesh> {
    let params = MeshParams::for_model(model);
    let mut mesh = DiskMesh::build_base(model, params)?;
    for _ in 0..level {
        mesh = mesh.refine(model)?;
    }
    Ok(mesh)
}

/// The explicit mesh-free stand-in for `ρ_τ`:
/// `f(z, w) = 1 - exp(-|z - w| / min(τ(z), τ(w)))`.
///
/// Symmetric, zero iff `z = w`, always in `[0, 1)`.
pub fn surrogate_f(model: &WeightModel, z: Complex64, w: Complex64) -> f64 {
    let sep = (z - w).norm();
    if sep == 0.0 {
        return 0.0;
    }
    let t = model.tau(z.norm()).min(model.tau(w.norm()));
    if t <= 0.0 {
        return 1.0 - 1e-16;
    }
    (1.0 - (-sep / t).exp()).min(1.0 - 1e-16)
}
