//! Shared fixtures for the integration suites: stock weights, engines at the
//! standard coverages, and mesh-independent radial oracles.

#![allow(dead_code)]

use num_complex::Complex64;

use diskgeo::geometry::{radial_quadrature, GeoConfig, GeodesicEngine, MeshParams};
use diskgeo::weight::{WeightModel, WeightSpec, DEFAULT_R_MAX};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn exp11() -> WeightModel {
    WeightModel::build(WeightSpec::ExpPower { a: 1.0, b: 1.0 }, DEFAULT_R_MAX).unwrap()
}

pub fn logproxy() -> WeightModel {
    WeightModel::build(WeightSpec::LogProxy { alpha: 0.0 }, DEFAULT_R_MAX).unwrap()
}

pub fn engine_for(model: WeightModel, coverage: f64) -> GeodesicEngine {
    let mut cfg = GeoConfig::for_model(&model);
    cfg.params = MeshParams::for_model(&model).with_coverage(coverage);
    GeodesicEngine::new(model, cfg)
}

/// Independent 1-D oracle for radial geodesics: composite quadrature of the
/// radial density, no mesh involved.
pub fn radial_tau_oracle(model: &WeightModel, r0: f64, r1: f64) -> f64 {
    radial_quadrature(|t| 1.0 / model.tau(t), r0, r1, 512)
}

pub fn radial_phi_oracle(model: &WeightModel, r0: f64, r1: f64) -> f64 {
    radial_quadrature(|t| model.dphi(t), r0, r1, 512)
}

/// Seeded points in the disk of radius `r_hi` (sqrt-uniform in area).
pub fn seeded_disk_points(seed: u64, n: usize, r_hi: f64) -> Vec<Complex64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r = r_hi * rng.gen::<f64>().sqrt();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(r, theta)
        })
        .collect()
}
