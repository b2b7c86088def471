//! Prints calibration constants and mesh sizes for the stock weights, at a
//! few coverage radii. Useful for choosing level budgets.

use diskgeo::geometry::{GeoConfig, GeodesicEngine, MeshParams};
use diskgeo::weight::{WeightModel, WeightSpec, DEFAULT_R_MAX};

fn main() {
    for spec in [
        WeightSpec::LogProxy { alpha: 0.0 },
        WeightSpec::ExpPower { a: 1.0, b: 1.0 },
    ] {
        let model = WeightModel::build(spec.clone(), DEFAULT_R_MAX).unwrap();
        println!(
            "{}: c1 = {:.4}, c2 = {:.4}, m_tau = {:.5}, r0 = {:?}",
            spec.canonical(),
            model.c1(),
            model.c2(),
            model.m_tau(),
            model.r0()
        );
        for coverage in [0.75, 0.875, 0.92, 0.9375, 0.953125] {
            let mut cfg = GeoConfig::for_model(&model);
            cfg.params = MeshParams::for_model(&model).with_coverage(coverage);
            cfg.use_cache = false;
            let engine = GeodesicEngine::new(model.clone(), cfg);
            let t0 = std::time::Instant::now();
            match engine.mesh(0) {
                Ok(mesh) => {
                    println!(
                        "  coverage {coverage}: L0 nodes {} edges {} rings {} ({:.2?})",
                        mesh.n_nodes(),
                        mesh.n_edges_directed() / 2,
                        mesh.n_rings(),
                        t0.elapsed()
                    );
                    let t1 = std::time::Instant::now();
                    match engine.mesh(1) {
                        Ok(m1) => {
                            println!("      L1 nodes {} ({:.2?})", m1.n_nodes(), t1.elapsed())
                        }
                        Err(e) => println!("      L1: {e}"),
                    }
                }
                Err(e) => println!("  coverage {coverage}: L0 {e}"),
            }
        }
    }
}
