//! Metric balls and their Euclidean sandwich: `B_τ(z, r)` sits inside
//! `D(z, 2rτ(z))`, which sits inside `B_τ(z, 4r)`.

use diskgeo::geometry::{GeoConfig, GeodesicEngine, MeshParams};
use diskgeo::weight::{WeightModel, WeightSpec, DEFAULT_R_MAX};
use num_complex::Complex64;

fn main() {
    let model = WeightModel::build(WeightSpec::ExpPower { a: 1.0, b: 1.0 }, DEFAULT_R_MAX).unwrap();
    let mut cfg = GeoConfig::for_model(&model);
    cfg.params = MeshParams::for_model(&model).with_coverage(0.875);
    let engine = GeodesicEngine::new(model.clone(), cfg);
    let m_tau = model.m_tau();
    println!(
        "m_tau = {m_tau:.5}; admissible ball radii stay below m_tau/2 = {:.5}\n",
        m_tau / 2.0
    );

    let level = 1;
    for (z, r) in [
        (Complex64::new(0.5, 0.0), m_tau / 4.0),
        (Complex64::new(0.0, 0.8), m_tau / 4.0),
        (Complex64::new(-0.6, 0.35), m_tau / 3.0),
    ] {
        let ball = engine.ball_tau(level, z, r).unwrap();
        let report = engine.check_inclusions(level, z, r, 1.0, 0.01).unwrap();
        println!(
            "center ({:>5.2}, {:>5.2})  r = {r:.4}: ball {} nodes, euclidean disk {} nodes",
            z.re,
            z.im,
            ball.nodes.len(),
            report.disk_size
        );
        println!(
            "    B ⊂ D(2rτ) violations: {}   D ⊂ B(4r(1+tol)) violations: {}   empirical R' = {:.3}",
            report.violations_first, report.violations_second, report.empirical_r_prime
        );
    }

    // growing radii produce nested balls
    let z = Complex64::new(0.3, 0.1);
    print!("\nball sizes at center (0.3, 0.1): ");
    for k in 1..=5 {
        let r = k as f64 * 0.05;
        let ball = engine.ball_tau(level, z, r).unwrap();
        print!("r={r:.2}:{} ", ball.nodes.len());
    }
    println!();
}
