//! The pointwise-inequality harness: submean bounds, difference bounds,
//! potential stability, separation, and exponential decay of `e^{-d_τ}`.

use diskgeo::geometry::{GeoConfig, GeodesicEngine, MeshParams};
use diskgeo::verify::{
    deriv_submean_check, difference_bound_check, disk_integral, exp_decay_check, impot_check,
    separation_check, submean_check, TestFunction,
};
use diskgeo::weight::{WeightModel, WeightSpec, DEFAULT_R_MAX};
use num_complex::Complex64;

fn main() {
    let model = WeightModel::build(WeightSpec::ExpPower { a: 1.0, b: 1.0 }, DEFAULT_R_MAX).unwrap();
    let delta = model.m_tau() / 2.0;
    let seed = 7;

    // quadrature sanity first: the rule the integral checks ride on
    let (area, _) = disk_integral(&model, |_| 1.0, Complex64::new(0.3, 0.1), 0.05);
    println!("disk quadrature: normalized area of a 0.05-disk = {area:.8e} (oracle 2.5e-3)\n");

    let f5 = TestFunction::Monomial(5);
    let fe = TestFunction::ExpLinear(Complex64::new(2.0, 0.0));
    for f in [&f5, &fe] {
        let r = submean_check(&model, f, 1.0, 2.0, delta, 400, seed).unwrap();
        println!(
            "{:<38} M = {:>9.3}  stability {:.3}  ({} points)",
            r.name, r.worst_ratio, r.stability, r.n_points
        );
    }
    let r = deriv_submean_check(&model, &TestFunction::Monomial(3), 2.0, delta, 400, seed).unwrap();
    println!(
        "{:<38} M = {:>9.3e}  stability {:.3}",
        r.name, r.worst_ratio, r.stability
    );
    let r = difference_bound_check(
        &model,
        None,
        &TestFunction::Monomial(4),
        2.0,
        delta,
        200,
        seed,
    )
    .unwrap();
    println!(
        "{:<38} M = {:>9.3}  stability {:.3}",
        r.name, r.worst_ratio, r.stability
    );
    let r = impot_check(&model, 1.0, 200, seed).unwrap();
    println!(
        "{:<38} sup potential drift = {:.4}  (radial monotonicity violations: {})",
        r.name, r.worst_ratio, r.n_violations
    );

    // mesh-coupled checks
    let mut cfg = GeoConfig::for_model(&model);
    cfg.params = MeshParams::for_model(&model).with_coverage(0.875);
    let engine = GeodesicEngine::new(model.clone(), cfg);
    let r = separation_check(&model, &engine, 0, delta, 300, seed).unwrap();
    println!(
        "{:<38} {} pairs kept, violations = {}",
        r.name, r.n_points, r.n_violations
    );
    let r = exp_decay_check(&model, &engine, 1, 1, 150, seed).unwrap();
    println!(
        "{:<38} C(1) = {:.4}  stability across levels {:.4}",
        r.name, r.worst_ratio, r.stability
    );
}
