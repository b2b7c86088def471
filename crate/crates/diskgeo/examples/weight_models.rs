//! Builds the stock weights, prints their derived quantities and calibration
//! constants, and runs the admissibility report.

use diskgeo::weight::{validate_class_w, WeightModel, WeightSpec, DEFAULT_R_MAX};

fn main() {
    for spec in [
        WeightSpec::ExpPower { a: 1.0, b: 1.0 },
        WeightSpec::ExpPower { a: 0.5, b: 2.0 },
        WeightSpec::LogProxy { alpha: 0.0 },
    ] {
        let model = WeightModel::build(spec.clone(), DEFAULT_R_MAX).unwrap();
        println!("== {}", spec.canonical());
        println!(
            "   c1 = {:.4}   c2 = {:.4}   m_tau = {:.5}   r0 = {:?}",
            model.c1(),
            model.c2(),
            model.m_tau(),
            model.r0()
        );
        println!("   r        phi(r)      phi'(r)     Δphi(r)      tau(r)      phi'·tau");
        for r in [0.3, 0.6, 0.9, 0.99, 0.999] {
            println!(
                "   {r:<8} {:<11.4e} {:<11.4e} {:<12.4e} {:<11.4e} {:<8.4}",
                model.phi(r),
                model.dphi(r),
                model.laplacian(r),
                model.tau(r),
                model.dphi(r) * model.tau(r),
            );
        }
        let report = validate_class_w(&model);
        if report.rejected_not_class_w {
            println!("   admissibility: rejected (standard-weight proxy, oracle use only)");
        } else {
            println!("   admissibility: all_pass = {}", report.all_pass);
            for c in &report.conditions {
                println!(
                    "     {:<36} {}",
                    c.name,
                    if c.pass { "pass" } else { "FAIL" }
                );
            }
        }
        println!();
    }
}
