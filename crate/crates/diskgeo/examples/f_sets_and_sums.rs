//! Boundary contact sets `F(φ)` and the finite-sum decomposition criterion.

use diskgeo::criteria::{f_set, finite_sum_difference, CriteriaConfig, GammaMode};
use diskgeo::selfmap::MapExpr;
use diskgeo::weight::{WeightModel, WeightSpec, DEFAULT_R_MAX};

fn main() {
    let model = WeightModel::build(WeightSpec::ExpPower { a: 1.0, b: 1.0 }, DEFAULT_R_MAX).unwrap();
    let cfg = CriteriaConfig::default();

    for name in [
        "scale:0.5",
        "id",
        "affine:0.5,0.5",
        "mono:2",
        "perturb:c=0.05,k=3",
    ] {
        let map = MapExpr::parse(name).unwrap();
        let f = f_set(&model, &map, &cfg).unwrap();
        let max_stat = f.statistics.iter().map(|s| s.1).fold(0.0f64, f64::max);
        println!(
            "F({name}): {} of {} angles (max statistic {max_stat:.3}, threshold {})",
            f.angles.len(),
            f.statistics.len(),
            f.eps_f
        );
        if f.angles.len() <= 8 && !f.angles.is_empty() {
            println!("    angles: {:?}", f.angles);
        }
    }

    println!("\nfinite-sum checks (phi vs parts):");
    let cases: [(&str, Vec<&str>); 3] = [
        ("id", vec!["id"]),
        ("id", vec!["mono:2"]),
        ("id", vec!["perturb:c=0.05,k=3"]),
    ];
    for (phi_name, part_names) in cases {
        let phi = MapExpr::parse(phi_name).unwrap();
        let parts: Vec<MapExpr> = part_names
            .iter()
            .map(|p| MapExpr::parse(p).unwrap())
            .collect();
        match finite_sum_difference(&model, None, &phi, &parts, &cfg, GammaMode::Surrogate) {
            Ok(v) => println!(
                "    {phi_name} vs {part_names:?}: {:?} — {}",
                v.status, v.reason
            ),
            Err(e) => println!("    {phi_name} vs {part_names:?}: hypothesis rejected — {e}"),
        }
    }
}
