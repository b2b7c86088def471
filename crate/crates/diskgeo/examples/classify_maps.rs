//! Bounded / compact classification of the example symbols, with the
//! angular-derivative cross-check.

use diskgeo::criteria::{boundedness, compactness, CriteriaConfig};
use diskgeo::report::VerdictStatus;
use diskgeo::selfmap::{angular_derivative, check_selfmap, MapExpr, StolzSchedule};
use diskgeo::weight::{WeightModel, WeightSpec, DEFAULT_R_MAX};

fn main() {
    let model = WeightModel::build(WeightSpec::ExpPower { a: 1.0, b: 1.0 }, DEFAULT_R_MAX).unwrap();
    let cfg = CriteriaConfig::default();
    let maps = [
        "id",
        "scale:0.5",
        "affine:0.5,0.5",
        "moebius:0.5",
        "mono:2",
        "perturb:c=0.05,k=3",
        "comp:(scale:0.5)(mono:2)",
    ];
    println!(
        "{:<28} {:<10} {:<12} {:<12} {:<14} beta at angle 0",
        "map", "self-map", "bounded", "compact", "classification"
    );
    for name in maps {
        let map = MapExpr::parse(name).unwrap();
        let sm = check_selfmap(&map, 100_000, 7, model.r_max());
        let b = boundedness(&model, &map, &cfg).unwrap();
        let k = compactness(&model, &map, &cfg).unwrap();
        let beta = angular_derivative(&map, &StolzSchedule::for_angle(0.0, 2.0, 5, model.r_max()));
        let class = match (b.status, k.status) {
            (VerdictStatus::Violated, _) => "unbounded",
            (_, VerdictStatus::Satisfied) => "compact",
            (VerdictStatus::Satisfied, VerdictStatus::Violated) => "bounded, not cpt",
            _ => "inconclusive",
        };
        println!(
            "{:<28} {:<10} {:<12} {:<12} {:<14} {:?} ({:.3})",
            name,
            sm.passes,
            format!("{:?}", b.status),
            format!("{:?}", k.status),
            class,
            beta.class,
            beta.tail_estimate
        );
    }
}
