//! Self-map layer invariants that couple into the criteria: the Schwarz–Pick
//! usage form and the angular-derivative consequence of compactness.

mod common;

use common::{c, exp11, seeded_disk_points};
use diskgeo::criteria::{compactness, CriteriaConfig};
use diskgeo::report::VerdictStatus;
use diskgeo::selfmap::{angular_derivative, BetaClass, MapExpr, StolzSchedule};

/// Sampled sup of `(1-|z|)/(1-|φ(z)|)`; finite for any self-map and the form
/// in which the Schwarz–Pick bound enters the vanishing-measure arguments.
fn schwarz_pick_sup(map: &MapExpr, n: usize, r_max: f64) -> f64 {
    let mut sup = 0.0f64;
    for z in seeded_disk_points(13, n, r_max) {
        let w = map.eval(z);
        sup = sup.max((1.0 - z.norm()) / (1.0 - w.norm()));
    }
    sup
}

#[test]
fn schwarz_pick_usage_form_is_finite_and_stable() {
    let r_max = exp11().r_max();
    for name in [
        "id",
        "scale:0.5",
        "mono:2",
        "perturb:c=0.05,k=3",
        "moebius:0.5",
    ] {
        let map = MapExpr::parse(name).unwrap();
        let coarse = schwarz_pick_sup(&map, 20_000, r_max);
        let dense = schwarz_pick_sup(&map, 80_000, r_max);
        assert!(coarse.is_finite() && dense.is_finite(), "{name}");
        assert!(
            dense / coarse < 3.0,
            "{name}: sup moved from {coarse} to {dense}"
        );
    }
}

#[test]
fn compact_symbols_have_angular_derivative_above_one_everywhere() {
    let model = exp11();
    let cfg = CriteriaConfig::default();
    for name in ["scale:0.5", "comp:(scale:0.5)(mono:2)", "affine:0.3,0.2"] {
        let map = MapExpr::parse(name).unwrap();
        let verdict = compactness(&model, &map, &cfg).unwrap();
        if verdict.status != VerdictStatus::Satisfied {
            continue;
        }
        for j in 0..64 {
            let angle = std::f64::consts::TAU * j as f64 / 64.0;
            let beta = angular_derivative(
                &map,
                &StolzSchedule::for_angle(angle, 2.0, 5, model.r_max()),
            );
            assert!(
                !matches!(beta.class, BetaClass::LessThanOne),
                "{name}: β < 1 at angle {angle} despite compactness"
            );
            if matches!(beta.class, BetaClass::One) {
                assert!(
                    beta.tail_estimate >= 1.0 + 1e-3,
                    "{name}: β ≈ 1 with tail {} at angle {angle}",
                    beta.tail_estimate
                );
            }
        }
    }
    // sanity: the suite above must have exercised at least one compact symbol
    let scale = MapExpr::Scale(c(0.5, 0.0));
    assert_eq!(
        compactness(&model, &scale, &cfg).unwrap().status,
        VerdictStatus::Satisfied
    );
}
