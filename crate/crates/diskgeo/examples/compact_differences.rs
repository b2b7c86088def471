//! The compact-difference functional Γ on symbol pairs: a satisfied pair, a
//! violated pair, the identity-perturbation pair that cancels only at its
//! contact point, and the surrogate-vs-mesh comparison.

use diskgeo::criteria::{compact_difference, CriteriaConfig, GammaMode};
use diskgeo::geometry::{GeoConfig, GeodesicEngine, MeshParams};
use diskgeo::report::Trend;
use diskgeo::selfmap::MapExpr;
use diskgeo::weight::{WeightModel, WeightSpec, DEFAULT_R_MAX};

fn main() {
    let model = WeightModel::build(WeightSpec::ExpPower { a: 1.0, b: 1.0 }, DEFAULT_R_MAX).unwrap();
    let cfg = CriteriaConfig::default();

    let pairs = [
        ("scale:0.4", "comp:(scale:0.4)(mono:2)"),
        ("id", "mono:2"),
        ("id", "perturb:c=0.05,k=3"),
        ("perturb:c=0.03,k=3", "perturb:c=0.08,k=3"),
    ];
    for (a, b) in pairs {
        let phi = MapExpr::parse(a).unwrap();
        let psi = MapExpr::parse(b).unwrap();
        let report =
            compact_difference(&model, None, &phi, &psi, &cfg, GammaMode::Surrogate).unwrap();
        let zeros = report
            .verdict
            .profiles
            .iter()
            .filter(|p| p.trend == Trend::ToZero)
            .count();
        println!("({a}, {b})");
        println!(
            "    verdict {:?}: {}",
            report.verdict.status, report.verdict.reason
        );
        println!(
            "    Γ profiles vanishing: {zeros}/{}; d_phi proximity uniform: {}; \
             not-compact certificate: {}",
            report.verdict.profiles.len(),
            report.dphi_uniform,
            report.not_compact_difference
        );
        let contact = &report.verdict.profiles[0];
        println!(
            "    contact-angle profile: {:?}, tail {:.3e}\n",
            contact.trend, contact.tail_median
        );
    }

    // exact mode validates the surrogate where the mesh resolves the pair
    println!("surrogate vs mesh (reduced grid: 16 angles, radial ray):");
    let mut cheap = cfg;
    cheap.rays = 1;
    cheap.thresholds.n_angles = 16;
    let mut geo = GeoConfig::for_model(&model);
    geo.params = MeshParams::for_model(&model).with_coverage(0.953125);
    let engine = GeodesicEngine::new(model.clone(), geo);
    for (a, b) in [("id", "mono:2"), ("id", "perturb:c=0.05,k=3")] {
        let phi = MapExpr::parse(a).unwrap();
        let psi = MapExpr::parse(b).unwrap();
        let surrogate =
            compact_difference(&model, None, &phi, &psi, &cheap, GammaMode::Surrogate).unwrap();
        let exact = compact_difference(&model, Some(&engine), &phi, &psi, &cheap, GammaMode::Exact)
            .unwrap();
        println!(
            "    ({a}, {b}): surrogate {:?} / exact {:?}",
            surrogate.verdict.status, exact.verdict.status
        );
    }
}
