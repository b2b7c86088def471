//! Carleson box statistics of the pullback measure: the identity oracle, a
//! contraction's certified zeros, the norm proxy, and vanishing profiles.

use diskgeo::carleson::{
    default_vanishing_radii, operator_norm_proxy, proxy_centers, vanishing_profile, CarlesonConfig,
    SampleBank,
};
use diskgeo::selfmap::MapExpr;
use diskgeo::weight::{WeightModel, WeightSpec, DEFAULT_R_MAX};
use num_complex::Complex64;

fn main() {
    let model = WeightModel::build(WeightSpec::ExpPower { a: 1.0, b: 1.0 }, DEFAULT_R_MAX).unwrap();
    let cfg = CarlesonConfig::default();
    let delta = 0.06;

    println!(
        "identity pullback is the area measure: box statistic = δ² = {:.4e}",
        delta * delta
    );
    let bank = SampleBank::new(&model, &MapExpr::Identity, &cfg);
    for center in [
        Complex64::new(0.4, 0.0),
        Complex64::new(0.0, 0.6),
        Complex64::new(-0.53, 0.53),
    ] {
        let stat = bank.box_stat(center, delta).unwrap();
        println!(
            "    center ({:>5.2}, {:>5.2}): {:.4e} ± {:.1e} ({} hits)",
            center.re, center.im, stat.estimate, stat.std_error, stat.n_hits
        );
    }

    println!("\ncontraction by 1/2: boxes beyond the image are certified empty");
    let bank = SampleBank::new(&model, &MapExpr::Scale(Complex64::new(0.5, 0.0)), &cfg);
    for r in [0.3, 0.45, 0.6, 0.8] {
        let stat = bank.box_stat(Complex64::new(r, 0.0), 0.05).unwrap();
        println!(
            "    center {r}: estimate {:.3e}, certified_zero {}",
            stat.estimate, stat.certified_zero
        );
    }

    println!("\noperator-norm box proxy (relative quantity):");
    for name in ["id", "scale:0.5"] {
        let map = MapExpr::parse(name).unwrap();
        let centers = proxy_centers(16, 3);
        let (proxy, stats) = operator_norm_proxy(&model, &map, &centers, delta, &cfg).unwrap();
        let informative = stats.iter().filter(|s| s.informative()).count();
        println!(
            "    {name}: proxy {proxy:.4e} over {} centers ({informative} informative)",
            stats.len()
        );
    }

    println!("\nvanishing profiles along the positive axis (censored radii truncate):");
    let radii = default_vanishing_radii();
    for name in ["id", "scale:0.5"] {
        let map = MapExpr::parse(name).unwrap();
        let profiles = vanishing_profile(&model, &map, delta, &[0.0], &radii, &cfg).unwrap();
        let (_, profile, stats) = &profiles[0];
        let values: Vec<String> = stats
            .iter()
            .map(|s| {
                if s.informative() {
                    format!("{:.2e}", s.estimate)
                } else {
                    "censored".to_string()
                }
            })
            .collect();
        println!(
            "    {name}: {:?} (truncated {}) — {}",
            profile.trend,
            profile.truncated,
            values.join(", ")
        );
    }
}
