//! CLI integration: exit-code trichotomy, report schema, determinism,
//! CSV/SVG artifacts, config overrides.

use diskgeo::cli::run;

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("diskgeo")
        .chain(args.iter().copied())
        .map(String::from)
        .collect()
}

#[test]
fn analyze_exit_codes_follow_the_classification() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let code = run(argv(&[
        "analyze",
        "--weight",
        "exp:a=1,b=1",
        "--map",
        "scale:0.5",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["schema"], "diskgeo/1");
    assert_eq!(report["result"]["classification"], "compact");
    assert_eq!(report["config"]["weight"], "exp:a=1,b=1");

    let code = run(argv(&[
        "analyze",
        "--weight",
        "exp:a=1,b=1",
        "--map",
        "affine:0.5,0.5",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 2);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["result"]["classification"], "unbounded");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(argv(&["analyze", "--weight", "exp:a=1,b=1"])), 1); // missing --map
    assert_eq!(
        run(argv(&["analyze", "--weight", "nope:1", "--map", "id"])),
        1
    );
    assert_eq!(
        run(argv(&[
            "dist",
            "--weight",
            "logproxy:alpha=0",
            "--metric",
            "nonsense",
            "--from",
            "0,0",
            "--to",
            "0.5,0",
        ])),
        1
    );
}

#[test]
fn dist_report_matches_the_radial_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let code = run(argv(&[
        "dist",
        "--weight",
        "logproxy:alpha=0",
        "--metric",
        "tau",
        "--from",
        "0,0",
        "--to",
        "0.9,0",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let value = report["result"]["value"].as_f64().unwrap();
    assert!((value - 10f64.ln()).abs() / 10f64.ln() < 0.02);
    assert_eq!(report["result"]["converged"], true);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let code = run(argv(&[
            "analyze",
            "--weight",
            "exp:a=1,b=1",
            "--map",
            "mono:2",
            "--seed",
            "11",
            "--out",
            out.to_str().unwrap(),
        ]));
        assert!(code == 0 || code == 2 || code == 3);
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "same argv and seed must reproduce the identical report"
    );
}

#[test]
fn diff_emits_csv_and_heatmap() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("diff.json");
    let csv = dir.path().join("profiles.csv");
    let svg = dir.path().join("gamma.svg");
    let code = run(argv(&[
        "diff",
        "--weight",
        "exp:a=1,b=1",
        "--phi",
        "id",
        "--psi",
        "mono:2",
        "--mode",
        "surrogate",
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--heatmap",
        svg.to_str().unwrap(),
    ]));
    assert_eq!(code, 2); // violated
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("angle,r,value"));
    assert!(csv_text.lines().count() > 100);
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert!(svg_text.contains("</svg>"));
}

#[test]
fn weight_validate_trichotomy() {
    assert_eq!(
        run(argv(&["weight-validate", "--weight", "exp:a=1,b=1"])),
        0
    );
    assert_eq!(
        run(argv(&["weight-validate", "--weight", "logproxy:alpha=0"])),
        2
    );
}

#[test]
fn custom_weight_loads_from_json() {
    // sample the power potential on a boundary-graded grid and feed it back
    // through the custom loader; a fast potential needs geometric grading in
    // 1 - r or the interpolant cannot follow it near the rim
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let n = 4000;
    let mut r = Vec::new();
    let mut phi = Vec::new();
    for i in 0..=n {
        let gap = 10f64.powf(-6.2 * i as f64 / n as f64);
        let x = 1.0 - gap;
        r.push(x);
        phi.push(1.0 / gap);
    }
    std::fs::write(
        &path,
        serde_json::to_string(&serde_json::json!({
            "r": r,
            "phi": phi,
            "interpolation": "monotone-cubic",
        }))
        .unwrap(),
    )
    .unwrap();
    let spec = format!("custom:@{}", path.display());
    let code = run(argv(&["weight-validate", "--weight", &spec]));
    // interpolated curvature is noisy at the knots, so accept either verdict
    // but require the command to parse, build, and report
    assert!(code == 0 || code == 2, "exit {code}");

    // uniformly spaced samples of a fast potential cannot resolve the rim;
    // the builder must reject them rather than emit a garbage radius function
    let bad = dir.path().join("bad.json");
    let m = 2000;
    let coarse: (Vec<f64>, Vec<f64>) = (0..=m)
        .map(|i| {
            let x = 0.9999995 * i as f64 / m as f64;
            (x, 1.0 / (1.0 - x))
        })
        .unzip();
    std::fs::write(
        &bad,
        serde_json::to_string(&serde_json::json!({
            "r": coarse.0,
            "phi": coarse.1,
        }))
        .unwrap(),
    )
    .unwrap();
    let spec = format!("custom:@{}", bad.display());
    assert_eq!(run(argv(&["weight-validate", "--weight", &spec])), 1);
}

#[test]
fn config_file_overrides_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("conf.toml");
    std::fs::write(&conf, "n_angles = 8\neps_zero = 1e-3\n").unwrap();
    let out = dir.path().join("r.json");
    let code = run(argv(&[
        "analyze",
        "--weight",
        "exp:a=1,b=1",
        "--map",
        "scale:0.5",
        "--config",
        conf.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["config"]["thresholds"]["n_angles"], 8);
    assert_eq!(report["result"]["profiles"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_suite_subset_runs_clean() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let code = run(argv(&[
        "verify",
        "--weight",
        "exp:a=1,b=1",
        "--suite",
        "submean",
        "--points",
        "60",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let checks = report["result"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        assert_eq!(c["n_violations"], 0);
    }
}

#[test]
fn path_subcommand_reports_lipschitz_rate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let code = run(argv(&[
        "path",
        "--weight",
        "exp:a=1,b=1",
        "--phi",
        "id",
        "--psi",
        "perturb:c=0.05,k=3",
        "--tgrid",
        "0:1:0.2",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report["result"]["lipschitz"].as_f64().unwrap() > 0.0);
    assert_eq!(report["result"]["all_bounded"], true);
}
