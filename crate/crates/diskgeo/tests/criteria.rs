//! Criteria integration: compact differences in both modes, contact sets,
//! finite sums, weighted compactness, path evidence.

mod common;

use std::sync::OnceLock;

use common::{c, engine_for, exp11};
use diskgeo::criteria::{
    compact_difference, f_set, finite_sum_difference, gamma_difference, path_connectedness,
    weighted_comp_compactness, CriteriaConfig, GammaMode,
};
use diskgeo::geometry::GeodesicEngine;
use diskgeo::report::{Trend, VerdictStatus};
use diskgeo::selfmap::MapExpr;

fn cfg() -> CriteriaConfig {
    CriteriaConfig::default()
}

fn shared_engine() -> &'static GeodesicEngine {
    static ENGINE: OnceLock<GeodesicEngine> = OnceLock::new();
    ENGINE.get_or_init(|| engine_for(exp11(), 0.953125))
}

fn perturb(c_small: f64) -> MapExpr {
    MapExpr::BoundaryPerturb { c: c_small, k: 3 }
}

#[test]
fn equal_symbols_give_a_trivially_compact_difference() {
    let m = exp11();
    let report = compact_difference(
        &m,
        None,
        &MapExpr::Identity,
        &MapExpr::Identity,
        &cfg(),
        GammaMode::Surrogate,
    )
    .unwrap();
    assert_eq!(report.verdict.status, VerdictStatus::Satisfied);
    for p in &report.verdict.profiles {
        assert_eq!(p.trend, Trend::ToZero);
        assert_eq!(p.tail_median, 0.0);
    }
}

#[test]
fn interior_image_pair_is_a_satisfied_difference() {
    // both symbols map into |w| ≤ 0.4: the d_φ proximity bound is uniform and
    // both weight ratios vanish, so every Γ profile vanishes
    let m = exp11();
    let phi = MapExpr::Scale(c(0.4, 0.0));
    let psi = MapExpr::Compose {
        outer: Box::new(MapExpr::Scale(c(0.4, 0.0))),
        inner: Box::new(MapExpr::Monomial(2)),
    };
    let report = compact_difference(&m, None, &phi, &psi, &cfg(), GammaMode::Surrogate).unwrap();
    assert_eq!(report.verdict.status, VerdictStatus::Satisfied);
    assert!(report.dphi_uniform);
    assert!(!report.not_compact_difference);
}

#[test]
fn square_against_identity_is_violated_at_the_contact_angle() {
    let m = exp11();
    let report = compact_difference(
        &m,
        None,
        &MapExpr::Identity,
        &MapExpr::Monomial(2),
        &cfg(),
        GammaMode::Surrogate,
    )
    .unwrap();
    assert_eq!(report.verdict.status, VerdictStatus::Violated);
    assert!(report.not_compact_difference);
    // the Γ tail at the contact angle sits at 1
    let tail0 = report.verdict.profiles[0].tail_median;
    assert!((0.9..=1.1).contains(&tail0), "tail {tail0}");
}

#[test]
fn boundary_perturbation_of_identity_cancels_only_at_its_contact_angle() {
    // Γ vanishes along the contact radius but the identity's weight-ratio
    // term is 1 at every angle while ρ saturates off the contact point, so
    // the full-circle criterion is honestly violated.
    let m = exp11();
    let report = compact_difference(
        &m,
        None,
        &MapExpr::Identity,
        &perturb(0.05),
        &cfg(),
        GammaMode::Surrogate,
    )
    .unwrap();
    assert_eq!(report.verdict.status, VerdictStatus::Violated);
    // angle 0 (the contact point): genuine cancellation, tail below 1e-4
    let contact = &report.verdict.profiles[0];
    assert_eq!(contact.trend, Trend::ToZero, "contact profile {contact:?}");
    assert!(contact.tail_median < 1e-4);
    // a quarter turn away the tail sits near 1
    let quarter = &report.verdict.profiles[16];
    assert!(quarter.tail_median > 0.9, "tail {}", quarter.tail_median);
}

#[test]
fn matched_boundary_perturbations_cancel_everywhere_but_lack_uniformity() {
    // two perturbations with the same contact structure: every Γ profile
    // vanishes (the necessity evidence is clean), while the d_φ proximity
    // bound blows up at intermediate angles, so sufficiency stays open.
    let m = exp11();
    let report = compact_difference(
        &m,
        None,
        &perturb(0.03),
        &perturb(0.08),
        &cfg(),
        GammaMode::Surrogate,
    )
    .unwrap();
    for (i, p) in report.verdict.profiles.iter().enumerate() {
        assert_eq!(p.trend, Trend::ToZero, "angle index {i}: {p:?}");
    }
    assert!(!report.dphi_uniform);
    assert_eq!(report.verdict.status, VerdictStatus::Inconclusive);
    assert!(!report.not_compact_difference);
}

#[test]
fn exact_mode_agrees_with_surrogate_mode_in_classification() {
    let engine = shared_engine();
    let m = engine.model().clone();
    // mesh queries are the expensive path: compare the modes on the radial
    // ray at a coarser angle grid so the run stays within a desk-scale budget
    let mut cfg = cfg();
    cfg.rays = 1;
    cfg.thresholds.n_angles = 16;
    let pairs = [
        (MapExpr::Identity, MapExpr::Monomial(2)),
        (MapExpr::Identity, perturb(0.05)),
        (
            MapExpr::Scale(c(0.4, 0.0)),
            MapExpr::Compose {
                outer: Box::new(MapExpr::Scale(c(0.4, 0.0))),
                inner: Box::new(MapExpr::Monomial(2)),
            },
        ),
    ];
    for (phi, psi) in &pairs {
        let surrogate = compact_difference(&m, None, phi, psi, &cfg, GammaMode::Surrogate).unwrap();
        let exact = compact_difference(&m, Some(engine), phi, psi, &cfg, GammaMode::Exact).unwrap();
        assert_eq!(
            surrogate.verdict.status,
            exact.verdict.status,
            "mode mismatch for ({}, {})",
            phi.canonical(),
            psi.canonical()
        );
    }
}

#[test]
fn exact_mode_uses_the_mesh_where_the_pair_is_resolvable() {
    let engine = shared_engine();
    let m = engine.model().clone();
    // comfortably inside coverage and separated well beyond mesh spacing
    let g = gamma_difference(
        &m,
        Some(engine),
        &MapExpr::Identity,
        &MapExpr::Monomial(2),
        c(0.85, 0.0),
        GammaMode::Exact,
    )
    .unwrap()
    .unwrap();
    assert_eq!(g.rho_source, diskgeo::criteria::RhoSource::Mesh);
    // surrogate and mesh values agree on the saturated scale
    let s = gamma_difference(
        &m,
        None,
        &MapExpr::Identity,
        &MapExpr::Monomial(2),
        c(0.85, 0.0),
        GammaMode::Surrogate,
    )
    .unwrap()
    .unwrap();
    assert!(
        (g.value - s.value).abs() < 0.1,
        "exact {} vs surrogate {}",
        g.value,
        s.value
    );
}

#[test]
fn contact_sets_match_the_example_maps() {
    let m = exp11();
    let scale = f_set(&m, &MapExpr::Scale(c(0.5, 0.0)), &cfg()).unwrap();
    assert!(scale.angles.is_empty(), "F(scale) = {:?}", scale.angles);

    let id = f_set(&m, &MapExpr::Identity, &cfg()).unwrap();
    assert_eq!(id.angles.len(), 64, "identity touches everywhere");
    for (_, stat) in &id.statistics {
        assert!((stat - 1.0).abs() < 1e-9);
    }

    let affine = f_set(
        &m,
        &MapExpr::Affine {
            a: c(0.5, 0.0),
            b: c(0.5, 0.0),
        },
        &cfg(),
    )
    .unwrap();
    assert_eq!(affine.angles, vec![0.0], "F = {:?}", affine.angles);
    let stat0 = affine.statistics[0].1;
    let expected = 2f64.powf(1.5);
    assert!(
        (stat0 - expected).abs() / expected < 0.2,
        "statistic {stat0} vs 2^(3/2) = {expected}"
    );
    // no ratio-implication misses on any of them
    for f in [&scale, &id, &affine] {
        assert!(f.ratio_implication_misses.is_empty());
    }
}

#[test]
fn single_part_decomposition_with_itself_is_satisfied() {
    let m = exp11();
    let v = finite_sum_difference(
        &m,
        None,
        &MapExpr::Identity,
        &[MapExpr::Identity],
        &cfg(),
        GammaMode::Surrogate,
    )
    .unwrap();
    assert_eq!(v.status, VerdictStatus::Satisfied);
}

#[test]
fn square_part_covers_identity_but_fails_the_gamma_condition() {
    // F(z²) covers the whole circle (every boundary point is a contact
    // point), so the hypotheses hold with a single part, and the restricted
    // Γ profiles then sit near 1
    let m = exp11();
    let v = finite_sum_difference(
        &m,
        None,
        &MapExpr::Identity,
        &[MapExpr::Monomial(2)],
        &cfg(),
        GammaMode::Surrogate,
    )
    .unwrap();
    assert_eq!(v.status, VerdictStatus::Violated);
}

#[test]
fn perturbation_part_cannot_cover_the_identity_contact_set() {
    // F(identity) is the whole circle while the perturbation only touches
    // near its contact point: the union hypothesis fails and that is an
    // error, not a verdict
    let m = exp11();
    let err = finite_sum_difference(
        &m,
        None,
        &MapExpr::Identity,
        &[perturb(0.05)],
        &cfg(),
        GammaMode::Surrogate,
    );
    assert!(matches!(err, Err(diskgeo::Error::HypothesisViolated(_))));
}

#[test]
fn overlapping_parts_are_rejected() {
    let m = exp11();
    let err = finite_sum_difference(
        &m,
        None,
        &MapExpr::Identity,
        &[MapExpr::Identity, MapExpr::Identity],
        &cfg(),
        GammaMode::Surrogate,
    );
    assert!(matches!(err, Err(diskgeo::Error::HypothesisViolated(_))));
}

#[test]
fn weighted_compactness_examples() {
    let m = exp11();
    let zero = MapExpr::Affine {
        a: c(0.0, 0.0),
        b: c(0.0, 0.0),
    };
    let one = MapExpr::Affine {
        a: c(0.0, 0.0),
        b: c(1.0, 0.0),
    };
    let one_minus_z = MapExpr::Affine {
        a: c(-1.0, 0.0),
        b: c(1.0, 0.0),
    };
    let v = weighted_comp_compactness(&m, &zero, &MapExpr::Identity, 1.0, &cfg()).unwrap();
    assert_eq!(v.status, VerdictStatus::Satisfied);
    let v = weighted_comp_compactness(&m, &one, &MapExpr::Identity, 1.0, &cfg()).unwrap();
    assert_eq!(v.status, VerdictStatus::Violated);
    // |1 - z| vanishes at the contact angle but not elsewhere on the circle,
    // so the multiplier damps only one angle and the criterion fails overall
    let v = weighted_comp_compactness(&m, &one_minus_z, &MapExpr::Identity, 1.0, &cfg()).unwrap();
    assert_eq!(v.status, VerdictStatus::Violated);
    assert_eq!(v.profiles[0].trend, Trend::ToZero);
    assert!(v.profiles[16].tail_median > 0.01);
    // a multiplier vanishing at the whole boundary does compactify
    let shrink = MapExpr::Scale(c(0.5, 0.0));
    let v = weighted_comp_compactness(&m, &zero, &shrink, 2.0, &cfg()).unwrap();
    assert_eq!(v.status, VerdictStatus::Satisfied);
}

#[test]
fn path_evidence_is_stable_under_grid_refinement() {
    let m = exp11();
    let phi = MapExpr::Identity;
    let psi = perturb(0.05);
    let coarse_grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let fine_grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let coarse = path_connectedness(&m, &phi, &psi, &coarse_grid, &cfg()).unwrap();
    let fine = path_connectedness(&m, &phi, &psi, &fine_grid, &cfg()).unwrap();
    assert!(coarse.all_bounded);
    assert!(fine.all_bounded);
    let ratio = (fine.lipschitz / coarse.lipschitz).max(coarse.lipschitz / fine.lipschitz);
    assert!(
        ratio < 1.1,
        "rates {} vs {}",
        coarse.lipschitz,
        fine.lipschitz
    );
    // degenerate step: t = s gives zero exactly
    let report = path_connectedness(&m, &phi, &psi, &[0.3, 0.3, 1.0], &cfg()).unwrap();
    assert_eq!(report.steps[0].2, 0.0);
}
