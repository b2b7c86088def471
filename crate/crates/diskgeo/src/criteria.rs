//! Trend verdicts for composition operators: boundedness, compactness,
//! compact differences, boundary contact sets, finite sums, weighted
//! variants, and path-connectedness evidence.
//!
//! Every "limit as |z| → 1" is rendered as a trend classification over Stolz
//! schedules at `n_angles` boundary angles; `Inconclusive` is a first-class
//! outcome. All weight ratios go through log space and saturate at the cap.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{surrogate_f, GeodesicEngine};
use crate::report::{LimitProfile, Thresholds, Trend, Verdict, VerdictStatus};
use crate::selfmap::{angular_derivative, BetaClass, MapExpr, StolzSchedule};
use crate::weight::WeightModel;
use crate::{Error, Result};

/// Boundary sampling policy for criteria evaluations.
#[derive(Debug, Clone, Copy)]
pub struct CriteriaConfig {
    pub thresholds: Thresholds,
    /// Stolz aperture.
    pub alpha: f64,
    /// Rays per boundary angle.
    pub rays: usize,
    pub seed: u64,
}

impl Default for CriteriaConfig {
    fn default() -> Self {
        CriteriaConfig {
            thresholds: Thresholds::default(),
            alpha: 2.0,
            rays: 5,
            seed: 7,
        }
    }
}

impl CriteriaConfig {
    pub fn angles(&self) -> Vec<f64> {
        let n = self.thresholds.n_angles;
        (0..n)
            .map(|j| std::f64::consts::TAU * j as f64 / n as f64)
            .collect()
    }
}

/// A profile value is either a number or a truncation marker (the symbol left
/// the truncated disk at that sample).
type SampleFn<'a> = dyn Fn(Complex64) -> Option<f64> + Sync + 'a;

/// Builds the per-angle profile: at each schedule radius, the max over rays
/// of the sampled quantity. Rays whose point leaves the domain truncate.
fn profile_at_angle(
    model: &WeightModel,
    cfg: &CriteriaConfig,
    angle: f64,
    f: &SampleFn<'_>,
) -> LimitProfile {
    let schedule = StolzSchedule::for_angle(angle, cfg.alpha, cfg.rays, model.r_max());
    let mut per_radius: std::collections::BTreeMap<u64, f64> = Default::default();
    let mut truncated = false;
    for m in 0..schedule.rays {
        for (r, z) in schedule.ray_samples(m) {
            match f(z) {
                Some(v) => {
                    let slot = per_radius.entry(r.to_bits()).or_insert(f64::NEG_INFINITY);
                    *slot = slot.max(v);
                }
                None => truncated = true,
            }
        }
    }
    let samples: Vec<(f64, f64)> = per_radius
        .into_iter()
        .map(|(bits, v)| (f64::from_bits(bits), v))
        .collect();
    if samples.is_empty() {
        // symbol leaves the domain immediately; treat as saturated
        return LimitProfile::classify(vec![(0.0, cfg.thresholds.cap)], true, &cfg.thresholds);
    }
    LimitProfile::classify(samples, truncated, &cfg.thresholds)
}

/// `ω(z)/ω(φ(z))` in log space, saturated at the cap, `None` past truncation.
fn saturated_ratio(
    model: &WeightModel,
    map: &MapExpr,
    z: Complex64,
    th: &Thresholds,
) -> Option<f64> {
    let w = map.eval(z);
    if w.norm() > model.r_max() {
        return None;
    }
    let log_ratio = model.phi(w.norm()) - model.phi(z.norm());
    Some(if log_ratio >= th.cap.ln() {
        th.cap
    } else {
        log_ratio.exp()
    })
}

fn require_class_w(model: &WeightModel) -> Result<()> {
    if model.spec().is_proxy() {
        return Err(Error::HypothesisViolated(
            "standard-weight proxy rejected: criteria need an admissible fast weight".into(),
        ));
    }
    Ok(())
}

/// Boundedness evidence: profiles of `ω(z)/ω(φ(z))` at every boundary angle.
/// Satisfied when every profile stays bounded (or vanishes); violated when
/// some profile saturates.
pub fn boundedness(model: &WeightModel, map: &MapExpr, cfg: &CriteriaConfig) -> Result<Verdict> {
    require_class_w(model)?;
    let th = cfg.thresholds;
    let angles = cfg.angles();
    let profiles: Vec<LimitProfile> = angles
        .par_iter()
        .map(|&angle| profile_at_angle(model, cfg, angle, &|z| saturated_ratio(model, map, z, &th)))
        .collect();
    let any_infinite = profiles.iter().any(|p| p.trend == Trend::ToInfinity);
    let all_tame = profiles
        .iter()
        .all(|p| matches!(p.trend, Trend::Bounded { .. } | Trend::ToZero));
    let max_tail = profiles.iter().map(|p| p.tail_median).fold(0.0, f64::max);
    let (status, margin, reason) = if any_infinite {
        (
            VerdictStatus::Violated,
            1.0,
            "weight ratio saturates along some boundary angle".to_string(),
        )
    } else if all_tame {
        (
            VerdictStatus::Satisfied,
            1.0 - max_tail / th.cap,
            "weight ratio bounded along every sampled angle".to_string(),
        )
    } else {
        (
            VerdictStatus::Inconclusive,
            0.0,
            "some ratio profile is neither bounded nor saturating".to_string(),
        )
    };
    Ok(Verdict {
        status,
        margin,
        reason,
        profiles,
        boundary_angles: angles,
    })
}

/// Compactness evidence: all ratio profiles must vanish, and the angular
/// derivative classification must agree (β > 1 everywhere); a disagreement
/// downgrades to Inconclusive.
pub fn compactness(model: &WeightModel, map: &MapExpr, cfg: &CriteriaConfig) -> Result<Verdict> {
    let bounded = boundedness(model, map, cfg)?;
    if bounded.status == VerdictStatus::Violated {
        return Ok(Verdict {
            status: VerdictStatus::Violated,
            margin: bounded.margin,
            reason: "unbounded: weight ratio saturates, so compactness fails".into(),
            profiles: bounded.profiles,
            boundary_angles: bounded.boundary_angles,
        });
    }
    let all_zero = bounded.profiles.iter().all(|p| p.trend == Trend::ToZero);
    let any_stuck = bounded.profiles.iter().any(
        |p| matches!(p.trend, Trend::Bounded { .. } if p.tail_median > cfg.thresholds.eps_zero),
    );

    // cross-check against the angular derivative at each angle
    let betas: Vec<BetaClass> = bounded
        .boundary_angles
        .par_iter()
        .map(|&angle| {
            let schedule = StolzSchedule::for_angle(angle, cfg.alpha, cfg.rays, model.r_max());
            angular_derivative(map, &schedule).class
        })
        .collect();
    let beta_all_above_one = betas
        .iter()
        .all(|c| matches!(c, BetaClass::GreaterThanOne | BetaClass::Infinite));

    let (status, margin, reason) = if all_zero && beta_all_above_one {
        (
            VerdictStatus::Satisfied,
            1.0,
            "every ratio profile vanishes; angular derivative exceeds 1 at every angle".into(),
        )
    } else if all_zero {
        (
            VerdictStatus::Inconclusive,
            0.0,
            "ratio profiles vanish but the angular-derivative cross-check disagrees".into(),
        )
    } else if any_stuck {
        (
            VerdictStatus::Violated,
            bounded
                .profiles
                .iter()
                .map(|p| p.tail_median)
                .fold(0.0, f64::max),
            "some ratio profile stays bounded away from zero".into(),
        )
    } else {
        (
            VerdictStatus::Inconclusive,
            0.0,
            "ratio profiles neither vanish uniformly nor stabilize".into(),
        )
    };
    Ok(Verdict {
        status,
        margin,
        reason,
        profiles: bounded.profiles,
        boundary_angles: bounded.boundary_angles,
    })
}

/// How the `ρ_τ` factor of a Γ value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RhoSource {
    Mesh,
    Surrogate,
    /// Certified by the radial-projection lower bound on `d_τ`.
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GammaMode {
    Exact,
    Surrogate,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GammaValue {
    pub value: f64,
    pub rho: f64,
    pub rho_source: RhoSource,
    pub saturated: bool,
}

/// Segment-bound budget above which exact mode certifies or falls back
/// instead of running a mesh query.
const EXACT_BUDGET: f64 = 6.0;

/// A certified `d_τ` lower bound at or above this pins `ρ_τ ≥ 0.95` and a
/// mesh query cannot change the trend classification.
const CERTIFIED_SATURATION: f64 = 3.0;

fn rho_between(
    model: &WeightModel,
    engine: Option<&GeodesicEngine>,
    a: Complex64,
    b: Complex64,
    mode: GammaMode,
) -> (f64, RhoSource) {
    let sep = (a - b).norm();
    if sep == 0.0 {
        return (0.0, RhoSource::Surrogate);
    }
    let surrogate = surrogate_f(model, a, b);
    let engine = match (mode, engine) {
        (GammaMode::Surrogate, _) | (_, None) => return (surrogate, RhoSource::Surrogate),
        (GammaMode::Exact, Some(e)) => e,
    };
    // far pairs first: when a certified lower bound already saturates ρ the
    // mesh has nothing to add
    let lower = dist_lower_bound(model, a, b);
    if lower >= CERTIFIED_SATURATION {
        return (
            (1.0 - (-lower).exp()).min(1.0 - 1e-16),
            RhoSource::LowerBound,
        );
    }
    let coverage = engine.config().params.coverage;
    if a.norm() <= coverage && b.norm() <= coverage {
        let upper = engine.segment_upper_bound(crate::geometry::Metric::Tau, a, b);
        if upper <= EXACT_BUDGET {
            if let Ok(Some(d)) = engine.dist_tau_capped(a, b, EXACT_POP_CAP) {
                if d.resolvable {
                    return (1.0 - (-d.value).exp(), RhoSource::Mesh);
                }
            }
        }
    }
    (surrogate, RhoSource::Surrogate)
}

/// Work cap per exact-mode mesh query; hitting it falls back to the flagged
/// surrogate, keeping profile evaluation within a deterministic budget.
const EXACT_POP_CAP: usize = 150_000;

/// Certified lower bound for `d_τ(z, w)`: the larger of the radial
/// projection `|∫ dt/τ|` over `[|z|, |w|]` and the Euclidean separation
/// against the flattest density, `|z - w|/sup τ`.
fn dist_lower_bound(model: &WeightModel, a: Complex64, b: Complex64) -> f64 {
    let euclid = (a - b).norm() / model.tau_max();
    let (r0, r1) = (a.norm(), b.norm());
    let radial = if (r0 - r1).abs() < 1e-15 {
        0.0
    } else {
        crate::geometry::radial_quadrature(|t| 1.0 / model.tau(t), r0, r1, 64)
    };
    radial.max(euclid)
}

/// The compact-difference functional
/// `Γ(z) = ρ_τ(φ(z), ψ(z)) · (ω(z)/ω(φ(z)) + ω(z)/ω(ψ(z)))`.
///
/// In exact mode the `ρ_τ` factor comes from the mesh where the pair is
/// resolvable and affordable, from a certified radial lower bound where it is
/// not, and from the explicit surrogate otherwise — the source is reported.
/// Returns `None` when a symbol leaves the truncated disk at `z`.
pub fn gamma_difference(
    model: &WeightModel,
    engine: Option<&GeodesicEngine>,
    phi: &MapExpr,
    psi: &MapExpr,
    z: Complex64,
    mode: GammaMode,
) -> Result<Option<GammaValue>> {
    require_class_w(model)?;
    let th = Thresholds::default();
    let (fz, gz) = (phi.eval(z), psi.eval(z));
    if fz.norm() > model.r_max() || gz.norm() > model.r_max() {
        return Ok(None);
    }
    let (rho, rho_source) = rho_between(model, engine, fz, gz, mode);
    let r1 = saturated_ratio(model, phi, z, &th).unwrap_or(th.cap);
    let r2 = saturated_ratio(model, psi, z, &th).unwrap_or(th.cap);
    let saturated = r1 >= th.cap || r2 >= th.cap;
    Ok(Some(GammaValue {
        value: rho * (r1 + r2),
        rho,
        rho_source,
        saturated,
    }))
}

/// Evidence report for a compact-difference query.
#[derive(Debug, Clone, Serialize)]
pub struct DifferenceReport {
    pub verdict: Verdict,
    /// Shell sups of the certified `d_φ(φ(z), ψ(z))` upper bound
    /// `|φ - ψ| · max(φ'(|φ|), φ'(|ψ|))`, innermost shell first.
    pub dphi_shell_sup: Vec<(f64, f64)>,
    /// Whether that evidence stays bounded across shells.
    pub dphi_uniform: bool,
    /// True when some Γ tail reaches 0.5: the contrapositive certificate
    /// that the difference cannot be compact.
    pub not_compact_difference: bool,
    pub mode: GammaMode,
}

/// Decision constant: a Γ tail at or above this counts as bounded away from 0.
const GAMMA_TAIL_POSITIVE: f64 = 0.1;

/// Compact-difference criterion for `C_φ - C_ψ`: uniform `d_φ` proximity
/// evidence plus vanishing Γ profiles at every boundary angle.
pub fn compact_difference(
    model: &WeightModel,
    engine: Option<&GeodesicEngine>,
    phi: &MapExpr,
    psi: &MapExpr,
    cfg: &CriteriaConfig,
    mode: GammaMode,
) -> Result<DifferenceReport> {
    require_class_w(model)?;
    for (name, map) in [("phi", phi), ("psi", psi)] {
        let b = boundedness(model, map, cfg)?;
        if b.status == VerdictStatus::Violated {
            return Ok(DifferenceReport {
                verdict: Verdict {
                    status: VerdictStatus::Violated,
                    margin: 1.0,
                    reason: format!("symbol {name} induces an unbounded operator"),
                    profiles: Vec::new(),
                    boundary_angles: Vec::new(),
                },
                dphi_shell_sup: Vec::new(),
                dphi_uniform: false,
                not_compact_difference: false,
                mode,
            });
        }
    }

    // (i) uniform d_phi proximity evidence on seeded shells
    let dphi_shell_sup = dphi_proximity_shells(model, phi, psi, cfg.seed);
    let dphi_uniform = {
        let last = dphi_shell_sup.last().map(|p| p.1).unwrap_or(f64::INFINITY);
        let first = dphi_shell_sup.first().map(|p| p.1).unwrap_or(0.0);
        last <= 10.0 * first.max(1.0)
    };

    // (ii) Γ profiles per angle
    let angles = cfg.angles();
    let profiles: Vec<LimitProfile> = angles
        .par_iter()
        .map(|&angle| {
            profile_at_angle(model, cfg, angle, &|z| {
                gamma_difference(model, engine, phi, psi, z, mode)
                    .ok()
                    .flatten()
                    .map(|g| g.value)
            })
        })
        .collect();

    let all_zero = profiles.iter().all(|p| p.trend == Trend::ToZero);
    let max_tail = profiles.iter().map(|p| p.tail_median).fold(0.0, f64::max);
    let positive_tail = max_tail >= GAMMA_TAIL_POSITIVE;
    let (status, margin, reason) = if all_zero && dphi_uniform {
        (
            VerdictStatus::Satisfied,
            1.0,
            "every Γ profile vanishes and the d_φ proximity evidence is stable".into(),
        )
    } else if positive_tail {
        (
            VerdictStatus::Violated,
            max_tail,
            "some Γ profile has a tail bounded away from zero".into(),
        )
    } else {
        (
            VerdictStatus::Inconclusive,
            0.0,
            "Γ profiles neither vanish uniformly nor stay away from zero".into(),
        )
    };
    Ok(DifferenceReport {
        verdict: Verdict {
            status,
            margin,
            reason,
            profiles,
            boundary_angles: angles,
        },
        dphi_shell_sup,
        dphi_uniform,
        not_compact_difference: max_tail >= 0.5,
        mode,
    })
}

/// Sup over seeded points per radial shell of the certified upper bound
/// `|φ(z) - ψ(z)| · max(φ'(|φ(z)|), φ'(|ψ(z)|)) ≥ d_φ(φ(z), ψ(z))`.
fn dphi_proximity_shells(
    model: &WeightModel,
    phi: &MapExpr,
    psi: &MapExpr,
    seed: u64,
) -> Vec<(f64, f64)> {
    use rand::{Rng, SeedableRng};
    let shells: Vec<f64> = (1..=10).map(|k| 1.0 - 2f64.powi(-k)).collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let mut out = Vec::with_capacity(shells.len());
    let mut lo = 0.0;
    for &hi in &shells {
        let mut sup = 0.0f64;
        for _ in 0..256 {
            let r = lo + (hi - lo) * rng.gen::<f64>();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            let z = Complex64::from_polar(r, theta);
            let (a, b) = (phi.eval(z), psi.eval(z));
            if a.norm() > model.r_max() || b.norm() > model.r_max() {
                continue;
            }
            let bound = (a - b).norm() * model.dphi(a.norm()).max(model.dphi(b.norm()));
            sup = sup.max(bound);
        }
        out.push((hi, sup));
        lo = hi;
    }
    out
}

/// Boundary contact set `F(φ)`: angles where the tail limsup of
/// `τ(z)/τ(φ(z))` stays above the contact threshold.
#[derive(Debug, Clone, Serialize)]
pub struct FSet {
    /// `(angle, tail limsup estimate)` for every sampled angle.
    pub statistics: Vec<(f64, f64)>,
    /// Angles whose statistic exceeds the threshold.
    pub angles: Vec<f64>,
    pub eps_f: f64,
    /// Angles where the weight ratio stays bounded below but the angle is
    /// missing from F — must be empty for a consistent run.
    pub ratio_implication_misses: Vec<f64>,
    pub angular_resolution: f64,
}

impl FSet {
    pub fn contains_angle(&self, angle: f64, resolution: f64) -> bool {
        self.angles.iter().any(|&a| {
            let d = (a - angle).rem_euclid(std::f64::consts::TAU);
            d.min(std::f64::consts::TAU - d) <= resolution / 2.0
        })
    }
}

/// Computes `F(φ)` on the standard angle grid.
pub fn f_set(model: &WeightModel, map: &MapExpr, cfg: &CriteriaConfig) -> Result<FSet> {
    require_class_w(model)?;
    let th = cfg.thresholds;
    let angles = cfg.angles();
    let stats: Vec<(f64, f64, f64)> = angles
        .par_iter()
        .map(|&angle| {
            let schedule = StolzSchedule::for_angle(angle, cfg.alpha, cfg.rays, model.r_max());
            let mut tail_tau = 0.0f64; // limsup proxy: max over rays of the last-3 max
            let mut tail_ratio = 0.0f64;
            for m in 0..schedule.rays {
                let samples = schedule.ray_samples(m);
                let tau_vals: Vec<f64> = samples
                    .iter()
                    .filter_map(|&(_, z)| {
                        let w = map.eval(z);
                        (w.norm() <= model.r_max())
                            .then(|| model.tau(z.norm()) / model.tau(w.norm()))
                    })
                    .collect();
                for v in tau_vals.iter().rev().take(3) {
                    tail_tau = tail_tau.max(*v);
                }
                let ratio_vals: Vec<f64> = samples
                    .iter()
                    .filter_map(|&(_, z)| saturated_ratio(model, map, z, &th))
                    .collect();
                for v in ratio_vals.iter().rev().take(3) {
                    tail_ratio = tail_ratio.max(*v);
                }
            }
            (angle, tail_tau, tail_ratio)
        })
        .collect();

    let mut f_angles = Vec::new();
    let mut misses = Vec::new();
    let mut statistics = Vec::with_capacity(stats.len());
    for &(angle, tau_stat, ratio_stat) in &stats {
        statistics.push((angle, tau_stat));
        let in_f = tau_stat > th.eps_f;
        if in_f {
            f_angles.push(angle);
        }
        // a weight ratio bounded below forces boundary contact
        if ratio_stat >= 0.01 && !in_f {
            misses.push(angle);
        }
    }
    Ok(FSet {
        statistics,
        angles: f_angles,
        eps_f: th.eps_f,
        ratio_implication_misses: misses,
        angular_resolution: std::f64::consts::TAU / th.n_angles as f64,
    })
}

/// Finite-sum decomposition criterion for `C_φ - Σ_j C_{φ_j}`.
///
/// The contact sets of the parts must be pairwise disjoint and cover `F(φ)`
/// (at the sampled angular resolution); then each part's Γ profiles,
/// restricted to that part's contact angles, must vanish. Failing the set
/// hypotheses is an error, not a verdict.
pub fn finite_sum_difference(
    model: &WeightModel,
    engine: Option<&GeodesicEngine>,
    phi: &MapExpr,
    parts: &[MapExpr],
    cfg: &CriteriaConfig,
    mode: GammaMode,
) -> Result<Verdict> {
    require_class_w(model)?;
    if parts.is_empty() {
        return Err(Error::HypothesisViolated("no parts given".into()));
    }
    let f_phi = f_set(model, phi, cfg)?;
    let f_parts: Vec<FSet> = parts
        .iter()
        .map(|p| f_set(model, p, cfg))
        .collect::<Result<_>>()?;
    let resolution = f_phi.angular_resolution;

    for i in 0..f_parts.len() {
        for j in i + 1..f_parts.len() {
            for &a in &f_parts[i].angles {
                if f_parts[j].contains_angle(a, resolution) {
                    return Err(Error::HypothesisViolated(format!(
                        "contact sets of parts {i} and {j} overlap at angle {a:.4}"
                    )));
                }
            }
        }
    }
    for &a in &f_phi.angles {
        if !f_parts.iter().any(|fp| fp.contains_angle(a, resolution)) {
            return Err(Error::HypothesisViolated(format!(
                "contact angle {a:.4} of the composite symbol is covered by no part"
            )));
        }
    }

    let mut profiles = Vec::new();
    let mut angles_used = Vec::new();
    for (part, fp) in parts.iter().zip(&f_parts) {
        let part_profiles: Vec<LimitProfile> = fp
            .angles
            .par_iter()
            .map(|&angle| {
                profile_at_angle(model, cfg, angle, &|z| {
                    gamma_difference(model, engine, phi, part, z, mode)
                        .ok()
                        .flatten()
                        .map(|g| g.value)
                })
            })
            .collect();
        angles_used.extend(fp.angles.iter().copied());
        profiles.extend(part_profiles);
    }
    let all_zero = profiles.iter().all(|p| p.trend == Trend::ToZero);
    let max_tail = profiles.iter().map(|p| p.tail_median).fold(0.0, f64::max);
    let (status, margin, reason) = if profiles.is_empty() {
        (
            VerdictStatus::Satisfied,
            1.0,
            "no contact angles to check: every Γ restriction is vacuous".into(),
        )
    } else if all_zero {
        (
            VerdictStatus::Satisfied,
            1.0,
            "restricted Γ profiles vanish at every contact angle".into(),
        )
    } else if max_tail >= GAMMA_TAIL_POSITIVE {
        (
            VerdictStatus::Violated,
            max_tail,
            "restricted Γ profile bounded away from zero at a contact angle".into(),
        )
    } else {
        (VerdictStatus::Inconclusive, 0.0, "mixed Γ trends".into())
    };
    Ok(Verdict {
        status,
        margin,
        reason,
        profiles,
        boundary_angles: angles_used,
    })
}

/// Weighted composition compactness: profiles of `|U(z)|^p · ω(z)/ω(φ(z))`;
/// satisfied when every profile vanishes.
pub fn weighted_comp_compactness(
    model: &WeightModel,
    multiplier: &MapExpr,
    map: &MapExpr,
    p: f64,
    cfg: &CriteriaConfig,
) -> Result<Verdict> {
    require_class_w(model)?;
    if p <= 0.0 {
        return Err(Error::InvalidSpec("exponent p must be positive".into()));
    }
    let th = cfg.thresholds;
    let angles = cfg.angles();
    let profiles: Vec<LimitProfile> = angles
        .par_iter()
        .map(|&angle| {
            profile_at_angle(model, cfg, angle, &|z| {
                saturated_ratio(model, map, z, &th)
                    .map(|ratio| multiplier.eval(z).norm().powf(p) * ratio)
            })
        })
        .collect();
    let all_zero = profiles.iter().all(|p| p.trend == Trend::ToZero);
    let max_tail = profiles.iter().map(|p| p.tail_median).fold(0.0, f64::max);
    let (status, margin, reason) = if all_zero {
        (
            VerdictStatus::Satisfied,
            1.0,
            "every weighted ratio profile vanishes".into(),
        )
    } else if max_tail > th.eps_zero {
        (
            VerdictStatus::Violated,
            max_tail,
            "weighted ratio profile stays away from zero".into(),
        )
    } else {
        (VerdictStatus::Inconclusive, 0.0, "mixed trends".into())
    };
    Ok(Verdict {
        status,
        margin,
        reason,
        profiles,
        boundary_angles: angles,
    })
}

/// Evidence that `t ↦ C_{φ_t}` is a norm-continuous path.
#[derive(Debug, Clone, Serialize)]
pub struct PathReport {
    /// `(t, s, sup_z |φ_t - φ_s|/τ(φ_u), sup / |t - s|)` per consecutive pair.
    pub steps: Vec<(f64, f64, f64, f64)>,
    /// Max over steps of the per-step rate: the empirical Lipschitz constant.
    pub lipschitz: f64,
    /// Boundedness verdict of every intermediate symbol.
    pub per_t_bounded: Vec<(f64, VerdictStatus)>,
    pub all_bounded: bool,
}

/// Walks the convex interpolation `φ_t = (1-t)φ + tψ` along `t_grid`,
/// measuring `sup_z |φ_t(z) - φ_s(z)| / τ(φ_u(z))` on a seeded sample grid
/// and checking boundedness of every intermediate symbol. The intermediate
/// parameter `u` is the step's left endpoint, so refining the grid keeps the
/// evaluation points of coarser grids and the reported rate stays comparable
/// across refinements.
pub fn path_connectedness(
    model: &WeightModel,
    phi: &MapExpr,
    psi: &MapExpr,
    t_grid: &[f64],
    cfg: &CriteriaConfig,
) -> Result<PathReport> {
    require_class_w(model)?;
    if t_grid.len() < 2 {
        return Err(Error::InvalidSpec(
            "t grid needs at least two points".into(),
        ));
    }
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa5a5_5a5a);
    let mut sample: Vec<Complex64> = (0..2000)
        .map(|_| {
            let r = 0.99 * rng.gen::<f64>().sqrt();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(r, theta)
        })
        .collect();
    // radial approach points make the near-boundary behavior visible
    for k in 3..=10 {
        sample.push(Complex64::new(1.0 - 2f64.powi(-k), 0.0));
    }

    let mut steps = Vec::new();
    let mut lipschitz = 0.0f64;
    for w in t_grid.windows(2) {
        let (t, s) = (w[0], w[1]);
        let u = t.min(s);
        let map_t = phi.interpolate(psi, t);
        let map_s = phi.interpolate(psi, s);
        let map_u = phi.interpolate(psi, u);
        let mut sup = 0.0f64;
        for &z in &sample {
            let wu = map_u.eval(z);
            if wu.norm() > model.r_max() {
                continue;
            }
            let tau_u = model.tau(wu.norm());
            if tau_u <= 0.0 {
                continue;
            }
            sup = sup.max((map_t.eval(z) - map_s.eval(z)).norm() / tau_u);
        }
        let rate = sup / (s - t).abs().max(1e-300);
        lipschitz = lipschitz.max(rate);
        steps.push((t, s, sup, rate));
    }

    let per_t_bounded: Vec<(f64, VerdictStatus)> = t_grid
        .par_iter()
        .map(|&t| {
            let map_t = phi.interpolate(psi, t);
            let status = boundedness(model, &map_t, cfg)
                .map(|v| v.status)
                .unwrap_or(VerdictStatus::Inconclusive);
            (t, status)
        })
        .collect();
    let all_bounded = per_t_bounded
        .iter()
        .all(|(_, s)| *s == VerdictStatus::Satisfied);
    Ok(PathReport {
        steps,
        lipschitz,
        per_t_bounded,
        all_bounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{WeightSpec, DEFAULT_R_MAX};

    fn model() -> WeightModel {
        WeightModel::build(WeightSpec::ExpPower { a: 1.0, b: 1.0 }, DEFAULT_R_MAX).unwrap()
    }

    fn cfg() -> CriteriaConfig {
        CriteriaConfig::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_bounded_not_compact() {
        let m = model();
        let b = boundedness(&m, &MapExpr::Identity, &cfg()).unwrap();
        assert_eq!(b.status, VerdictStatus::Satisfied);
        for p in &b.profiles {
            assert!(matches!(p.trend, Trend::Bounded { .. }));
            assert!((p.tail_median - 1.0).abs() < 1e-9);
        }
        let k = compactness(&m, &MapExpr::Identity, &cfg()).unwrap();
        assert_eq!(k.status, VerdictStatus::Violated);
    }

    #[test]
    fn contraction_is_compact() {
        let m = model();
        let map = MapExpr::Scale(c(0.5, 0.0));
        let k = compactness(&m, &map, &cfg()).unwrap();
        assert_eq!(k.status, VerdictStatus::Satisfied);
        for p in &k.profiles {
            assert_eq!(p.trend, Trend::ToZero);
        }
    }

    #[test]
    fn affine_half_is_unbounded_with_known_crossing() {
        let m = model();
        let map = MapExpr::Affine {
            a: c(0.5, 0.0),
            b: c(0.5, 0.0),
        };
        let b = boundedness(&m, &map, &cfg()).unwrap();
        assert_eq!(b.status, VerdictStatus::Violated);
        // the ratio along the contact radius is exp(1/(1-r)): still below the
        // cap at r = 0.875 and saturated by r = 0.9375
        let profile = &b.profiles[0];
        let at = |r: f64| {
            profile
                .samples
                .iter()
                .find(|(x, _)| (x - r).abs() < 1e-12)
                .map(|(_, v)| *v)
                .unwrap()
        };
        assert!(at(0.875) < 1e6);
        assert!(at(0.9375) >= 1e6);
    }

    #[test]
    fn moebius_is_unbounded() {
        let m = model();
        let map = MapExpr::Moebius { a: c(0.5, 0.0) };
        let b = boundedness(&m, &map, &cfg()).unwrap();
        assert_eq!(b.status, VerdictStatus::Violated);
    }

    #[test]
    fn proxy_weight_is_rejected() {
        let proxy = WeightModel::build(WeightSpec::LogProxy { alpha: 0.0 }, DEFAULT_R_MAX).unwrap();
        assert!(boundedness(&proxy, &MapExpr::Identity, &cfg()).is_err());
    }

    #[test]
    fn gamma_vanishes_for_equal_symbols() {
        let m = model();
        let g = gamma_difference(
            &m,
            None,
            &MapExpr::Identity,
            &MapExpr::Identity,
            c(0.7, 0.1),
            GammaMode::Surrogate,
        )
        .unwrap()
        .unwrap();
        assert_eq!(g.value, 0.0);
    }

    #[test]
    fn gamma_tends_to_one_for_square_against_identity() {
        let m = model();
        // along the contact radius the ρ factor saturates while the weight
        // ratios tend to 1 + 0
        let g = gamma_difference(
            &m,
            None,
            &MapExpr::Identity,
            &MapExpr::Monomial(2),
            c(0.998, 0.0),
            GammaMode::Surrogate,
        )
        .unwrap()
        .unwrap();
        assert!((g.value - 1.0).abs() < 0.05, "Γ = {}", g.value);
    }

    #[test]
    fn trichotomy_classifiers_agree_on_example_maps() {
        let m = model();
        let maps = [
            MapExpr::Identity,
            MapExpr::Scale(c(0.5, 0.0)),
            MapExpr::Moebius { a: c(0.5, 0.0) },
            MapExpr::Affine {
                a: c(0.5, 0.0),
                b: c(0.5, 0.0),
            },
        ];
        for map in &maps {
            let b = boundedness(&m, map, &cfg()).unwrap();
            let k = compactness(&m, map, &cfg()).unwrap();
            let ratio_to_zero = b.status == VerdictStatus::Satisfied
                && b.profiles.iter().all(|p| p.trend == Trend::ToZero);
            let beta_above_one = cfg().angles().iter().all(|&a| {
                let sched = StolzSchedule::for_angle(a, 2.0, 5, m.r_max());
                matches!(
                    angular_derivative(map, &sched).class,
                    BetaClass::GreaterThanOne | BetaClass::Infinite
                )
            });
            let compact = k.status == VerdictStatus::Satisfied;
            assert_eq!(ratio_to_zero, compact, "map {}", map.canonical());
            assert_eq!(beta_above_one, compact, "map {}", map.canonical());
        }
    }
}
