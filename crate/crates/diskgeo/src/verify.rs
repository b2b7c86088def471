//! Property harness for the pointwise inequalities behind the criteria:
//! submean bounds, derivative submean bounds, difference bounds, potential
//! stability along segments, metric separation, and exponential decay of
//! `e^{-d_τ}` against the Euclidean/τ ratio.
//!
//! Inequalities with unspecified comparability constants are rendered as
//! finite-and-stable empirical constants (a check fails only when it is
//! unstable); inequalities with explicit constants count literal violations.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{surrogate_f, GeodesicEngine, Metric};
use crate::weight::WeightModel;
use crate::{Error, Result};

/// Entire test functions with exact derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// `z^n` (constant 1 for n = 0).
    Monomial(u32),
    /// `exp(λ z)`.
    ExpLinear(Complex64),
    /// `Σ c_k z^k`.
    Polynomial(Vec<Complex64>),
}

impl TestFunction {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            TestFunction::Monomial(0) => Complex64::new(1.0, 0.0),
            TestFunction::Monomial(n) => z.powu(*n),
            TestFunction::ExpLinear(lambda) => (lambda * z).exp(),
            TestFunction::Polynomial(coeffs) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &c in coeffs.iter().rev() {
                    acc = acc * z + c;
                }
                acc
            }
        }
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        match self {
            TestFunction::Monomial(0) => Complex64::new(0.0, 0.0),
            TestFunction::Monomial(n) => (*n as f64) * z.powu(n - 1),
            TestFunction::ExpLinear(lambda) => lambda * (lambda * z).exp(),
            TestFunction::Polynomial(coeffs) => {
                let mut out = Complex64::new(0.0, 0.0);
                for (k, &c) in coeffs.iter().enumerate().rev() {
                    if k == 0 {
                        continue;
                    }
                    out = out * z + (k as f64) * c;
                }
                out
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            TestFunction::Monomial(n) => format!("z^{n}"),
            TestFunction::ExpLinear(l) => format!("exp({l}z)"),
            TestFunction::Polynomial(c) => format!("poly(deg {})", c.len().saturating_sub(1)),
        }
    }
}

/// Outcome of one check: the empirical constant and its stability between
/// the half-density and full-density runs.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub n_points: usize,
    /// Literal inequality violations (only checks with explicit constants
    /// can have them).
    pub n_violations: usize,
    /// Sup of LHS/RHS over the sample.
    pub worst_ratio: f64,
    /// worst(full sample) / worst(first quarter of the sample); the sample
    /// sets are nested, so this is always ≥ 1.
    pub stability: f64,
    pub seed: u64,
}

impl CheckResult {
    pub fn stable(&self) -> bool {
        self.stability.is_finite() && self.stability < 2.0
    }
}

const GL24: usize = 24;
const GL48: usize = 48;

fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    // Newton iteration on Legendre polynomials; nodes/weights on [-1, 1]
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..64 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integral of `g` over the disk `D(center, radius)` against the normalized
/// area measure, by a polar tensor Gauss–Legendre rule (24 radial × 48
/// angular). Returns `(value, clipped)` where `clipped` flags a disk that
/// meets the truncation radius.
pub fn disk_integral(
    model: &WeightModel,
    g: impl Fn(Complex64) -> f64,
    center: Complex64,
    radius: f64,
) -> (f64, bool) {
    let clipped = center.norm() + radius > model.r_max();
    let radial = gauss_legendre(GL24);
    let angular = gauss_legendre(GL48);
    let mut total = 0.0;
    for &(xs, ws) in &radial {
        let s = 0.5 * (xs + 1.0) * radius;
        let ws = ws * 0.5 * radius;
        let mut ring = 0.0;
        for &(xt, wt) in &angular {
            let theta = (xt + 1.0) * std::f64::consts::PI;
            let wt = wt * std::f64::consts::PI;
            ring += wt * g(center + Complex64::from_polar(s, theta));
        }
        total += ws * s * ring;
    }
    (total / std::f64::consts::PI, clipped)
}

fn seeded_points(seed: u64, n: usize, r_lo: f64, r_hi: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r = r_lo + (r_hi - r_lo) * rng.gen::<f64>();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(r, theta)
        })
        .collect()
}

fn check_hypotheses(model: &WeightModel, delta: f64, p: f64) -> Result<()> {
    if !(0.0..1.0).contains(&delta) || delta >= model.m_tau() {
        return Err(Error::HypothesisViolated(format!(
            "δ = {delta} must lie in (0, m_tau = {})",
            model.m_tau()
        )));
    }
    if p <= 0.0 {
        return Err(Error::HypothesisViolated("p must be positive".into()));
    }
    Ok(())
}

/// Sup-and-stability scaffold shared by the `≲` checks: evaluates `ratio` on
/// a nested seeded sample, reporting the sup and the full-vs-quarter ratio.
fn sup_check(
    name: &str,
    points: &[Complex64],
    seed: u64,
    mut ratio: impl FnMut(Complex64) -> Option<f64>,
) -> CheckResult {
    let quarter = (points.len() / 4).max(1);
    let mut worst = 0.0f64;
    let mut worst_quarter = 0.0f64;
    let mut used = 0usize;
    for (i, &z) in points.iter().enumerate() {
        if let Some(v) = ratio(z) {
            used += 1;
            worst = worst.max(v);
            if i < quarter {
                worst_quarter = worst_quarter.max(v);
            }
        }
    }
    CheckResult {
        name: name.to_string(),
        n_points: used,
        n_violations: 0,
        worst_ratio: worst,
        stability: if worst_quarter > 0.0 {
            worst / worst_quarter
        } else {
            f64::INFINITY
        },
        seed,
    }
}

/// Submean bound: `|f(z)|^p ω(z)^β ≤ M/(δ²τ(z)²) ∫_{D(δτ(z))} |f|^p ω^β dA`.
/// Reports the empirical `M`.
pub fn submean_check(
    model: &WeightModel,
    f: &TestFunction,
    beta: f64,
    p: f64,
    delta: f64,
    points: usize,
    seed: u64,
) -> Result<CheckResult> {
    check_hypotheses(model, delta, p)?;
    let sample = seeded_points(seed, points, 0.5, 0.99);
    let integrand =
        |w: Complex64| (p * f.eval(w).norm().max(1e-300).ln() - beta * model.phi(w.norm())).exp();
    Ok(sup_check(
        &format!("submean[{}, β={beta}, p={p}, δ={delta}]", f.name()),
        &sample,
        seed,
        |z| {
            let tau = model.tau(z.norm());
            let lhs = (p * f.eval(z).norm().max(1e-300).ln() - beta * model.phi(z.norm())).exp();
            let (integral, _) = disk_integral(model, integrand, z, delta * tau);
            (integral > 0.0).then(|| lhs * delta * delta * tau * tau / integral)
        },
    ))
}

/// Derivative submean bound:
/// `|f'(z)|^p e^{-φ(z)} ≤ M/τ(z)^{2+p} ∫_{D(δτ(z))} |f|^p e^{-φ} dA`.
pub fn deriv_submean_check(
    model: &WeightModel,
    f: &TestFunction,
    p: f64,
    delta: f64,
    points: usize,
    seed: u64,
) -> Result<CheckResult> {
    check_hypotheses(model, delta, p)?;
    let sample = seeded_points(seed, points, 0.5, 0.99);
    let integrand =
        |w: Complex64| (p * f.eval(w).norm().max(1e-300).ln() - model.phi(w.norm())).exp();
    Ok(sup_check(
        &format!("deriv-submean[{}, p={p}, δ={delta}]", f.name()),
        &sample,
        seed,
        |z| {
            let tau = model.tau(z.norm());
            let lhs = (p * f.deriv(z).norm().max(1e-300).ln() - model.phi(z.norm())).exp();
            let (integral, _) = disk_integral(model, integrand, z, delta * tau);
            (integral > 0.0).then(|| lhs * tau.powf(2.0 + p) / integral)
        },
    ))
}

/// Difference bound on close pairs (`|z - w| ≤ (δ/2)τ(z)`, both orientations):
/// `|f(z) - f(w)|^p e^{-φ(z)} ≤ M ρ_τ(z,w)^p/τ(z)² ∫_{D(δτ(z))} |f|^p e^{-φ}`.
/// `ρ_τ` in surrogate form by default; a mesh engine may be supplied.
pub fn difference_bound_check(
    model: &WeightModel,
    engine: Option<&GeodesicEngine>,
    f: &TestFunction,
    p: f64,
    delta: f64,
    n_pairs: usize,
    seed: u64,
) -> Result<CheckResult> {
    check_hypotheses(model, delta, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut pairs = Vec::with_capacity(n_pairs);
    while pairs.len() < n_pairs {
        let r = 0.5 + 0.48 * rng.gen::<f64>();
        let z = Complex64::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU);
        let reach = 0.5 * delta * model.tau(z.norm());
        let w = z + Complex64::from_polar(
            reach * rng.gen::<f64>(),
            rng.gen::<f64>() * std::f64::consts::TAU,
        );
        // keep pairs admissible in both orientations
        if (z - w).norm() <= 0.5 * delta * model.tau(w.norm()) && w.norm() < model.r_max() {
            pairs.push((z, w));
        }
    }
    difference_bound_check_pairs(model, engine, f, p, delta, &pairs, seed)
}

/// Same check on explicit pairs; pairs violating the closeness hypothesis in
/// either orientation are an error.
pub fn difference_bound_check_pairs(
    model: &WeightModel,
    engine: Option<&GeodesicEngine>,
    f: &TestFunction,
    p: f64,
    delta: f64,
    pairs: &[(Complex64, Complex64)],
    seed: u64,
) -> Result<CheckResult> {
    check_hypotheses(model, delta, p)?;
    for &(z, w) in pairs {
        if (z - w).norm() > 0.5 * delta * model.tau(z.norm()) {
            return Err(Error::PairOutOfRange {
                z: z.to_string(),
                w: w.to_string(),
                what: format!(
                    "|z-w| exceeds (δ/2)τ(z) = {}",
                    0.5 * delta * model.tau(z.norm())
                ),
            });
        }
    }
    let integrand =
        |w: Complex64| (p * f.eval(w).norm().max(1e-300).ln() - model.phi(w.norm())).exp();
    let quarter = (pairs.len() / 4).max(1);
    let mut worst = 0.0f64;
    let mut worst_quarter = 0.0f64;
    let mut used = 0usize;
    for (i, &(z0, w0)) in pairs.iter().enumerate() {
        // both orientations
        for (z, w) in [(z0, w0), (w0, z0)] {
            let tau = model.tau(z.norm());
            let rho = match engine {
                Some(e) => e
                    .dist_tau(z, w)
                    .map(|d| 1.0 - (-d.value).exp())
                    .unwrap_or_else(|_| surrogate_f(model, z, w)),
                None => surrogate_f(model, z, w),
            };
            if rho <= 0.0 {
                continue;
            }
            let lhs =
                (p * (f.eval(z) - f.eval(w)).norm().max(1e-300).ln() - model.phi(z.norm())).exp();
            let (integral, _) = disk_integral(model, integrand, z, delta * tau);
            if integral <= 0.0 {
                continue;
            }
            let m = lhs * tau * tau / (rho.powf(p) * integral);
            used += 1;
            worst = worst.max(m);
            if i < quarter {
                worst_quarter = worst_quarter.max(m);
            }
        }
    }
    Ok(CheckResult {
        name: format!("difference-bound[{}, p={p}, δ={delta}]", f.name()),
        n_points: used,
        n_violations: 0,
        worst_ratio: worst,
        stability: if worst_quarter > 0.0 {
            worst / worst_quarter
        } else {
            f64::INFINITY
        },
        seed,
    })
}

/// Potential stability along segments: for pairs whose certified `d_φ` bound
/// `|z - w|·max(φ'(|z|), φ'(|w|))` stays below `R`, the potential along the
/// segment moves by at most an `R`-scale constant:
/// `sup_s |φ(|z|) - φ(|z_s|)|` finite and stable. Also counts violations of
/// monotonicity in `s` for collinear radial pairs (where it is exact).
pub fn impot_check(
    model: &WeightModel,
    r_bound: f64,
    n_pairs: usize,
    seed: u64,
) -> Result<CheckResult> {
    if r_bound <= 0.0 {
        return Err(Error::HypothesisViolated("R must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1304);
    let mut worst = 0.0f64;
    let mut worst_quarter = 0.0f64;
    let mut violations = 0usize;
    let quarter = (n_pairs / 4).max(1);
    for i in 0..n_pairs {
        let r = 0.5 + 0.45 * rng.gen::<f64>();
        let z = Complex64::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU);
        let radial = i % 2 == 0;
        let reach = 0.9 * r_bound / model.dphi(z.norm());
        let dir = if radial {
            z / z.norm()
        } else {
            Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU)
        };
        let mut w = z + reach * rng.gen::<f64>() * dir;
        // certify the bound, shrinking if the far endpoint steepened φ'
        for _ in 0..32 {
            if w.norm() < model.r_max()
                && (z - w).norm() * model.dphi(z.norm()).max(model.dphi(w.norm())) < r_bound
            {
                break;
            }
            w = z + 0.5 * (w - z);
        }
        let mut sup = 0.0f64;
        let mut prev = 0.0f64;
        let mut monotone = true;
        for step in 0..=10 {
            let s = step as f64 / 10.0;
            let zs = (1.0 - s) * z + s * w;
            let v = (model.phi(z.norm()) - model.phi(zs.norm())).abs();
            sup = sup.max(v);
            if radial && v < prev - 1e-12 {
                monotone = false;
            }
            prev = v;
        }
        if radial && !monotone {
            violations += 1;
        }
        worst = worst.max(sup);
        if i < quarter {
            worst_quarter = worst_quarter.max(sup);
        }
    }
    Ok(CheckResult {
        name: format!("potential-stability[R={r_bound}]"),
        n_points: n_pairs,
        n_violations: violations,
        worst_ratio: worst,
        stability: if worst_quarter > 0.0 {
            worst / worst_quarter
        } else {
            f64::INFINITY
        },
        seed,
    })
}

/// Metric separation with explicit constants: among seeded pairs with mesh
/// `d_τ(z, w) ≥ 2δ(1 + tol)`, count violations of `|z - w| ≥ δ τ(z)`.
pub fn separation_check(
    model: &WeightModel,
    engine: &GeodesicEngine,
    level: u32,
    delta: f64,
    n_pairs: usize,
    seed: u64,
) -> Result<CheckResult> {
    if delta <= 0.0 || delta >= model.m_tau() {
        return Err(Error::HypothesisViolated(format!(
            "δ = {delta} outside (0, m_tau = {})",
            model.m_tau()
        )));
    }
    let tol = engine.config().tol_rel;
    let threshold = 2.0 * delta * (1.0 + tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x41);
    let mut kept = 0usize;
    let mut violations = 0usize;
    let mut worst = 0.0f64;
    for _ in 0..n_pairs {
        let max_r = 0.95f64.min(engine.config().params.coverage);
        let mut pt = || {
            let r = max_r * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU)
        };
        let (z, w) = (pt(), pt());
        // pairs below the threshold are filtered out by the truncated query
        if engine
            .dist_truncated(level, Metric::Tau, z, w, threshold)?
            .is_some()
        {
            continue;
        }
        kept += 1;
        let needed = delta * model.tau(z.norm());
        let sep = (z - w).norm();
        if sep < needed {
            violations += 1;
        }
        worst = worst.max(needed / sep.max(1e-300));
    }
    Ok(CheckResult {
        name: format!("separation[δ={delta}]"),
        n_points: kept,
        n_violations: violations,
        worst_ratio: worst,
        stability: 1.0,
        seed,
    })
}

/// Exponential decay of `e^{-d_τ}` against `(min τ / |z-w|)^M`: the empirical
/// `C(M) = sup e^{-d_τ(z,w)} (|z-w|/min τ)^M` over pairs in the nontrivial
/// regime `|z - w| ≥ min τ`, computed at two consecutive mesh levels;
/// `stability` is the between-level ratio.
pub fn exp_decay_check(
    model: &WeightModel,
    engine: &GeodesicEngine,
    level: u32,
    m_exponent: i32,
    n_pairs: usize,
    seed: u64,
) -> Result<CheckResult> {
    if level == 0 {
        return Err(Error::HypothesisViolated(
            "need level ≥ 1 to compare two refinement levels".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xdeca);
    let max_r = 0.9f64.min(engine.config().params.coverage);
    let mut pairs = Vec::with_capacity(n_pairs);
    while pairs.len() < n_pairs {
        let mut pt = || {
            let r = max_r * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU)
        };
        let (z, w) = (pt(), pt());
        let min_tau = model.tau(z.norm()).min(model.tau(w.norm()));
        if (z - w).norm() >= min_tau {
            pairs.push((z, w));
        }
    }
    let constant_at = |lvl: u32| -> Result<f64> {
        let mut c = 0.0f64;
        for &(z, w) in &pairs {
            let d = engine.dist_at_level(lvl, Metric::Tau, z, w)?;
            let min_tau = model.tau(z.norm()).min(model.tau(w.norm()));
            let factor = ((z - w).norm() / min_tau).powi(m_exponent);
            // deep in the tail the statistic is numerically zero either way
            if d < 40.0 {
                c = c.max((-d).exp() * factor);
            }
        }
        Ok(c)
    };
    let coarse = constant_at(level - 1)?;
    let fine = constant_at(level)?;
    Ok(CheckResult {
        name: format!("exp-decay[M={m_exponent}]"),
        n_points: pairs.len(),
        n_violations: 0,
        worst_ratio: fine,
        stability: if coarse > 0.0 && fine > 0.0 {
            (fine / coarse).max(coarse / fine)
        } else {
            f64::INFINITY
        },
        seed,
    })
}
