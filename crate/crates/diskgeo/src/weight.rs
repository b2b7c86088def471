//! Radial weights `ω(r) = exp(-φ(r))` and their derived quantities.
//!
//! A weight model carries the radial potential `φ` with two derivatives, the
//! Laplacian `Δφ(r) = φ''(r) + φ'(r)/r`, and the radius function
//! `τ = (Δφ)^{-1/2}` (the exact representative, so `τ² Δφ = 1` holds to
//! machine precision and can be asserted). Calibration constants `c1`, `c2`
//! are sampled estimates with a 1.05 safety factor; they only feed `m_τ`,
//! which gates admissible box and ball radii elsewhere.
//!
//! Weights are never evaluated directly near the boundary: `exp(-φ)`
//! underflows for the interesting families well before `r_max`, so all ratios
//! are formed in log space via [`WeightModel::log_weight_ratio`].

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Number of points in the deterministic calibration grid (≥ 10⁴).
const CALIBRATION_UNIFORM: usize = 4000;
const CALIBRATION_BOUNDARY: usize = 8192;

/// Inner edge of the calibration grid.
///
/// The exact representative `τ = (Δφ)^{-1/2}` of an exponential weight has
/// `τ(r) ~ sqrt(r)` at the origin, so its difference quotients blow up like
/// `r^{-1/2}` there. Sampling quotients down to r = 0 would make the Lipschitz
/// estimate `c2` grid-dependent and collapse `m_τ` (and with it every
/// admissible mesh spacing and box radius) toward zero, even though nothing
/// in the boundary theory depends on the origin. The calibration grid
/// therefore starts at a small positive radius.
const CALIBRATION_R_MIN: f64 = 0.02;

/// Default truncation radius for every limit procedure.
pub const DEFAULT_R_MAX: f64 = 1.0 - 1e-6;

/// Declarative description of a radial weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum WeightSpec {
    /// `φ(r) = a / (1 - r)^b` with `a, b > 0`. The workhorse family; `a = b = 1`
    /// gives `ω(z) = exp(-1/(1-|z|))`.
    ExpPower { a: f64, b: f64 },
    /// Standard-weight stand-in with `τ(r) = 1 - r` pinned directly and
    /// `φ(r) = -α log(1 - r)`. Exists only as an oracle for the metric layer;
    /// admissibility validation rejects it.
    LogProxy { alpha: f64 },
    /// Sampled potential interpolated by a monotone cubic.
    Custom(CustomWeight),
}

/// Sampled radial potential with a named interpolation rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CustomWeight {
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
    #[serde(default = "default_interpolation")]
    pub interpolation: String,
}

fn default_interpolation() -> String {
    "monotone-cubic".to_string()
}

impl WeightSpec {
    /// Parses the CLI grammar: `exp:a=1,b=1`, `logproxy:alpha=0`,
    /// `custom:@file.json`.
    pub fn parse(s: &str) -> Result<Self> {
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("weight spec `{s}` has no `:`")))?;
        match head {
            "exp" => {
                let mut a = None;
                let mut b = None;
                for part in rest.split(',') {
                    match part.split_once('=') {
                        Some(("a", v)) => a = Some(parse_f64(v)?),
                        Some(("b", v)) => b = Some(parse_f64(v)?),
                        _ => {
                            return Err(Error::InvalidSpec(format!(
                                "unknown exp parameter `{part}`"
                            )))
                        }
                    }
                }
                let (a, b) = (
                    a.ok_or_else(|| Error::InvalidSpec("exp weight needs a=".into()))?,
                    b.ok_or_else(|| Error::InvalidSpec("exp weight needs b=".into()))?,
                );
                if a <= 0.0 || b <= 0.0 {
                    return Err(Error::InvalidSpec(format!(
                        "exp weight needs a, b > 0 (got a={a}, b={b})"
                    )));
                }
                Ok(WeightSpec::ExpPower { a, b })
            }
            "logproxy" => {
                let v = rest
                    .strip_prefix("alpha=")
                    .ok_or_else(|| Error::InvalidSpec("logproxy needs alpha=".into()))?;
                let alpha = parse_f64(v)?;
                if alpha <= -1.0 {
                    return Err(Error::InvalidSpec("logproxy needs alpha > -1".into()));
                }
                Ok(WeightSpec::LogProxy { alpha })
            }
            "custom" => {
                let path = rest
                    .strip_prefix('@')
                    .ok_or_else(|| Error::InvalidSpec("custom weight needs @file.json".into()))?;
                let text = std::fs::read_to_string(path)?;
                let custom: CustomWeight = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidSpec(format!("bad custom weight json: {e}")))?;
                Ok(WeightSpec::Custom(custom))
            }
            _ => Err(Error::InvalidSpec(format!(
                "unknown weight family `{head}`"
            ))),
        }
    }

    /// Canonical string form, used for cache keys and report headers.
    pub fn canonical(&self) -> String {
        match self {
            WeightSpec::ExpPower { a, b } => format!("exp:a={a},b={b}"),
            WeightSpec::LogProxy { alpha } => format!("logproxy:alpha={alpha}"),
            WeightSpec::Custom(c) => {
                // embed the sample data so distinct files with equal content agree
                format!(
                    "custom:{}:{:?}:{:?}",
                    c.interpolation,
                    c.r.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
                    c.phi.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
                )
            }
        }
    }

    pub fn is_proxy(&self) -> bool {
        matches!(self, WeightSpec::LogProxy { .. })
    }
}

fn parse_f64(v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|e| Error::InvalidSpec(format!("bad number `{v}`: {e}")))
}

/// Monotone cubic Hermite interpolant (Fritsch–Carlson tangents).
#[derive(Debug, Clone, PartialEq)]
struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>, // tangent at each knot
}

impl MonotoneCubic {
    fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() < 3 || x.len() != y.len() {
            return Err(Error::InvalidSpec(
                "custom weight needs ≥ 3 matching (r, phi) samples".into(),
            ));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpec(
                "custom weight radii must be strictly increasing".into(),
            ));
        }
        let n = x.len();
        let mut d = vec![0.0; n - 1];
        for i in 0..n - 1 {
            d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        }
        let mut m = vec![0.0; n];
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            if d[i - 1] * d[i] <= 0.0 {
                m[i] = 0.0;
            } else {
                // harmonic mean keeps the interpolant monotone on each interval
                let w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
                let w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
                m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        Ok(MonotoneCubic { x, y, m })
    }

    fn segment(&self, r: f64) -> usize {
        match self.x.binary_search_by(|p| p.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.x.len() - 2),
        }
    }

    fn eval(&self, r: f64) -> f64 {
        let i = self.segment(r);
        let h = self.x[i + 1] - self.x[i];
        let t = (r - self.x[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.y[i] + h10 * h * self.m[i] + h01 * self.y[i + 1] + h11 * h * self.m[i + 1]
    }

    fn deriv(&self, r: f64) -> f64 {
        let i = self.segment(r);
        let h = self.x[i + 1] - self.x[i];
        let t = (r - self.x[i]) / h;
        let t2 = t * t;
        let d00 = (6.0 * t2 - 6.0 * t) / h;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = (-6.0 * t2 + 6.0 * t) / h;
        let d11 = 3.0 * t2 - 2.0 * t;
        d00 * self.y[i] + d10 * self.m[i] + d01 * self.y[i + 1] + d11 * self.m[i + 1]
    }

    fn deriv2(&self, r: f64) -> f64 {
        let i = self.segment(r);
        let h = self.x[i + 1] - self.x[i];
        let t = (r - self.x[i]) / h;
        let dd00 = (12.0 * t - 6.0) / (h * h);
        let dd10 = (6.0 * t - 4.0) / h;
        let dd01 = (-12.0 * t + 6.0) / (h * h);
        let dd11 = (6.0 * t - 2.0) / h;
        dd00 * self.y[i] + dd10 * self.m[i] + dd01 * self.y[i + 1] + dd11 * self.m[i + 1]
    }
}

#[derive(Debug, Clone)]
enum Kind {
    ExpPower { a: f64, b: f64 },
    LogProxy { alpha: f64 },
    Custom(MonotoneCubic),
}

/// A calibrated weight: `φ` and friends plus the sampled constants.
#[derive(Debug, Clone)]
pub struct WeightModel {
    spec: WeightSpec,
    kind: Kind,
    r_max: f64,
    c1: f64,
    c2: f64,
    m_tau: f64,
    tau_max: f64,
    r0: Option<f64>,
}

impl WeightModel {
    /// Builds and calibrates a weight on the truncated disk `[0, r_max]`.
    ///
    /// `c1` and `c2` are the maxima of `τ(r)/(1-r)` and of consecutive
    /// difference quotients of `τ` over the deterministic calibration grid,
    /// times a 1.05 safety factor; `r0` is the smallest grid radius past which
    /// `φ'·τ ≥ ½` holds on all remaining grid points.
    pub fn build(spec: WeightSpec, r_max: f64) -> Result<Self> {
        if !(0.9..1.0).contains(&r_max) {
            return Err(Error::InvalidSpec(format!(
                "r_max must lie in [0.9, 1) (got {r_max})"
            )));
        }
        let kind = match &spec {
            WeightSpec::ExpPower { a, b } => Kind::ExpPower { a: *a, b: *b },
            WeightSpec::LogProxy { alpha } => Kind::LogProxy { alpha: *alpha },
            WeightSpec::Custom(c) => {
                let cubic = MonotoneCubic::new(c.r.clone(), c.phi.clone())?;
                if *cubic.x.last().unwrap() < r_max {
                    return Err(Error::InvalidSpec(format!(
                        "custom weight samples end at {} but r_max = {r_max}",
                        cubic.x.last().unwrap()
                    )));
                }
                Kind::Custom(cubic)
            }
        };
        let mut model = WeightModel {
            spec,
            kind,
            r_max,
            c1: f64::NAN,
            c2: f64::NAN,
            m_tau: f64::NAN,
            tau_max: f64::NAN,
            r0: None,
        };
        model.calibrate()?;
        Ok(model)
    }

    fn calibrate(&mut self) -> Result<()> {
        let grid = calibration_grid(self.r_max);
        let mut c1: f64 = 0.0;
        let mut c2: f64 = 0.0;
        let mut tau_max: f64 = 0.0;
        let mut prev: Option<(f64, f64)> = None;
        let mut hinge: Vec<(f64, f64)> = Vec::with_capacity(grid.len());
        for &r in &grid {
            let tau = self.tau(r);
            for (value, what) in [
                (self.phi(r), "phi"),
                (self.dphi(r), "dphi"),
                (self.ddphi(r), "ddphi"),
                (tau, "tau"),
            ] {
                if !value.is_finite() {
                    return Err(Error::NonFiniteDerived { r, what });
                }
            }
            if tau <= 0.0 {
                return Err(Error::NotRadiusFunction { r, value: tau });
            }
            c1 = c1.max(tau / (1.0 - r));
            tau_max = tau_max.max(tau);
            if let Some((rp, tp)) = prev {
                c2 = c2.max((tau - tp).abs() / (r - rp));
            }
            prev = Some((r, tau));
            hinge.push((r, self.dphi(r) * tau));
        }
        self.c1 = 1.05 * c1;
        self.c2 = 1.05 * c2;
        // the calibration grid starts away from the origin; cover the gap so
        // the sup stays an upper bound for certified lower-bound uses
        for r in [0.0, 0.005, 0.01, 0.015] {
            tau_max = tau_max.max(self.tau(r));
        }
        self.tau_max = 1.05 * tau_max;
        self.m_tau = (1.0_f64).min(1.0 / self.c1).min(1.0 / self.c2) / 4.0;

        // smallest grid radius past which dphi * tau >= 1/2 everywhere after it
        let mut r0 = None;
        for &(r, v) in hinge.iter().rev() {
            if v >= 0.5 {
                r0 = Some(r);
            } else {
                break;
            }
        }
        self.r0 = r0;
        Ok(())
    }

    pub fn spec(&self) -> &WeightSpec {
        &self.spec
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// `min(1, 1/c1, 1/c2) / 4`; gates admissible ball and box radii.
    pub fn m_tau(&self) -> f64 {
        self.m_tau
    }

    /// Sampled sup of `τ` over the disk (with the safety factor); `|z-w|/τ_max`
    /// is then a certified lower bound for `d_τ(z, w)`.
    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    /// Radius past which `φ'·τ ≥ ½` held on the calibration grid, when it did.
    pub fn r0(&self) -> Option<f64> {
        self.r0
    }

    pub fn phi(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::ExpPower { a, b } => a * (1.0 - r).powf(-b),
            Kind::LogProxy { alpha } => -alpha * (1.0 - r).ln(),
            Kind::Custom(c) => c.eval(r),
        }
    }

    pub fn dphi(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::ExpPower { a, b } => a * b * (1.0 - r).powf(-b - 1.0),
            Kind::LogProxy { alpha } => alpha / (1.0 - r),
            Kind::Custom(c) => c.deriv(r),
        }
    }

    pub fn ddphi(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::ExpPower { a, b } => a * b * (b + 1.0) * (1.0 - r).powf(-b - 2.0),
            Kind::LogProxy { alpha } => alpha / (1.0 - r).powi(2),
            Kind::Custom(c) => c.deriv2(r),
        }
    }

    fn dddphi(&self, r: f64) -> Option<f64> {
        match &self.kind {
            Kind::ExpPower { a, b } => {
                Some(a * b * (b + 1.0) * (b + 2.0) * (1.0 - r).powf(-b - 3.0))
            }
            _ => None,
        }
    }

    /// `Δφ(r) = φ''(r) + φ'(r)/r` for `r > 0`; `+∞` at the origin whenever
    /// `φ'(0⁺) > 0` (the exact representative then has `τ(0) = 0`).
    pub fn laplacian(&self, r: f64) -> f64 {
        if r == 0.0 {
            let d = self.dphi(0.0);
            return if d.abs() < 1e-14 {
                2.0 * self.ddphi(0.0)
            } else {
                f64::INFINITY
            };
        }
        self.ddphi(r) + self.dphi(r) / r
    }

    /// The radius function. Exact representative `(Δφ)^{-1/2}` for admissible
    /// families; pinned to `1 - r` for the standard-weight proxy.
    pub fn tau(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::LogProxy { .. } => 1.0 - r,
            _ => {
                let lap = self.laplacian(r);
                if lap.is_infinite() {
                    0.0
                } else {
                    lap.powf(-0.5)
                }
            }
        }
    }

    /// `τ'(r)`: closed form where the third derivative exists, otherwise a
    /// scale-aware central difference.
    pub fn dtau(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::LogProxy { .. } => -1.0,
            _ => {
                if let Some(d3) = self.dddphi(r) {
                    if r > 1e-12 {
                        let lap = self.laplacian(r);
                        let dlap = d3 + (self.ddphi(r) * r - self.dphi(r)) / (r * r);
                        return -0.5 * dlap * lap.powf(-1.5);
                    }
                }
                let h = 1e-4 * (1.0 - r).max(1e-3).min(r.max(1e-3));
                (self.tau(r + h) - self.tau(r - h)) / (2.0 * h)
            }
        }
    }

    /// `log ω(r) = -φ(r)`.
    pub fn omega_log(&self, r: f64) -> f64 {
        -self.phi(r)
    }

    /// `log(ω(z)/ω(w)) = φ(|w|) - φ(|z|)`. The caller exponentiates only when
    /// safe; see [`crate::criteria`] for the saturating version.
    pub fn log_weight_ratio(&self, z_mod: f64, w_mod: f64) -> Result<f64> {
        for m in [z_mod, w_mod] {
            if m > self.r_max {
                return Err(Error::OutsideTruncation {
                    modulus: m,
                    r_max: self.r_max,
                });
            }
        }
        Ok(self.phi(w_mod) - self.phi(z_mod))
    }
}

/// Deterministic calibration grid: uniform midsection plus a boundary-graded
/// tail, ≥ 10⁴ points, identical across runs.
pub fn calibration_grid(r_max: f64) -> Vec<f64> {
    let mut grid = Vec::with_capacity(CALIBRATION_UNIFORM + CALIBRATION_BOUNDARY + 1);
    for i in 0..CALIBRATION_UNIFORM {
        let t = i as f64 / CALIBRATION_UNIFORM as f64;
        grid.push(CALIBRATION_R_MIN + (0.9 - CALIBRATION_R_MIN) * t);
    }
    // geometric in 1 - r from 0.1 down to 1 - r_max
    let ratio = ((1.0 - r_max) / 0.1).powf(1.0 / CALIBRATION_BOUNDARY as f64);
    let mut gap = 0.1;
    for _ in 0..CALIBRATION_BOUNDARY {
        grid.push(1.0 - gap);
        gap *= ratio;
    }
    grid.push(r_max);
    grid
}

/// Midpoints of the calibration grid: same range, disjoint points.
pub fn validation_grid(r_max: f64) -> Vec<f64> {
    let g = calibration_grid(r_max);
    g.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

/// One admissibility condition with its sampled evidence.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionCheck {
    pub name: String,
    pub pass: bool,
    pub evidence: Vec<(f64, f64)>,
}

/// Outcome of the class-membership validation.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub weight: String,
    /// True when the spec is a standard-weight proxy and was rejected outright.
    pub rejected_not_class_w: bool,
    pub conditions: Vec<ConditionCheck>,
    pub notes: Vec<String>,
    pub all_pass: bool,
}

/// Number of evidence samples kept per condition.
const EVIDENCE_KEEP: usize = 12;

/// Validates the admissibility conditions for fast weights on a boundary
/// schedule: `A(r) = φ(r)/log(1/(1-r))` non-decreasing and unbounded, `τ` and
/// `-τ'` decreasing to zero, one of the auxiliary limit conditions trending to
/// its limit, `φ'·τ ≥ ½` past `r0`, and `(1/φ')' → 0`.
///
/// Failures are report entries, not errors. Proxies are rejected with a flag.
pub fn validate_class_w(model: &WeightModel) -> ValidationReport {
    let weight = model.spec().canonical();
    if model.spec().is_proxy() {
        return ValidationReport {
            weight,
            rejected_not_class_w: true,
            conditions: Vec::new(),
            notes: vec!["standard-weight proxy: not a fast weight, oracle use only".into()],
            all_pass: false,
        };
    }

    // boundary schedule 1 - 2^-k, clamped to the truncated disk
    let k_max = (-(1.0 - model.r_max()).log2()).floor() as i32;
    let radii: Vec<f64> = (3..=k_max).map(|k| 1.0 - 2f64.powi(-k)).collect();

    let mut conditions = Vec::new();

    let a_fn = |r: f64| model.phi(r) / (1.0 / (1.0 - r)).ln();
    conditions.push(check_trend(
        "A-nondecreasing-unbounded",
        &radii,
        a_fn,
        |values| {
            let nondecreasing = values.windows(2).all(|w| w[1] >= w[0] - 1e-9 * w[0].abs());
            let unbounded = values.last().unwrap() > &(10.0 * values[0].max(1e-300));
            nondecreasing && unbounded
        },
    ));

    conditions.push(check_trend(
        "tau-decreasing-to-zero",
        &radii,
        |r| model.tau(r),
        |v| decreasing(v) && v.last().unwrap() < &(1e-2 * v[0]),
    ));

    conditions.push(check_trend(
        "neg-dtau-decreasing-to-zero",
        &radii,
        |r| -model.dtau(r),
        |v| v.iter().all(|&x| x > 0.0) && decreasing(v) && v.last().unwrap() < &(0.5 * v[0]),
    ));

    // auxiliary condition: either branch suffices
    let branch_a = check_trend(
        "aux-limit-dtau-log",
        &radii,
        |r| model.dtau(r) * (1.0 / model.tau(r)).ln(),
        |v| v.iter().map(|x| x.abs()).last().unwrap() < 0.05 * v[0].abs().max(1e-300),
    );
    let branch_b = check_trend(
        "aux-limit-tau-powerlaw",
        &radii,
        |r| model.tau(r) / (1.0 - r).powi(2),
        |v| v.last().unwrap() > &(10.0 * v[0]),
    );
    let aux_pass = branch_a.pass || branch_b.pass;
    let mut aux = if branch_a.pass { branch_a } else { branch_b };
    aux.pass = aux_pass;
    conditions.push(aux);

    // hinge condition past r0
    let r0 = model.r0();
    let hinge_evidence: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| (r, model.dphi(r) * model.tau(r)))
        .collect();
    conditions.push(ConditionCheck {
        name: "dphi-tau-at-least-half-past-r0".into(),
        pass: r0.is_some()
            && hinge_evidence
                .iter()
                .filter(|(r, _)| Some(*r) >= r0)
                .all(|(_, v)| *v >= 0.5),
        evidence: thin(&hinge_evidence),
    });

    conditions.push(check_trend(
        "inverse-dphi-derivative-to-zero",
        &radii,
        |r| model.ddphi(r) / model.dphi(r).powi(2),
        |v| v.last().unwrap().abs() < 0.05 * v[0].abs().max(1e-300),
    ));

    let all_pass = conditions.iter().all(|c| c.pass);
    ValidationReport {
        weight,
        rejected_not_class_w: false,
        conditions,
        notes: vec![
            "near-boundary validation only; the induced A(r) may vanish at r = 0 for power \
             potentials, which is reported, not failed"
                .into(),
        ],
        all_pass,
    }
}

fn decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs())
}

fn check_trend(
    name: &str,
    radii: &[f64],
    f: impl Fn(f64) -> f64,
    judge: impl Fn(&[f64]) -> bool,
) -> ConditionCheck {
    let values: Vec<f64> = radii.iter().map(|&r| f(r)).collect();
    let evidence: Vec<(f64, f64)> = radii.iter().copied().zip(values.iter().copied()).collect();
    ConditionCheck {
        name: name.into(),
        pass: judge(&values),
        evidence: thin(&evidence),
    }
}

fn thin(evidence: &[(f64, f64)]) -> Vec<(f64, f64)> {
    if evidence.len() <= EVIDENCE_KEEP {
        return evidence.to_vec();
    }
    let step = evidence.len() as f64 / EVIDENCE_KEEP as f64;
    (0..EVIDENCE_KEEP)
        .map(|i| evidence[(i as f64 * step) as usize])
        .chain(std::iter::once(*evidence.last().unwrap()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp11() -> WeightModel {
        WeightModel::build(WeightSpec::ExpPower { a: 1.0, b: 1.0 }, DEFAULT_R_MAX).unwrap()
    }

    #[test]
    fn exp_power_closed_forms() {
        let m = exp11();
        assert!((m.phi(0.5) - 2.0).abs() < 1e-12);
        assert!((m.dphi(0.5) - 4.0).abs() < 1e-12);
        let r: f64 = 0.3;
        let expected = 2.0 / (1.0 - r).powi(3) + 1.0 / (r * (1.0 - r).powi(2));
        assert!((m.laplacian(r) - expected).abs() / expected < 1e-14);
    }

    #[test]
    fn tau_boundary_asymptotics() {
        // tau(r) / (1-r)^{3/2} -> 1/sqrt(2)
        let m = exp11();
        let r = 0.999;
        let ratio = m.tau(r) / (1.0 - r).powf(1.5);
        assert!((ratio - 1.0 / 2f64.sqrt()).abs() / (1.0 / 2f64.sqrt()) < 0.05);
    }

    #[test]
    fn logproxy_tau_is_one_minus_r() {
        let m = WeightModel::build(WeightSpec::LogProxy { alpha: 0.0 }, DEFAULT_R_MAX).unwrap();
        for r in [0.0, 0.25, 0.7, 0.95] {
            assert_eq!(m.tau(r), 1.0 - r);
        }
    }

    #[test]
    fn log_ratio_examples() {
        let m = exp11();
        assert_eq!(m.log_weight_ratio(0.3, 0.3).unwrap(), 0.0);
        assert!((m.log_weight_ratio(0.9, 0.5).unwrap() + 8.0).abs() < 1e-12);
        assert!((m.log_weight_ratio(0.9, 0.95).unwrap() - 10.0).abs() < 1e-9);
        assert!(m.log_weight_ratio(0.9999999, 0.5).is_err());
    }

    #[test]
    fn hinge_value_near_boundary() {
        // dphi * tau at 0.99 ≈ (1-r)^{-1/2}/sqrt(2) ≈ 7.05
        let m = exp11();
        let v = m.dphi(0.99) * m.tau(0.99);
        assert!((v - 7.05).abs() < 0.1, "got {v}");
        assert!(m.r0().is_some());
    }

    #[test]
    fn proxy_rejected_by_validation() {
        let m = WeightModel::build(WeightSpec::LogProxy { alpha: 0.0 }, DEFAULT_R_MAX).unwrap();
        let report = validate_class_w(&m);
        assert!(report.rejected_not_class_w);
        assert!(!report.all_pass);
    }

    #[test]
    fn exp_power_passes_validation() {
        let report = validate_class_w(&exp11());
        assert!(!report.rejected_not_class_w);
        for c in &report.conditions {
            assert!(c.pass, "condition {} failed", c.name);
        }
        assert!(report.all_pass);
    }

    #[test]
    fn parse_roundtrip() {
        let s = WeightSpec::parse("exp:a=1,b=1").unwrap();
        assert_eq!(s, WeightSpec::ExpPower { a: 1.0, b: 1.0 });
        let s = WeightSpec::parse("logproxy:alpha=0").unwrap();
        assert_eq!(s, WeightSpec::LogProxy { alpha: 0.0 });
        assert!(WeightSpec::parse("exp:a=-1,b=1").is_err());
        assert!(WeightSpec::parse("nope:1").is_err());
    }
}
