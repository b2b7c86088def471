//! Shared report types: trend-classified limit profiles, verdicts, run
//! configuration echoed into every artifact.

use serde::{Deserialize, Serialize};

/// Thresholds used by every trend classification; always echoed in reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// A tail below this (with a decreasing log-slope) classifies as `ToZero`.
    pub eps_zero: f64,
    /// Values are saturated here; reaching it classifies as `ToInfinity`.
    pub cap: f64,
    /// Boundary contact threshold for the tail limsup of `τ(z)/τ(φ(z))`.
    pub eps_f: f64,
    /// Number of boundary angles sampled.
    pub n_angles: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            eps_zero: 1e-4,
            cap: 1e6,
            eps_f: 1e-3,
            n_angles: 64,
        }
    }
}

/// Classification of a radial value schedule approaching the boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Trend {
    ToZero,
    Bounded { sup: f64 },
    ToInfinity,
    Inconclusive,
}

/// A sampled limit expression along a boundary-approaching schedule, with the
/// statistics the classification was based on.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitProfile {
    /// `(r, value)` samples, innermost first. Radii are the moduli of the
    /// schedule base points.
    pub samples: Vec<(f64, f64)>,
    pub trend: Trend,
    /// Median of the last three (valid) values.
    pub tail_median: f64,
    /// Mean slope of `log value` against `-log(1 - r)` over the tail.
    pub log_slope: f64,
    /// True when the schedule was cut short (symbol left the truncated disk,
    /// mesh coverage ended, or estimates fell below the detection floor).
    pub truncated: bool,
}

impl LimitProfile {
    /// Classifies a schedule of non-negative values.
    ///
    /// `ToZero` needs a small tail *and* a decreasing trend; `ToInfinity`
    /// needs the saturation cap to be reached; `Bounded` needs the last four
    /// values inside a factor-2 band. Anything else is `Inconclusive`.
    pub fn classify(samples: Vec<(f64, f64)>, truncated: bool, th: &Thresholds) -> LimitProfile {
        assert!(!samples.is_empty(), "empty profile");
        let values: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let tail_median = median_of_tail(&values, 3);
        let log_slope = tail_log_slope(&samples);

        let trend = if values.iter().any(|&v| v >= th.cap) {
            Trend::ToInfinity
        } else if tail_median < th.eps_zero && log_slope <= 1e-9 {
            Trend::ToZero
        } else if banded(&values, 4, 2.0) {
            Trend::Bounded {
                sup: values.iter().cloned().fold(0.0, f64::max),
            }
        } else {
            Trend::Inconclusive
        };
        LimitProfile {
            samples,
            trend,
            tail_median,
            log_slope,
            truncated,
        }
    }

    pub fn is_to_zero(&self) -> bool {
        self.trend == Trend::ToZero
    }
}

fn median_of_tail(values: &[f64], n: usize) -> f64 {
    let tail: Vec<f64> = values.iter().rev().take(n).cloned().collect();
    let mut t = tail;
    t.sort_by(|a, b| a.partial_cmp(b).unwrap());
    t[t.len() / 2]
}

fn tail_log_slope(samples: &[(f64, f64)]) -> f64 {
    let tail: Vec<&(f64, f64)> = samples.iter().rev().take(4).collect();
    if tail.len() < 2 {
        return 0.0;
    }
    let mut num = 0.0;
    let mut cnt = 0.0;
    for w in tail.windows(2) {
        // reversed order: w[0] is the outermost of the pair
        let (r_out, v_out) = *w[0];
        let (r_in, v_in) = *w[1];
        let dx = -(1.0 - r_out).ln() + (1.0 - r_in).ln();
        if dx <= 0.0 {
            continue;
        }
        let lv_out = v_out.max(1e-300).ln();
        let lv_in = v_in.max(1e-300).ln();
        num += (lv_out - lv_in) / dx;
        cnt += 1.0;
    }
    if cnt == 0.0 {
        0.0
    } else {
        num / cnt
    }
}

fn banded(values: &[f64], n: usize, factor: f64) -> bool {
    let tail: Vec<f64> = values.iter().rev().take(n).cloned().collect();
    let max = tail.iter().cloned().fold(f64::MIN, f64::max);
    let min = tail.iter().cloned().fold(f64::MAX, f64::min);
    min > 0.0 && max / min <= factor
}

/// Three-valued outcome of a criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictStatus {
    Satisfied,
    Violated,
    Inconclusive,
}

/// A criterion verdict with the numeric evidence behind it.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    /// Distance from the decision boundary; positive unless inconclusive.
    pub margin: f64,
    pub reason: String,
    pub profiles: Vec<LimitProfile>,
    /// Boundary angles (radians) the profiles were taken at.
    pub boundary_angles: Vec<f64>,
}

impl Verdict {
    pub fn status_exit_code(&self) -> i32 {
        match self.status {
            VerdictStatus::Satisfied => 0,
            VerdictStatus::Violated => 2,
            VerdictStatus::Inconclusive => 3,
        }
    }
}

/// Fully-serialized configuration echoed into every output artifact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub tool_version: String,
    pub weight: String,
    pub maps: Vec<String>,
    pub r_max: f64,
    pub tol_rel: f64,
    pub max_level: u32,
    pub seed: u64,
    pub thresholds: Thresholds,
}

impl RunConfig {
    pub fn new(weight: &str, maps: Vec<String>) -> Self {
        RunConfig {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            weight: weight.to_string(),
            maps,
            r_max: crate::weight::DEFAULT_R_MAX,
            tol_rel: 0.01,
            max_level: 9,
            seed: 7,
            thresholds: Thresholds::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radii() -> Vec<f64> {
        (3..=19).map(|k| 1.0 - 2f64.powi(-k)).collect()
    }

    #[test]
    fn classify_decay() {
        let samples: Vec<(f64, f64)> = radii().iter().map(|&r| (r, 1.0 - r)).collect();
        let p = LimitProfile::classify(samples, false, &Thresholds::default());
        assert_eq!(p.trend, Trend::ToZero);
        // a slow decay that never enters the zero band stays inconclusive
        let slow: Vec<(f64, f64)> = radii().iter().map(|&r| (r, (1.0 - r).sqrt())).collect();
        let p = LimitProfile::classify(slow, false, &Thresholds::default());
        assert_eq!(p.trend, Trend::Inconclusive);
    }

    #[test]
    fn classify_constant() {
        let samples: Vec<(f64, f64)> = radii().iter().map(|&r| (r, 1.0)).collect();
        let p = LimitProfile::classify(samples, false, &Thresholds::default());
        assert!(matches!(p.trend, Trend::Bounded { .. }));
    }

    #[test]
    fn classify_blowup() {
        let samples: Vec<(f64, f64)> = radii()
            .iter()
            .map(|&r| (r, (1.0 / (1.0 - r)).exp().min(1e6)))
            .collect();
        let p = LimitProfile::classify(samples, false, &Thresholds::default());
        assert_eq!(p.trend, Trend::ToInfinity);
    }

    #[test]
    fn small_but_rising_is_not_to_zero() {
        let samples: Vec<(f64, f64)> = radii()
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, 1e-8 * (i as f64 + 1.0).exp2()))
            .collect();
        let p = LimitProfile::classify(samples, false, &Thresholds::default());
        assert_ne!(p.trend, Trend::ToZero);
    }
}
