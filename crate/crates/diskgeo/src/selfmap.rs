//! Holomorphic self-maps of the disk as expression trees with exact
//! derivatives, plus angular-derivative estimation on Stolz schedules.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Error, Result};

/// Expression tree of holomorphic maps. Every constructor keeps an exact
/// symbolic derivative via the chain and product rules.
#[derive(Debug, Clone, PartialEq)]
pub enum MapExpr {
    Identity,
    /// `z ↦ c z`, `|c| ≤ 1`.
    Scale(Complex64),
    /// `z ↦ a z + b`.
    Affine {
        a: Complex64,
        b: Complex64,
    },
    /// `z ↦ (a + z) / (1 + conj(a) z)`, `|a| < 1`.
    Moebius {
        a: Complex64,
    },
    /// `z ↦ z^n`, `n ≥ 1`.
    Monomial(u32),
    /// `z ↦ z + c (1 - z)^k`, `c > 0`, `k ≥ 2`: fixes the boundary point 1 and
    /// pulls the rest of the circle strictly inside (for small `c`).
    BoundaryPerturb {
        c: f64,
        k: u32,
    },
    /// Pointwise convex combination `(1-t)·left + t·right`.
    Convex {
        t: f64,
        left: Box<MapExpr>,
        right: Box<MapExpr>,
    },
    /// `outer ∘ inner`.
    Compose {
        outer: Box<MapExpr>,
        inner: Box<MapExpr>,
    },
}

impl MapExpr {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            MapExpr::Identity => z,
            MapExpr::Scale(c) => c * z,
            MapExpr::Affine { a, b } => a * z + b,
            MapExpr::Moebius { a } => (a + z) / (Complex64::new(1.0, 0.0) + a.conj() * z),
            MapExpr::Monomial(n) => z.powu(*n),
            MapExpr::BoundaryPerturb { c, k } => z + c * (Complex64::new(1.0, 0.0) - z).powu(*k),
            MapExpr::Convex { t, left, right } => (1.0 - t) * left.eval(z) + *t * right.eval(z),
            MapExpr::Compose { outer, inner } => outer.eval(inner.eval(z)),
        }
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        match self {
            MapExpr::Identity => Complex64::new(1.0, 0.0),
            MapExpr::Scale(c) => *c,
            MapExpr::Affine { a, .. } => *a,
            MapExpr::Moebius { a } => {
                let denom = Complex64::new(1.0, 0.0) + a.conj() * z;
                (Complex64::new(1.0 - a.norm_sqr(), 0.0)) / (denom * denom)
            }
            MapExpr::Monomial(n) => (*n as f64) * z.powu(n - 1),
            MapExpr::BoundaryPerturb { c, k } => {
                Complex64::new(1.0, 0.0)
                    - c * (*k as f64) * (Complex64::new(1.0, 0.0) - z).powu(k - 1)
            }
            MapExpr::Convex { t, left, right } => (1.0 - t) * left.deriv(z) + *t * right.deriv(z),
            MapExpr::Compose { outer, inner } => outer.deriv(inner.eval(z)) * inner.deriv(z),
        }
    }

    /// Parses the CLI grammar: `id`, `scale:0.5`, `affine:0.5,0.5`,
    /// `moebius:0.5`, `mono:2`, `perturb:c=0.05,k=3`,
    /// `convex:t=0.3(<m1>)(<m2>)`, `comp:(<m1>)(<m2>)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "id" {
            return Ok(MapExpr::Identity);
        }
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("map spec `{s}` has no `:`")))?;
        match head {
            "scale" => Ok(MapExpr::Scale(Complex64::new(num(rest)?, 0.0))),
            "affine" => {
                let (a, b) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidSpec("affine needs a,b".into()))?;
                Ok(MapExpr::Affine {
                    a: Complex64::new(num(a)?, 0.0),
                    b: Complex64::new(num(b)?, 0.0),
                })
            }
            "moebius" => Ok(MapExpr::Moebius {
                a: Complex64::new(num(rest)?, 0.0),
            }),
            "mono" => {
                let n: u32 = rest
                    .trim()
                    .parse()
                    .map_err(|e| Error::InvalidSpec(format!("bad monomial degree: {e}")))?;
                if n == 0 {
                    return Err(Error::InvalidSpec("monomial degree must be ≥ 1".into()));
                }
                Ok(MapExpr::Monomial(n))
            }
            "perturb" => {
                let mut c = None;
                let mut k = None;
                for part in rest.split(',') {
                    match part.split_once('=') {
                        Some(("c", v)) => c = Some(num(v)?),
                        Some(("k", v)) => {
                            k = Some(v.trim().parse::<u32>().map_err(|e| {
                                Error::InvalidSpec(format!("bad perturb order: {e}"))
                            })?)
                        }
                        _ => {
                            return Err(Error::InvalidSpec(format!(
                                "unknown perturb parameter `{part}`"
                            )))
                        }
                    }
                }
                let (c, k) = (
                    c.ok_or_else(|| Error::InvalidSpec("perturb needs c=".into()))?,
                    k.ok_or_else(|| Error::InvalidSpec("perturb needs k=".into()))?,
                );
                if c <= 0.0 || k < 2 {
                    return Err(Error::InvalidSpec("perturb needs c > 0, k ≥ 2".into()));
                }
                Ok(MapExpr::BoundaryPerturb { c, k })
            }
            "convex" => {
                let t_part = rest
                    .split('(')
                    .next()
                    .and_then(|p| p.strip_prefix("t="))
                    .ok_or_else(|| Error::InvalidSpec("convex needs t=".into()))?;
                let t = num(t_part)?;
                if !(0.0..=1.0).contains(&t) {
                    return Err(Error::InvalidSpec("convex needs t in [0, 1]".into()));
                }
                let groups = paren_groups(rest)?;
                if groups.len() != 2 {
                    return Err(Error::InvalidSpec("convex needs two (map) groups".into()));
                }
                Ok(MapExpr::Convex {
                    t,
                    left: Box::new(MapExpr::parse(groups[0])?),
                    right: Box::new(MapExpr::parse(groups[1])?),
                })
            }
            "comp" => {
                let groups = paren_groups(rest)?;
                if groups.len() != 2 {
                    return Err(Error::InvalidSpec("comp needs two (map) groups".into()));
                }
                Ok(MapExpr::Compose {
                    outer: Box::new(MapExpr::parse(groups[0])?),
                    inner: Box::new(MapExpr::parse(groups[1])?),
                })
            }
            _ => Err(Error::InvalidSpec(format!("unknown map family `{head}`"))),
        }
    }

    pub fn canonical(&self) -> String {
        match self {
            MapExpr::Identity => "id".into(),
            MapExpr::Scale(c) => format!("scale:{}", fmt_c(*c)),
            MapExpr::Affine { a, b } => format!("affine:{},{}", fmt_c(*a), fmt_c(*b)),
            MapExpr::Moebius { a } => format!("moebius:{}", fmt_c(*a)),
            MapExpr::Monomial(n) => format!("mono:{n}"),
            MapExpr::BoundaryPerturb { c, k } => format!("perturb:c={c},k={k}"),
            MapExpr::Convex { t, left, right } => {
                format!("convex:t={t}({})({})", left.canonical(), right.canonical())
            }
            MapExpr::Compose { outer, inner } => {
                format!("comp:({})({})", outer.canonical(), inner.canonical())
            }
        }
    }

    /// Convex interpolation `(1-t)·self + t·other` as a new map.
    pub fn interpolate(&self, other: &MapExpr, t: f64) -> MapExpr {
        MapExpr::Convex {
            t,
            left: Box::new(self.clone()),
            right: Box::new(other.clone()),
        }
    }

    /// Rigorous structural upper bound for `sup_{|z| ≤ s} |φ(z)|`, built from
    /// the triangle inequality node by node (exact for Möbius factors).
    pub fn image_bound(&self, s: f64) -> f64 {
        match self {
            MapExpr::Identity => s,
            MapExpr::Scale(c) => c.norm() * s,
            MapExpr::Affine { a, b } => a.norm() * s + b.norm(),
            MapExpr::Moebius { a } => (a.norm() + s) / (1.0 + a.norm() * s),
            MapExpr::Monomial(n) => s.powi(*n as i32),
            MapExpr::BoundaryPerturb { c, k } => s + c * (1.0 + s).powi(*k as i32),
            MapExpr::Convex { t, left, right } => {
                (1.0 - t) * left.image_bound(s) + t * right.image_bound(s)
            }
            MapExpr::Compose { outer, inner } => outer.image_bound(inner.image_bound(s).min(1.0)),
        }
    }
}

fn num(v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|e| Error::InvalidSpec(format!("bad number `{v}`: {e}")))
}

fn fmt_c(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// Splits `...(group)(group)...` into the top-level balanced groups.
fn paren_groups(s: &str) -> Result<Vec<&str>> {
    let mut groups = Vec::new();
    let bytes = s.as_bytes();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => {
                if depth == 0 {
                    start = i + 1;
                }
                depth += 1;
            }
            b')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::InvalidSpec(format!("unbalanced parens in `{s}`")))?;
                if depth == 0 {
                    groups.push(&s[start..i]);
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::InvalidSpec(format!("unbalanced parens in `{s}`")));
    }
    Ok(groups)
}

/// Result of the sampled self-map check.
#[derive(Debug, Clone, Serialize)]
pub struct SelfMapCheck {
    pub passes: bool,
    pub sup_modulus: f64,
    /// A sampled point with `|φ(z)| ≥ 1 - 1e-9`, when the check fails.
    pub witness: Option<(f64, f64)>,
}

/// Samples `|φ(z)|` over a seeded grid of `n_samples` interior points plus a
/// deterministic ring at the truncation radius; passes when the sup stays
/// below `1 - 1e-9`.
pub fn check_selfmap(map: &MapExpr, n_samples: usize, seed: u64, r_max: f64) -> SelfMapCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sup = 0.0_f64;
    let mut arg = Complex64::new(0.0, 0.0);
    let consider = |z: Complex64, sup: &mut f64, arg: &mut Complex64| {
        let m = map.eval(z).norm();
        if m > *sup {
            *sup = m;
            *arg = z;
        }
    };
    for _ in 0..n_samples {
        let r = r_max * rng.gen::<f64>().sqrt();
        let th = rng.gen::<f64>() * std::f64::consts::TAU;
        consider(Complex64::from_polar(r, th), &mut sup, &mut arg);
    }
    // the sup of a holomorphic map lives at the rim: sweep it densely
    let rim = 4096;
    for j in 0..rim {
        let th = j as f64 * std::f64::consts::TAU / rim as f64;
        consider(Complex64::from_polar(r_max, th), &mut sup, &mut arg);
    }
    let passes = sup < 1.0 - 1e-9;
    SelfMapCheck {
        passes,
        sup_modulus: sup,
        witness: if passes { None } else { Some((arg.re, arg.im)) },
    }
}

/// Classification bands for the angular-derivative estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BetaClass {
    LessThanOne,
    One,
    GreaterThanOne,
    Infinite,
    Inconclusive,
}

/// Radial/Stolz sampling schedule at one boundary point.
#[derive(Debug, Clone)]
pub struct StolzSchedule {
    pub zeta: Complex64,
    pub alpha: f64,
    pub radii: Vec<f64>,
    pub rays: usize,
    r_max: f64,
}

impl StolzSchedule {
    /// Radii `1 - 2^{-k}` for `k = k_min..=K` with `1 - 2^{-K} ≤ r_max`;
    /// `rays` rays spread inside the aperture-`alpha` nontangential region.
    pub fn new(zeta: Complex64, alpha: f64, rays: usize, r_max: f64) -> StolzSchedule {
        assert!(alpha > 1.0, "aperture must exceed 1");
        let zeta = zeta / zeta.norm();
        let k_max = (-(1.0 - r_max).log2()).floor() as i32;
        let radii = (3..=k_max).map(|k| 1.0 - 2f64.powi(-k)).collect();
        StolzSchedule {
            zeta,
            alpha,
            radii,
            rays: rays.max(1),
            r_max,
        }
    }

    pub fn for_angle(angle: f64, alpha: f64, rays: usize, r_max: f64) -> StolzSchedule {
        StolzSchedule::new(Complex64::from_polar(1.0, angle), alpha, rays, r_max)
    }

    /// Sample points of ray `m` keyed by schedule radius (innermost first).
    /// Points that would leave the truncated disk or the nontangential region
    /// are dropped.
    pub fn ray_samples(&self, m: usize) -> Vec<(f64, Complex64)> {
        let theta_max = (1.0 / self.alpha).acos();
        let theta = if self.rays == 1 {
            0.0
        } else {
            -0.9 * theta_max + 1.8 * theta_max * (m as f64) / ((self.rays - 1) as f64)
        };
        let dir = Complex64::from_polar(1.0, theta);
        self.radii
            .iter()
            .filter_map(|&r| {
                let z = self.zeta * (Complex64::new(1.0, 0.0) - (1.0 - r) * dir);
                let inside = z.norm() <= self.r_max;
                let stolz = (z - self.zeta).norm() < self.alpha * (1.0 - z.norm());
                (inside && stolz).then_some((r, z))
            })
            .collect()
    }

    /// Sample points of ray `m` without the schedule radii.
    pub fn ray_points(&self, m: usize) -> Vec<Complex64> {
        self.ray_samples(m).into_iter().map(|(_, z)| z).collect()
    }
}

/// Angular-derivative profile at one boundary point.
#[derive(Debug, Clone, Serialize)]
pub struct BetaProfile {
    pub angle: f64,
    /// `(r, (1-|φ(z)|)/(1-|z|))` along each ray.
    pub rays: Vec<Vec<(f64, f64)>>,
    /// Min over rays of the last-three-radii median: a liminf stand-in.
    pub tail_estimate: f64,
    pub class: BetaClass,
}

/// Estimates `β_φ(ζ) = liminf (1-|φ(z)|)/(1-|z|)` on a Stolz schedule.
///
/// The liminf is approximated by the min over rays of the median of the last
/// three radii, which is robust to oscillation without overclaiming a limit.
pub fn angular_derivative(map: &MapExpr, schedule: &StolzSchedule) -> BetaProfile {
    let mut rays = Vec::with_capacity(schedule.rays);
    let mut tail = f64::INFINITY;
    for m in 0..schedule.rays {
        let pts = schedule.ray_points(m);
        let mut series = Vec::with_capacity(pts.len());
        for z in pts {
            let w = map.eval(z);
            series.push((z.norm(), (1.0 - w.norm()) / (1.0 - z.norm())));
        }
        if series.len() >= 3 {
            let mut last: Vec<f64> = series.iter().rev().take(3).map(|p| p.1).collect();
            last.sort_by(|a, b| a.partial_cmp(b).unwrap());
            tail = tail.min(last[1]);
        }
        rays.push(series);
    }
    let class = if !tail.is_finite() {
        BetaClass::Inconclusive
    } else if tail < 0.99 {
        BetaClass::LessThanOne
    } else if tail <= 1.01 {
        BetaClass::One
    } else if tail > 1e3 {
        BetaClass::Infinite
    } else {
        BetaClass::GreaterThanOne
    };
    BetaProfile {
        angle: schedule.zeta.arg(),
        rays,
        tail_estimate: tail,
        class,
    }
}

/// Membership in the horodisk-like region `E(ζ, k) = {z : |ζ-z|² ≤ k(1-|z|²)}`.
pub fn region_e(zeta: Complex64, k: f64, z: Complex64) -> bool {
    (zeta - z).norm_sqr() <= k * (1.0 - z.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    const R_MAX: f64 = 1.0 - 1e-6;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_and_deriv_examples() {
        let z = c(0.3, 0.1);
        assert_eq!(MapExpr::Identity.eval(z), z);
        assert_eq!(MapExpr::Identity.deriv(z), c(1.0, 0.0));

        let half = MapExpr::Affine {
            a: c(0.5, 0.0),
            b: c(0.5, 0.0),
        };
        assert!((half.eval(c(0.9, 0.0)) - c(0.95, 0.0)).norm() < 1e-15);
        assert_eq!(half.deriv(c(0.9, 0.0)), c(0.5, 0.0));

        let moeb = MapExpr::Moebius { a: c(0.5, 0.0) };
        assert!((moeb.eval(c(0.0, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((moeb.deriv(c(0.0, 0.0)) - c(0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let maps = [
            MapExpr::Identity,
            MapExpr::Scale(c(0.4, 0.2)),
            MapExpr::Affine {
                a: c(0.3, 0.1),
                b: c(0.2, 0.0),
            },
            MapExpr::Moebius { a: c(0.3, 0.2) },
            MapExpr::Monomial(4),
            MapExpr::BoundaryPerturb { c: 0.05, k: 3 },
            MapExpr::Convex {
                t: 0.3,
                left: Box::new(MapExpr::Identity),
                right: Box::new(MapExpr::Monomial(2)),
            },
            MapExpr::Compose {
                outer: Box::new(MapExpr::Moebius { a: c(0.2, 0.0) }),
                inner: Box::new(MapExpr::Monomial(2)),
            },
        ];
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
        let h = 1e-6;
        for map in &maps {
            for _ in 0..100 {
                let r = 0.8 * rand::Rng::gen::<f64>(&mut rng).sqrt();
                let th = rand::Rng::gen::<f64>(&mut rng) * std::f64::consts::TAU;
                let z = Complex64::from_polar(r, th);
                let exact = map.deriv(z);
                let fd = (map.eval(z + c(h, 0.0)) - map.eval(z - c(h, 0.0))) / c(2.0 * h, 0.0);
                let scale = exact.norm().max(1.0);
                assert!(
                    (exact - fd).norm() / scale < 1e-5,
                    "fd mismatch for {:?} at {z}",
                    map
                );
            }
        }
    }

    #[test]
    fn selfmap_checks() {
        assert!(check_selfmap(&MapExpr::Identity, 10_000, 7, R_MAX).passes);
        assert!(
            check_selfmap(
                &MapExpr::BoundaryPerturb { c: 0.05, k: 3 },
                100_000,
                7,
                R_MAX
            )
            .passes
        );
        let shift = MapExpr::Affine {
            a: c(1.0, 0.0),
            b: c(0.5, 0.0),
        };
        let chk = check_selfmap(&shift, 10_000, 7, R_MAX);
        assert!(!chk.passes);
        let (wr, wi) = chk.witness.unwrap();
        assert!(shift.eval(c(wr, wi)).norm() >= 1.0 - 1e-9);
    }

    #[test]
    fn angular_derivative_trichotomy() {
        let sched = StolzSchedule::for_angle(0.0, 2.0, 5, R_MAX);

        let beta_id = angular_derivative(&MapExpr::Identity, &sched);
        assert_eq!(beta_id.class, BetaClass::One);

        let half = MapExpr::Affine {
            a: c(0.5, 0.0),
            b: c(0.5, 0.0),
        };
        let beta_half = angular_derivative(&half, &sched);
        assert_eq!(beta_half.class, BetaClass::LessThanOne);
        assert!((beta_half.tail_estimate - 0.5).abs() < 0.05);

        let beta_scale = angular_derivative(&MapExpr::Scale(c(0.5, 0.0)), &sched);
        assert_eq!(beta_scale.class, BetaClass::Infinite);
    }

    #[test]
    fn region_membership() {
        assert!(region_e(c(1.0, 0.0), 1.0, c(0.0, 0.0)));
        // on the radius: (1-r)² ≤ k(1-r²) iff (1-r) ≤ k(1+r)
        let r = 0.6;
        let k = (1.0 - r) / (1.0 + r);
        assert!(region_e(c(1.0, 0.0), k + 1e-12, c(r, 0.0)));
        assert!(!region_e(c(1.0, 0.0), k - 1e-3, c(r, 0.0)));
    }

    #[test]
    fn minority_inequality_along_radius() {
        // maps with β ≤ 1 push radial points outward: |φ(r)| ≥ r
        let half = MapExpr::Affine {
            a: c(0.5, 0.0),
            b: c(0.5, 0.0),
        };
        for i in 1..100 {
            let r = i as f64 / 100.0;
            assert!(half.eval(c(r, 0.0)).norm() >= r);
        }
    }

    #[test]
    fn parse_grammar() {
        for (s, want) in [
            ("id", MapExpr::Identity),
            ("scale:0.5", MapExpr::Scale(c(0.5, 0.0))),
            ("mono:2", MapExpr::Monomial(2)),
            (
                "perturb:c=0.05,k=3",
                MapExpr::BoundaryPerturb { c: 0.05, k: 3 },
            ),
        ] {
            assert_eq!(MapExpr::parse(s).unwrap(), want);
        }
        let nested = MapExpr::parse("convex:t=0.3(id)(comp:(mono:2)(scale:0.5))").unwrap();
        assert_eq!(
            nested.canonical(),
            "convex:t=0.3(id)(comp:(mono:2)(scale:0.5))"
        );
        assert!(MapExpr::parse("mono:0").is_err());
        assert!(MapExpr::parse("convex:t=0.3(id)").is_err());
    }
}
