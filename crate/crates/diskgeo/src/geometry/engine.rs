//! Distance queries with automatic level escalation, metric balls, inclusion
//! checks, and the metric-axiom suite.

use std::cell::RefCell;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use serde::Serialize;

use super::cache;
use super::dijkstra::{self, Scratch};
use super::mesh::{radial_quadrature, DiskMesh, MeshParams, Metric};
use crate::weight::WeightModel;
use crate::{Error, Result};

thread_local! {
    static SCRATCH: RefCell<Scratch> = RefCell::new(Scratch::new());
}

/// Escalation and convergence policy on top of the mesh parameters.
#[derive(Debug, Clone, Copy)]
pub struct GeoConfig {
    pub params: MeshParams,
    /// Highest level escalation may reach.
    pub level_cap: u32,
    /// Relative convergence tolerance between consecutive levels.
    pub tol_rel: f64,
    pub use_cache: bool,
}

impl GeoConfig {
    pub fn for_model(model: &WeightModel) -> GeoConfig {
        GeoConfig {
            params: MeshParams::for_model(model),
            level_cap: 9,
            tol_rel: 0.01,
            use_cache: true,
        }
    }
}

/// A point-to-point distance estimate.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceResult {
    pub value: f64,
    #[serde(rename = "level")]
    pub level_used: u32,
    /// Relative change between the last two levels was within tolerance.
    pub converged: bool,
    /// Polyline of the mesh path, source first.
    pub path: Vec<(f64, f64)>,
    /// Snap displacements of the two endpoints.
    pub snap: (f64, f64),
    /// False when the endpoints are distinct but collapse to one node at the
    /// level used (the mesh cannot see the separation).
    pub resolvable: bool,
}

/// `ρ = 1 - exp(-d)` with the flags of the underlying distance.
#[derive(Debug, Clone, Serialize)]
pub struct RhoValue {
    pub rho: f64,
    pub converged: bool,
    pub resolvable: bool,
}

/// Ball of a given metric radius around a snapped center.
#[derive(Debug, Clone)]
pub struct BallResult {
    pub center_node: u32,
    pub snap: f64,
    /// `(node, distance)` for every node with distance < the query radius.
    pub nodes: Vec<(u32, f64)>,
}

/// Violation counts for the Euclidean sandwich of metric balls.
#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    pub center: (f64, f64),
    pub snap: f64,
    pub r: f64,
    pub ball_size: usize,
    pub disk_size: usize,
    /// Ball nodes outside the Euclidean disk of radius `2 r τ(z)`.
    pub violations_first: usize,
    /// Disk nodes farther than `4 r (1 + tol)` in the metric.
    pub violations_second: usize,
    /// Smallest empirical `R'` with `B_φ(z, R) ⊂ D(z, R'/φ'(|z|))`.
    pub empirical_r_prime: f64,
}

/// Outcome of the metric-axiom suite.
#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    pub n_triples: usize,
    pub triangle_violations: usize,
    pub symmetry_violations: usize,
    pub identity_violations: usize,
    pub worst_excess: f64,
    pub slack: f64,
    pub level: u32,
    pub scalar_grid_violations: usize,
}

/// Shortest-path engine over a lazily built family of nested meshes.
pub struct GeodesicEngine {
    model: WeightModel,
    cfg: GeoConfig,
    key: String,
    levels: RwLock<Vec<Arc<DiskMesh>>>,
}

impl GeodesicEngine {
    pub fn new(model: WeightModel, mut cfg: GeoConfig) -> GeodesicEngine {
        // the spacing rule requires β ≤ m_τ/2
        cfg.params.beta = cfg.params.beta.min(model.m_tau() / 2.0);
        let key = cache::cache_key(&model, &cfg.params);
        GeodesicEngine {
            model,
            cfg,
            key,
            levels: RwLock::new(Vec::new()),
        }
    }

    pub fn with_defaults(model: WeightModel) -> GeodesicEngine {
        let cfg = GeoConfig::for_model(&model);
        GeodesicEngine::new(model, cfg)
    }

    pub fn model(&self) -> &WeightModel {
        &self.model
    }

    pub fn config(&self) -> &GeoConfig {
        &self.cfg
    }

    /// Certified lower density for the A* heuristic's Euclidean part:
    /// `d_τ(z,w) ≥ |z-w|/sup τ`; for the `φ'` metric the radial projection
    /// alone guides the search.
    fn euclid_factor(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Tau => 1.0 / self.model.tau_max(),
            Metric::Phi => 0.0,
        }
    }

    /// Returns the mesh at `level`, building or loading lower levels first.
    /// Fails with `MeshTooLarge` when the node cap would be exceeded.
    pub fn mesh(&self, level: u32) -> Result<Arc<DiskMesh>> {
        if level > self.cfg.level_cap {
            return Err(Error::MeshTooLarge {
                level,
                estimated: u64::MAX,
                cap: self.cfg.params.node_cap,
            });
        }
        {
            let levels = self.levels.read().unwrap();
            if let Some(mesh) = levels.get(level as usize) {
                return Ok(mesh.clone());
            }
        }
        let mut levels = self.levels.write().unwrap();
        while levels.len() <= level as usize {
            let next_level = levels.len() as u32;
            if self.cfg.use_cache {
                if let Some(mesh) = cache::load(&self.key, next_level, &self.cfg.params) {
                    levels.push(Arc::new(mesh));
                    continue;
                }
            }
            let mesh = if next_level == 0 {
                DiskMesh::build_base(&self.model, self.cfg.params)?
            } else {
                levels[next_level as usize - 1].refine(&self.model)?
            };
            if self.cfg.use_cache {
                let _ = cache::store(&self.key, &mesh);
            }
            levels.push(Arc::new(mesh));
        }
        Ok(levels[level as usize].clone())
    }

    /// Straight-segment quadrature of the metric density: a certified upper
    /// bound for the distance, independent of any mesh.
    pub fn segment_upper_bound(&self, metric: Metric, z: Complex64, w: Complex64) -> f64 {
        let d = w - z;
        let len = d.norm();
        if len == 0.0 {
            return 0.0;
        }
        let pieces = 64;
        let f = |t: f64| {
            let r = (z + t * d).norm();
            match metric {
                Metric::Tau => 1.0 / self.model.tau(r),
                Metric::Phi => self.model.dphi(r),
            }
        };
        radial_quadrature(f, 0.0, 1.0, pieces) * len
    }

    fn check_inside(&self, z: Complex64) -> Result<()> {
        if z.norm() > self.model.r_max() {
            return Err(Error::OutsideTruncation {
                modulus: z.norm(),
                r_max: self.model.r_max(),
            });
        }
        Ok(())
    }

    /// Shortest-path distance with automatic level escalation: escalates until
    /// the value changes by at most `tol_rel` between levels, the level cap is
    /// reached, or the next level would blow the node cap.
    pub fn dist(&self, metric: Metric, z: Complex64, w: Complex64) -> Result<DistanceResult> {
        self.check_inside(z)?;
        self.check_inside(w)?;
        let hint = self.segment_upper_bound(metric, z, w);
        let mut prev_value: Option<f64> = None;
        let mut result: Option<DistanceResult> = None;
        for level in 0..=self.cfg.level_cap {
            let mesh = match self.mesh(level) {
                Ok(m) => m,
                Err(Error::MeshTooLarge { .. }) => break,
                Err(e) => return Err(e),
            };
            let (src, snap_src) = mesh.snap(z);
            let (tgt, snap_tgt) = mesh.snap(w);
            let (value, path_nodes) = SCRATCH.with(|s| {
                let mut scratch = s.borrow_mut();
                dijkstra::point_to_point(
                    &mesh,
                    metric,
                    src,
                    tgt,
                    self.euclid_factor(metric),
                    hint,
                    &mut scratch,
                )
            });
            let resolvable = if src == tgt {
                z == w
            } else {
                snap_src.max(snap_tgt) <= 0.5 * (z - w).norm()
            };
            let converged = match prev_value {
                Some(pv) => (value - pv).abs() <= self.cfg.tol_rel * value.max(1e-300),
                None => false,
            };
            let path = path_nodes
                .iter()
                .map(|&n| {
                    let p = mesh.node_position(n);
                    (p.re, p.im)
                })
                .collect();
            result = Some(DistanceResult {
                value,
                level_used: level,
                converged,
                path,
                snap: (snap_src, snap_tgt),
                resolvable,
            });
            if converged {
                break;
            }
            prev_value = Some(value);
        }
        result.ok_or(Error::MeshTooLarge {
            level: 0,
            estimated: u64::MAX,
            cap: self.cfg.params.node_cap,
        })
    }

    /// Point-to-point distance at one fixed level (no escalation).
    pub fn dist_at_level(
        &self,
        level: u32,
        metric: Metric,
        z: Complex64,
        w: Complex64,
    ) -> Result<f64> {
        self.check_inside(z)?;
        self.check_inside(w)?;
        let mesh = self.mesh(level)?;
        let (src, _) = mesh.snap(z);
        let (tgt, _) = mesh.snap(w);
        let hint = self.segment_upper_bound(metric, z, w);
        Ok(SCRATCH.with(|s| {
            let mut scratch = s.borrow_mut();
            dijkstra::point_to_point(
                &mesh,
                metric,
                src,
                tgt,
                self.euclid_factor(metric),
                hint,
                &mut scratch,
            )
            .0
        }))
    }

    /// Truncated query at one fixed level: `Some(d)` when the target settles
    /// within `budget`, `None` when the distance provably exceeds it.
    pub fn dist_truncated(
        &self,
        level: u32,
        metric: Metric,
        z: Complex64,
        w: Complex64,
        budget: f64,
    ) -> Result<Option<f64>> {
        self.check_inside(z)?;
        self.check_inside(w)?;
        let mesh = self.mesh(level)?;
        let (src, _) = mesh.snap(z);
        let (tgt, _) = mesh.snap(w);
        Ok(SCRATCH.with(|s| {
            let mut scratch = s.borrow_mut();
            match dijkstra::astar(
                &mesh,
                metric,
                src,
                tgt,
                self.euclid_factor(metric),
                budget,
                usize::MAX,
                &mut scratch,
            ) {
                dijkstra::Search::Found(d, _) => Some(d),
                _ => None,
            }
        }))
    }

    /// Work-capped `d_τ` query at level 0: `Ok(None)` when the search hit its
    /// pop cap before resolving the pair (callers fall back to the explicit
    /// surrogate and flag the value).
    pub fn dist_tau_capped(
        &self,
        z: Complex64,
        w: Complex64,
        max_pops: usize,
    ) -> Result<Option<DistanceResult>> {
        self.check_inside(z)?;
        self.check_inside(w)?;
        let mesh = self.mesh(0)?;
        let (src, snap_src) = mesh.snap(z);
        let (tgt, snap_tgt) = mesh.snap(w);
        let hint = self.segment_upper_bound(Metric::Tau, z, w);
        let budget = 1.3 * hint + 0.5;
        let outcome = SCRATCH.with(|s| {
            let mut scratch = s.borrow_mut();
            match dijkstra::astar(
                &mesh,
                Metric::Tau,
                src,
                tgt,
                self.euclid_factor(Metric::Tau),
                budget,
                max_pops,
                &mut scratch,
            ) {
                dijkstra::Search::Found(d, path) => Some((d, path)),
                _ => None,
            }
        });
        Ok(outcome.map(|(value, path_nodes)| {
            let resolvable = if src == tgt {
                z == w
            } else {
                snap_src.max(snap_tgt) <= 0.5 * (z - w).norm()
            };
            DistanceResult {
                value,
                level_used: 0,
                converged: false,
                path: path_nodes
                    .iter()
                    .map(|&n| {
                        let p = mesh.node_position(n);
                        (p.re, p.im)
                    })
                    .collect(),
                snap: (snap_src, snap_tgt),
                resolvable,
            }
        }))
    }

    pub fn dist_tau(&self, z: Complex64, w: Complex64) -> Result<DistanceResult> {
        self.dist(Metric::Tau, z, w)
    }

    pub fn dist_phi(&self, z: Complex64, w: Complex64) -> Result<DistanceResult> {
        self.dist(Metric::Phi, z, w)
    }

    /// `ρ_τ(z, w) = 1 - exp(-d_τ(z, w))`.
    pub fn rho_tau(&self, z: Complex64, w: Complex64) -> Result<RhoValue> {
        let d = self.dist_tau(z, w)?;
        Ok(RhoValue {
            rho: (1.0 - (-d.value).exp()).min(1.0 - 1e-16),
            converged: d.converged,
            resolvable: d.resolvable,
        })
    }

    /// All nodes within distance < `r` of the snapped center, at a fixed level.
    pub fn ball_tau(&self, level: u32, z: Complex64, r: f64) -> Result<BallResult> {
        self.check_inside(z)?;
        let mesh = self.mesh(level)?;
        let (center, snap) = mesh.snap(z);
        let nodes = SCRATCH.with(|s| {
            let mut scratch = s.borrow_mut();
            let stats = dijkstra::run(&mesh, Metric::Tau, center, r, &mut scratch);
            stats
                .settled
                .iter()
                .filter_map(|&n| scratch.distance(n).map(|d| (n, d)))
                .filter(|(_, d)| *d < r)
                .collect()
        });
        Ok(BallResult {
            center_node: center,
            snap,
            nodes,
        })
    }

    /// Checks the Euclidean sandwich `B_τ(z,r) ⊂ D(z, 2rτ(z)) ⊂ B_τ(z, 4r(1+tol))`
    /// and measures the smallest `R'` with `B_φ(z,R) ⊂ D(z, R'/φ'(|z|))`.
    ///
    /// Requires `r < m_τ/2`.
    pub fn check_inclusions(
        &self,
        level: u32,
        z: Complex64,
        r: f64,
        big_r: f64,
        tol: f64,
    ) -> Result<InclusionReport> {
        if r >= self.model.m_tau() / 2.0 {
            return Err(Error::HypothesisViolated(format!(
                "ball radius {r} must stay below m_tau/2 = {}",
                self.model.m_tau() / 2.0
            )));
        }
        self.check_inside(z)?;
        let mesh = self.mesh(level)?;
        let (center, snap) = mesh.snap(z);
        let anchor = mesh.node_position(center);
        let tau_c = self.model.tau(anchor.norm());
        if 2.0 * r * tau_c < 1e-12 {
            return Err(Error::HypothesisViolated(format!(
                "comparison disk degenerates at center |z| = {} (τ = {tau_c})",
                anchor.norm()
            )));
        }
        let euclid = 2.0 * r * tau_c;
        let outer_budget = 4.0 * r * (1.0 + tol);

        let (ball, disk_nodes, violations_second) = SCRATCH.with(|s| {
            let mut scratch = s.borrow_mut();
            let stats = dijkstra::run(&mesh, Metric::Tau, center, outer_budget, &mut scratch);
            let ball: Vec<(u32, f64)> = stats
                .settled
                .iter()
                .filter_map(|&n| scratch.distance(n).map(|d| (n, d)))
                .filter(|(_, d)| *d < r)
                .collect();

            // nodes of the Euclidean disk, enumerated geometrically
            let mut disk_nodes = Vec::new();
            let mut violations_second = 0usize;
            for ring_idx in 0..mesh.n_rings() {
                let rr = mesh.ring_radius(ring_idx);
                if rr < anchor.norm() - euclid - 1e-15 || rr > anchor.norm() + euclid + 1e-15 {
                    continue;
                }
                let m = mesh.ring_count(ring_idx);
                let base = mesh.ring_offset[ring_idx];
                let candidates: Vec<u32> = if m <= 64 || rr <= euclid {
                    (0..m).map(|k| base + k).collect()
                } else {
                    let theta_c = anchor.arg().rem_euclid(std::f64::consts::TAU);
                    let half_angle = (euclid / rr).asin().min(std::f64::consts::PI);
                    let half_slots =
                        ((half_angle / std::f64::consts::TAU) * m as f64).ceil() as i64 + 2;
                    let k_c = ((theta_c / std::f64::consts::TAU) * m as f64).round() as i64;
                    (-half_slots..=half_slots)
                        .map(|o| base + (k_c + o).rem_euclid(m as i64) as u32)
                        .collect()
                };
                for n in candidates {
                    if (mesh.node_position(n) - anchor).norm() <= euclid {
                        disk_nodes.push(n);
                        match scratch.distance(n) {
                            Some(d) if d <= outer_budget => {}
                            _ => violations_second += 1,
                        }
                    }
                }
            }
            (ball, disk_nodes, violations_second)
        });

        let violations_first = ball
            .iter()
            .filter(|(n, _)| (mesh.node_position(*n) - anchor).norm() >= euclid)
            .count();

        // empirical R' for the phi-metric ball of radius big_r
        let empirical_r_prime = SCRATCH.with(|s| {
            let mut scratch = s.borrow_mut();
            let stats = dijkstra::run(&mesh, Metric::Phi, center, big_r, &mut scratch);
            stats
                .settled
                .iter()
                .filter(|&&n| scratch.distance(n).map(|d| d < big_r).unwrap_or(false))
                .map(|&n| (mesh.node_position(n) - anchor).norm() * self.model.dphi(anchor.norm()))
                .fold(0.0, f64::max)
        });

        Ok(InclusionReport {
            center: (anchor.re, anchor.im),
            snap,
            r,
            ball_size: ball.len(),
            disk_size: disk_nodes.len(),
            violations_first,
            violations_second,
            empirical_r_prime,
        })
    }

    /// Checks `ρ_τ` metric axioms on a triple list at one fixed level (so the
    /// underlying graph metric is exact and only endpoint snapping needs
    /// slack), plus the scalar subadditivity of `x ↦ 1 - e^{-x}` on a grid.
    pub fn metric_axiom_suite(
        &self,
        level: u32,
        triples: &[[Complex64; 3]],
    ) -> Result<MetricReport> {
        let mesh = self.mesh(level)?;
        // snap all points, group required distances by source node
        let mut snapped: Vec<[u32; 3]> = Vec::with_capacity(triples.len());
        for t in triples {
            for z in t {
                self.check_inside(*z)?;
            }
            snapped.push([mesh.snap(t[0]).0, mesh.snap(t[1]).0, mesh.snap(t[2]).0]);
        }
        let mut wanted: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
        for s in &snapped {
            let [a, b, c] = *s;
            wanted.entry(a).or_default().extend([b, c]);
            wanted.entry(b).or_default().extend([a, c]);
        }
        let sources: Vec<(u32, Vec<u32>)> = wanted.into_iter().collect();
        use rayon::prelude::*;
        let tables: Vec<(u32, std::collections::HashMap<u32, f64>)> = sources
            .par_iter()
            .map(|(src, targets)| {
                let mut scratch = Scratch::new();
                let table = dijkstra::distances_to(&mesh, Metric::Tau, *src, targets, &mut scratch);
                (*src, table)
            })
            .collect();
        let lookup: std::collections::HashMap<u32, std::collections::HashMap<u32, f64>> =
            tables.into_iter().collect();

        let rho = |d: f64| 1.0 - (-d).exp();
        let slack = 3.0 * self.cfg.tol_rel;
        let mut triangle_violations = 0;
        let mut symmetry_violations = 0;
        let mut identity_violations = 0;
        let mut worst_excess = 0.0f64;
        for s in &snapped {
            let [a, b, c] = *s;
            let d_ab = lookup[&a][&b];
            let d_ac = lookup[&a][&c];
            let d_bc = lookup[&b][&c];
            let d_ba = lookup[&b][&a];
            let scale = rho(d_ab).max(rho(d_ac)).max(rho(d_bc)).max(1e-12);
            let excess = rho(d_ac) - rho(d_ab) - rho(d_bc);
            if excess > slack * scale {
                triangle_violations += 1;
            }
            worst_excess = worst_excess.max(excess);
            if (rho(d_ab) - rho(d_ba)).abs() > slack * scale {
                symmetry_violations += 1;
            }
            if a == b && d_ab != 0.0 {
                identity_violations += 1;
            }
        }

        Ok(MetricReport {
            n_triples: triples.len(),
            triangle_violations,
            symmetry_violations,
            identity_violations,
            worst_excess,
            slack,
            level,
            scalar_grid_violations: scalar_subadditivity_violations(1024),
        })
    }
}

/// Counts strict violations of `f(x+h) ≤ f(x) + f(h)` for `f(x) = 1 - e^{-x}`
/// on an `n`-pair grid; subadditivity is exact, so the expected count is 0.
pub fn scalar_subadditivity_violations(n: usize) -> usize {
    let side = (n as f64).sqrt().ceil() as usize;
    let mut violations = 0;
    let f = |x: f64| 1.0 - (-x).exp();
    for i in 1..=side {
        for j in 1..=side {
            let x = 10.0 * i as f64 / side as f64;
            let h = 10.0 * j as f64 / side as f64;
            if f(x + h) > f(x) + f(h) {
                violations += 1;
            }
        }
    }
    violations
}
