//! Nested adaptive polar meshes over a truncated disk.
//!
//! Rings are laid down band by band between dyadic radii `1 - 2^{-j}`,
//! marching inward so every radial gap `[a, b]` satisfies
//! `b - a ≤ min(h0, β·τ(b))` (with `β ≤ m_τ/2`); angular spacing is
//! comparable. Refinement inserts the midpoint of every radial gap and
//! doubles every angular count, so level-L nodes embed into level-(L+1)
//! nodes by `(ring i, slot k) ↦ (ring 2i, slot 2k)`.
//!
//! Every edge of the coarse graph is re-created verbatim on the fine graph
//! (same segment, same quadrature, hence bitwise the same length), which
//! makes shortest-path values exactly non-increasing under refinement.

use num_complex::Complex64;

use crate::weight::WeightModel;
use crate::{Error, Result};

/// 5-point Gauss–Legendre nodes and weights on [0, 1].
const GL5: [(f64, f64); 5] = [
    (0.046910077030668074, 0.11846344252809454),
    (0.23076534494715845, 0.23931433524968324),
    (0.5, 0.28444444444444444),
    (0.7692346550528415, 0.23931433524968324),
    (0.9530899229693319, 0.11846344252809454),
];

/// Construction parameters. `beta` must not exceed `m_τ/2` of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshParams {
    /// Cap on any spacing, active where `β·τ` is large.
    pub h0: f64,
    /// Spacing is at most `beta · τ(r)`.
    pub beta: f64,
    /// Outermost ring radius.
    pub coverage: f64,
    /// Hard cap on node count per level.
    pub node_cap: u64,
}

impl MeshParams {
    /// Defaults for a model: `β = m_τ/2`, moderate interior cap, coverage to
    /// the dyadic radius `1 - 2⁻⁴`.
    pub fn for_model(model: &WeightModel) -> MeshParams {
        MeshParams {
            h0: 0.05,
            beta: model.m_tau() / 2.0,
            coverage: 0.9375,
            node_cap: 5_000_000,
        }
    }

    pub fn with_coverage(mut self, coverage: f64) -> Self {
        self.coverage = coverage;
        self
    }

    fn spacing(&self, model: &WeightModel, r: f64, level: u32) -> f64 {
        (self.h0.min(self.beta * model.tau(r))) / 2f64.powi(level as i32)
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Ring {
    pub radius: f64,
    pub count: u32,
}

/// Which stored edge length a query uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Density `1/τ`.
    Tau,
    /// Density `φ'(|·|)`.
    Phi,
}

/// One level of the nested mesh family, with CSR adjacency.
pub struct DiskMesh {
    pub level: u32,
    pub(crate) rings: Vec<Ring>,
    /// First node id of each ring; the final entry is the node count.
    pub(crate) ring_offset: Vec<u32>,
    pub(crate) adj_offset: Vec<u32>,
    pub(crate) adj_target: Vec<u32>,
    pub(crate) adj_tau: Vec<f32>,
    pub(crate) adj_phi: Vec<f32>,
    /// Cumulative radial integrals `∫₀^{r_i} dt/τ` and `∫₀^{r_i} φ'(t) dt`
    /// per ring: radial-projection lower bounds for guided searches.
    pub(crate) cum_tau: Vec<f64>,
    pub(crate) cum_phi: Vec<f64>,
    pub(crate) params: MeshParams,
}

impl DiskMesh {
    pub fn n_nodes(&self) -> usize {
        *self.ring_offset.last().unwrap() as usize
    }

    pub fn n_rings(&self) -> usize {
        self.rings.len()
    }

    pub fn n_edges_directed(&self) -> usize {
        self.adj_target.len()
    }

    pub fn coverage(&self) -> f64 {
        self.params.coverage
    }

    pub fn params(&self) -> &MeshParams {
        &self.params
    }

    pub fn ring_radius(&self, ring_idx: usize) -> f64 {
        self.rings[ring_idx].radius
    }

    pub fn ring_count(&self, ring_idx: usize) -> u32 {
        self.rings[ring_idx].count
    }

    pub(crate) fn ring_of(&self, node: u32) -> usize {
        debug_assert!((node as usize) < self.n_nodes());
        match self.ring_offset.binary_search(&node) {
            Ok(i) if i == self.ring_offset.len() - 1 => i - 1,
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    pub fn node_position(&self, node: u32) -> Complex64 {
        let ring_idx = self.ring_of(node);
        let ring = self.rings[ring_idx];
        let k = node - self.ring_offset[ring_idx];
        let theta = std::f64::consts::TAU * (k as f64) / (ring.count as f64);
        Complex64::from_polar(ring.radius, theta)
    }

    /// Nearest node to an arbitrary disk point, with the snap displacement.
    pub fn snap(&self, z: Complex64) -> (u32, f64) {
        let r = z.norm();
        let idx = self
            .rings
            .partition_point(|ring| ring.radius < r)
            .min(self.rings.len() - 1);
        let lo = idx.saturating_sub(2);
        let hi = (idx + 2).min(self.rings.len() - 1);
        let mut best = (0u32, f64::INFINITY);
        let theta = z.arg().rem_euclid(std::f64::consts::TAU);
        for ring_idx in lo..=hi {
            let ring = self.rings[ring_idx];
            let k = ((theta / std::f64::consts::TAU * ring.count as f64).round() as i64)
                .rem_euclid(ring.count as i64) as u32;
            let node = self.ring_offset[ring_idx] + k;
            let d = (self.node_position(node) - z).norm();
            if d < best.1 {
                best = (node, d);
            }
        }
        best
    }

    /// Neighbors of a node with both stored lengths `(target, len_τ, len_φ)`.
    pub fn neighbors(&self, node: u32) -> impl Iterator<Item = (u32, f32, f32)> + '_ {
        let a = self.adj_offset[node as usize] as usize;
        let b = self.adj_offset[node as usize + 1] as usize;
        (a..b).map(move |e| (self.adj_target[e], self.adj_tau[e], self.adj_phi[e]))
    }

    /// Undirected edge list as `(u, v, len_τ, len_φ)` with `u < v`.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (u32, u32, f32, f32)> + '_ {
        (0..self.n_nodes() as u32).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |(v, _, _)| u < *v)
                .map(move |(v, lt, lp)| (u, v, lt, lp))
        })
    }

    /// Radial-projection lower bound between ring radii: any path connecting
    /// radii `|u|` and `|w|` costs at least the 1-D integral between them.
    pub fn radial_gap(&self, metric: Metric, ring_a: usize, ring_b: usize) -> f64 {
        let table = match metric {
            Metric::Tau => &self.cum_tau,
            Metric::Phi => &self.cum_phi,
        };
        (table[ring_a] - table[ring_b]).abs()
    }

    pub(crate) fn cum_table(&self, metric: Metric) -> &[f64] {
        match metric {
            Metric::Tau => &self.cum_tau,
            Metric::Phi => &self.cum_phi,
        }
    }

    /// Image of one of this mesh's nodes inside the given refinement of it.
    pub fn child_node(&self, fine: &DiskMesh, node: u32) -> u32 {
        debug_assert_eq!(fine.level, self.level + 1);
        let ring_idx = self.ring_of(node);
        let k = node - self.ring_offset[ring_idx];
        let fine_ring = 2 * ring_idx;
        let fine_k = if self.rings[ring_idx].count == 1 {
            0
        } else {
            2 * k
        };
        fine.ring_offset[fine_ring] + fine_k
    }

    /// Builds the level-0 mesh.
    pub fn build_base(model: &WeightModel, params: MeshParams) -> Result<DiskMesh> {
        let rings = base_rings(model, &params)?;
        assemble(model, params, 0, rings, &[])
    }

    /// Builds the next refinement level from this one.
    pub fn refine(&self, model: &WeightModel) -> Result<DiskMesh> {
        let level = self.level + 1;
        let mut rings = Vec::with_capacity(self.rings.len() * 2 - 1);
        for (i, ring) in self.rings.iter().enumerate() {
            rings.push(Ring {
                radius: ring.radius,
                count: if ring.count == 1 { 1 } else { ring.count * 2 },
            });
            if i + 1 < self.rings.len() {
                let mid = 0.5 * (ring.radius + self.rings[i + 1].radius);
                rings.push(Ring {
                    radius: mid,
                    count: angular_count(model, &self.params, mid, level),
                });
            }
        }

        // fine ring offsets, needed to map the inherited edges
        let mut fine_offset = Vec::with_capacity(rings.len() + 1);
        let mut acc = 0u32;
        for ring in &rings {
            fine_offset.push(acc);
            acc += ring.count;
        }
        fine_offset.push(acc);

        let map = |node: u32| -> u32 {
            let ring_idx = self.ring_of(node);
            let k = node - self.ring_offset[ring_idx];
            let fine_k = if self.rings[ring_idx].count == 1 {
                0
            } else {
                2 * k
            };
            fine_offset[2 * ring_idx] + fine_k
        };
        let inherited: Vec<(u32, u32)> = self
            .undirected_edges()
            .map(|(u, v, _, _)| ordered(map(u), map(v)))
            .collect();
        assemble(model, self.params, level, rings, &inherited)
    }
}

fn angular_count(model: &WeightModel, params: &MeshParams, r: f64, level: u32) -> u32 {
    let s = params.spacing(model, r, level);
    ((std::f64::consts::TAU * r) / s).ceil().max(8.0) as u32
}

/// Ring radii and angular counts for level 0.
fn base_rings(model: &WeightModel, params: &MeshParams) -> Result<Vec<Ring>> {
    // dyadic band boundaries up to the coverage radius
    let mut bounds = vec![0.0];
    let mut j = 1;
    loop {
        let b = 1.0 - 2f64.powi(-j);
        if b >= params.coverage - 1e-12 {
            break;
        }
        bounds.push(b);
        j += 1;
    }
    bounds.push(params.coverage);

    let mut radii = vec![0.0];
    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        // march down from the band top; each gap then obeys the spacing rule
        // at its outer endpoint
        let mut band = vec![hi];
        let mut r = hi;
        while r > lo {
            let step = params.spacing(model, r, 0);
            if step <= 1e-15 {
                return Err(Error::NotRadiusFunction {
                    r,
                    value: model.tau(r),
                });
            }
            r = (r - step).max(lo);
            if r > lo {
                band.push(r);
            }
        }
        band.reverse();
        radii.extend(band);
    }
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    Ok(radii
        .iter()
        .map(|&r| Ring {
            radius: r,
            count: if r == 0.0 {
                1
            } else {
                angular_count(model, params, r, 0)
            },
        })
        .collect())
}

/// Builds nodes, edges, quadrature lengths, CSR.
fn assemble(
    model: &WeightModel,
    params: MeshParams,
    level: u32,
    rings: Vec<Ring>,
    inherited: &[(u32, u32)],
) -> Result<DiskMesh> {
    let estimated: u64 = rings.iter().map(|r| r.count as u64).sum();
    if estimated > params.node_cap {
        return Err(Error::MeshTooLarge {
            level,
            estimated,
            cap: params.node_cap,
        });
    }
    let mut ring_offset = Vec::with_capacity(rings.len() + 1);
    let mut acc = 0u32;
    for ring in &rings {
        ring_offset.push(acc);
        acc += ring.count;
    }
    ring_offset.push(acc);
    let n_nodes = acc as usize;

    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(n_nodes * 9 + inherited.len());
    pairs.extend_from_slice(inherited);

    for (i, ring) in rings.iter().enumerate() {
        let base = ring_offset[i];
        let m = ring.count;
        // same-ring chords
        if m >= 3 {
            for k in 0..m {
                pairs.push(ordered(base + k, base + (k + 1) % m));
                if m >= 5 {
                    pairs.push(ordered(base + k, base + (k + 2) % m));
                }
            }
        }
        // to the next ring
        if i + 1 < rings.len() {
            let up = rings[i + 1];
            let up_base = ring_offset[i + 1];
            if m == 1 {
                // the center connects to the whole innermost ring
                for j in 0..up.count {
                    pairs.push(ordered(base, up_base + j));
                }
            } else {
                for k in 0..m {
                    let j0 = (k as f64 * up.count as f64 / m as f64).round() as i64;
                    for o in -3i64..=3 {
                        let j = (j0 + o).rem_euclid(up.count as i64) as u32;
                        pairs.push(ordered(base + k, up_base + j));
                    }
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs.retain(|&(u, v)| u != v);

    let position = |node: u32| -> Complex64 {
        let ring_idx = match ring_offset.binary_search(&node) {
            Ok(i) if i == ring_offset.len() - 1 => i - 1,
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let ring = rings[ring_idx];
        let k = node - ring_offset[ring_idx];
        let theta = std::f64::consts::TAU * (k as f64) / (ring.count as f64);
        Complex64::from_polar(ring.radius, theta)
    };

    let mut len_tau = vec![0f32; pairs.len()];
    let mut len_phi = vec![0f32; pairs.len()];
    for (e, &(u, v)) in pairs.iter().enumerate() {
        let (lt, lp) = segment_lengths(model, position(u), position(v));
        if !lt.is_finite() || !lp.is_finite() {
            return Err(Error::NonFiniteDerived {
                r: position(u).norm(),
                what: "edge quadrature",
            });
        }
        len_tau[e] = lt as f32;
        len_phi[e] = lp as f32;
    }

    // CSR with both directions
    let mut degree = vec![0u32; n_nodes];
    for &(u, v) in &pairs {
        degree[u as usize] += 1;
        degree[v as usize] += 1;
    }
    let mut adj_offset = vec![0u32; n_nodes + 1];
    for i in 0..n_nodes {
        adj_offset[i + 1] = adj_offset[i] + degree[i];
    }
    let total = adj_offset[n_nodes] as usize;
    let mut cursor: Vec<u32> = adj_offset[..n_nodes].to_vec();
    let mut adj_target = vec![0u32; total];
    let mut adj_tau = vec![0f32; total];
    let mut adj_phi = vec![0f32; total];
    for (e, &(u, v)) in pairs.iter().enumerate() {
        for (a, b) in [(u, v), (v, u)] {
            let slot = cursor[a as usize] as usize;
            adj_target[slot] = b;
            adj_tau[slot] = len_tau[e];
            adj_phi[slot] = len_phi[e];
            cursor[a as usize] += 1;
        }
    }

    let (cum_tau, cum_phi) = cumulative_radial(model, &rings);

    Ok(DiskMesh {
        level,
        rings,
        ring_offset,
        adj_offset,
        adj_target,
        adj_tau,
        adj_phi,
        cum_tau,
        cum_phi,
        params,
    })
}

/// Cumulative radial integrals at the ring radii.
fn cumulative_radial(model: &WeightModel, rings: &[Ring]) -> (Vec<f64>, Vec<f64>) {
    let mut cum_tau = Vec::with_capacity(rings.len());
    let mut cum_phi = Vec::with_capacity(rings.len());
    let mut acc_tau = 0.0;
    let mut acc_phi = 0.0;
    let mut prev = 0.0;
    for ring in rings {
        let r = ring.radius;
        if r > prev {
            acc_tau += radial_quadrature(|t| 1.0 / model.tau(t), prev, r, 8);
            acc_phi += radial_quadrature(|t| model.dphi(t), prev, r, 8);
        }
        cum_tau.push(acc_tau);
        cum_phi.push(acc_phi);
        prev = r;
    }
    (cum_tau, cum_phi)
}

fn ordered(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Both conformal lengths of the straight segment `[a, b]` by 5-point
/// Gauss–Legendre: `(∫ ds/τ, ∫ φ'(|·|) ds)`. The quadrature never evaluates
/// at the endpoints, so the integrable `1/τ` singularity at the origin is
/// harmless.
pub fn segment_lengths(model: &WeightModel, a: Complex64, b: Complex64) -> (f64, f64) {
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return (0.0, 0.0);
    }
    let mut lt = 0.0;
    let mut lp = 0.0;
    for &(x, w) in &GL5 {
        let p = a + x * d;
        let r = p.norm();
        lt += w / model.tau(r);
        lp += w * model.dphi(r);
    }
    (lt * len, lp * len)
}

/// Composite 5-point Gauss–Legendre quadrature of a radial density along
/// `[r0, r1]`; the oracle for radial geodesics, independent of the mesh path
/// machinery.
pub fn radial_quadrature(mut f: impl FnMut(f64) -> f64, r0: f64, r1: f64, pieces: usize) -> f64 {
    let (lo, hi) = if r0 <= r1 { (r0, r1) } else { (r1, r0) };
    let h = (hi - lo) / pieces as f64;
    let mut total = 0.0;
    for i in 0..pieces {
        let a = lo + i as f64 * h;
        for &(x, w) in &GL5 {
            total += w * f(a + x * h);
        }
    }
    total * h
}
