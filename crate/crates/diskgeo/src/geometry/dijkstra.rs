//! Shortest paths on a mesh level. Scratch buffers use a stamp trick so that
//! thousands of small truncated queries on a multi-million-node mesh do not
//! pay a full reinitialization each time.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::mesh::{DiskMesh, Metric};

#[derive(Copy, Clone, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reusable single-source state.
pub struct Scratch {
    dist: Vec<f64>,
    prev: Vec<u32>,
    stamp: Vec<u32>,
    done: Vec<u32>,
    epoch: u32,
    heap: BinaryHeap<HeapEntry>,
}

impl Scratch {
    pub fn new() -> Scratch {
        Scratch {
            dist: Vec::new(),
            prev: Vec::new(),
            stamp: Vec::new(),
            done: Vec::new(),
            epoch: 0,
            heap: BinaryHeap::new(),
        }
    }

    fn begin(&mut self, n: usize) {
        if self.dist.len() < n {
            self.dist.resize(n, f64::INFINITY);
            self.prev.resize(n, u32::MAX);
            self.stamp.resize(n, 0);
            self.done.resize(n, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.done.fill(0);
            self.epoch = 1;
        }
        self.heap.clear();
    }

    #[inline]
    fn is_done(&self, node: u32) -> bool {
        self.done[node as usize] == self.epoch
    }

    #[inline]
    fn mark_done(&mut self, node: u32) {
        self.done[node as usize] = self.epoch;
    }

    #[inline]
    fn get(&self, node: u32) -> f64 {
        if self.stamp[node as usize] == self.epoch {
            self.dist[node as usize]
        } else {
            f64::INFINITY
        }
    }

    #[inline]
    fn set(&mut self, node: u32, d: f64, from: u32) {
        self.dist[node as usize] = d;
        self.prev[node as usize] = from;
        self.stamp[node as usize] = self.epoch;
    }

    pub fn distance(&self, node: u32) -> Option<f64> {
        (self.stamp[node as usize] == self.epoch && self.dist[node as usize].is_finite())
            .then(|| self.dist[node as usize])
    }

    /// Path back to the source, source first.
    pub fn path_to(&self, node: u32) -> Vec<u32> {
        let mut path = vec![node];
        let mut cur = node;
        while self.prev[cur as usize] != u32::MAX && self.stamp[cur as usize] == self.epoch {
            cur = self.prev[cur as usize];
            path.push(cur);
            if path.len() > self.dist.len() {
                break; // defensive against cycles in corrupted state
            }
        }
        path.reverse();
        path
    }
}

impl Default for Scratch {
    fn default() -> Self {
        Scratch::new()
    }
}

/// Settled nodes coming out of a truncated run, in settle order.
pub struct RunStats {
    pub settled: Vec<u32>,
}

/// Dijkstra ball from `source`: settles every node within `budget`.
pub fn run(
    mesh: &DiskMesh,
    metric: Metric,
    source: u32,
    budget: f64,
    scratch: &mut Scratch,
) -> RunStats {
    scratch.begin(mesh.n_nodes());
    scratch.set(source, 0.0, u32::MAX);
    scratch.heap.push(HeapEntry {
        dist: 0.0,
        node: source,
    });
    let mut settled = Vec::new();

    while let Some(HeapEntry { dist, node }) = scratch.heap.pop() {
        if dist > scratch.get(node) {
            continue; // stale entry
        }
        if dist > budget {
            break;
        }
        settled.push(node);
        let a = mesh.adj_offset[node as usize] as usize;
        let b = mesh.adj_offset[node as usize + 1] as usize;
        for e in a..b {
            let next = mesh.adj_target[e];
            let w = match metric {
                Metric::Tau => mesh.adj_tau[e] as f64,
                Metric::Phi => mesh.adj_phi[e] as f64,
            };
            let nd = dist + w;
            if nd < scratch.get(next) {
                scratch.set(next, nd, node);
                scratch.heap.push(HeapEntry {
                    dist: nd,
                    node: next,
                });
            }
        }
    }
    RunStats { settled }
}

/// Distances from one source to a set of targets; stops as soon as every
/// target has settled.
pub fn distances_to(
    mesh: &DiskMesh,
    metric: Metric,
    source: u32,
    targets: &[u32],
    scratch: &mut Scratch,
) -> std::collections::HashMap<u32, f64> {
    let mut pending: std::collections::HashSet<u32> = targets.iter().copied().collect();
    pending.remove(&source);
    scratch.begin(mesh.n_nodes());
    scratch.set(source, 0.0, u32::MAX);
    scratch.heap.push(HeapEntry {
        dist: 0.0,
        node: source,
    });
    while let Some(HeapEntry { dist, node }) = scratch.heap.pop() {
        if dist > scratch.get(node) {
            continue;
        }
        pending.remove(&node);
        if pending.is_empty() {
            break;
        }
        let a = mesh.adj_offset[node as usize] as usize;
        let b = mesh.adj_offset[node as usize + 1] as usize;
        for e in a..b {
            let next = mesh.adj_target[e];
            let w = match metric {
                Metric::Tau => mesh.adj_tau[e] as f64,
                Metric::Phi => mesh.adj_phi[e] as f64,
            };
            let nd = dist + w;
            if nd < scratch.get(next) {
                scratch.set(next, nd, node);
                scratch.heap.push(HeapEntry {
                    dist: nd,
                    node: next,
                });
            }
        }
    }
    let mut out = std::collections::HashMap::with_capacity(targets.len() + 1);
    out.insert(source, 0.0);
    for &t in targets {
        if let Some(d) = scratch.distance(t) {
            out.insert(t, d);
        }
    }
    out
}

/// Outcome of a truncated A* query.
pub enum Search {
    Found(f64, Vec<u32>),
    /// The target is certified to lie beyond the budget.
    Beyond,
    /// The pop cap was hit before a certificate either way.
    Capped,
}

/// Point-to-point distance by A* with a certified admissible heuristic:
/// the max of the radial-projection gap and the Euclidean separation scaled
/// by `euclid_factor` (a certified lower density, e.g. `1/sup τ`).
///
/// A pop with `g + h > budget` certifies the target is farther than `budget`;
/// `max_pops` bounds the work spent before giving up undecided.
pub fn astar(
    mesh: &DiskMesh,
    metric: Metric,
    source: u32,
    target: u32,
    euclid_factor: f64,
    budget: f64,
    max_pops: usize,
    scratch: &mut Scratch,
) -> Search {
    if source == target {
        return Search::Found(0.0, vec![source]);
    }
    let target_pos = mesh.node_position(target);
    let target_ring = mesh.ring_of(target);
    let cum = mesh.cum_table(metric);
    let cum_target = cum[target_ring];
    let h = |node: u32| -> f64 {
        let ring = mesh.ring_of(node);
        let radial = (cum[ring] - cum_target).abs();
        let euclid = (mesh.node_position(node) - target_pos).norm() * euclid_factor;
        radial.max(euclid)
    };

    scratch.begin(mesh.n_nodes());
    scratch.set(source, 0.0, u32::MAX);
    scratch.heap.push(HeapEntry {
        dist: h(source),
        node: source,
    });
    let mut pops = 0usize;
    while let Some(HeapEntry { dist: f, node }) = scratch.heap.pop() {
        if scratch.is_done(node) {
            continue;
        }
        if f > budget {
            return Search::Beyond;
        }
        pops += 1;
        if pops > max_pops {
            return Search::Capped;
        }
        scratch.mark_done(node);
        if node == target {
            return Search::Found(scratch.get(node), scratch.path_to(node));
        }
        let g = scratch.get(node);
        let a = mesh.adj_offset[node as usize] as usize;
        let b = mesh.adj_offset[node as usize + 1] as usize;
        for e in a..b {
            let next = mesh.adj_target[e];
            if scratch.is_done(next) {
                continue;
            }
            let w = match metric {
                Metric::Tau => mesh.adj_tau[e] as f64,
                Metric::Phi => mesh.adj_phi[e] as f64,
            };
            let ng = g + w;
            if ng < scratch.get(next) {
                scratch.set(next, ng, node);
                scratch.heap.push(HeapEntry {
                    dist: ng + h(next),
                    node: next,
                });
            }
        }
    }
    Search::Beyond
}

/// Point-to-point distance; `hint` should upper-bound the true distance (for
/// instance a straight-segment quadrature) and only tunes the first budget.
pub fn point_to_point(
    mesh: &DiskMesh,
    metric: Metric,
    source: u32,
    target: u32,
    euclid_factor: f64,
    hint: f64,
    scratch: &mut Scratch,
) -> (f64, Vec<u32>) {
    if source == target {
        return (0.0, vec![source]);
    }
    let mut budget = (1.3 * hint + 0.5).max(1.0);
    for _ in 0..8 {
        match astar(
            mesh,
            metric,
            source,
            target,
            euclid_factor,
            budget,
            usize::MAX,
            scratch,
        ) {
            Search::Found(d, path) => return (d, path),
            _ => budget *= 2.0,
        }
    }
    match astar(
        mesh,
        metric,
        source,
        target,
        euclid_factor,
        f64::INFINITY,
        usize::MAX,
        scratch,
    ) {
        Search::Found(d, path) => (d, path),
        _ => (f64::INFINITY, Vec::new()),
    }
}
