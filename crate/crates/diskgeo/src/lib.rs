//! Numerical geometry of large weighted Bergman spaces on the unit disk.
//!
//! The crate models radial weights `ω(r) = exp(-φ(r))` whose associated radius
//! function `τ = (Δφ)^{-1/2}` collapses at the boundary faster than `1 - r`,
//! together with the two conformal metrics these weights induce:
//!
//! * `d_tau` — density `1/τ`, the quasi-hyperbolic style distance whose bounded
//!   companion `ρ_τ = 1 - exp(-d_τ)` replaces the pseudo-hyperbolic metric;
//! * `d_phi` — density `φ'(|z|)`, which controls boundedness of composition
//!   operators along convex interpolations of symbols.
//!
//! On top of the metric layer sit desk-scale diagnostics for composition
//! operators `C_φ f = f ∘ φ`: boundedness and compactness trend verdicts,
//! compact-difference functionals, boundary contact sets, Carleson box
//! statistics of the pullback measure, and a property harness that checks the
//! pointwise inequalities the whole theory rests on.
//!
//! Distances are computed as shortest paths on nested adaptive polar meshes,
//! so every reported value is an upper estimate that decreases under mesh
//! refinement; all boundary limits are rendered as trend classifications over
//! Stolz-region schedules, with `Inconclusive` as a first-class outcome.
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release -p diskgeo --example weight_models       # weights, τ, admissibility report
//! cargo run --release -p diskgeo --example distances           # d_τ / d_φ vs radial oracles
//! cargo run --release -p diskgeo --example metric_balls        # τ-balls and Euclidean inclusions
//! cargo run --release -p diskgeo --example classify_maps       # bounded / compact trichotomy
//! cargo run --release -p diskgeo --example compact_differences # Γ profiles, surrogate vs mesh
//! cargo run --release -p diskgeo --example f_sets_and_sums     # boundary contact sets, finite sums
//! cargo run --release -p diskgeo --example carleson_boxes      # pullback box statistics
//! cargo run --release -p diskgeo --example inequality_suite    # pointwise lemma checks
//! cargo run --release -p diskgeo --example path_components     # path-connectedness evidence
//! ```
//!
//! The `diskgeo` binary wires the same operations into a scriptable CLI with
//! JSON reports; see the README for subcommands.

pub mod carleson;
pub mod cli;
pub mod criteria;
pub mod geometry;
pub mod report;
pub mod selfmap;
pub mod verify;
pub mod weight;

mod svg;

pub use geometry::{build_mesh, surrogate_f, DiskMesh, DistanceResult, GeodesicEngine, RhoValue};
pub use report::{LimitProfile, RunConfig, Trend, Verdict, VerdictStatus};
pub use selfmap::{MapExpr, StolzSchedule};
pub use weight::{WeightModel, WeightSpec};

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("derived weight quantity is not finite at r = {r}: {what}")]
    NonFiniteDerived { r: f64, what: &'static str },

    #[error("tau is not strictly positive on (0, r_max]: tau({r}) = {value}")]
    NotRadiusFunction { r: f64, value: f64 },

    #[error("point with |z| = {modulus} lies outside the truncated disk (r_max = {r_max})")]
    OutsideTruncation { modulus: f64, r_max: f64 },

    #[error("mesh at level {level} would need ~{estimated} nodes, above the cap {cap}")]
    MeshTooLarge {
        level: u32,
        estimated: u64,
        cap: u64,
    },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("Carleson box degenerate: radius {radius} below 1e-9")]
    DegenerateBox { radius: f64 },

    #[error("pair ({z}, {w}) violates the sampling hypothesis: {what}")]
    PairOutOfRange { z: String, w: String, what: String },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
