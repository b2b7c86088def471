//! The `diskgeo` command line: weight validation, distances, operator
//! analysis, differences, finite sums, Carleson statistics, the inequality
//! suite, and path-connectedness evidence, all emitting self-describing JSON
//! reports (schema `diskgeo/1`).
//!
//! Exit codes mirror the verdict trichotomy: 0 satisfied/pass, 2
//! violated/fail, 3 inconclusive, 1 usage or configuration error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use crate::carleson::{self, CarlesonConfig};
use crate::criteria::{self, CriteriaConfig, GammaMode};
use crate::geometry::{GeoConfig, GeodesicEngine, MeshParams, Metric};
use crate::report::{RunConfig, Thresholds, VerdictStatus};
use crate::selfmap::MapExpr;
use crate::verify::{self, TestFunction};
use crate::weight::{validate_class_w, WeightModel, WeightSpec};
use crate::Result;

#[derive(Parser)]
#[command(
    name = "diskgeo",
    version,
    about = "Geometry and composition-operator diagnostics for exponentially weighted Bergman spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Weight spec: exp:a=1,b=1 | logproxy:alpha=0 | custom:@file.json
    #[arg(long)]
    weight: String,
    /// TOML file overriding tolerances and sampling defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write CSV profile rows here
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Shortest-path distance between two disk points
    Dist {
        #[command(flatten)]
        common: Common,
        /// tau | phi
        #[arg(long, default_value = "tau")]
        metric: String,
        /// x,y
        #[arg(long)]
        from: String,
        /// x,y
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
        #[arg(long, default_value_t = 9)]
        max_level: u32,
    },
    /// Boundedness / compactness classification of one symbol
    Analyze {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        map: String,
    },
    /// Compact-difference evidence for a pair of symbols
    Diff {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        /// surrogate | exact
        #[arg(long, default_value = "surrogate")]
        mode: String,
        /// Render Γ over a polar raster to this SVG file
        #[arg(long)]
        heatmap: Option<PathBuf>,
    },
    /// Finite-sum decomposition evidence
    Sumdiff {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi: String,
        /// Comma-separated part symbols
        #[arg(long)]
        parts: String,
        #[arg(long, default_value = "surrogate")]
        mode: String,
    },
    /// Carleson box statistics of the pullback measure
    Carleson {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Monte Carlo samples (scientific notation accepted)
        #[arg(long, default_value = "1e6")]
        samples: String,
    },
    /// Pointwise inequality suite
    Verify {
        #[command(flatten)]
        common: Common,
        /// all | submean | diff | separation | impot | expdecay
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 500)]
        points: usize,
    },
    /// Path-connectedness evidence along the convex interpolation
    Path {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        /// start:end:step
        #[arg(long, default_value = "0:1:0.1")]
        tgrid: String,
    },
    /// Admissibility report for a weight
    WeightValidate {
        #[command(flatten)]
        common: Common,
    },
}

/// Tunables loadable from `--config file.toml`; everything is optional.
#[derive(Debug, Clone, Default, serde::Deserialize)]
struct FileConfig {
    r_max: Option<f64>,
    tol_rel: Option<f64>,
    eps_zero: Option<f64>,
    cap: Option<f64>,
    eps_f: Option<f64>,
    n_angles: Option<usize>,
    coverage: Option<f64>,
    max_level: Option<u32>,
    samples: Option<usize>,
}

struct Ctx {
    model: WeightModel,
    run: RunConfig,
    file: FileConfig,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
}

impl Ctx {
    fn new(common: &Common, maps: Vec<String>) -> Result<Ctx> {
        let file: FileConfig = match &common.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                toml::from_str(&text)
                    .map_err(|e| crate::Error::InvalidSpec(format!("bad config: {e}")))?
            }
            None => FileConfig::default(),
        };
        let spec = WeightSpec::parse(&common.weight)?;
        let r_max = file.r_max.unwrap_or(crate::weight::DEFAULT_R_MAX);
        let model = WeightModel::build(spec, r_max)?;
        let mut run = RunConfig::new(&common.weight, maps);
        run.r_max = r_max;
        run.seed = common.seed;
        if let Some(t) = file.tol_rel {
            run.tol_rel = t;
        }
        if let Some(l) = file.max_level {
            run.max_level = l;
        }
        run.thresholds = Thresholds {
            eps_zero: file.eps_zero.unwrap_or(1e-4),
            cap: file.cap.unwrap_or(1e6),
            eps_f: file.eps_f.unwrap_or(1e-3),
            n_angles: file.n_angles.unwrap_or(64),
        };
        Ok(Ctx {
            model,
            run,
            file,
            out: common.out.clone(),
            csv: common.csv.clone(),
        })
    }

    fn criteria_cfg(&self) -> CriteriaConfig {
        CriteriaConfig {
            thresholds: self.run.thresholds,
            alpha: 2.0,
            rays: 5,
            seed: self.run.seed,
        }
    }

    /// Engine whose coverage accommodates the given radius, stepping down the
    /// dyadic ladder if the node cap forbids the wanted coverage.
    fn engine(&self, needed: f64) -> Result<GeodesicEngine> {
        let ladder = [0.75, 0.875, 0.9375, 0.953125, 0.96875];
        let wanted = self.file.coverage.unwrap_or_else(|| {
            *ladder
                .iter()
                .find(|&&c| c >= needed + 0.002)
                .unwrap_or(&0.96875)
        });
        let mut idx = ladder
            .iter()
            .position(|&c| (c - wanted).abs() < 1e-12)
            .unwrap_or(ladder.len() - 1);
        loop {
            let mut cfg = GeoConfig::for_model(&self.model);
            cfg.params = MeshParams::for_model(&self.model).with_coverage(ladder[idx]);
            cfg.level_cap = self.run.max_level;
            cfg.tol_rel = self.run.tol_rel;
            let engine = GeodesicEngine::new(self.model.clone(), cfg);
            match engine.mesh(0) {
                Ok(_) => return Ok(engine),
                Err(crate::Error::MeshTooLarge { .. }) if idx > 0 => idx -= 1,
                Err(e) => return Err(e),
            }
        }
    }

    fn emit(&self, command: &str, result: serde_json::Value) -> Result<()> {
        let report = json!({
            "schema": "diskgeo/1",
            "command": command,
            "config": self.run,
            "result": result,
        });
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        match &self.out {
            Some(path) => std::fs::write(path, text + "\n")?,
            None => println!("{text}"),
        }
        Ok(())
    }

    fn emit_csv(&self, header: &str, rows: &[String]) -> Result<()> {
        if let Some(path) = &self.csv {
            let mut text = String::from(header);
            text.push('\n');
            for row in rows {
                text.push_str(row);
                text.push('\n');
            }
            std::fs::write(path, text)?;
        }
        Ok(())
    }
}

fn parse_point(s: &str) -> Result<Complex64> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| crate::Error::InvalidSpec(format!("point `{s}` must be x,y")))?;
    Ok(Complex64::new(
        x.trim()
            .parse()
            .map_err(|e| crate::Error::InvalidSpec(format!("bad x: {e}")))?,
        y.trim()
            .parse()
            .map_err(|e| crate::Error::InvalidSpec(format!("bad y: {e}")))?,
    ))
}

fn parse_samples(s: &str) -> Result<usize> {
    let v: f64 = s
        .parse()
        .map_err(|e| crate::Error::InvalidSpec(format!("bad sample count `{s}`: {e}")))?;
    if !(1.0..=1e9).contains(&v) {
        return Err(crate::Error::InvalidSpec(
            "samples must be in [1, 1e9]".into(),
        ));
    }
    Ok(v as usize)
}

fn parse_tgrid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(crate::Error::InvalidSpec(
            "tgrid must be start:end:step".into(),
        ));
    }
    let (a, b, step): (f64, f64, f64) = (
        parts[0]
            .parse()
            .map_err(|_| crate::Error::InvalidSpec("bad tgrid start".into()))?,
        parts[1]
            .parse()
            .map_err(|_| crate::Error::InvalidSpec("bad tgrid end".into()))?,
        parts[2]
            .parse()
            .map_err(|_| crate::Error::InvalidSpec("bad tgrid step".into()))?,
    );
    if step <= 0.0 || b <= a {
        return Err(crate::Error::InvalidSpec(
            "tgrid needs end > start, step > 0".into(),
        ));
    }
    let mut grid = Vec::new();
    let mut t = a;
    while t < b - 1e-12 {
        grid.push(t);
        t += step;
    }
    grid.push(b);
    Ok(grid)
}

fn profiles_csv(verdict: &crate::report::Verdict) -> Vec<String> {
    let mut rows = Vec::new();
    for (angle, profile) in verdict.boundary_angles.iter().zip(&verdict.profiles) {
        for (r, v) in &profile.samples {
            rows.push(format!("{angle},{r},{v}"));
        }
    }
    rows
}

fn status_json(status: VerdictStatus) -> &'static str {
    match status {
        VerdictStatus::Satisfied => "satisfied",
        VerdictStatus::Violated => "violated",
        VerdictStatus::Inconclusive => "inconclusive",
    }
}

/// Entry point; returns the process exit code.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Dist {
            common,
            metric,
            from,
            to,
            tol,
            max_level,
        } => {
            let mut ctx = Ctx::new(&common, vec![])?;
            ctx.run.tol_rel = tol;
            ctx.run.max_level = max_level;
            let metric = match metric.as_str() {
                "tau" => Metric::Tau,
                "phi" => Metric::Phi,
                other => {
                    return Err(crate::Error::InvalidSpec(format!(
                        "metric must be tau or phi, not `{other}`"
                    )))
                }
            };
            let (z, w) = (parse_point(&from)?, parse_point(&to)?);
            let engine = ctx.engine(z.norm().max(w.norm()))?;
            let d = engine.dist(metric, z, w)?;
            ctx.emit("dist", serde_json::to_value(&d).unwrap())?;
            Ok(if d.converged { 0 } else { 3 })
        }
        Command::Analyze { common, map } => {
            let ctx = Ctx::new(&common, vec![map.clone()])?;
            let expr = MapExpr::parse(&map)?;
            let cfg = ctx.criteria_cfg();
            let self_map =
                crate::selfmap::check_selfmap(&expr, 100_000, ctx.run.seed, ctx.model.r_max());
            let bounded = criteria::boundedness(&ctx.model, &expr, &cfg)?;
            let compact = criteria::compactness(&ctx.model, &expr, &cfg)?;
            let classification = match (bounded.status, compact.status) {
                (VerdictStatus::Violated, _) => "unbounded",
                (_, VerdictStatus::Satisfied) => "compact",
                (VerdictStatus::Satisfied, VerdictStatus::Violated) => "bounded-not-compact",
                _ => "inconclusive",
            };
            ctx.emit_csv("angle,r,value", &profiles_csv(&bounded))?;
            ctx.emit(
                "analyze",
                json!({
                    "self_map": self_map,
                    "boundedness": {"status": status_json(bounded.status), "reason": bounded.reason},
                    "compactness": {"status": status_json(compact.status), "reason": compact.reason},
                    "classification": classification,
                    "profiles": bounded.profiles,
                }),
            )?;
            Ok(match classification {
                "compact" => 0,
                "inconclusive" => 3,
                _ => 2,
            })
        }
        Command::Diff {
            common,
            phi,
            psi,
            mode,
            heatmap,
        } => {
            let ctx = Ctx::new(&common, vec![phi.clone(), psi.clone()])?;
            let (phi_expr, psi_expr) = (MapExpr::parse(&phi)?, MapExpr::parse(&psi)?);
            let mode = parse_mode(&mode)?;
            let cfg = ctx.criteria_cfg();
            let engine = match mode {
                GammaMode::Exact => Some(ctx.engine(0.95)?),
                GammaMode::Surrogate => None,
            };
            let report = criteria::compact_difference(
                &ctx.model,
                engine.as_ref(),
                &phi_expr,
                &psi_expr,
                &cfg,
                mode,
            )?;
            if let Some(path) = heatmap {
                let svg = gamma_heatmap(&ctx.model, &phi_expr, &psi_expr, &phi, &psi)?;
                std::fs::write(path, svg)?;
            }
            ctx.emit_csv("angle,r,value", &profiles_csv(&report.verdict))?;
            let code = report.verdict.status_exit_code();
            ctx.emit("diff", serde_json::to_value(&report).unwrap())?;
            Ok(code)
        }
        Command::Sumdiff {
            common,
            phi,
            parts,
            mode,
        } => {
            let ctx = Ctx::new(&common, vec![phi.clone(), parts.clone()])?;
            let phi_expr = MapExpr::parse(&phi)?;
            let part_exprs: Vec<MapExpr> = parts
                .split(';')
                .map(MapExpr::parse)
                .collect::<Result<_>>()?;
            let mode = parse_mode(&mode)?;
            let engine = match mode {
                GammaMode::Exact => Some(ctx.engine(0.95)?),
                GammaMode::Surrogate => None,
            };
            let verdict = criteria::finite_sum_difference(
                &ctx.model,
                engine.as_ref(),
                &phi_expr,
                &part_exprs,
                &ctx.criteria_cfg(),
                mode,
            )?;
            let code = verdict.status_exit_code();
            ctx.emit("sumdiff", serde_json::to_value(&verdict).unwrap())?;
            Ok(code)
        }
        Command::Carleson {
            common,
            map,
            delta,
            samples,
        } => {
            let mut ctx = Ctx::new(&common, vec![map.clone()])?;
            let expr = MapExpr::parse(&map)?;
            let n_samples = ctx.file.samples.unwrap_or(parse_samples(&samples)?);
            ctx.file.samples = Some(n_samples);
            let ccfg = CarlesonConfig {
                n_samples,
                seed: ctx.run.seed,
                ..Default::default()
            };
            let centers = carleson::proxy_centers(16, 4);
            let (proxy, stats) =
                carleson::operator_norm_proxy(&ctx.model, &expr, &centers, delta, &ccfg)?;
            let radii = carleson::default_vanishing_radii();
            let angles: Vec<f64> = (0..8)
                .map(|j| std::f64::consts::TAU * j as f64 / 8.0)
                .collect();
            let profiles =
                carleson::vanishing_profile(&ctx.model, &expr, delta, &angles, &radii, &ccfg)?;
            let rows: Vec<String> = stats
                .iter()
                .map(|s| {
                    let c = Complex64::new(s.center.0, s.center.1);
                    format!("{},{},{},{}", c.norm(), c.arg(), s.estimate, s.std_error)
                })
                .collect();
            ctx.emit_csv("center_r,center_theta,estimate,stderr", &rows)?;
            let vanishing: Vec<_> = profiles
                .iter()
                .map(|(angle, p, _)| json!({"angle": angle, "trend": p.trend, "tail": p.tail_median, "truncated": p.truncated}))
                .collect();
            ctx.emit(
                "carleson",
                json!({
                    "norm_proxy_relative": proxy,
                    "boxes": stats,
                    "vanishing_profiles": vanishing,
                }),
            )?;
            Ok(0)
        }
        Command::Verify {
            common,
            suite,
            points,
        } => {
            let ctx = Ctx::new(&common, vec![])?;
            let model = &ctx.model;
            let seed = ctx.run.seed;
            let delta = model.m_tau() / 2.0;
            let mut results: Vec<verify::CheckResult> = Vec::new();
            let want = |name: &str| suite == "all" || suite == name;
            if want("submean") {
                results.push(verify::submean_check(
                    model,
                    &TestFunction::Monomial(5),
                    1.0,
                    2.0,
                    delta,
                    points,
                    seed,
                )?);
                results.push(verify::submean_check(
                    model,
                    &TestFunction::ExpLinear(Complex64::new(2.0, 0.0)),
                    1.0,
                    2.0,
                    delta,
                    points,
                    seed,
                )?);
                results.push(verify::deriv_submean_check(
                    model,
                    &TestFunction::Monomial(3),
                    2.0,
                    delta,
                    points,
                    seed,
                )?);
            }
            if want("diff") {
                results.push(verify::difference_bound_check(
                    model,
                    None,
                    &TestFunction::Monomial(4),
                    2.0,
                    delta,
                    points,
                    seed,
                )?);
            }
            if want("impot") {
                results.push(verify::impot_check(model, 1.0, points, seed)?);
            }
            if want("separation") || want("expdecay") {
                let engine = ctx.engine(0.95)?;
                if want("separation") {
                    results.push(verify::separation_check(
                        model, &engine, 0, delta, points, seed,
                    )?);
                }
                if want("expdecay") {
                    let small = ctx.engine(0.9)?;
                    results.push(verify::exp_decay_check(
                        model,
                        &small,
                        1,
                        1,
                        points.min(200),
                        seed,
                    )?);
                }
            }
            if results.is_empty() {
                return Err(crate::Error::InvalidSpec(format!(
                    "unknown suite `{suite}`"
                )));
            }
            let violations: usize = results.iter().map(|r| r.n_violations).sum();
            ctx.emit("verify", serde_json::to_value(&results).unwrap())?;
            Ok(if violations > 0 { 2 } else { 0 })
        }
        Command::Path {
            common,
            phi,
            psi,
            tgrid,
        } => {
            let ctx = Ctx::new(&common, vec![phi.clone(), psi.clone()])?;
            let (phi_expr, psi_expr) = (MapExpr::parse(&phi)?, MapExpr::parse(&psi)?);
            let grid = parse_tgrid(&tgrid)?;
            let report = criteria::path_connectedness(
                &ctx.model,
                &phi_expr,
                &psi_expr,
                &grid,
                &ctx.criteria_cfg(),
            )?;
            let code = if report.all_bounded { 0 } else { 2 };
            ctx.emit("path", serde_json::to_value(&report).unwrap())?;
            Ok(code)
        }
        Command::WeightValidate { common } => {
            let ctx = Ctx::new(&common, vec![])?;
            let report = validate_class_w(&ctx.model);
            let code = if report.rejected_not_class_w {
                2
            } else if report.all_pass {
                0
            } else {
                2
            };
            ctx.emit("weight-validate", serde_json::to_value(&report).unwrap())?;
            Ok(code)
        }
    }
}

fn parse_mode(s: &str) -> Result<GammaMode> {
    match s {
        "surrogate" => Ok(GammaMode::Surrogate),
        "exact" => Ok(GammaMode::Exact),
        other => Err(crate::Error::InvalidSpec(format!(
            "mode must be surrogate or exact, not `{other}`"
        ))),
    }
}

fn gamma_heatmap(
    model: &WeightModel,
    phi: &MapExpr,
    psi: &MapExpr,
    phi_name: &str,
    psi_name: &str,
) -> Result<String> {
    let n_radial = 48;
    let n_angular = 96;
    let r_max = 0.99;
    let mut values = Vec::with_capacity(n_radial * n_angular);
    for i in 0..n_radial {
        let r = r_max * (i as f64 + 0.5) / n_radial as f64;
        for j in 0..n_angular {
            let theta = std::f64::consts::TAU * (j as f64 + 0.5) / n_angular as f64;
            let z = Complex64::from_polar(r, theta);
            let v = criteria::gamma_difference(model, None, phi, psi, z, GammaMode::Surrogate)?
                .map(|g| g.value)
                .unwrap_or(f64::NAN);
            values.push(v);
        }
    }
    Ok(crate::svg::render(
        &crate::svg::PolarRaster {
            n_radial,
            n_angular,
            r_max,
            values,
        },
        &format!("Γ({phi_name}, {psi_name}) — surrogate mode, linear scale"),
    ))
}
