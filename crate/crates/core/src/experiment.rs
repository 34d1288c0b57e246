//! Experiment runner: one command applied to one instance over seeded trials.
//!
//! Trial `i` uses seed `seed + i`. Trials run concurrently and the report
//! stream is sorted by trial index, so output depends only on the instance,
//! the configuration and the seed.

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::caratheodory::{
    derandomized_transversal, eta_perturbed_transversal, frank_wolfe_transversal, random_transversal,
    single_set_caratheodory, FrankWolfeOptions, TransversalResult, WeightedFamily,
};
use crate::combinatorics::binomial;
use crate::epsnet::{
    centerpoint_construct, centerpoint_verify, certify_net, selection_point, weak_epsnet, Violator,
    VIOLATOR_GUARD,
};
use crate::error::{Error, Result};
use crate::geometry::{DykstraOptions, MinimaxConfig, Point, PointSet};
use crate::helly::{
    count_far_transversals, fractional_beta, fractional_helly_witness, helly_center,
    largest_intersecting_subfamily, min_ball_meeting_faces, FaceMode, FractionalMode, TupleConvention,
    BOUND_SLACK,
};
use crate::instance::{generate, InstanceFile, InstanceKind};
use crate::report::{BoundReport, Sense, TheoremTag};
use crate::tverberg::{
    brute_force_tverberg, colored_tverberg, simplex_lower_bound, uncolored_tverberg, HalvingStrategy,
    TverbergOptions,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Caratheodory,
    ColorfulCaratheodory,
    FrankWolfe,
    Tverberg,
    HellyVerify,
    HellyCount,
    FractionalHelly,
    SimplexCheck,
    Selection,
    Epsnet,
    Centerpoint,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Caratheodory,
        Command::ColorfulCaratheodory,
        Command::FrankWolfe,
        Command::Tverberg,
        Command::HellyVerify,
        Command::HellyCount,
        Command::FractionalHelly,
        Command::SimplexCheck,
        Command::Selection,
        Command::Epsnet,
        Command::Centerpoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Caratheodory => "caratheodory",
            Command::ColorfulCaratheodory => "colorful-caratheodory",
            Command::FrankWolfe => "frank-wolfe",
            Command::Tverberg => "tverberg",
            Command::HellyVerify => "helly-verify",
            Command::HellyCount => "helly-count",
            Command::FractionalHelly => "fractional-helly",
            Command::SimplexCheck => "simplex-check",
            Command::Selection => "selection",
            Command::Epsnet => "epsnet",
            Command::Centerpoint => "centerpoint",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown command {s:?}")))
    }
}

/// Algorithm variant selected with `--mode`. Each command accepts a subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Derandomized,
    Random,
    FrankWolfe,
    Affine,
    Cone,
    Exhaustive,
    Heuristic,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "derandomized" => Mode::Derandomized,
            "random" => Mode::Random,
            "frank_wolfe" => Mode::FrankWolfe,
            "affine" => Mode::Affine,
            "cone" => Mode::Cone,
            "exhaustive" => Mode::Exhaustive,
            "heuristic" => Mode::Heuristic,
            _ => return Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    /// Overrides the per-command slack of the pass verdict.
    pub tol: Option<f64>,
    pub mode: Option<Mode>,
    /// Number of sets / subset size (Carathéodory, selection, eps-nets).
    pub r: Option<usize>,
    /// Parts (Tverberg), intersection order (Helly), face size (simplex), depth (centerpoint).
    pub k: Option<usize>,
    /// Frank-Wolfe hypothesis order.
    pub t: Option<usize>,
    pub eps: Option<f64>,
    /// Switches `colorful-caratheodory` to perturbed targets.
    pub eta: Option<f64>,
    /// Per-family far radii for `helly-count`.
    pub rho: Option<Vec<f64>>,
    /// Requires a colored family for `tverberg`.
    pub colored: bool,
    /// Random directions tested by `centerpoint`.
    pub directions: usize,
    /// Record wall-clock time per trial; otherwise `runtime_ms` is 0.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            trials: 1,
            tol: None,
            mode: None,
            r: None,
            k: None,
            t: None,
            eps: None,
            eta: None,
            rho: None,
            colored: false,
            directions: 256,
            timing: false,
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn expect_kind(inst: &InstanceFile, kinds: &[InstanceKind]) -> Result<()> {
    if kinds.contains(&inst.kind()) {
        return Ok(());
    }
    Err(Error::KindMismatch {
        expected: kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join(" or "),
        found: inst.kind().name().into(),
    })
}

fn mode_in(cfg: &ExperimentConfig, command: Command, allowed: &[Mode]) -> Result<Mode> {
    match cfg.mode {
        None => Ok(allowed[0]),
        Some(m) if allowed.contains(&m) => Ok(m),
        Some(m) => Err(bad(format!("mode {m:?} is not available for {}", command.name()))),
    }
}

/// Shared per-run context for building rows.
struct Row<'a> {
    instance_ref: &'a str,
    n: usize,
    dim: usize,
    slack: f64,
}

impl Row<'_> {
    fn report(&self, tag: TheoremTag, r_or_k: usize, achieved: f64, bound: f64, sense: Sense) -> BoundReport {
        BoundReport::new(tag, self.instance_ref, self.n, r_or_k, self.dim, achieved, bound, sense, self.slack)
    }
}

/// Runs `command` on `instance` for `cfg.trials` trials.
///
/// Errors carry `instance_ref`.
pub fn run_experiment(
    command: Command,
    instance: &InstanceFile,
    instance_ref: &str,
    cfg: &ExperimentConfig,
) -> Result<Vec<BoundReport>> {
    run_inner(command, instance, instance_ref, cfg).map_err(|e| Error::InInstance {
        instance_ref: instance_ref.to_string(),
        source: Box::new(e),
    })
}

fn run_inner(command: Command, inst: &InstanceFile, instance_ref: &str, cfg: &ExperimentConfig) -> Result<Vec<BoundReport>> {
    if cfg.trials == 0 {
        return Err(bad("trials must be positive"));
    }
    let trial = prepare(command, inst, cfg)?;
    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i as u64);
            let start = Instant::now();
            let rows = trial(seed, instance_ref)?;
            let ms = if cfg.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
            Ok(rows
                .into_iter()
                .map(|r| BoundReport { runtime_ms: ms, ..r.with_run(seed, i) })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

type Trial = Box<dyn Fn(u64, &str) -> Result<Vec<BoundReport>> + Send + Sync>;

/// Parses the instance once and returns the per-trial closure.
fn prepare(command: Command, inst: &InstanceFile, cfg: &ExperimentConfig) -> Result<Trial> {
    let cfg = cfg.clone();
    let dim = inst.dimension;
    match command {
        Command::Caratheodory => {
            expect_kind(inst, &[InstanceKind::PointSet])?;
            let set = inst.point_set()?;
            let mode = mode_in(&cfg, command, &[Mode::Derandomized, Mode::Random, Mode::FrankWolfe])?;
            let n = set.len();
            let r = cfg.r.unwrap_or(n.div_ceil(2));
            if r == 0 || r > n {
                return Err(bad(format!("caratheodory needs 1 <= r <= n = {n}")));
            }
            let a = set.centroid();
            let copies = vec![set.clone(); r];
            let slack = cfg.tol.unwrap_or(1e-9);
            Ok(Box::new(move |seed, iref| {
                let row = Row { instance_ref: iref, n, dim, slack };
                let (tag, res) = match mode {
                    Mode::Derandomized => (TheoremTag::Thm4, single_set_caratheodory(&set, &a, r)?),
                    Mode::Random => {
                        let fam = WeightedFamily::uniform(copies.clone())?;
                        (TheoremTag::Thm4Random, random_transversal(&fam, &a, seed)?)
                    }
                    _ => (TheoremTag::Thm5, frank_wolfe(&copies, &a, cfg.t.unwrap_or(1))?),
                };
                Ok(vec![row.report(tag, r, res.distance, res.bound, Sense::AtMost)])
            }))
        }
        Command::ColorfulCaratheodory | Command::FrankWolfe => {
            expect_kind(inst, &[InstanceKind::WeightedFamily])?;
            let (fam, a) = inst.weighted_family()?;
            let mode = if command == Command::FrankWolfe {
                mode_in(&cfg, command, &[Mode::FrankWolfe])?
            } else {
                mode_in(&cfg, command, &[Mode::Derandomized, Mode::Random, Mode::FrankWolfe])?
            };
            if cfg.eta.is_some() && mode != Mode::Derandomized {
                return Err(bad("eta applies to the derandomized mode only"));
            }
            let r = fam.r();
            let n = fam.sets().iter().map(PointSet::len).sum();
            let slack = cfg.tol.unwrap_or(1e-9);
            Ok(Box::new(move |seed, iref| {
                let row = Row { instance_ref: iref, n, dim, slack };
                let (tag, res) = match (mode, cfg.eta) {
                    (Mode::Derandomized, Some(eta)) => {
                        (TheoremTag::Lemma3, eta_perturbed_transversal(fam.sets(), &a, eta)?)
                    }
                    (Mode::Derandomized, None) => (TheoremTag::Thm4, derandomized_transversal(&fam, &a)?),
                    (Mode::Random, _) => (TheoremTag::Thm4Random, random_transversal(&fam, &a, seed)?),
                    _ => (TheoremTag::Thm5, frank_wolfe(fam.sets(), &a, cfg.t.unwrap_or(1))?),
                };
                Ok(vec![row.report(tag, r, res.distance, res.bound, Sense::AtMost)])
            }))
        }
        Command::Tverberg => tverberg_trial(inst, cfg),
        Command::HellyVerify => {
            expect_kind(inst, &[InstanceKind::BodyFamily])?;
            let bf = inst.body_family()?;
            if bf.k() != 1 {
                return Err(bad("helly-verify expects a single family of bodies"));
            }
            let k = cfg.k.or(inst.meta_usize("k")).ok_or_else(|| bad("helly-verify needs k"))?;
            let bodies = bf.families()[0].clone();
            let b = bf.anchor().clone();
            let n = bodies.len();
            let slack = cfg.tol.unwrap_or(BOUND_SLACK);
            Ok(Box::new(move |seed, iref| {
                let row = Row { instance_ref: iref, n, dim, slack };
                let mc = MinimaxConfig { seed, ..MinimaxConfig::default() };
                let hc = helly_center(&bodies, k, &b, &mc)?;
                Ok(vec![
                    row.report(TheoremTag::Thm10, k, hc.radius, hc.precise_bound, Sense::AtMost),
                    row.report(TheoremTag::Thm2, k, hc.radius, hc.simple_bound, Sense::AtMost),
                ])
            }))
        }
        Command::HellyCount => {
            expect_kind(inst, &[InstanceKind::BodyFamily])?;
            let bf = inst.body_family()?;
            let rhos = cfg
                .rho
                .clone()
                .or_else(|| inst.meta_f64s("rho"))
                .ok_or_else(|| bad("helly-count needs rho"))?;
            let n = bf.sizes().iter().sum();
            let k = bf.k();
            // The hyperplane generator in its default split promises exactly prod m_i.
            let tight: Option<f64> = (inst.metadata.get("generator") == Some(&json!("hyperplane_family"))
                && inst.metadata.get("split").is_none_or(|s| *s == "alternating"))
            .then(|| inst.meta_f64s("m").map(|m| m.iter().product()))
            .flatten();
            let slack = cfg.tol.unwrap_or(0.0);
            Ok(Box::new(move |seed, iref| {
                let row = Row { instance_ref: iref, n, dim, slack };
                let rep = count_far_transversals(&bf, bf.anchor(), &rhos, DykstraOptions::default(), seed)?;
                let far = rep.far_transversals as f64;
                let mut rows = vec![row.report(TheoremTag::Thm6, k, far, rep.product_bound as f64, Sense::AtLeast)];
                if let Some(p) = tight {
                    rows.push(row.report(TheoremTag::Thm6Tight, k, far, p, Sense::Equal));
                }
                Ok(rows)
            }))
        }
        Command::FractionalHelly => fractional_trial(inst, cfg),
        Command::SimplexCheck => {
            expect_kind(inst, &[InstanceKind::PointSet])?;
            let set = inst.point_set()?;
            let mode = match mode_in(&cfg, command, &[Mode::Affine, Mode::Cone])? {
                Mode::Cone => FaceMode::Cone,
                _ => FaceMode::Affine,
            };
            let n = set.len();
            let ks: Vec<usize> = match cfg.k {
                Some(k) => vec![k],
                None => (1..n).collect(),
            };
            let tag = match mode {
                FaceMode::Affine => TheoremTag::Thm14,
                FaceMode::Cone => TheoremTag::LemmaStrong,
            };
            let slack = cfg.tol.unwrap_or(1e-5);
            Ok(Box::new(move |seed, iref| {
                let row = Row { instance_ref: iref, n, dim, slack };
                let mc = MinimaxConfig { seed, ..MinimaxConfig::default() };
                ks.iter()
                    .map(|&k| {
                        let fb = min_ball_meeting_faces(&set, k, mode, &mc)?;
                        Ok(row.report(tag, k, fb.ratio, fb.lambda, Sense::AtLeast))
                    })
                    .collect()
            }))
        }
        Command::Selection => {
            expect_kind(inst, &[InstanceKind::PointSet])?;
            let set = inst.point_set()?;
            let n = set.len();
            let r = cfg.r.unwrap_or(2);
            let slack = cfg.tol.unwrap_or(0.0);
            Ok(Box::new(move |seed, iref| {
                let row = Row { instance_ref: iref, n, dim, slack };
                let sel = selection_point(&set, r, seed)?;
                let hits = sel.verified_hits.ok_or(Error::GuardExceeded {
                    what: "selection r-subsets",
                    count: sel.total_tuples,
                    limit: crate::epsnet::SELECTION_GUARD,
                })?;
                let required = (sel.hit_count_lower - 1e-9).ceil();
                Ok(vec![row.report(TheoremTag::Thm12Selection, r, hits as f64, required, Sense::AtLeast)])
            }))
        }
        Command::Epsnet => {
            expect_kind(inst, &[InstanceKind::PointSet])?;
            let set = inst.point_set()?;
            let n = set.len();
            let r = cfg.r.unwrap_or(2);
            let eps = cfg.eps.unwrap_or(0.5);
            if !(eps > 0.0 && eps <= 1.0) {
                return Err(bad("eps must lie in (0, 1]"));
            }
            let y = (eps * n as f64).ceil() as usize;
            let exhaustive_ok = binomial(n, y.min(n)) <= VIOLATOR_GUARD;
            let mode = match cfg.mode {
                None if exhaustive_ok => Mode::Exhaustive,
                None => Mode::Heuristic,
                Some(_) => mode_in(&cfg, command, &[Mode::Exhaustive, Mode::Heuristic])?,
            };
            let slack = cfg.tol.unwrap_or(0.0);
            Ok(Box::new(move |seed, iref| {
                let row = Row { instance_ref: iref, n, dim, slack };
                let violator = match mode {
                    Mode::Exhaustive => Violator::Exhaustive,
                    _ => Violator::Heuristic { restarts: 64, seed },
                };
                let net = weak_epsnet(&set, r, eps, violator, seed)?;
                let mut rows = vec![row.report(TheoremTag::Thm13, r, net.net.len() as f64, net.size_bound, Sense::AtMost)];
                if exhaustive_ok {
                    let uncovered = certify_net(&set, &net.net, eps, net.radius)?;
                    rows.push(row.report(TheoremTag::Thm13Cert, r, uncovered.len() as f64, 0.0, Sense::Equal));
                }
                Ok(rows)
            }))
        }
        Command::Centerpoint => {
            expect_kind(inst, &[InstanceKind::PointSet])?;
            let set = inst.point_set()?;
            let n = set.len();
            let k = cfg.k.unwrap_or(2);
            let b = unit_anchor(&set)?;
            let slack = cfg.tol.unwrap_or(1e-9);
            let directions = cfg.directions;
            Ok(Box::new(move |seed, iref| {
                let row = Row { instance_ref: iref, n, dim, slack };
                let c = centerpoint_construct(&set, k, true, seed)?;
                let check = centerpoint_verify(&set, &b, k, &c.q, directions, seed)?;
                Ok(vec![row.report(
                    TheoremTag::Thm12Centerpoint,
                    k,
                    check.min_fraction,
                    1.0 / k as f64,
                    Sense::AtLeast,
                )])
            }))
        }
    }
}

fn frank_wolfe(sets: &[PointSet], a: &Point, t: usize) -> Result<TransversalResult> {
    frank_wolfe_transversal(sets, a, t, FrankWolfeOptions { start: 0, verify: true })
}

/// Center `b` with `P` inside `B(b, 1)`: the origin, else the centroid.
fn unit_anchor(set: &PointSet) -> Result<Point> {
    let inside = |b: &Point| set.points().iter().all(|p| p.dist(b) <= 1.0 + 1e-9);
    let origin = Point::origin(set.dim());
    if inside(&origin) {
        return Ok(origin);
    }
    let c = set.centroid();
    if inside(&c) {
        return Ok(c);
    }
    Err(Error::PreconditionViolated {
        set: 0,
        reason: "centerpoint needs the points inside a unit ball around the origin or the centroid".into(),
    })
}

fn tverberg_trial(inst: &InstanceFile, cfg: ExperimentConfig) -> Result<Trial> {
    let dim = inst.dimension;
    let mode = mode_in(&cfg, Command::Tverberg, &[Mode::Derandomized, Mode::Random])?;
    let strategy = move |seed| match mode {
        Mode::Random => HalvingStrategy::RandomRetry { seed },
        _ => HalvingStrategy::Derandomized,
    };
    let slack = cfg.tol.unwrap_or(1e-9);
    if cfg.colored || inst.kind() == InstanceKind::ColoredFamily {
        expect_kind(inst, &[InstanceKind::ColoredFamily])?;
        let fam = inst.colored_family()?;
        let n = fam.len();
        let r = fam.r();
        return Ok(Box::new(move |seed, iref| {
            let row = Row { instance_ref: iref, n, dim, slack };
            let opts = TverbergOptions { strategy: strategy(seed), recenter: false };
            let part = colored_tverberg(&fam, opts)?;
            let mut rows = vec![row.report(TheoremTag::Thm9, r, part.max_distance, part.bound, Sense::AtMost)];
            // Worst halving node relative to its own closed form.
            let worst = part
                .tree_log
                .iter()
                .filter(|h| h.lemma_bound > 0.0)
                .max_by(|a, b| (a.displacement_q0 / a.lemma_bound).total_cmp(&(b.displacement_q0 / b.lemma_bound)));
            if let Some(h) = worst {
                rows.push(row.report(TheoremTag::Lemma5, h.k, h.displacement_q0, h.lemma_bound, Sense::AtMost));
            }
            Ok(rows)
        }));
    }
    expect_kind(inst, &[InstanceKind::PointSet])?;
    let set = inst.point_set()?;
    let n = set.len();
    let k = cfg.k.unwrap_or(2);
    let lower = inst.metadata.get("generator") == Some(&json!("regular_simplex")) && n <= 9 && k >= 1 && n % k == 0;
    Ok(Box::new(move |seed, iref| {
        let row = Row { instance_ref: iref, n, dim, slack };
        let opts = TverbergOptions { strategy: strategy(seed), recenter: false };
        let part = uncolored_tverberg(&set, k, seed, opts)?;
        let mut rows = vec![row.report(TheoremTag::Thm3, k, part.max_distance, part.bound, Sense::AtMost)];
        if lower {
            let brute = brute_force_tverberg(&set, k)?;
            let bound = simplex_lower_bound(k, n / k, set.diameter());
            rows.push(row.report(TheoremTag::TverbergLower, k, brute.value, bound, Sense::AtLeast));
        }
        Ok(rows)
    }))
}

fn fractional_trial(inst: &InstanceFile, cfg: ExperimentConfig) -> Result<Trial> {
    expect_kind(inst, &[InstanceKind::BodyFamily])?;
    let dim = inst.dimension;
    let bf = inst.body_family()?;
    let slack = cfg.tol.unwrap_or(0.0);
    let n = bf.sizes().iter().sum();
    let (mode, tag, k) = match (bf.k(), cfg.k.or(inst.meta_usize("k"))) {
        (1, Some(k)) => (
            FractionalMode::Single { k, convention: TupleConvention::OrderedDistinct },
            TheoremTag::Thm8,
            k,
        ),
        (1, None) => return Err(bad("fractional-helly on a single family needs k")),
        (k, _) => (FractionalMode::Colored, TheoremTag::Thm7, k),
    };
    // Integer prediction of the generator's construction when all m_i / n_i agree.
    let tight = tight_fractional_sizes(inst);
    Ok(Box::new(move |seed, iref| {
        let row = Row { instance_ref: iref, n, dim, slack };
        let rep = fractional_helly_witness(&bf, mode, seed)?;
        let need = rep.hits_required[rep.best.family_index] as f64;
        let mut rows = vec![row.report(tag, k, rep.best.hits as f64, need, Sense::AtLeast)];
        if let Some((alpha, sizes)) = &tight {
            let beta = fractional_beta(*alpha, k);
            for (i, family) in bf.families().iter().enumerate() {
                let largest = largest_intersecting_subfamily(family)?.len() as f64;
                let predicted = (beta * sizes[i] as f64).round() + 1.0;
                rows.push(row.report(TheoremTag::Thm7Tight, k, largest, predicted, Sense::Equal));
            }
        }
        Ok(rows)
    }))
}

/// `(alpha, n)` for a `fractional_family` instance with a common ratio `m_i / n_i`.
fn tight_fractional_sizes(inst: &InstanceFile) -> Option<(f64, Vec<usize>)> {
    if inst.metadata.get("generator") != Some(&json!("fractional_family")) {
        return None;
    }
    let n = inst.meta_f64s("n")?;
    let m = inst.meta_f64s("m")?;
    let ratio = m[0] / n[0];
    if n.iter().zip(&m).any(|(ni, mi)| (mi / ni - ratio).abs() > 1e-12) {
        return None;
    }
    // Only the all-hyperplane transversals are empty.
    let alpha = 1.0 - m.iter().zip(&n).map(|(mi, ni)| mi / ni).product::<f64>();
    Some((alpha, n.iter().map(|&x| x as usize).collect()))
}

/// Fixed instance mix for `bench`, built from `seed`.
pub fn bench_suite(seed: u64) -> Result<Vec<(Command, String, InstanceFile, ExperimentConfig)>> {
    let p = |v: Value| -> Map<String, Value> { v.as_object().expect("object literal").clone() };
    let base = ExperimentConfig { seed, ..ExperimentConfig::default() };
    let cases: Vec<(Command, &str, Value, ExperimentConfig)> = vec![
        (
            Command::ColorfulCaratheodory,
            "caratheodory_family",
            json!({"r": 32, "d": 64, "size": 32}),
            base.clone(),
        ),
        (
            Command::FrankWolfe,
            "caratheodory_family",
            json!({"r": 32, "d": 64, "size": 32}),
            ExperimentConfig { t: Some(1), ..base.clone() },
        ),
        (Command::Tverberg, "colored_cloud", json!({"r": 16, "k": 16, "d": 32}), base.clone()),
        (
            Command::Tverberg,
            "random_cloud",
            json!({"n": 200, "d": 16}),
            ExperimentConfig { k: Some(10), ..base.clone() },
        ),
        (Command::HellyVerify, "helly_tight", json!({"n": 8, "k": 3}), base.clone()),
        (
            Command::HellyCount,
            "hyperplane_family",
            json!({"m": [4, 4, 4], "rho": [0.5, 0.5, 0.5], "whole": 1}),
            base.clone(),
        ),
        (Command::FractionalHelly, "fractional_family", json!({"n": [4, 4, 4], "m": [2, 2, 2]}), base.clone()),
        (
            Command::SimplexCheck,
            "regular_simplex",
            json!({"n": 5}),
            ExperimentConfig { mode: Some(Mode::Cone), ..base.clone() },
        ),
        (
            Command::Selection,
            "random_cloud",
            json!({"n": 12, "d": 3}),
            ExperimentConfig { r: Some(3), ..base.clone() },
        ),
        (
            Command::Epsnet,
            "random_cloud",
            json!({"n": 12, "d": 3}),
            ExperimentConfig { r: Some(2), eps: Some(0.5), ..base.clone() },
        ),
        (
            Command::Centerpoint,
            "random_cloud",
            json!({"n": 12, "d": 3}),
            ExperimentConfig { k: Some(3), ..base },
        ),
    ];
    cases
        .into_iter()
        .map(|(cmd, generator, params, cfg)| {
            let inst = generate(generator, &p(params), seed)?;
            Ok((cmd, format!("{generator}@{seed}"), inst, cfg))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(name: &str, v: Value) -> InstanceFile {
        generate(name, v.as_object().unwrap(), 5).unwrap()
    }

    #[test]
    fn caratheodory_on_simplex_passes_as_thm4() {
        let inst = gen("regular_simplex", json!({"n": 6}));
        let rows = run_experiment(Command::Caratheodory, &inst, "simplex", &ExperimentConfig::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].theorem_tag, TheoremTag::Thm4);
        assert!(rows[0].pass);
    }

    #[test]
    fn colored_tverberg_with_singleton_colors_is_exact() {
        let inst = gen("colored_cloud", json!({"r": 5, "k": 1, "d": 3}));
        let cfg = ExperimentConfig { colored: true, ..ExperimentConfig::default() };
        let rows = run_experiment(Command::Tverberg, &inst, "k1", &cfg).unwrap();
        assert_eq!(rows[0].theorem_tag, TheoremTag::Thm9);
        assert_eq!(rows[0].achieved, 0.0);
    }

    #[test]
    fn cone_check_on_regular_simplex_matches_lambda() {
        let inst = gen("regular_simplex", json!({"n": 5}));
        let cfg = ExperimentConfig { mode: Some(Mode::Cone), k: Some(2), ..ExperimentConfig::default() };
        let rows = run_experiment(Command::SimplexCheck, &inst, "s5", &cfg).unwrap();
        assert_eq!(rows[0].theorem_tag, TheoremTag::LemmaStrong);
        assert!((rows[0].achieved - 6f64.sqrt()).abs() < 1e-5, "{}", rows[0].achieved);
    }

    #[test]
    fn kind_mismatch_names_the_instance() {
        let inst = gen("regular_simplex", json!({"n": 4}));
        let err = run_experiment(Command::HellyCount, &inst, "file.json", &ExperimentConfig::default()).unwrap_err();
        match err {
            Error::InInstance { instance_ref, source } => {
                assert_eq!(instance_ref, "file.json");
                assert!(matches!(*source, Error::KindMismatch { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mode_outside_command_is_rejected() {
        let inst = gen("regular_simplex", json!({"n": 4}));
        let cfg = ExperimentConfig { mode: Some(Mode::Cone), ..ExperimentConfig::default() };
        assert!(run_experiment(Command::Caratheodory, &inst, "x", &cfg).is_err());
    }

    #[test]
    fn trials_are_ordered_and_seeded() {
        let inst = gen("random_cloud", json!({"n": 30, "d": 4}));
        let cfg = ExperimentConfig { trials: 4, seed: 10, k: Some(3), ..ExperimentConfig::default() };
        let a = run_experiment(Command::Tverberg, &inst, "c", &cfg).unwrap();
        let b = run_experiment(Command::Tverberg, &inst, "c", &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().map(|r| (r.trial, r.seed)).collect::<Vec<_>>(), vec![(0, 10), (1, 11), (2, 12), (3, 13)]);
        assert!(a.iter().all(|r| r.runtime_ms == 0.0));
    }

    #[test]
    fn hyperplane_count_reports_tight_row() {
        let inst = gen("hyperplane_family", json!({"k": 2, "m": [2, 3], "rho": [0.5, 0.5]}));
        let rows = run_experiment(Command::HellyCount, &inst, "h", &ExperimentConfig::default()).unwrap();
        let tight = rows.iter().find(|r| r.theorem_tag == TheoremTag::Thm6Tight).unwrap();
        assert_eq!(tight.achieved, 6.0);
        assert!(rows.iter().all(|r| r.pass));
    }

    #[test]
    fn fractional_construction_rows() {
        let inst = gen("fractional_family", json!({"n": [4, 4, 4], "m": [2, 2, 2]}));
        let rows = run_experiment(Command::FractionalHelly, &inst, "f", &ExperimentConfig::default()).unwrap();
        let tight: Vec<_> = rows.iter().filter(|r| r.theorem_tag == TheoremTag::Thm7Tight).collect();
        assert_eq!(tight.len(), 3);
        assert!(tight.iter().all(|r| r.achieved == 3.0 && r.pass));
    }

    #[test]
    fn remaining_commands_run() {
        let cloud = gen("random_cloud", json!({"n": 10, "d": 3}));
        let cfg = ExperimentConfig { r: Some(2), k: Some(2), ..ExperimentConfig::default() };
        for cmd in [Command::Selection, Command::Epsnet, Command::Centerpoint] {
            let rows = run_experiment(cmd, &cloud, "cloud", &cfg).unwrap();
            assert!(rows.iter().all(|r| r.pass), "{cmd:?}: {rows:?}");
        }
        let fam = gen("caratheodory_family", json!({"r": 6, "d": 4, "size": 5}));
        for mode in [Mode::Derandomized, Mode::FrankWolfe] {
            let cfg = ExperimentConfig { mode: Some(mode), ..ExperimentConfig::default() };
            let rows = run_experiment(Command::ColorfulCaratheodory, &fam, "fam", &cfg).unwrap();
            assert!(rows[0].pass);
        }
        let tight = gen("helly_tight", json!({"n": 5, "k": 2}));
        let rows = run_experiment(Command::HellyVerify, &tight, "t", &ExperimentConfig::default()).unwrap();
        assert!(rows.iter().all(|r| r.pass));
    }
}
