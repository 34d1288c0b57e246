//! Selection lemma, weak epsilon-nets and centerpoints without dimension.
//!
//! Radii are `3.5 D / sqrt(r)` with `D = diam P` of the whole input, fixed for
//! the lifetime of a net construction.

use std::collections::HashSet;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, guard};
use crate::error::{Error, Result};
use crate::geometry::{min_norm_point_rows, minimax_center, vector as v, ConvexBody, MinimaxConfig, Point, PointSet};
use crate::tverberg::{uncolored_tverberg, TverbergOptions};

/// Radius constant of the selection lemma.
pub const SELECTION_CONSTANT: f64 = 3.5;
/// Exhaustive counting limit for `C(n, r)` in [`selection_point`].
pub const SELECTION_GUARD: u128 = 100_000;
/// Limit on the number of candidate subsets the exhaustive violator scans.
pub const VIOLATOR_GUARD: u128 = 1_000_000;
/// Limit on subsets in the Helly-route centerpoint construction.
pub const CENTERPOINT_GUARD: u128 = 5_000;
/// Hull-distance tolerance of the min-norm solver in hit tests.
const HULL_TOL: f64 = 1e-13;

/// `2 + sqrt(2)`.
pub fn gamma() -> f64 {
    2.0 + 2f64.sqrt()
}

/// `3.5 D / sqrt(r)`.
pub fn selection_radius(d: f64, r: usize) -> f64 {
    SELECTION_CONSTANT * d / (r as f64).sqrt()
}

/// `sqrt(1 + 2 ((r - 1)/r) gamma^2) / sqrt(2)`: the published radius factor of
/// the selection argument, in units of `D / sqrt(r)`.
pub fn selection_factor_published(r: usize) -> f64 {
    let g = gamma();
    ((1.0 + 2.0 * ((r - 1) as f64 / r as f64) * g * g) / 2.0).sqrt()
}

/// `sqrt(1 + 2 gamma^2) / sqrt(2) = sqrt(6.5 + 4 sqrt 2)`: the factor from the
/// corrected perturbed Carathéodory bound with `eta = gamma / sqrt(r)`,
/// independent of `r`. It is also the supremum of [`selection_factor_published`].
pub fn selection_factor() -> f64 {
    (6.5 + 4.0 * 2f64.sqrt()).sqrt()
}

/// `r^-r C(n, r)`.
pub fn selection_hit_lower(n: usize, r: usize) -> f64 {
    binomial(n, r) as f64 / (r as f64).powi(r as i32)
}

/// `x (x - 1) .. (x - r + 1) / r!` for real `x`, zero when `x < r`.
pub fn real_binomial(x: f64, r: usize) -> f64 {
    if x < r as f64 {
        return 0.0;
    }
    (0..r).fold(1.0, |acc, i| acc * (x - i as f64) / (i + 1) as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionResult {
    pub q: Point,
    /// `3.5 D / sqrt(r)`.
    pub radius: f64,
    /// `r^-r C(n, r)`.
    pub hit_count_lower: f64,
    /// r-subsets whose hull meets `B(q, radius)`, when `C(n, r)` is within the guard.
    pub verified_hits: Option<u128>,
    pub total_tuples: u128,
    /// `max_i d(q, conv P_i)` of the Tverberg partition behind `q`.
    pub tverberg_distance: f64,
}

impl SelectionResult {
    /// `verified_hits >= ceil(hit_count_lower)`; `None` when not counted.
    pub fn pass(&self) -> Option<bool> {
        self.verified_hits
            .map(|h| h as f64 >= (self.hit_count_lower - 1e-9).ceil())
    }
}

fn hull_distance(rows: &[&[f64]], subset: &[usize], q: &[f64]) -> Result<f64> {
    let sub: Vec<&[f64]> = subset.iter().map(|&i| rows[i]).collect();
    Ok(min_norm_point_rows(&sub, q, HULL_TOL)?.distance)
}

/// r-subsets of `indices` whose hull meets `B(q, radius)`.
fn hitting_tuples(rows: &[&[f64]], indices: &[usize], r: usize, q: &[f64], radius: f64) -> Result<Vec<Vec<usize>>> {
    let tuples: Vec<Vec<usize>> = indices.iter().copied().combinations(r).collect();
    let hits = tuples
        .into_par_iter()
        .map(|t| Ok((hull_distance(rows, &t, q)? <= radius).then_some(t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// Selection point: the uncolored Tverberg center for `floor(n/r)` parts.
///
/// With `C(n, r) <= SELECTION_GUARD` every r-subset is tested against
/// `B(q, 3.5 D / sqrt(r))`.
pub fn selection_point(set: &PointSet, r: usize, seed: u64) -> Result<SelectionResult> {
    selection_with_radius(set, r, seed, selection_radius(set.diameter(), r))
}

fn selection_with_radius(set: &PointSet, r: usize, seed: u64, radius: f64) -> Result<SelectionResult> {
    let n = set.len();
    if r < 2 || r > n {
        return Err(Error::InvalidArgument(format!("selection needs 2 <= r <= n = {n}, got {r}")));
    }
    let parts = n / r;
    let tv = uncolored_tverberg(set, parts, seed, TverbergOptions::default())?;
    let total = binomial(n, r);
    let verified_hits = if total <= SELECTION_GUARD {
        let rows = set.rows();
        let all: Vec<usize> = (0..n).collect();
        Some(hitting_tuples(&rows, &all, r, tv.center.coords(), radius)?.len() as u128)
    } else {
        None
    };
    Ok(SelectionResult {
        q: tv.center,
        radius,
        hit_count_lower: selection_hit_lower(n, r),
        verified_hits,
        total_tuples: total,
        tverberg_distance: tv.max_distance,
    })
}

/// How [`weak_epsnet`] looks for a subset `Y` whose hull avoids the net.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violator {
    /// All `ceil(eps n)`-subsets. Complete: a larger violator contains one of
    /// that size, since hulls shrink with the subset.
    Exhaustive,
    /// The `ceil(eps n)` points farthest from the net, then random subsets.
    Heuristic { restarts: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetIteration {
    /// Indices of the violating subset.
    pub y: Vec<usize>,
    /// r-tuples of `Y` newly deleted (hull meets the new ball); `None` when not tracked.
    pub deleted: Option<u128>,
    /// `r^-r C(eps n, r)`.
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsNetResult {
    pub net: Vec<Point>,
    /// `3.5 D / sqrt(r)`.
    pub radius: f64,
    /// `r^r eps^-r`.
    pub size_bound: f64,
    pub iterations: usize,
    pub log: Vec<NetIteration>,
    /// `C(n, r)`.
    pub tracked_tuples: u128,
    /// Whether the last violator search came back empty (as opposed to hitting the cap).
    pub terminated: bool,
}

impl EpsNetResult {
    /// Every logged deletion count reaches its requirement.
    pub fn deletions_ok(&self) -> bool {
        self.log
            .iter()
            .all(|it| it.deleted.is_none_or(|d| d as f64 >= it.required - 1e-9))
    }

    /// `iterations r^-r C(eps n, r) <= C(n, r)`.
    pub fn accounting_ok(&self) -> bool {
        let per = self.log.first().map(|it| it.required).unwrap_or(0.0);
        self.iterations as f64 * per <= self.tracked_tuples as f64 + 1e-9
    }
}

fn subset_size(n: usize, eps: f64) -> usize {
    ((eps * n as f64) - 1e-9).ceil().max(1.0) as usize
}

/// Whether `conv Y` stays farther than `radius` from every net point.
fn avoids(rows: &[&[f64]], y: &[usize], net: &[Point], radius: f64) -> Result<bool> {
    for f in net {
        if hull_distance(rows, y, f.coords())? <= radius {
            return Ok(false);
        }
    }
    Ok(true)
}

fn find_violator(
    rows: &[&[f64]],
    size: usize,
    net: &[Point],
    radius: f64,
    mode: Violator,
    round: usize,
) -> Result<Option<Vec<usize>>> {
    let n = rows.len();
    match mode {
        Violator::Exhaustive => {
            guard("violator subsets", binomial(n, size), VIOLATOR_GUARD)?;
            let found = (0..n)
                .combinations(size)
                .par_bridge()
                .map(|y| Ok(avoids(rows, &y, net, radius)?.then_some(y)))
                .collect::<Result<Vec<_>>>()?;
            // par_bridge loses order; take the lexicographically smallest for determinism.
            Ok(found.into_iter().flatten().min())
        }
        Violator::Heuristic { restarts, seed } => {
            let mut order: Vec<(f64, usize)> = (0..n)
                .map(|i| {
                    let d = net.iter().map(|f| v::dist(rows[i], f.coords())).fold(f64::INFINITY, f64::min);
                    (d, i)
                })
                .collect();
            order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut y: Vec<usize> = order.iter().take(size).map(|&(_, i)| i).collect();
            y.sort_unstable();
            if avoids(rows, &y, net, radius)? {
                return Ok(Some(y));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (round as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            for _ in 0..restarts {
                let mut y = sample(&mut rng, n, size).into_vec();
                y.sort_unstable();
                if avoids(rows, &y, net, radius)? {
                    return Ok(Some(y));
                }
            }
            Ok(None)
        }
    }
}

/// Weak epsilon-net: while some `Y` with `|Y| >= eps n` has a hull avoiding
/// `F + 3.5 D/sqrt(r) B`, add the selection point of `Y` to `F`.
///
/// Iterations are capped at `floor(r^r eps^-r)`. Deletions are tracked when
/// `C(|Y|, r) <= SELECTION_GUARD`.
pub fn weak_epsnet(set: &PointSet, r: usize, eps: f64, violator: Violator, seed: u64) -> Result<EpsNetResult> {
    let n = set.len();
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1], got {eps}")));
    }
    if r < 2 {
        return Err(Error::InvalidArgument(format!("r must be at least 2, got {r}")));
    }
    let size = subset_size(n, eps);
    if size < r {
        return Err(Error::InvalidArgument(format!(
            "subsets of size ceil(eps n) = {size} cannot hold r = {r} points"
        )));
    }
    let rows = set.rows();
    let radius = selection_radius(set.diameter(), r);
    let size_bound = (r as f64).powi(r as i32) * eps.powi(-(r as i32));
    let cap = size_bound.floor() as usize;
    let required = real_binomial(eps * n as f64, r) / (r as f64).powi(r as i32);

    let mut net: Vec<Point> = Vec::new();
    let mut log = Vec::new();
    let mut deleted: HashSet<Vec<usize>> = HashSet::new();
    let mut terminated = false;
    while log.len() < cap {
        let Some(y) = find_violator(&rows, size, &net, radius, violator, log.len())? else {
            terminated = true;
            break;
        };
        let sub = set.select(&y)?;
        let sel = selection_with_radius(&sub, r, seed.wrapping_add(log.len() as u64), radius)?;
        let q = sel.q;
        let fresh = if binomial(y.len(), r) <= SELECTION_GUARD {
            let hits = hitting_tuples(&rows, &y, r, q.coords(), radius)?;
            let before = deleted.len();
            deleted.extend(hits);
            Some((deleted.len() - before) as u128)
        } else {
            None
        };
        net.push(q);
        log.push(NetIteration { y, deleted: fresh, required });
    }
    if !terminated {
        terminated = find_violator(&rows, size, &net, radius, violator, log.len())?.is_none();
    }
    Ok(EpsNetResult {
        iterations: log.len(),
        net,
        radius,
        size_bound,
        log,
        tracked_tuples: binomial(n, r),
        terminated,
    })
}

/// Subsets of size `ceil(eps n)` whose hull is farther than `radius` from
/// every net point. Empty means the net is certified: a larger `Y` contains
/// such a subset, and its hull contains that subset's hull.
pub fn certify_net(set: &PointSet, net: &[Point], eps: f64, radius: f64) -> Result<Vec<Vec<usize>>> {
    let n = set.len();
    let size = subset_size(n, eps);
    guard("certification subsets", binomial(n, size), VIOLATOR_GUARD)?;
    let rows = set.rows();
    let mut bad = (0..n)
        .combinations(size)
        .par_bridge()
        .map(|y| Ok(avoids(&rows, &y, net, radius)?.then_some(y)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    bad.sort();
    Ok(bad)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CenterpointCheck {
    /// Minimum over tested directions of the fraction of points in the
    /// extremal halfspace containing `B(q, 1/sqrt(k))`.
    pub min_fraction: f64,
    pub worst_direction: Vec<f64>,
    pub directions: usize,
    pub pass: bool,
}

/// Checks halfspaces `{x : u·x >= u·q - 1/sqrt(k)}` over sampled unit
/// directions, plus all normalized point differences when `n <= 50`.
pub fn centerpoint_verify(
    set: &PointSet,
    b: &Point,
    k: usize,
    q: &Point,
    directions: usize,
    seed: u64,
) -> Result<CenterpointCheck> {
    crate::geometry::check_dim(set.dim(), b.dim())?;
    crate::geometry::check_dim(set.dim(), q.dim())?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    for (i, p) in set.points().iter().enumerate() {
        if p.dist(b) > 1.0 + 1e-9 {
            return Err(Error::PreconditionViolated {
                set: i,
                reason: format!("point lies {} from b, outside B(b, 1)", p.dist(b)),
            });
        }
    }
    let d = set.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(directions);
    while dirs.len() < directions {
        let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let l = v::norm(&g);
        if l > 1e-12 {
            dirs.push(v::scaled(&g, 1.0 / l));
        }
    }
    let rows = set.rows();
    if set.len() <= 50 {
        for (a, b) in rows.iter().tuple_combinations() {
            let diff = v::sub(a, b);
            let l = v::norm(&diff);
            if l > 1e-12 {
                dirs.push(v::scaled(&diff, 1.0 / l));
                dirs.push(v::scaled(&diff, -1.0 / l));
            }
        }
    }
    let shift = 1.0 / (k as f64).sqrt();
    let n = set.len() as f64;
    let (min_fraction, worst) = dirs
        .par_iter()
        .map(|u| {
            let level = v::dot(u, q.coords()) - shift;
            let inside = rows.iter().filter(|p| v::dot(u, p) >= level - 1e-12).count();
            (inside as f64 / n, u)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(f, u)| (f, u.clone()))
        .unwrap_or((1.0, vec![0.0; d]));
    Ok(CenterpointCheck {
        pass: min_fraction >= 1.0 / k as f64 - 1e-9,
        min_fraction,
        worst_direction: worst,
        directions: dirs.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterpointRoute {
    /// Minimax center of the hulls of all `(n - ceil(n/k) + 1)`-subsets.
    HellySubsets,
    /// Uncolored Tverberg center with `ceil(n/k)` parts.
    Tverberg,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CenterpointConstruction {
    pub q: Point,
    pub route: CenterpointRoute,
    /// Radius within which the route's argument guarantees the property:
    /// the minimax value on the Helly route, the Tverberg distance otherwise.
    pub achieved_radius: f64,
    /// `1 / sqrt(k)`.
    pub target_radius: f64,
}

/// Centerpoint candidate. Neither route is taken from a published proof.
///
/// Helly route: a closed halfspace containing `B(q, rho)` but fewer than
/// `n/k` points leaves at least `m = n - ceil(n/k) + 1` points in the open
/// complement, whose hull is then farther than `rho` from `q`. So
/// `max_S d(q, conv S) <= 1/sqrt(k)` over all m-subsets is sufficient, and any
/// `k` of these hulls share a point of `P`, which makes the no-dimension Helly
/// bound available. Falls back to the Tverberg route when `C(n, m)` exceeds
/// the guard and `allow_fallback` is set.
pub fn centerpoint_construct(set: &PointSet, k: usize, allow_fallback: bool, seed: u64) -> Result<CenterpointConstruction> {
    let n = set.len();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let target_radius = 1.0 / (k as f64).sqrt();
    let per = n.div_ceil(k);
    let m = n - per + 1;
    let count = binomial(n, m);
    if count <= CENTERPOINT_GUARD {
        let bodies = (0..n)
            .combinations(m)
            .map(|s| Ok(ConvexBody::hull(set.select(&s)?)))
            .collect::<Result<Vec<_>>>()?;
        let cfg = MinimaxConfig { restarts: 4, iterations: 1500, tol: 1e-9, seed };
        let res = minimax_center(&bodies, &cfg)?;
        return Ok(CenterpointConstruction {
            q: res.center,
            route: CenterpointRoute::HellySubsets,
            achieved_radius: res.radius,
            target_radius,
        });
    }
    if !allow_fallback {
        guard("centerpoint subsets", count, CENTERPOINT_GUARD)?;
    }
    let tv = uncolored_tverberg(set, per.min(n), seed, TverbergOptions::default())?;
    Ok(CenterpointConstruction {
        q: tv.center,
        route: CenterpointRoute::Tverberg,
        achieved_radius: tv.max_distance,
        target_radius,
    })
}
