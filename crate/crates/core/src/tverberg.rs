//! Colored and uncolored Tverberg partitions without a dimension bound.
//!
//! The colored construction halves every color class so that both halves keep
//! their centroid close to the centroid of the whole, then recurses on the
//! halves until each part holds one point per color. The halving is
//! derandomized element by element using exact conditional expectations
//! under the uniform distribution on balanced subsets.

use std::f64::consts::SQRT_2;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{guard, set_partitions, stirling2};
use crate::error::{Error, Result};
use crate::geometry::vector as v;
use crate::geometry::{
    check_dim, min_norm_point_rows, minimax_from, ConvexBody, MinimaxConfig, Point, PointSet, Projector,
};

/// Exhaustive partition scans refuse to run beyond this many partitions.
pub const PARTITION_GUARD: u128 = 100_000;

/// Disjoint color classes `C_1..C_r`. Point indices are global: color `j`
/// occupies the block after colors `0..j` in concatenation order.
#[derive(Clone, Debug, PartialEq)]
pub struct ColoredFamily {
    colors: Vec<PointSet>,
}

impl ColoredFamily {
    pub fn new(colors: Vec<PointSet>) -> Result<Self> {
        let first = colors
            .first()
            .ok_or_else(|| Error::InvalidArgument("colored family needs a color".into()))?;
        for c in &colors {
            check_dim(first.dim(), c.dim())?;
        }
        Ok(ColoredFamily { colors })
    }

    pub fn colors(&self) -> &[PointSet] {
        &self.colors
    }

    /// Number of colors `r`.
    pub fn r(&self) -> usize {
        self.colors.len()
    }

    pub fn dim(&self) -> usize {
        self.colors[0].dim()
    }

    /// Common color size, if all colors have the same size.
    pub fn k(&self) -> Option<usize> {
        let k = self.colors[0].len();
        self.colors.iter().all(|c| c.len() == k).then_some(k)
    }

    pub fn len(&self) -> usize {
        self.colors.iter().map(PointSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All points in global index order.
    pub fn points(&self) -> Vec<Point> {
        self.colors.iter().flat_map(|c| c.points().iter().cloned()).collect()
    }

    /// Global indices of each color.
    pub fn color_indices(&self) -> Vec<Vec<usize>> {
        let mut offset = 0;
        self.colors
            .iter()
            .map(|c| {
                let idx = (offset..offset + c.len()).collect();
                offset += c.len();
                idx
            })
            .collect()
    }

    fn union(&self) -> PointSet {
        PointSet::new(self.points()).expect("colors are nonempty")
    }
}

/// `sqrt(k / (2 (k - 1) n)) D` for even `k`, `sqrt((k - 2)(k + 1) / (2 (k - 1)^2 n)) D` for odd `k`.
pub fn halving_bound(k: usize, n: usize, d: f64) -> f64 {
    let (kf, nf) = (k as f64, n as f64);
    if k.is_multiple_of(2) {
        (kf / (2.0 * (kf - 1.0) * nf)).sqrt() * d
    } else {
        ((kf - 2.0) * (kf + 1.0) / (2.0 * (kf - 1.0).powi(2) * nf)).sqrt() * d
    }
}

/// Bound on `|centroid(Q0) - centroid(P)|` that the averaging argument
/// actually guarantees: equal to [`halving_bound`] for even `k`, and
/// `sqrt(k (k + 1) / (2 (k - 1)^2 n)) D` for odd `k`.
///
/// The odd-case published constant `(k - 2)(k + 1)` is too small: on the
/// regular simplex with 9 vertices and three colors of size 3 every balanced
/// halving has displacement `1/3 > sqrt(1/18)`.
pub fn halving_guarantee(k: usize, n: usize, d: f64) -> f64 {
    if k.is_multiple_of(2) {
        return halving_bound(k, n, d);
    }
    let (kf, nf) = (k as f64, n as f64);
    (kf * (kf + 1.0) / (2.0 * (kf - 1.0).powi(2) * nf)).sqrt() * d
}

/// `D / (sqrt(k - 1) sqrt(2r))`, the published per-level displacement bound.
pub fn level_bound(k: usize, r: usize, d: f64) -> f64 {
    d / ((k as f64 - 1.0).sqrt() * (2.0 * r as f64).sqrt())
}

/// Guaranteed per-level bound for the `floor(k/2)` side (`upper = false`) or
/// the `ceil(k/2)` side (`upper = true`), in units of the root diameter:
/// `1/sqrt(k - 1)` for even `k`; `sqrt(k + 1)/(k - 1)` and `1/sqrt(k + 1)`
/// for odd `k`; all times `D / sqrt(2r)`.
pub fn level_guarantee(k: usize, r: usize, d: f64, upper: bool) -> f64 {
    let kf = k as f64;
    let factor = if k.is_multiple_of(2) {
        1.0 / (kf - 1.0).sqrt()
    } else if upper {
        1.0 / (kf + 1.0).sqrt()
    } else {
        (kf + 1.0).sqrt() / (kf - 1.0)
    };
    factor * d / (2.0 * r as f64).sqrt()
}

/// `(1 + sqrt 2) D / sqrt(r)`.
pub fn colored_bound(r: usize, d: f64) -> f64 {
    (1.0 + SQRT_2) * d / (r as f64).sqrt()
}

/// `(2 + sqrt 2) sqrt(k / n) D`, or `(1 + sqrt 2) sqrt(k / n) D` when `k | n`.
pub fn uncolored_bound(n: usize, k: usize, d: f64) -> f64 {
    let c = if n.is_multiple_of(k) { 1.0 + SQRT_2 } else { 2.0 + SQRT_2 };
    c * (k as f64 / n as f64).sqrt() * d
}

/// `D / sqrt(2r) * sqrt((k - 1)/k * (n - 1)/(n - 2))` with `n = k r`, the
/// regular-simplex lower bound on `max_i d(q, conv P_i)`.
pub fn simplex_lower_bound(k: usize, r: usize, d: f64) -> f64 {
    let n = (k * r) as f64;
    let kf = k as f64;
    d / (2.0 * r as f64).sqrt() * ((kf - 1.0) / kf * (n - 1.0) / (n - 2.0)).sqrt()
}

/// How balanced subsets are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalvingStrategy {
    /// Exact conditional expectations, element by element.
    #[default]
    Derandomized,
    /// Uniform balanced subsets resampled until [`halving_guarantee`] holds.
    RandomRetry { seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Halving {
    /// `floor(k/2)` global indices per color.
    pub q0: Vec<usize>,
    /// The complement, `ceil(k/2)` per color.
    pub q1: Vec<usize>,
    /// `|centroid(Q0) - centroid(P)|`.
    pub displacement: f64,
    /// `|centroid(Q1) - centroid(P)|`.
    pub displacement_q1: f64,
    /// Published closed-form bound on `displacement` for this `k` and `n`.
    pub bound: f64,
    /// Bound implied by the exact expectation, see [`halving_guarantee`].
    pub guarantee: f64,
    /// Expectation of `|sum_{Q0} (x - c)|^2` before any decision.
    pub initial_expectation: f64,
}

/// Splits every color of `family` into `floor(k/2)` and `ceil(k/2)` points.
pub fn balanced_halving(family: &ColoredFamily, strategy: HalvingStrategy) -> Result<Halving> {
    let k = family
        .k()
        .ok_or_else(|| Error::InvalidArgument("colors must share one size".into()))?;
    if k < 2 {
        return Err(Error::InvalidArgument(format!("halving needs color size >= 2, got {k}")));
    }
    let pts = family.points();
    let rows: Vec<&[f64]> = pts.iter().map(|p| p.coords()).collect();
    halve(&rows, &family.color_indices(), strategy)
}

/// Halving on an arbitrary node: `groups` lists the global indices of each
/// color inside the node, all of the same size `k >= 2`.
fn halve(rows: &[&[f64]], groups: &[Vec<usize>], strategy: HalvingStrategy) -> Result<Halving> {
    let k = groups[0].len();
    let n = k * groups.len();
    let node: Vec<usize> = groups.iter().flatten().copied().collect();
    let node_rows: Vec<&[f64]> = node.iter().map(|&i| rows[i]).collect();
    let center = v::scaled(&v::combine(&node_rows, &vec![1.0; n]), 1.0 / n as f64);
    let d = node_diameter(&node_rows);
    let bound = halving_bound(k, n, d);
    let guarantee = halving_guarantee(k, n, d);
    let shifted: Vec<Vec<Vec<f64>>> = groups
        .iter()
        .map(|g| g.iter().map(|&i| v::sub(rows[i], &center)).collect())
        .collect();
    let s = k / 2;

    let (mask, initial_expectation) = match strategy {
        HalvingStrategy::Derandomized => derandomized_mask(&shifted, s),
        HalvingStrategy::RandomRetry { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let limit = guarantee * (1.0 + 1e-9);
            let mut attempt = 0usize;
            loop {
                attempt += 1;
                let mask: Vec<Vec<bool>> = shifted
                    .iter()
                    .map(|g| {
                        let mut m: Vec<bool> = (0..g.len()).map(|i| i < s).collect();
                        m.shuffle(&mut rng);
                        m
                    })
                    .collect();
                if displacement(&shifted, &mask, s * groups.len()) <= limit || attempt >= 100_000 {
                    break (mask, expectation_of(&shifted, s));
                }
            }
        }
    };

    let mut q0 = Vec::with_capacity(s * groups.len());
    let mut q1 = Vec::with_capacity((k - s) * groups.len());
    for (g, m) in groups.iter().zip(&mask) {
        for (&i, &take) in g.iter().zip(m) {
            if take {
                q0.push(i);
            } else {
                q1.push(i);
            }
        }
    }
    let disp0 = displacement(&shifted, &mask, q0.len());
    let inverted: Vec<Vec<bool>> = mask.iter().map(|m| m.iter().map(|b| !b).collect()).collect();
    let disp1 = displacement(&shifted, &inverted, q1.len());
    Ok(Halving {
        q0,
        q1,
        displacement: disp0,
        displacement_q1: disp1,
        bound,
        guarantee,
        initial_expectation,
    })
}

fn node_diameter(rows: &[&[f64]]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            best = best.max(v::dist2(a, b));
        }
    }
    best.sqrt()
}

fn displacement(shifted: &[Vec<Vec<f64>>], mask: &[Vec<bool>], count: usize) -> f64 {
    let dim = shifted[0][0].len();
    let mut sum = vec![0.0; dim];
    for (g, m) in shifted.iter().zip(mask) {
        for (y, &take) in g.iter().zip(m) {
            if take {
                v::axpy(1.0, y, &mut sum);
            }
        }
    }
    v::norm(&sum) / count as f64
}

/// Remaining undecided elements of one color.
#[derive(Clone)]
struct Pool {
    /// Number of undecided elements.
    n: usize,
    /// Slots still to fill.
    s: usize,
    sum: Vec<f64>,
    sum_sq: f64,
}

impl Pool {
    fn p(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.s as f64 / self.n as f64
        }
    }

    fn p2(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.s * self.s.saturating_sub(1)) as f64 / (self.n * (self.n - 1)) as f64
        }
    }

    /// `E[S]` for a uniform `s`-subset sum.
    fn mean(&self) -> Vec<f64> {
        v::scaled(&self.sum, self.p())
    }

    /// `E|S|^2 - |E S|^2`.
    fn variance(&self) -> f64 {
        let second = self.p() * self.sum_sq + self.p2() * (v::norm2(&self.sum) - self.sum_sq);
        second - self.p() * self.p() * v::norm2(&self.sum)
    }
}

fn pools(shifted: &[Vec<Vec<f64>>], s: usize) -> Vec<Pool> {
    shifted
        .iter()
        .map(|g| {
            let mut sum = vec![0.0; g[0].len()];
            let mut sum_sq = 0.0;
            for y in g {
                v::axpy(1.0, y, &mut sum);
                sum_sq += v::norm2(y);
            }
            Pool { n: g.len(), s, sum, sum_sq }
        })
        .collect()
}

fn expectation_of(shifted: &[Vec<Vec<f64>>], s: usize) -> f64 {
    let ps = pools(shifted, s);
    let mut m = vec![0.0; shifted[0][0].len()];
    let mut var = 0.0;
    for p in &ps {
        v::axpy(1.0, &p.mean(), &mut m);
        var += p.variance();
    }
    v::norm2(&m) + var
}

/// Decides every element in color order, keeping the exact expectation
/// `|F + sum_j E S_j|^2 + sum_j Var S_j` from increasing. Inclusion wins ties.
fn derandomized_mask(shifted: &[Vec<Vec<f64>>], s: usize) -> (Vec<Vec<bool>>, f64) {
    let dim = shifted[0][0].len();
    let mut ps = pools(shifted, s);
    let mut means: Vec<Vec<f64>> = ps.iter().map(Pool::mean).collect();
    let mut vars: Vec<f64> = ps.iter().map(Pool::variance).collect();
    let mut total_mean = vec![0.0; dim];
    for m in &means {
        v::axpy(1.0, m, &mut total_mean);
    }
    let mut total_var: f64 = vars.iter().sum();
    let initial = v::norm2(&total_mean) + total_var;
    let mut fixed = vec![0.0; dim];
    let mut mask: Vec<Vec<bool>> = shifted.iter().map(|g| vec![false; g.len()]).collect();

    for (j, g) in shifted.iter().enumerate() {
        for (idx, y) in g.iter().enumerate() {
            let pool = &ps[j];
            let mut rest = pool.clone();
            rest.n -= 1;
            rest.sum = v::sub(&rest.sum, y);
            rest.sum_sq -= v::norm2(y);
            let take = if pool.s == 0 {
                false
            } else if pool.s == pool.n {
                true
            } else {
                let mut with = rest.clone();
                with.s -= 1;
                let without = rest.clone();
                let score = |cand: &Pool, add: bool| {
                    let cm = cand.mean();
                    let mut c = fixed.clone();
                    if add {
                        v::axpy(1.0, y, &mut c);
                    }
                    for t in 0..dim {
                        c[t] += total_mean[t] - means[j][t] + cm[t];
                    }
                    v::norm2(&c) + total_var - vars[j] + cand.variance()
                };
                score(&with, true) <= score(&without, false)
            };
            if take {
                rest.s -= 1;
                v::axpy(1.0, y, &mut fixed);
            }
            mask[j][idx] = take;
            let new_mean = rest.mean();
            let new_var = rest.variance();
            for t in 0..dim {
                total_mean[t] += new_mean[t] - means[j][t];
            }
            total_var += new_var - vars[j];
            means[j] = new_mean;
            vars[j] = new_var;
            ps[j] = rest;
        }
    }
    (mask, initial)
}

/// One internal node of the halving tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalvingRecord {
    pub depth: usize,
    /// Per-color size at this node.
    pub k: usize,
    pub node_size: usize,
    pub displacement_q0: f64,
    pub displacement_q1: f64,
    /// Published closed-form bound for this node (node diameter).
    pub lemma_bound: f64,
    /// Guaranteed bound for this node (node diameter).
    pub lemma_guarantee: f64,
    /// `D / (sqrt(k - 1) sqrt(2r))` with the root diameter.
    pub level_bound: f64,
    /// [`level_guarantee`] for the lower and upper halves.
    pub level_guarantee: (f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TverbergPartition {
    /// Global point indices of each part.
    pub parts: Vec<Vec<usize>>,
    /// Center `q`.
    pub center: Point,
    /// `max_i d(q, conv P_i)`.
    pub max_distance: f64,
    pub bound: f64,
    /// Internal nodes in depth-first order.
    pub tree_log: Vec<HalvingRecord>,
    /// Per part: sum of the actual centroid displacements along its root path.
    pub path_displacements: Vec<f64>,
    /// Per part: sum of the guaranteed level bounds along its root path.
    pub path_bounds: Vec<f64>,
    /// Minimax center over the final hulls, when requested.
    pub recentered: Option<(Point, f64)>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TverbergOptions {
    pub strategy: HalvingStrategy,
    /// Also compute the minimax center over the final hulls.
    pub recenter: bool,
}

/// Colored partition into `k` parts with one point of each color per part.
pub fn colored_tverberg(family: &ColoredFamily, opts: TverbergOptions) -> Result<TverbergPartition> {
    let k = family
        .k()
        .ok_or_else(|| Error::InvalidArgument("colors must share one size".into()))?;
    if k < 1 {
        return Err(Error::InvalidArgument("color size must be at least 1".into()));
    }
    let pts = family.points();
    let rows: Vec<&[f64]> = pts.iter().map(|p| p.coords()).collect();
    let union = family.union();
    let d = union.diameter();
    let r = family.r();

    let mut tree = Tree {
        rows: &rows,
        root_diameter: d,
        r,
        strategy: opts.strategy,
        log: Vec::new(),
        parts: Vec::new(),
        path_displacements: Vec::new(),
        path_bounds: Vec::new(),
    };
    tree.split(family.color_indices(), 0, 0.0, 0.0)?;
    let Tree { log, parts, path_displacements, path_bounds, .. } = tree;

    let center = union.centroid();
    // A single part is all of P, whose hull contains its centroid.
    let max_distance = if k == 1 { 0.0 } else { max_hull_distance(&rows, &parts, center.coords())? };
    let recentered = if opts.recenter { Some(recenter(&rows, &parts, &center)?) } else { None };
    Ok(TverbergPartition {
        parts,
        center,
        max_distance,
        bound: colored_bound(r, d),
        tree_log: log,
        path_displacements,
        path_bounds,
        recentered,
    })
}

struct Tree<'a> {
    rows: &'a [&'a [f64]],
    root_diameter: f64,
    r: usize,
    strategy: HalvingStrategy,
    log: Vec<HalvingRecord>,
    parts: Vec<Vec<usize>>,
    path_displacements: Vec<f64>,
    path_bounds: Vec<f64>,
}

impl Tree<'_> {
    fn split(&mut self, groups: Vec<Vec<usize>>, depth: usize, path_disp: f64, path_bound: f64) -> Result<()> {
        let k = groups[0].len();
        if k == 1 {
            self.parts.push(groups.into_iter().flatten().collect());
            self.path_displacements.push(path_disp);
            self.path_bounds.push(path_bound);
            return Ok(());
        }
        let h = halve(self.rows, &groups, self.strategy)?;
        let g0_bound = level_guarantee(k, self.r, self.root_diameter, false);
        let g1_bound = level_guarantee(k, self.r, self.root_diameter, true);
        self.log.push(HalvingRecord {
            depth,
            k,
            node_size: k * groups.len(),
            displacement_q0: h.displacement,
            displacement_q1: h.displacement_q1,
            lemma_bound: h.bound,
            lemma_guarantee: h.guarantee,
            level_bound: level_bound(k, self.r, self.root_diameter),
            level_guarantee: (g0_bound, g1_bound),
        });
        let in_q0: std::collections::HashSet<usize> = h.q0.iter().copied().collect();
        let (g0, g1): (Vec<Vec<usize>>, Vec<Vec<usize>>) = groups
            .iter()
            .map(|g| g.iter().partition(|i| in_q0.contains(i)))
            .unzip();
        self.split(g0, depth + 1, path_disp + h.displacement, path_bound + g0_bound)?;
        self.split(g1, depth + 1, path_disp + h.displacement_q1, path_bound + g1_bound)
    }
}

fn max_hull_distance(rows: &[&[f64]], parts: &[Vec<usize>], q: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for part in parts {
        let sub: Vec<&[f64]> = part.iter().map(|&i| rows[i]).collect();
        worst = worst.max(min_norm_point_rows(&sub, q, 1e-14)?.distance);
    }
    Ok(worst)
}

fn part_bodies(rows: &[&[f64]], parts: &[Vec<usize>]) -> Result<Vec<ConvexBody>> {
    parts
        .iter()
        .map(|part| {
            let pts = part.iter().map(|&i| Point::new(rows[i].to_vec())).collect::<Result<_>>()?;
            Ok(ConvexBody::hull(PointSet::new(pts)?))
        })
        .collect()
}

fn recenter(rows: &[&[f64]], parts: &[Vec<usize>], start: &Point) -> Result<(Point, f64)> {
    let bodies = part_bodies(rows, parts)?;
    let refs: Vec<&dyn Projector> = bodies.iter().map(|b| b as &dyn Projector).collect();
    let res = minimax_from(&refs, &[start.coords().to_vec()], &MinimaxConfig::light())?;
    Ok((res.center, res.radius))
}

/// Uncolored partition of `P` into `k` parts.
///
/// With `n = k r + s`, a seeded shuffle drops `s` points and deals the rest
/// round-robin into `r` colors of size `k`. After the colored run each
/// dropped point joins the part whose hull is nearest to it; `q` is the
/// centroid of the colored points. Indices refer to `P`.
pub fn uncolored_tverberg(set: &PointSet, k: usize, seed: u64, opts: TverbergOptions) -> Result<TverbergPartition> {
    let n = set.len();
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n = {n}, got k = {k}")));
    }
    let r = n / k;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (kept, dropped) = order.split_at(k * r);
    let mut colors: Vec<Vec<usize>> = vec![Vec::with_capacity(k); r];
    for (pos, &i) in kept.iter().enumerate() {
        colors[pos % r].push(i);
    }
    let family = ColoredFamily::new(
        colors.iter().map(|c| set.select(c)).collect::<Result<_>>()?,
    )?;
    let colored = colored_tverberg(&family, TverbergOptions { recenter: false, ..opts })?;
    // Map global colored indices back to indices of `P`.
    let flat: Vec<usize> = colors.iter().flatten().copied().collect();
    let mut parts: Vec<Vec<usize>> = colored
        .parts
        .iter()
        .map(|p| p.iter().map(|&g| flat[g]).collect())
        .collect();

    let rows = set.rows();
    for &extra in dropped {
        let mut best = (0, f64::INFINITY);
        for (pi, part) in parts.iter().enumerate() {
            let sub: Vec<&[f64]> = part.iter().map(|&i| rows[i]).collect();
            let d = min_norm_point_rows(&sub, rows[extra], 1e-14)?.distance;
            if d < best.1 {
                best = (pi, d);
            }
        }
        parts[best.0].push(extra);
    }

    let center = colored.center;
    let max_distance = max_hull_distance(&rows, &parts, center.coords())?;
    let recentered = if opts.recenter { Some(recenter(&rows, &parts, &center)?) } else { None };
    Ok(TverbergPartition {
        parts,
        max_distance,
        bound: uncolored_bound(n, k, set.diameter()),
        tree_log: colored.tree_log,
        path_displacements: colored.path_displacements,
        path_bounds: colored.path_bounds,
        center,
        recentered,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceTverberg {
    pub partition: Vec<Vec<usize>>,
    pub center: Point,
    pub value: f64,
}

/// Minimum over all partitions into `k` nonempty parts of the minimax value
/// `min_q max_i d(q, conv P_i)`. The inner minimization is numerical and may
/// overshoot the optimum by its accuracy; it always tries the centroid of
/// `P` first, so the value never exceeds the centroid-based value of any
/// partition.
pub fn brute_force_tverberg(set: &PointSet, k: usize) -> Result<BruteForceTverberg> {
    let n = set.len();
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n = {n}, got k = {k}")));
    }
    guard("set partitions", stirling2(n, k), PARTITION_GUARD)?;
    let rows = set.rows();
    let start = set.centroid().into_vec();
    let cfg = MinimaxConfig { restarts: 2, iterations: 400, tol: 1e-10, seed: 0 };
    let results: Vec<Result<(f64, Point, usize)>> = set_partitions(n, k)
        .into_par_iter()
        .enumerate()
        .map(|(idx, parts)| {
            let bodies = part_bodies(&rows, &parts)?;
            let refs: Vec<&dyn Projector> = bodies.iter().map(|b| b as &dyn Projector).collect();
            let res = minimax_from(&refs, std::slice::from_ref(&start), &cfg)?;
            Ok((res.radius, res.center, idx))
        })
        .collect();
    let mut best: Option<(f64, Point, usize)> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.0 < b.0) {
            best = Some(r);
        }
    }
    let (value, center, idx) = best.expect("at least one partition");
    Ok(BruteForceTverberg {
        partition: set_partitions(n, k).swap_remove(idx),
        center,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::regular_simplex;

    fn ps(rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn signed_basis(r: usize) -> ColoredFamily {
        let colors = (0..r)
            .map(|j| {
                let mut plus = vec![0.0; r];
                plus[j] = 1.0;
                let minus: Vec<f64> = plus.iter().map(|x| -x).collect();
                PointSet::from_rows(vec![minus, plus]).unwrap()
            })
            .collect();
        ColoredFamily::new(colors).unwrap()
    }

    #[test]
    fn bound_substitutions() {
        let d = 1.0;
        for n in [4usize, 10, 30] {
            assert!((halving_bound(2, n, d) - 1.0 / (n as f64).sqrt()).abs() < 1e-15);
            assert!((halving_bound(3, n, d) - 1.0 / (2.0 * n as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn odd_published_bound_fails_on_simplex() {
        let s = regular_simplex(9, 1.0).unwrap();
        let colors = (0..3).map(|j| s.select(&[3 * j, 3 * j + 1, 3 * j + 2]).unwrap()).collect();
        let h = balanced_halving(&ColoredFamily::new(colors).unwrap(), HalvingStrategy::Derandomized).unwrap();
        assert!((h.displacement - 1.0 / 3.0).abs() < 1e-12);
        assert!(h.displacement > h.bound);
        assert!(h.displacement <= h.guarantee);
        assert!((h.displacement_q1 - h.displacement / 2.0).abs() < 1e-12);
    }

    #[test]
    fn guaranteed_path_sums_stay_below_total_bound() {
        // Worst root-to-leaf sum of guaranteed level factors, all k up to 2^16.
        let limit = 1 << 16;
        let mut worst = vec![0.0f64; limit + 1];
        for k in 2..=limit {
            let lo = level_guarantee(k, 1, 2f64.sqrt(), false) + worst[k / 2];
            let hi = level_guarantee(k, 1, 2f64.sqrt(), true) + worst[k - k / 2];
            worst[k] = lo.max(hi);
        }
        let max = worst.iter().copied().fold(0.0, f64::max);
        assert!(max < 2.0 + SQRT_2, "{max}");
    }

    #[test]
    fn signed_basis_halves_exactly() {
        // Any choice of one signed vector per color has centroid norm sqrt(r)/r;
        // enumeration over all 2^r halvings confirms there is no better one.
        for r in 1..=8 {
            let f = signed_basis(r);
            let h = balanced_halving(&f, HalvingStrategy::Derandomized).unwrap();
            let expected = 1.0 / (r as f64).sqrt();
            assert!((h.displacement - expected).abs() < 1e-12);
            assert!(h.displacement <= h.bound + 1e-12);
        }
    }

    #[test]
    fn opposite_pairs_in_one_color_cancel() {
        // Colors {-e, +e, -e, +e}: picking one of each sign gives displacement 0.
        let c = ps(&[&[-1.0, 0.0], &[1.0, 0.0], &[-1.0, 0.0], &[1.0, 0.0]]);
        let f = ColoredFamily::new(vec![c.clone(), c]).unwrap();
        let h = balanced_halving(&f, HalvingStrategy::Derandomized).unwrap();
        assert!(h.displacement < 1e-12);
        assert_eq!(h.q0.len(), 4);
    }

    #[test]
    fn halving_rejects_singletons() {
        let f = ColoredFamily::new(vec![ps(&[&[0.0]])]).unwrap();
        assert!(balanced_halving(&f, HalvingStrategy::Derandomized).is_err());
    }

    #[test]
    fn random_retry_meets_bound() {
        let s = regular_simplex(9, 1.0).unwrap();
        let f = ColoredFamily::new(vec![s.select(&[0, 1, 2]).unwrap(), s.select(&[3, 4, 5]).unwrap(), s.select(&[6, 7, 8]).unwrap()]).unwrap();
        let h = balanced_halving(&f, HalvingStrategy::RandomRetry { seed: 7 }).unwrap();
        assert!(h.displacement <= h.guarantee * (1.0 + 1e-9));
        assert_eq!(h.q0.len(), 3);
    }

    #[test]
    fn colored_k1_is_whole_set() {
        let f = ColoredFamily::new(vec![ps(&[&[0.0, 1.0]]), ps(&[&[2.0, 0.0]]), ps(&[&[1.0, 3.0]])]).unwrap();
        let t = colored_tverberg(&f, TverbergOptions::default()).unwrap();
        assert_eq!(t.parts, vec![vec![0, 1, 2]]);
        assert!(t.max_distance < 1e-12);
    }

    #[test]
    fn colored_parts_have_one_point_per_color() {
        let s = regular_simplex(12, 1.0).unwrap();
        let colors = (0..3).map(|j| s.select(&[4 * j, 4 * j + 1, 4 * j + 2, 4 * j + 3]).unwrap()).collect();
        let f = ColoredFamily::new(colors).unwrap();
        let t = colored_tverberg(&f, TverbergOptions { recenter: true, ..Default::default() }).unwrap();
        assert_eq!(t.parts.len(), 4);
        for part in &t.parts {
            let mut colors: Vec<usize> = part.iter().map(|&g| g / 4).collect();
            colors.sort_unstable();
            assert_eq!(colors, vec![0, 1, 2]);
        }
        assert!(t.max_distance <= t.bound);
        assert!(t.path_bounds.iter().all(|&b| b <= colored_bound(3, 1.0) + 1e-12));
        let (_, r) = t.recentered.unwrap();
        assert!(r <= t.max_distance + 1e-12);
    }

    #[test]
    fn uncolored_singletons_when_k_equals_n() {
        let p = ps(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 2.0]]);
        let t = uncolored_tverberg(&p, 3, 1, TverbergOptions::default()).unwrap();
        assert_eq!(t.parts.len(), 3);
        assert!(t.parts.iter().all(|p| p.len() == 1));
        assert!(t.max_distance <= t.bound);
        assert!(uncolored_tverberg(&p, 4, 1, TverbergOptions::default()).is_err());
    }

    #[test]
    fn uncolored_simplex_divisible_case() {
        let s = regular_simplex(8, 1.0).unwrap();
        let t = uncolored_tverberg(&s, 2, 3, TverbergOptions::default()).unwrap();
        assert!((t.bound - (1.0 + SQRT_2) / 2.0).abs() < 1e-12);
        assert!(t.max_distance <= t.bound);
        let mut all: Vec<usize> = t.parts.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn uncolored_with_leftovers_covers_everything() {
        let p = PointSet::from_rows((0..11).map(|i| vec![(i as f64).sin(), (i as f64 * 0.7).cos()]).collect()).unwrap();
        let t = uncolored_tverberg(&p, 3, 5, TverbergOptions::default()).unwrap();
        let mut all: Vec<usize> = t.parts.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..11).collect::<Vec<_>>());
        assert!(t.max_distance <= t.bound);
    }

    #[test]
    fn brute_force_collinear_overlap() {
        let p = ps(&[&[0.0], &[1.0], &[2.0], &[3.0]]);
        let b = brute_force_tverberg(&p, 2).unwrap();
        assert!(b.value < 1e-9);
    }

    #[test]
    fn brute_force_singletons_give_enclosing_radius() {
        let s = regular_simplex(3, 1.0).unwrap();
        let b = brute_force_tverberg(&s, 3).unwrap();
        assert!((b.value - 1.0 / 3f64.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn brute_force_simplex_value_versus_published_lower_bound() {
        // Two opposite edges of the regular tetrahedron: both hulls are
        // sqrt(1/8) from the centroid, below the published sqrt(3)/4.
        let s = regular_simplex(4, 1.0).unwrap();
        let b = brute_force_tverberg(&s, 2).unwrap();
        assert!((b.value - 0.125f64.sqrt()).abs() < 1e-7, "{}", b.value);
        let lower = simplex_lower_bound(2, 2, 1.0);
        assert!((lower - 3f64.sqrt() / 4.0).abs() < 1e-15);
        assert!(lower > b.value + 1e-3);
    }

    #[test]
    fn brute_force_guard() {
        let p = PointSet::from_rows((0..30).map(|i| vec![i as f64]).collect()).unwrap();
        assert!(matches!(brute_force_tverberg(&p, 5), Err(Error::GuardExceeded { .. })));
    }
}
