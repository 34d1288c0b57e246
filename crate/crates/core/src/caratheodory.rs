//! Colorful Carathéodory transversals without a dimension bound.
//!
//! Given sets `P_1..P_r` whose hulls all contain (or come close to) a point
//! `a`, these routines pick one point per set so that `a` lies close to the
//! hull of the picks. Two constructions are provided: a derandomized
//! averaging argument, with bound `D / sqrt(2r)`, and a Frank-Wolfe style
//! iteration that needs only `t`-wise unions to contain `a`.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, guard};
use crate::error::{Error, Result};
use crate::geometry::vector as v;
use crate::geometry::{check_dim, diameter, min_norm_point, min_norm_point_rows, Point, PointSet};

/// Tolerance for the convex combination `sum_x alpha_i(x) x = a`.
pub const WEIGHT_CONSISTENCY_TOL: f64 = 1e-9;
/// Hull-membership tolerance for hypothesis checks.
pub const MEMBERSHIP_TOL: f64 = 1e-7;
/// Exhaustive subset scans refuse to run beyond this many subsets.
pub const SUBSET_GUARD: u128 = 1_000_000;

/// `2 sqrt(ln 4 / 3)`, the Frank-Wolfe constant in `d(a, conv T) <= c D / sqrt(r - t + 1)`.
pub fn frank_wolfe_constant() -> f64 {
    2.0 * (4f64.ln() / 3.0).sqrt()
}

/// `4 sqrt(ln 4 / 3)`.
pub fn beta() -> f64 {
    2.0 * frank_wolfe_constant()
}

/// `D / sqrt(2r)`.
pub fn averaging_bound(d: f64, r: usize) -> f64 {
    d / (2.0 * r as f64).sqrt()
}

/// `D / sqrt(2r) * sqrt(1 + 2 (r - 1) eta^2)`, the published perturbed bound.
///
/// This drops the `sum_i |c_i - a|^2` diagonal term and fails for large `eta`:
/// two copies of a unit segment at distance 1 from `a` give distance 1 for
/// every transversal while this formula gives `sqrt(3) / 2` at `r = 2`.
pub fn perturbed_bound_published(d: f64, r: usize, eta: f64) -> f64 {
    averaging_bound(d, r) * (1.0 + 2.0 * (r as f64 - 1.0) * eta * eta).sqrt()
}

/// `D / sqrt(2r) * sqrt(1 + 2 r eta^2)`, the bound the averaging argument yields.
pub fn perturbed_bound(d: f64, r: usize, eta: f64) -> f64 {
    averaging_bound(d, r) * (1.0 + 2.0 * r as f64 * eta * eta).sqrt()
}

/// Point sets together with convex weights, one weight vector per set.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFamily {
    sets: Vec<PointSet>,
    weights: Vec<Vec<f64>>,
}

impl WeightedFamily {
    /// Weights must be nonnegative and sum to one within `1e-12`.
    pub fn new(sets: Vec<PointSet>, weights: Vec<Vec<f64>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidArgument("family needs at least one set".into()));
        }
        if weights.len() != sets.len() {
            return Err(Error::InvalidArgument(format!(
                "{} weight vectors for {} sets",
                weights.len(),
                sets.len()
            )));
        }
        let dim = sets[0].dim();
        for (i, (s, w)) in sets.iter().zip(&weights).enumerate() {
            check_dim(dim, s.dim())?;
            if w.len() != s.len() {
                return Err(Error::PreconditionViolated {
                    set: i,
                    reason: format!("{} weights for {} points", w.len(), s.len()),
                });
            }
            if w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::PreconditionViolated { set: i, reason: "negative weight".into() });
            }
            let total: f64 = w.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::PreconditionViolated {
                    set: i,
                    reason: format!("weights sum to {total}"),
                });
            }
        }
        Ok(WeightedFamily { sets, weights })
    }

    /// Uniform weights `1 / |P_i|`.
    pub fn uniform(sets: Vec<PointSet>) -> Result<Self> {
        let weights = sets.iter().map(|s| vec![1.0 / s.len() as f64; s.len()]).collect();
        Self::new(sets, weights)
    }

    pub fn sets(&self) -> &[PointSet] {
        &self.sets
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn r(&self) -> usize {
        self.sets.len()
    }

    pub fn dim(&self) -> usize {
        self.sets[0].dim()
    }

    /// `max_i diam P_i`.
    pub fn max_diameter(&self) -> f64 {
        self.sets.iter().map(PointSet::diameter).fold(0.0, f64::max)
    }

    /// `sum_x alpha_i(x) x` for set `i`.
    pub fn combination(&self, i: usize) -> Vec<f64> {
        v::combine(&self.sets[i].rows(), &self.weights[i])
    }

    /// Checks every weighted combination against `a`.
    pub fn check_target(&self, a: &Point, tol: f64) -> Result<()> {
        check_dim(self.dim(), a.dim())?;
        for i in 0..self.r() {
            let deviation = v::dist(&self.combination(i), a.coords());
            if !(deviation <= tol) {
                return Err(Error::NotCaratheodoryInstance { set: i, deviation });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Derandomized,
    FrankWolfe,
    Random,
}

/// One point per set plus a certificate of how close `a` is to their hull.
#[derive(Clone, Debug, PartialEq)]
pub struct TransversalResult {
    /// Index into each set, in set order.
    pub chosen: Vec<usize>,
    /// Point of the hull of the chosen points realizing `distance`.
    pub witness: Point,
    /// Convex weights over `chosen` reproducing `witness`.
    pub witness_weights: Vec<f64>,
    pub distance: f64,
    pub bound: f64,
    pub method: Method,
    /// Derandomized: conditional expectations of `|centroid - a|^2`, one per
    /// fixing step starting with the unconditioned value.
    /// Frank-Wolfe: `|q_j - a|` for each partial hull.
    pub chain: Vec<f64>,
}

impl TransversalResult {
    pub fn chosen_points(&self, sets: &[PointSet]) -> Vec<Point> {
        self.chosen
            .iter()
            .zip(sets)
            .map(|(&c, s)| s.point(c).clone())
            .collect()
    }
}

/// Per-set moments of `X_i - a` with `X_i ~ alpha_i`.
struct Moments {
    /// `y = x - a` for each point of each set.
    shifted: Vec<Vec<Vec<f64>>>,
    /// `E[X_i - a]`.
    mean: Vec<Vec<f64>>,
    /// `E|X_i - a|^2 - |E[X_i - a]|^2`.
    variance: Vec<f64>,
}

fn moments(family: &WeightedFamily, a: &[f64]) -> Moments {
    let mut shifted = Vec::with_capacity(family.r());
    let mut mean = Vec::with_capacity(family.r());
    let mut variance = Vec::with_capacity(family.r());
    for (set, w) in family.sets.iter().zip(&family.weights) {
        let ys: Vec<Vec<f64>> = set.points().iter().map(|p| v::sub(p.coords(), a)).collect();
        let rows: Vec<&[f64]> = ys.iter().map(|y| y.as_slice()).collect();
        let mu = v::combine(&rows, w);
        let second: f64 = ys.iter().zip(w).map(|(y, &wi)| wi * v::norm2(y)).sum();
        variance.push((second - v::norm2(&mu)).max(0.0));
        mean.push(mu);
        shifted.push(ys);
    }
    Moments { shifted, mean, variance }
}

/// Greedy conditional-expectation scan fixing `f_r, f_{r-1}, .., f_1`.
///
/// With `F` the sum of fixed picks and `M_s`, `A_s` prefix sums of the means
/// and variances of the unfixed sets, `E|sum_i (X_i - a)|^2 = |F + M_s|^2 + A_s`.
/// Each step picks the point minimizing this expectation, lowest index first.
fn greedy_fix(m: &Moments, r: usize) -> (Vec<usize>, Vec<f64>) {
    let dim = m.mean[0].len();
    let mut prefix_mean = vec![vec![0.0; dim]; r + 1];
    let mut prefix_var = vec![0.0; r + 1];
    for i in 0..r {
        prefix_mean[i + 1] = v::add(&prefix_mean[i], &m.mean[i]);
        prefix_var[i + 1] = prefix_var[i] + m.variance[i];
    }
    let scale = 1.0 / (r * r) as f64;
    let mut fixed = vec![0.0; dim];
    let mut chosen = vec![0usize; r];
    let mut chain = Vec::with_capacity(r + 1);
    chain.push((v::norm2(&prefix_mean[r]) + prefix_var[r]) * scale);
    for s in (0..r).rev() {
        let base = v::add(&fixed, &prefix_mean[s]);
        let mut best = 0;
        let mut best_val = f64::INFINITY;
        for (j, y) in m.shifted[s].iter().enumerate() {
            let val: f64 = base.iter().zip(y).map(|(b, yi)| (b + yi) * (b + yi)).sum();
            if val < best_val {
                best_val = val;
                best = j;
            }
        }
        chosen[s] = best;
        v::axpy(1.0, &m.shifted[s][best], &mut fixed);
        chain.push((best_val + prefix_var[s]) * scale);
    }
    (chosen, chain)
}

fn centroid_result(
    family: &WeightedFamily,
    a: &Point,
    chosen: Vec<usize>,
    bound: f64,
    method: Method,
    chain: Vec<f64>,
) -> TransversalResult {
    let r = family.r();
    let rows: Vec<&[f64]> = chosen
        .iter()
        .zip(&family.sets)
        .map(|(&c, s)| s.point(c).coords())
        .collect();
    let weights = vec![1.0 / r as f64; r];
    let witness = Point::from_vec(v::combine(&rows, &weights));
    TransversalResult {
        distance: witness.dist(a),
        witness,
        witness_weights: weights,
        chosen,
        bound,
        method,
        chain,
    }
}

/// Derandomized averaging transversal. The returned distance is
/// `|a - centroid(T)|` and is strictly below `D / sqrt(2r)` when `D > 0`.
pub fn derandomized_transversal(family: &WeightedFamily, a: &Point) -> Result<TransversalResult> {
    family.check_target(a, WEIGHT_CONSISTENCY_TOL)?;
    let m = moments(family, a.coords());
    let (chosen, chain) = greedy_fix(&m, family.r());
    let bound = averaging_bound(family.max_diameter(), family.r());
    Ok(centroid_result(family, a, chosen, bound, Method::Derandomized, chain))
}

/// Samples `X_i ~ alpha_i` independently. Carries the same bound field, which
/// holds only in expectation.
pub fn random_transversal(family: &WeightedFamily, a: &Point, seed: u64) -> Result<TransversalResult> {
    family.check_target(a, WEIGHT_CONSISTENCY_TOL)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen = family
        .weights
        .iter()
        .map(|w| {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            w.iter()
                .position(|&wi| {
                    acc += wi;
                    u < acc
                })
                .unwrap_or(w.len() - 1)
        })
        .collect();
    let bound = averaging_bound(family.max_diameter(), family.r());
    Ok(centroid_result(family, a, chosen, bound, Method::Random, Vec::new()))
}

/// Greedy transversal when each hull only comes within `eta D` of `a`.
///
/// The weights are those of the nearest point of each hull to `a`. The bound
/// field is `D / sqrt(2r) * sqrt(1 + 2 r eta^2)`; see [`perturbed_bound_published`].
pub fn eta_perturbed_transversal(sets: &[PointSet], a: &Point, eta: f64) -> Result<TransversalResult> {
    if !(eta >= 0.0) {
        return Err(Error::InvalidArgument(format!("eta must be nonnegative, got {eta}")));
    }
    let first = sets.first().ok_or_else(|| Error::InvalidArgument("no sets".into()))?;
    check_dim(first.dim(), a.dim())?;
    let d = sets.iter().map(PointSet::diameter).fold(0.0, f64::max);
    let mut weights = Vec::with_capacity(sets.len());
    for (i, s) in sets.iter().enumerate() {
        let res = min_norm_point(s, a, 1e-13)?;
        if res.distance > eta * d + 1e-9 {
            return Err(Error::PreconditionViolated {
                set: i,
                reason: format!("hull is {} from the target, allowed {}", res.distance, eta * d),
            });
        }
        weights.push(normalized(res.coefficients));
    }
    let family = WeightedFamily::new(sets.to_vec(), weights)?;
    let m = moments(&family, a.coords());
    let (chosen, chain) = greedy_fix(&m, family.r());
    let bound = perturbed_bound(d, family.r(), eta);
    Ok(centroid_result(&family, a, chosen, bound, Method::Derandomized, chain))
}

fn normalized(mut w: Vec<f64>) -> Vec<f64> {
    w.iter_mut().for_each(|x| *x = x.max(0.0));
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

/// Options for [`frank_wolfe_transversal`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FrankWolfeOptions {
    /// Index of the starting point in `P_1`; any choice keeps the bound.
    pub start: usize,
    /// Verify the `t`-wise hypothesis before running.
    pub verify: bool,
}

/// Frank-Wolfe transversal under the hypothesis that `a` lies in the hull of
/// the union of every `t` of the sets.
///
/// Runs `r - t + 1` steps. Step `j` keeps the nearest point `q_j` of the hull
/// of the picks so far and takes, from the sets with index below `j + t` not
/// yet used, the point minimizing `(x - a)·(q_j - a)`. Unused sets are then
/// completed with their first point; the witness stays `q_{r-t+1}`. `D` is
/// the diameter of the union of all sets.
pub fn frank_wolfe_transversal(
    sets: &[PointSet],
    a: &Point,
    t: usize,
    opts: FrankWolfeOptions,
) -> Result<TransversalResult> {
    let r = sets.len();
    if t < 1 || t >= r {
        return Err(Error::InvalidArgument(format!("need 1 <= t <= r - 1, got t = {t}, r = {r}")));
    }
    for s in sets {
        check_dim(a.dim(), s.dim())?;
    }
    if opts.start >= sets[0].len() {
        return Err(Error::InvalidArgument(format!("start index {} out of range", opts.start)));
    }
    if opts.verify {
        check_union_hypothesis(sets, a, t)?;
    }
    let all: Vec<Point> = sets.iter().flat_map(|s| s.points().iter().cloned()).collect();
    let d = diameter(&all)?;

    let steps = r - t + 1;
    let mut chosen: Vec<Option<usize>> = vec![None; r];
    chosen[0] = Some(opts.start);
    let mut picked: Vec<(usize, usize)> = vec![(0, opts.start)];
    let mut chain = Vec::with_capacity(steps);
    let mut q = sets[0].point(opts.start).coords().to_vec();
    let mut weights = vec![1.0];
    chain.push(v::dist(&q, a.coords()));
    for j in 1..steps {
        let qa = v::sub(&q, a.coords());
        let mut best: Option<(usize, usize, f64)> = None;
        // Sets 0..j+t in 0-based indexing are the first j + t sets.
        for (i, set) in sets.iter().enumerate().take(j + t) {
            if chosen[i].is_some() {
                continue;
            }
            for (k, p) in set.points().iter().enumerate() {
                let score = v::dot(&v::sub(p.coords(), a.coords()), &qa);
                if best.is_none_or(|(_, _, b)| score < b) {
                    best = Some((i, k, score));
                }
            }
        }
        let (i, k, _) = best.ok_or_else(|| Error::InvalidArgument("empty eligible pool".into()))?;
        chosen[i] = Some(k);
        picked.push((i, k));
        let rows: Vec<&[f64]> = picked.iter().map(|&(i, k)| sets[i].point(k).coords()).collect();
        let res = min_norm_point_rows(&rows, a.coords(), 1e-14)?;
        q = res.nearest.into_vec();
        weights = res.coefficients;
        chain.push(res.distance);
    }

    let chosen: Vec<usize> = chosen.into_iter().map(|c| c.unwrap_or(0)).collect();
    let mut witness_weights = vec![0.0; r];
    for (&(i, _), &w) in picked.iter().zip(&weights) {
        witness_weights[i] = w;
    }
    Ok(TransversalResult {
        distance: v::dist(&q, a.coords()),
        witness: Point::from_vec(q),
        witness_weights,
        chosen,
        bound: frank_wolfe_constant() * d / (steps as f64).sqrt(),
        method: Method::FrankWolfe,
        chain,
    })
}

/// Checks that `a` is within [`MEMBERSHIP_TOL`] of the hull of every union of `t` sets.
pub fn check_union_hypothesis(sets: &[PointSet], a: &Point, t: usize) -> Result<()> {
    guard("t-subsets of sets", binomial(sets.len(), t), SUBSET_GUARD)?;
    for subset in (0..sets.len()).combinations(t) {
        let rows: Vec<&[f64]> = subset.iter().flat_map(|&i| sets[i].rows()).collect();
        let dist = min_norm_point_rows(&rows, a.coords(), 1e-13)?.distance;
        if dist > MEMBERSHIP_TOL {
            return Err(Error::HypothesisViolated(format!(
                "target is {dist:e} from the union of sets {subset:?}"
            )));
        }
    }
    Ok(())
}

/// Chooses `r` points of `P` whose hull is within `diam P / sqrt(2r)` of `a`.
///
/// Runs the averaging transversal on `r` weighted copies of `P`, merges
/// repeated picks and pads with the unused points nearest to `a`. `chosen`
/// holds indices into `P`; `distance` is the hull distance.
pub fn single_set_caratheodory(set: &PointSet, a: &Point, r: usize) -> Result<TransversalResult> {
    if r < 1 || r > set.len() {
        return Err(Error::InvalidArgument(format!("need 1 <= r <= {}, got {r}", set.len())));
    }
    let res = min_norm_point(set, a, 1e-14)?;
    if res.distance > MEMBERSHIP_TOL {
        return Err(Error::HypothesisViolated(format!(
            "target is {:e} outside the hull",
            res.distance
        )));
    }
    let weights = normalized(res.coefficients);
    let family = WeightedFamily::new(vec![set.clone(); r], vec![weights; r])?;
    // The combination point differs from `a` only at the membership tolerance.
    let exact = Point::from_vec(family.combination(0));
    let m = moments(&family, exact.coords());
    let (picks, chain) = greedy_fix(&m, r);

    let mut chosen: Vec<usize> = picks.into_iter().unique().collect();
    if chosen.len() < r {
        let mut rest: Vec<usize> = (0..set.len()).filter(|i| !chosen.contains(i)).collect();
        rest.sort_by(|&i, &j| {
            set.point(i)
                .dist(a)
                .total_cmp(&set.point(j).dist(a))
                .then(i.cmp(&j))
        });
        chosen.extend(rest.into_iter().take(r - chosen.len()));
    }
    chosen.sort_unstable();
    let sub = set.select(&chosen)?;
    let hull = min_norm_point(&sub, a, 1e-14)?;
    Ok(TransversalResult {
        distance: hull.distance,
        witness: hull.nearest,
        witness_weights: hull.coefficients,
        chosen,
        bound: averaging_bound(set.diameter(), r),
        method: Method::Derandomized,
        chain,
    })
}

/// Best `r`-subset of `P` by hull distance to `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct BestSubset {
    pub subset: Vec<usize>,
    pub distance: f64,
}

/// Exhaustive minimum over all `r`-subsets; lowest lexicographic subset wins ties.
pub fn brute_force_best_subset(set: &PointSet, a: &Point, r: usize) -> Result<BestSubset> {
    if r < 1 || r > set.len() {
        return Err(Error::InvalidArgument(format!("need 1 <= r <= {}, got {r}", set.len())));
    }
    check_dim(set.dim(), a.dim())?;
    guard("r-subsets", binomial(set.len(), r), SUBSET_GUARD)?;
    let rows = set.rows();
    let mut best = BestSubset { subset: Vec::new(), distance: f64::INFINITY };
    for subset in (0..set.len()).combinations(r) {
        let sub: Vec<&[f64]> = subset.iter().map(|&i| rows[i]).collect();
        let d = min_norm_point_rows(&sub, a.coords(), 1e-15)?.distance;
        if d < best.distance {
            best = BestSubset { subset, distance: d };
        }
    }
    Ok(best)
}
