//! Wolfe's minimum-norm-point method on the convex hull of a finite set.
//!
//! The iteration keeps a corral `S` of affinely independent points together
//! with convex weights whose combination is the current iterate `x`. Each
//! major step adds the point minimizing `y·x`; minor steps move towards the
//! affine minimizer of the corral and drop points whose weight hits zero.
//! Termination uses the duality gap `|x|² - min_y y·x`, which bounds how far
//! any point of the hull can lie on the near side of `x`.

use nalgebra::{DMatrix, DVector};

use super::vector as v;
use super::{check_dim, Point, PointSet};
use crate::error::{Error, Result};

pub const MIN_NORM_MAX_ITER: usize = 10_000;

/// Iteration cap of the away-step fallback.
const POLISH_MAX_ITER: usize = 100_000;

/// Weights below this are treated as zero inside the corral.
const WEIGHT_EPS: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct MinNormResult {
    pub nearest: Point,
    pub distance: f64,
    /// Convex weights, one per input point.
    pub coefficients: Vec<f64>,
    pub iterations: usize,
    /// Final duality gap `max_x (target - nearest)·(x - nearest)`.
    pub gap: f64,
}

/// Nearest point of `conv set` to `target`.
pub fn min_norm_point(set: &PointSet, target: &Point, tol: f64) -> Result<MinNormResult> {
    check_dim(set.dim(), target.dim())?;
    min_norm_point_rows(&set.rows(), target.coords(), tol)
}

/// Slice-based variant of [`min_norm_point`].
pub fn min_norm_point_rows(rows: &[&[f64]], target: &[f64], tol: f64) -> Result<MinNormResult> {
    if rows.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    for r in rows {
        check_dim(target.len(), r.len())?;
    }

    let y: Vec<Vec<f64>> = rows.iter().map(|r| v::sub(r, target)).collect();
    let scale2 = y.iter().map(|p| v::norm2(p)).fold(1.0f64, f64::max);
    // A stalled corral is accepted when the gap is within 1e-9 of the squared
    // scale; the returned distance then overestimates the true one by at most gap/|x|.
    let stall_tol = tol.max(1e-9 * scale2);

    let start = argmin(y.iter().map(|p| v::norm2(p)));
    let mut corral = vec![start];
    let mut weights = vec![1.0];
    let mut x = y[start].clone();
    let mut iterations = 0;
    let mut gap;

    loop {
        iterations += 1;
        let xx = v::norm2(&x);
        let j = argmin(y.iter().map(|p| v::dot(p, &x)));
        gap = xx - v::dot(&y[j], &x);
        if gap <= tol {
            break;
        }
        if corral.contains(&j) || iterations > MIN_NORM_MAX_ITER {
            return polish(rows, &y, &corral, &weights, target, tol, stall_tol, iterations);
        }

        corral.push(j);
        weights.push(0.0);
        let mut first_minor = true;
        loop {
            let mu = affine_minimizer(&y, &corral);
            if mu.iter().all(|&m| m > WEIGHT_EPS) {
                weights = mu;
                break;
            }
            let mut theta = 1.0f64;
            let mut blocking = None;
            for (i, (&w, &m)) in weights.iter().zip(&mu).enumerate() {
                if m <= WEIGHT_EPS && w - m > 0.0 {
                    let t = (w / (w - m)).min(1.0);
                    if blocking.is_none() || t < theta {
                        theta = t;
                        blocking = Some(i);
                    }
                }
            }
            let blocking = match blocking {
                Some(b) => b,
                None => {
                    // Every nonpositive entry already has zero weight.
                    mu.iter().position(|&m| m <= WEIGHT_EPS).unwrap()
                }
            };
            for (w, &m) in weights.iter_mut().zip(&mu) {
                *w = (1.0 - theta) * *w + theta * m;
            }
            weights[blocking] = 0.0;
            let newly_added_dropped = first_minor && theta == 0.0 && blocking == corral.len() - 1;
            let mut k = 0;
            corral.retain(|_| {
                let keep = weights[k] > WEIGHT_EPS;
                k += 1;
                keep
            });
            weights.retain(|&w| w > WEIGHT_EPS);
            if corral.is_empty() {
                corral.push(j);
                weights.push(1.0);
            }
            normalize(&mut weights);
            if newly_added_dropped {
                // The new point cannot enter the corral: numerical stall.
                return polish(rows, &y, &corral, &weights, target, tol, stall_tol, iterations);
            }
            first_minor = false;
        }
        x = corral_point(&y, &corral, &weights);
    }

    Ok(finish(rows, &corral, &weights, target, iterations, gap))
}


/// Away-step Frank-Wolfe with exact line search, used once the corral stalls
/// on a nearly dependent support. It needs no affine solves and converges
/// linearly on a polytope.
#[allow(clippy::too_many_arguments)]
fn polish(
    rows: &[&[f64]],
    y: &[Vec<f64>],
    corral: &[usize],
    weights: &[f64],
    target: &[f64],
    tol: f64,
    stall_tol: f64,
    mut iterations: usize,
) -> Result<MinNormResult> {
    let mut lambda = full_coefficients(y.len(), corral, weights);
    let refs: Vec<&[f64]> = y.iter().map(Vec::as_slice).collect();
    let mut x = v::combine(&refs, &lambda);
    let mut gap = f64::INFINITY;
    for _ in 0..POLISH_MAX_ITER {
        iterations += 1;
        let xx = v::norm2(&x);
        let dots: Vec<f64> = y.iter().map(|p| v::dot(p, &x)).collect();
        let j = argmin(dots.iter().copied());
        gap = xx - dots[j];
        if gap <= tol {
            break;
        }
        let a = (0..y.len())
            .filter(|&i| lambda[i] > 0.0)
            .max_by(|&p, &q| dots[p].total_cmp(&dots[q]))
            .expect("the weights sum to one");
        let away_gap = dots[a] - xx;
        // Toward vertex `j`, or away from vertex `a` with step capped by its weight.
        let (dir, max_step, toward) = if gap >= away_gap {
            (v::sub(&y[j], &x), 1.0, true)
        } else {
            (v::sub(&x, &y[a]), lambda[a] / (1.0 - lambda[a]).max(f64::MIN_POSITIVE), false)
        };
        let dd = v::norm2(&dir);
        if dd == 0.0 {
            break;
        }
        let step = (-v::dot(&x, &dir) / dd).clamp(0.0, max_step);
        if step == 0.0 {
            break;
        }
        if toward {
            lambda.iter_mut().for_each(|l| *l *= 1.0 - step);
            lambda[j] += step;
        } else {
            lambda.iter_mut().for_each(|l| *l *= 1.0 + step);
            lambda[a] -= step;
            if step == max_step {
                lambda[a] = 0.0;
            }
        }
        lambda.iter_mut().for_each(|l| *l = l.max(0.0));
        normalize(&mut lambda);
        x = v::combine(&refs, &lambda);
    }
    let support: Vec<usize> = (0..y.len()).filter(|&i| lambda[i] > 0.0).collect();
    let w: Vec<f64> = support.iter().map(|&i| lambda[i]).collect();
    if gap <= stall_tol {
        Ok(finish(rows, &support, &w, target, iterations, gap))
    } else {
        Err(not_converged(rows, &support, &w, target, gap, iterations))
    }
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for (i, val) in values.enumerate() {
        if val < best_v {
            best_v = val;
            best = i;
        }
    }
    best
}

fn normalize(w: &mut [f64]) {
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
}

fn corral_point(y: &[Vec<f64>], corral: &[usize], weights: &[f64]) -> Vec<f64> {
    let rows: Vec<&[f64]> = corral.iter().map(|&i| y[i].as_slice()).collect();
    v::combine(&rows, weights)
}

/// Affine weights (summing to one) of the point of `aff{y_i : i in corral}`
/// closest to the origin.
fn affine_minimizer(y: &[Vec<f64>], corral: &[usize]) -> Vec<f64> {
    let m = corral.len();
    if m == 1 {
        return vec![1.0];
    }
    let base = &y[corral[0]];
    let d = base.len();
    let e = DMatrix::from_fn(d, m - 1, |r, c| y[corral[c + 1]][r] - base[r]);
    let rhs = DVector::from_fn(d, |r, _| -base[r]);
    let svd = e.svd(true, true);
    let smax = svd.singular_values.max();
    let c = svd
        .solve(&rhs, (smax * 1e-12).max(f64::MIN_POSITIVE))
        .expect("both singular-vector sets were requested");
    let mut mu = Vec::with_capacity(m);
    mu.push(1.0 - c.sum());
    mu.extend(c.iter().copied());
    mu
}

fn full_coefficients(n: usize, corral: &[usize], weights: &[f64]) -> Vec<f64> {
    let mut coeffs = vec![0.0; n];
    for (&i, &w) in corral.iter().zip(weights) {
        coeffs[i] += w;
    }
    coeffs
}

fn finish(
    rows: &[&[f64]],
    corral: &[usize],
    weights: &[f64],
    target: &[f64],
    iterations: usize,
    gap: f64,
) -> MinNormResult {
    let coefficients = full_coefficients(rows.len(), corral, weights);
    let nearest = v::combine(rows, &coefficients);
    let distance = v::dist(&nearest, target);
    MinNormResult {
        nearest: Point::from_vec(nearest),
        distance,
        coefficients,
        iterations,
        gap: gap.max(0.0),
    }
}

fn not_converged(
    rows: &[&[f64]],
    corral: &[usize],
    weights: &[f64],
    target: &[f64],
    gap: f64,
    iterations: usize,
) -> Error {
    let best = finish(rows, corral, weights, target, iterations, gap);
    Error::NotConverged {
        best: best.nearest.into_vec(),
        gap,
        iterations,
    }
}
