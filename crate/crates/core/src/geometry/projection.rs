//! Projections onto single bodies and onto intersections of bodies.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use super::vector as v;
use super::{check_dim, min_norm_point_rows, ConvexBody, Point, Projector};
use crate::error::{Error, Result};

/// Euclidean projection of `q` onto `body`.
pub fn project_onto_body(q: &Point, body: &ConvexBody, tol: f64) -> Result<Point> {
    check_dim(body.dim(), q.dim())?;
    Ok(Point::from_vec(project_slice(q.coords(), body, tol)?))
}

pub(crate) fn project_slice(q: &[f64], body: &ConvexBody, tol: f64) -> Result<Vec<f64>> {
    match body {
        // A stalled run still returns a point of the hull; iterative callers
        // certify their own residuals, so the best iterate is used.
        ConvexBody::HullOfPoints(set) => match min_norm_point_rows(&set.rows(), q, tol) {
            Ok(res) => Ok(res.nearest.into_vec()),
            Err(Error::NotConverged { best, .. }) => Ok(best),
            Err(e) => Err(e),
        },
        ConvexBody::Ball { center, radius } => {
            let c = center.coords();
            let d = v::dist(q, c);
            if d <= *radius {
                Ok(q.to_vec())
            } else {
                let s = radius / d;
                Ok(c.iter().zip(q).map(|(ci, qi)| ci + s * (qi - ci)).collect())
            }
        }
        ConvexBody::Halfspace { normal, offset } => {
            let excess = v::dot(normal.coords(), q) - offset;
            let mut out = q.to_vec();
            if excess > 0.0 {
                v::axpy(-excess, normal.coords(), &mut out);
            }
            Ok(out)
        }
        ConvexBody::Hyperplane { normal, offset } => {
            let excess = v::dot(normal.coords(), q) - offset;
            let mut out = q.to_vec();
            v::axpy(-excess, normal.coords(), &mut out);
            Ok(out)
        }
    }
}

/// Knobs for the cyclic-projection intersection solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DykstraOptions {
    /// Feasibility and step tolerance, also the accuracy of the reported distance.
    pub tol: f64,
    pub max_iter: usize,
    /// Consecutive sweeps with a stable residual above `10 * tol` before the
    /// intersection is declared empty.
    pub stall_window: usize,
}

impl Default for DykstraOptions {
    fn default() -> Self {
        DykstraOptions {
            tol: 1e-9,
            max_iter: 10_000,
            stall_window: 100,
        }
    }
}

impl DykstraOptions {
    pub fn with_tol(tol: f64) -> Self {
        DykstraOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Outcome of [`distance_to_intersection`].
#[derive(Clone, Debug, PartialEq)]
pub enum IntersectionDistance {
    /// Nearest point of the intersection and its distance from the query.
    Distance { distance: f64, point: Point },
    /// The bodies stayed separated by `residual`; distance is taken as infinite.
    Empty { residual: f64 },
}

impl IntersectionDistance {
    /// Distance with the empty set at infinity.
    pub fn value(&self) -> f64 {
        match self {
            IntersectionDistance::Distance { distance, .. } => *distance,
            IntersectionDistance::Empty { .. } => f64::INFINITY,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, IntersectionDistance::Empty { .. })
    }
}

/// Distance from `q` to the intersection of `bodies` via Dykstra's algorithm.
///
/// Emptiness is a heuristic verdict: the worst body distance of the iterate
/// stays above `10 * tol` and stops changing over `stall_window` sweeps.
pub fn distance_to_intersection(
    q: &Point,
    bodies: &[ConvexBody],
    opts: DykstraOptions,
) -> Result<IntersectionDistance> {
    let refs: Vec<&dyn Projector> = bodies.iter().map(|b| b as &dyn Projector).collect();
    dykstra(q.coords(), &refs, opts)
}

pub(crate) fn dykstra(
    q: &[f64],
    bodies: &[&dyn Projector],
    opts: DykstraOptions,
) -> Result<IntersectionDistance> {
    let first = bodies
        .first()
        .ok_or_else(|| Error::InvalidArgument("no bodies".into()))?;
    for b in bodies {
        check_dim(first.dim(), b.dim())?;
    }
    check_dim(first.dim(), q.len())?;

    if bodies.len() == 1 {
        let p = first.project(q)?;
        return Ok(IntersectionDistance::Distance {
            distance: v::dist(&p, q),
            point: Point::from_vec(p),
        });
    }

    let tol = opts.tol;
    let mut x = q.to_vec();
    let mut increments = vec![vec![0.0; q.len()]; bodies.len()];
    let mut history: Vec<f64> = Vec::new();
    let mut above = 0usize;
    let mut residual = f64::INFINITY;

    for _ in 0..opts.max_iter {
        let prev = x.clone();
        for (body, inc) in bodies.iter().zip(increments.iter_mut()) {
            let y = v::add(&x, inc);
            let z = body.project(&y)?;
            for ((ii, yi), zi) in inc.iter_mut().zip(&y).zip(&z) {
                *ii = yi - zi;
            }
            x = z;
        }
        residual = 0.0;
        for body in bodies {
            let p = body.project(&x)?;
            residual = residual.max(v::dist(&p, &x));
        }
        let movement = v::dist(&x, &prev);
        if residual <= tol && movement <= tol {
            return Ok(IntersectionDistance::Distance {
                distance: v::dist(&x, q),
                point: Point::from_vec(x),
            });
        }
        history.push(residual);
        if residual > 10.0 * tol {
            above += 1;
        } else {
            above = 0;
        }
        if above >= opts.stall_window {
            let earlier = history[history.len() - opts.stall_window];
            if (earlier - residual).abs() <= 1e-6 * residual + tol {
                return Ok(IntersectionDistance::Empty { residual });
            }
        }
    }
    Err(Error::Undecided {
        sweeps: opts.max_iter,
        residual,
        distance: v::dist(&x, q),
    })
}

/// Exact projection onto `{x : a_i·x <= b_i}` for a handful of constraints.
/// Returns `None` when the polyhedron is empty.
pub fn project_onto_polyhedron(q: &[f64], normals: &[Vec<f64>], offsets: &[f64]) -> Option<Vec<f64>> {
    Polyhedron::new(normals.to_vec(), offsets.to_vec()).project(q)
}

/// `{x : a_i·x <= b_i}` with its Gram matrix cached for repeated projections.
///
/// Projection first runs an active-set solve of the dual
/// `min_{mu >= 0} mu·G mu / 2 - mu·(A q - b)` (`G = A A^T`). If its KKT check
/// fails, candidate active sets are enumerated by increasing size; that
/// fallback is exponential in the number of constraints, so this is meant for
/// the small cones of the simplex lab.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    normals: Vec<Vec<f64>>,
    offsets: Vec<f64>,
    gram: DMatrix<f64>,
    norms: Vec<f64>,
}

impl Polyhedron {
    const FEAS: f64 = 1e-11;

    pub fn new(normals: Vec<Vec<f64>>, offsets: Vec<f64>) -> Polyhedron {
        assert_eq!(normals.len(), offsets.len(), "one offset per normal");
        let m = normals.len();
        let gram = DMatrix::from_fn(m, m, |i, j| v::dot(&normals[i], &normals[j]));
        let norms = normals.iter().map(|a| v::norm(a)).collect();
        Polyhedron { normals, offsets, gram, norms }
    }

    /// Largest violation relative to the rounding scale of each constraint;
    /// `mag` bounds the magnitude of the terms that were summed into `x`.
    fn violation(&self, x: &[f64], mag: f64) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .zip(&self.norms)
            .map(|((a, &b), an)| (v::dot(a, x) - b) / (1.0 + b.abs() + an * mag))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn candidate(&self, q: &[f64], qn: f64, active: &[usize], mu: &[f64]) -> (Vec<f64>, f64) {
        let mut x = q.to_vec();
        let mut mag = qn;
        for (&i, &m) in active.iter().zip(mu) {
            v::axpy(-m, &self.normals[i], &mut x);
            mag += m.abs() * self.norms[i];
        }
        let viol = self.violation(&x, mag);
        (x, viol)
    }

    pub fn project(&self, q: &[f64]) -> Option<Vec<f64>> {
        let qn = v::norm(q);
        if self.violation(q, qn) <= Self::FEAS {
            return Some(q.to_vec());
        }
        let h: Vec<f64> = self.normals.iter().zip(&self.offsets).map(|(a, &b)| v::dot(a, q) - b).collect();
        if let Some((active, mu)) = self.dual_active_set(&h, qn) {
            let (x, viol) = self.candidate(q, qn, &active, &mu);
            if viol <= Self::FEAS {
                return Some(x);
            }
        }
        // Among KKT candidates, an exactly feasible one is optimal. Rounding on
        // nearly parallel normals can leave every candidate marginally infeasible,
        // so the least violated one is kept as long as it stays within 1e-8.
        let m = self.normals.len();
        let mut best: Option<(f64, Vec<f64>)> = None;
        for size in 1..=m.min(q.len()) {
            for active in (0..m).combinations(size) {
                let g = DMatrix::from_fn(size, size, |i, j| self.gram[(active[i], active[j])]);
                let rhs = DVector::from_fn(size, |i, _| h[active[i]]);
                let Some(mu) = g.lu().solve(&rhs) else { continue };
                if mu.iter().any(|&m| m < -1e-12 || !m.is_finite()) {
                    continue;
                }
                let (x, viol) = self.candidate(q, qn, &active, mu.as_slice());
                if viol <= Self::FEAS {
                    return Some(x);
                }
                if best.as_ref().is_none_or(|(b, _)| viol < *b) {
                    best = Some((viol, x));
                }
            }
        }
        best.filter(|(viol, _)| *viol <= 1e-8).map(|(_, x)| x)
    }

    /// Lawson-Hanson iteration on the dual, with `h = A q - b`.
    ///
    /// Returns the active constraints and their multipliers, or `None` when a
    /// reduced Gram system is singular or the iteration cap is reached.
    fn dual_active_set(&self, h: &[f64], qn: f64) -> Option<(Vec<usize>, Vec<f64>)> {
        let m = self.normals.len();
        let g = &self.gram;
        // `w_i = h_i - (G mu)_i` is the violation `a_i·x - b_i` at `x = q - A^T mu`.
        let scale: Vec<f64> = h
            .iter()
            .zip(&self.norms)
            .map(|(hi, an)| 1e-13 * (1.0 + hi.abs() + an * qn))
            .collect();
        let mut mu = vec![0.0; m];
        let mut active: Vec<usize> = Vec::with_capacity(m);
        for _ in 0..3 * m + 3 {
            let entering = (0..m)
                .filter(|i| !active.contains(i))
                .map(|i| (i, (h[i] - (0..m).map(|j| g[(i, j)] * mu[j]).sum::<f64>()) / scale[i]))
                .filter(|&(_, w)| w > 1.0)
                .max_by(|a, b| a.1.total_cmp(&b.1));
            let Some((j, _)) = entering else {
                return Some((active.clone(), active.iter().map(|&i| mu[i]).collect()));
            };
            active.push(j);
            loop {
                let p = active.len();
                let gp = DMatrix::from_fn(p, p, |a, b| g[(active[a], active[b])]);
                let hp = DVector::from_fn(p, |a, _| h[active[a]]);
                let z = gp.cholesky()?.solve(&hp);
                if z.iter().all(|&zi| zi > 0.0) {
                    for (k, &i) in active.iter().enumerate() {
                        mu[i] = z[k];
                    }
                    break;
                }
                // Step towards `z` until the first multiplier hits zero.
                let mut alpha = 1.0f64;
                for (k, &i) in active.iter().enumerate() {
                    if z[k] <= 0.0 {
                        alpha = alpha.min(mu[i] / (mu[i] - z[k]));
                    }
                }
                for (k, &i) in active.iter().enumerate() {
                    mu[i] += alpha * (z[k] - mu[i]);
                }
                let before = active.len();
                active.retain(|&i| mu[i] > 0.0);
                for (i, mi) in mu.iter_mut().enumerate() {
                    if !active.contains(&i) {
                        *mi = 0.0;
                    }
                }
                if active.len() == before {
                    return None;
                }
                if active.is_empty() {
                    break;
                }
            }
        }
        None
    }
}
