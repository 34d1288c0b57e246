//! Minimizing `f(q) = max_i d(q, K_i)` over a list of convex bodies.
//!
//! Phase one is a Polyak subgradient method with an adaptively estimated
//! target level. Phase two polishes the best iterate with epsilon-steepest
//! descent: the direction is minus the min-norm point of the hull of the unit
//! gradients of all epsilon-active bodies, followed by an exact line search.
//! Because every `d(., K_i)` is convex, a min-norm point `w` over the
//! epsilon-active gradients gives `f(q') >= f(q) - eps - |w| |q' - q|`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::vector as v;
use super::{min_norm_point_rows, ConvexBody, Point, Projector};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimaxConfig {
    pub restarts: usize,
    /// Subgradient iterations per restart.
    pub iterations: usize,
    /// Target additive accuracy.
    pub tol: f64,
    /// Seed for the random restart points.
    pub seed: u64,
}

impl Default for MinimaxConfig {
    fn default() -> Self {
        MinimaxConfig {
            restarts: 20,
            iterations: 5000,
            tol: 1e-9,
            seed: 0,
        }
    }
}

impl MinimaxConfig {
    /// A cheaper profile for inner loops over many or expensive bodies.
    pub fn light() -> Self {
        MinimaxConfig {
            restarts: 3,
            iterations: 600,
            tol: 1e-7,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimaxResult {
    pub center: Point,
    /// `f(center)`.
    pub radius: f64,
    /// Stationarity estimate `eps + |w| * max(radius, 1)` of the returned point.
    pub accuracy: f64,
}

/// Minimax center of concrete bodies.
pub fn minimax_center(bodies: &[ConvexBody], cfg: &MinimaxConfig) -> Result<MinimaxResult> {
    let refs: Vec<&dyn Projector> = bodies.iter().map(|b| b as &dyn Projector).collect();
    minimax_over(&refs, cfg)
}

struct Eval {
    f: f64,
    dists: Vec<f64>,
    grads: Vec<Option<Vec<f64>>>,
}

fn evaluate(bodies: &[&dyn Projector], q: &[f64]) -> Result<Eval> {
    let mut dists = Vec::with_capacity(bodies.len());
    let mut grads = Vec::with_capacity(bodies.len());
    for b in bodies {
        let p = b.project(q)?;
        let d = v::dist(&p, q);
        dists.push(d);
        grads.push(if d > 0.0 {
            Some(v::scaled(&v::sub(q, &p), 1.0 / d))
        } else {
            None
        });
    }
    let f = dists.iter().copied().fold(0.0, f64::max);
    Ok(Eval { f, dists, grads })
}

fn value(bodies: &[&dyn Projector], q: &[f64]) -> Result<f64> {
    let mut f = 0.0f64;
    for b in bodies {
        f = f.max(v::dist(&b.project(q)?, q));
    }
    Ok(f)
}

/// Minimax center over arbitrary projectors.
pub fn minimax_over(bodies: &[&dyn Projector], cfg: &MinimaxConfig) -> Result<MinimaxResult> {
    minimax_from(bodies, &[], cfg)
}

/// As [`minimax_over`], trying the caller's `starts` before the default ones.
/// The result is never worse than the best of `starts`.
pub fn minimax_from(bodies: &[&dyn Projector], starts: &[Vec<f64>], cfg: &MinimaxConfig) -> Result<MinimaxResult> {
    let first = bodies
        .first()
        .ok_or_else(|| Error::InvalidArgument("minimax over no bodies".into()))?;
    let dim = first.dim();
    for b in bodies {
        super::check_dim(dim, b.dim())?;
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidArgument("minimax tolerance must be positive".into()));
    }

    let anchors: Vec<Vec<f64>> = bodies.iter().map(|b| b.anchor()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for st in starts {
        super::check_dim(dim, st.len())?;
    }
    let given = starts.len();
    let mut starts = starts.to_vec();
    starts.push(mean(&anchors));
    starts.extend(anchors.iter().take(cfg.restarts.saturating_sub(1) / 2).cloned());
    while starts.len() < given + cfg.restarts.max(1) {
        let w: Vec<f64> = (0..anchors.len()).map(|_| rng.random::<f64>()).collect();
        let s: f64 = w.iter().sum();
        let rows: Vec<&[f64]> = anchors.iter().map(|a| a.as_slice()).collect();
        starts.push(v::scaled(&v::combine(&rows, &w), 1.0 / s));
    }

    let mut best: Option<MinimaxResult> = None;
    for start in starts {
        let res = solve_from(bodies, start, cfg)?;
        let better = match &best {
            None => true,
            Some(b) => res.radius < b.radius,
        };
        if better {
            best = Some(res);
        }
        if best.as_ref().is_some_and(|b| b.radius <= cfg.tol) {
            break;
        }
    }
    Ok(best.expect("at least one start"))
}

fn mean(rows: &[Vec<f64>]) -> Vec<f64> {
    let mut acc = vec![0.0; rows[0].len()];
    for r in rows {
        v::axpy(1.0, r, &mut acc);
    }
    v::scaled(&acc, 1.0 / rows.len() as f64)
}

fn solve_from(bodies: &[&dyn Projector], start: Vec<f64>, cfg: &MinimaxConfig) -> Result<MinimaxResult> {
    let (q, f) = polyak(bodies, start, cfg)?;
    polish(bodies, q, f, cfg)
}

/// Polyak steps towards the level `f_best - delta`; `delta` halves whenever a
/// stretch of iterations brings no real progress.
fn polyak(bodies: &[&dyn Projector], start: Vec<f64>, cfg: &MinimaxConfig) -> Result<(Vec<f64>, f64)> {
    let mut q = start;
    let e = evaluate(bodies, &q)?;
    let mut best_q = q.clone();
    let mut best_f = e.f;
    if best_f <= cfg.tol {
        return Ok((best_q, best_f));
    }
    let mut delta = best_f / 2.0;
    let mut since_progress = 0usize;
    let patience = 50;
    let mut mark = best_f;
    let mut cur = e;
    for _ in 0..cfg.iterations {
        let i = argmax(&cur.dists);
        let Some(g) = &cur.grads[i] else { break };
        let step = cur.f - (best_f - delta);
        v::axpy(-step, g, &mut q);
        cur = evaluate(bodies, &q)?;
        if cur.f < best_f {
            best_f = cur.f;
            best_q.clone_from(&q);
        }
        if best_f <= cfg.tol {
            break;
        }
        if best_f < mark - delta / 2.0 {
            mark = best_f;
            since_progress = 0;
        } else {
            since_progress += 1;
            if since_progress >= patience {
                delta /= 2.0;
                since_progress = 0;
                mark = best_f;
                q.clone_from(&best_q);
                cur = evaluate(bodies, &q)?;
            }
        }
        // Past a relative level gap of 1e-6 the polish phase converges faster.
        if delta < (cfg.tol * 1e-2).max(best_f * 1e-6) {
            break;
        }
    }
    Ok((best_q, best_f))
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

const POLISH_STEPS: usize = 400;

fn polish(bodies: &[&dyn Projector], mut q: Vec<f64>, mut f: f64, cfg: &MinimaxConfig) -> Result<MinimaxResult> {
    let mut eps = (f * 1e-2).max(cfg.tol);
    let mut wnorm = f64::INFINITY;
    for _ in 0..POLISH_STEPS {
        if f <= cfg.tol {
            wnorm = 0.0;
            break;
        }
        let e = evaluate(bodies, &q)?;
        f = e.f;
        let active: Vec<&[f64]> = e
            .dists
            .iter()
            .zip(&e.grads)
            .filter(|(d, _)| **d >= f - eps)
            .filter_map(|(_, g)| g.as_deref())
            .collect();
        let w = min_norm_point_rows(&active, &vec![0.0; q.len()], 1e-14)
            .map(|r| r.nearest.into_vec())
            .or_else(|err| match err {
                Error::NotConverged { best, .. } => Ok(best),
                other => Err(other),
            })?;
        wnorm = v::norm(&w);
        if wnorm <= cfg.tol {
            if eps <= cfg.tol {
                break;
            }
            eps = (eps / 10.0).max(cfg.tol);
            continue;
        }
        let dir = v::scaled(&w, -1.0 / wnorm);
        let (s, fs) = line_search(bodies, &q, &dir, f, (eps / wnorm).max(f))?;
        if fs < f - 1e-15 * f.max(1.0) {
            v::axpy(s, &dir, &mut q);
            f = fs;
        } else if eps <= cfg.tol {
            break;
        } else {
            eps = (eps / 10.0).max(cfg.tol);
        }
    }
    Ok(MinimaxResult {
        center: Point::from_vec(q),
        radius: f,
        accuracy: eps.min(f) + wnorm.min(1.0) * f.max(1.0),
    })
}

/// Golden-section search of the convex function `s -> f(q + s dir)` on
/// `[0, reach]`, doubling the bracket while the minimum sits at its right end.
fn line_search(bodies: &[&dyn Projector], q: &[f64], dir: &[f64], f0: f64, reach: f64) -> Result<(f64, f64)> {
    let at = |s: f64| -> Result<f64> {
        let mut p = q.to_vec();
        v::axpy(s, dir, &mut p);
        value(bodies, &p)
    };
    let mut hi = reach;
    let mut f_hi = at(hi)?;
    for _ in 0..30 {
        let f_half = at(hi / 2.0)?;
        if f_hi < f_half && f_hi < f0 {
            hi *= 2.0;
            f_hi = at(hi)?;
        } else {
            break;
        }
    }
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, hi);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = at(c)?;
    let mut fd = at(d)?;
    for _ in 0..80 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = at(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = at(d)?;
        }
        if b - a <= 1e-15 * hi {
            break;
        }
    }
    let (s, fs) = if fc <= fd { (c, fc) } else { (d, fd) };
    if fs < f0 {
        Ok((s, fs))
    } else {
        Ok((0.0, f0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{regular_simplex, PointSet};

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn single(c: &[f64]) -> ConvexBody {
        ConvexBody::hull(PointSet::from_rows(vec![c.to_vec()]).unwrap())
    }

    #[test]
    fn midpoint_of_two_points() {
        let res = minimax_center(&[single(&[1.0, 0.0]), single(&[-1.0, 0.0])], &MinimaxConfig::default()).unwrap();
        assert!((res.radius - 1.0).abs() < 1e-8);
        assert!(res.center.norm() < 1e-6);
    }

    #[test]
    fn single_body_has_radius_zero() {
        let b = ConvexBody::ball(pt(&[3.0, 4.0]), 0.5).unwrap();
        let res = minimax_center(&[b], &MinimaxConfig::default()).unwrap();
        assert!(res.radius <= 1e-9);
    }

    #[test]
    fn circumradius_of_regular_triangle() {
        let s = regular_simplex(3, 1.0).unwrap();
        let bodies: Vec<ConvexBody> = s.points().iter().map(|p| single(p.coords())).collect();
        let res = minimax_center(&bodies, &MinimaxConfig::default()).unwrap();
        assert!((res.radius - 1.0 / 3f64.sqrt()).abs() < 1e-8, "{}", res.radius);
    }

    #[test]
    fn facet_halfspaces_of_simplex() {
        // Outer halfspaces of the facets of a centered regular simplex with
        // inradius rho: the minimax radius is rho, reached at the centroid.
        for n in 3..=6 {
            let s = regular_simplex(n, 1.0).unwrap();
            let rho = 0.37;
            let bodies: Vec<ConvexBody> = s
                .points()
                .iter()
                .map(|p| ConvexBody::halfspace(p.clone(), -rho * p.norm()).unwrap())
                .collect();
            let res = minimax_center(&bodies, &MinimaxConfig::default()).unwrap();
            assert!((res.radius - rho).abs() < 1e-7, "n={n}: {}", res.radius);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let bodies = [
            ConvexBody::ball(pt(&[0.0, 0.0]), 0.2).unwrap(),
            ConvexBody::ball(pt(&[2.0, 1.0]), 0.1).unwrap(),
            ConvexBody::halfspace(pt(&[1.0, 1.0]), -1.0).unwrap(),
        ];
        let cfg = MinimaxConfig::default();
        assert_eq!(minimax_center(&bodies, &cfg).unwrap(), minimax_center(&bodies, &cfg).unwrap());
    }
}
