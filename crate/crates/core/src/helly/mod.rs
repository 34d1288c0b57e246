//! Verification lab for the no-dimension Helly family.
//!
//! Throughout, `K(J)` meets the anchor ball `B(b, 1)` when
//! `d(b, K(J)) <= 1 + tol`, with `d(b, empty) = inf`. Measuring the distance
//! from `b` instead of intersecting with the ball keeps tangent cases
//! well conditioned.

pub mod counting;
pub mod fractional;
pub mod simplex;

pub use counting::{
    count_far_transversals, hyperplane_family, CountingReport, HyperplaneSplit,
};
pub use fractional::{
    count_intersecting_transversals, fractional_beta, fractional_helly_witness,
    fractional_tight_family, largest_intersecting_subfamily, FractionalMode, FractionalReport,
    FractionalWitness, TupleConvention,
};
pub use simplex::{incenter_and_inradius, min_ball_meeting_faces, simplex_lambda, FaceBall, FaceMode};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::combinatorics::{binomial, guard};
use crate::error::{Error, Result};
use crate::geometry::{
    distance_to_intersection, minimax_from, project_onto_polyhedron, regular_simplex, vector as v,
    ConvexBody, DykstraOptions, IntersectionDistance, MinimaxConfig, Point, PointSet, Projector,
};

/// Enumeration guard for k-subsets and transversals.
pub const ENUMERATION_GUARD: u128 = 1_000_000;
/// Slack in `d(b, K(J)) <= 1 + tol`.
pub const HYPOTHESIS_TOL: f64 = 1e-6;
/// Slack of the pass/fail verdicts against the Helly bounds.
pub const BOUND_SLACK: f64 = 1e-6;

/// Families `F_1..F_k` of convex bodies and the center `b` of the anchor ball `B(b, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BodyFamily {
    families: Vec<Vec<ConvexBody>>,
    anchor: Point,
}

impl BodyFamily {
    pub fn new(families: Vec<Vec<ConvexBody>>, anchor: Point) -> Result<Self> {
        if families.is_empty() || families.iter().any(|f| f.is_empty()) {
            return Err(Error::InvalidArgument("every family must be nonempty".into()));
        }
        let dim = anchor.dim();
        for body in families.iter().flatten() {
            crate::geometry::check_dim(dim, body.dim())?;
        }
        Ok(BodyFamily { families, anchor })
    }

    pub fn families(&self) -> &[Vec<ConvexBody>] {
        &self.families
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn k(&self) -> usize {
        self.families.len()
    }

    pub fn dim(&self) -> usize {
        self.anchor.dim()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.families.iter().map(Vec::len).collect()
    }

    /// `prod |F_i|`, saturating.
    pub fn transversal_count(&self) -> u128 {
        self.families
            .iter()
            .fold(1u128, |acc, f| acc.saturating_mul(f.len() as u128))
    }
}

/// Single-family Helly instance: bodies, the subset size `k` and the anchor `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct HellyInstance {
    pub bodies: Vec<ConvexBody>,
    pub k: usize,
    pub anchor: Point,
}

/// `d(q, K(J))` for the bodies picked by `subset`, with undecided runs tagged by the subset.
pub(crate) fn subset_distance(
    q: &Point,
    bodies: &[&ConvexBody],
    subset: &[usize],
    opts: DykstraOptions,
) -> Result<IntersectionDistance> {
    let owned: Vec<ConvexBody> = bodies.iter().map(|b| (*b).clone()).collect();
    distance_to_intersection(q, &owned, opts).map_err(|e| match e {
        Error::Undecided { residual, .. } => Error::UndecidedSubset {
            subset: subset.to_vec(),
            residual,
        },
        other => other,
    })
}

/// Outcome of [`check_kwise_hypothesis`].
#[derive(Clone, Debug, PartialEq)]
pub struct KwiseCheck {
    pub ok: bool,
    /// Index sets `J` with `d(b, K(J)) > 1 + tol`, in lexicographic order.
    pub failures: Vec<Vec<usize>>,
    /// `min_J (1 - d(b, K(J)))`; about zero on tangent instances.
    pub min_slack: f64,
    pub subsets_checked: u128,
}

/// Checks that `K(J)` meets `B(b, 1)` for every `J` of size `k`.
pub fn check_kwise_hypothesis(
    bodies: &[ConvexBody],
    k: usize,
    b: &Point,
    opts: DykstraOptions,
) -> Result<KwiseCheck> {
    let n = bodies.len();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    for body in bodies {
        crate::geometry::check_dim(b.dim(), body.dim())?;
    }
    let count = binomial(n, k);
    guard("k-subsets", count, ENUMERATION_GUARD)?;
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let slacks: Vec<f64> = subsets
        .par_iter()
        .map(|j| {
            let picked: Vec<&ConvexBody> = j.iter().map(|&i| &bodies[i]).collect();
            Ok(1.0 - subset_distance(b, &picked, j, opts)?.value())
        })
        .collect::<Result<_>>()?;
    let failures: Vec<Vec<usize>> = subsets
        .iter()
        .zip(&slacks)
        .filter(|(_, &s)| s < -HYPOTHESIS_TOL)
        .map(|(j, _)| j.clone())
        .collect();
    Ok(KwiseCheck {
        ok: failures.is_empty(),
        failures,
        min_slack: slacks.iter().copied().fold(f64::INFINITY, f64::min),
        subsets_checked: count,
    })
}

/// `1 / sqrt(k)`.
pub fn helly_bound(k: usize) -> f64 {
    1.0 / (k as f64).sqrt()
}

/// `sqrt((n - k) / (k (n - 1)))`; zero when `k = n`.
pub fn precise_helly_bound(n: usize, k: usize) -> f64 {
    if k >= n {
        return 0.0;
    }
    ((n - k) as f64 / (k as f64 * (n - 1) as f64)).sqrt()
}

/// Minimax center of a family satisfying the k-wise hypothesis.
#[derive(Clone, Debug, PartialEq)]
pub struct HellyCenter {
    pub center: Point,
    /// `max_i d(center, K_i)`.
    pub radius: f64,
    pub accuracy: f64,
    pub precise_bound: f64,
    pub simple_bound: f64,
    pub pass_precise: bool,
    pub pass_simple: bool,
    pub hypothesis: KwiseCheck,
}

/// Verifies the hypothesis, then minimizes `max_i d(q, K_i)` starting from `b`.
pub fn helly_center(
    bodies: &[ConvexBody],
    k: usize,
    b: &Point,
    cfg: &MinimaxConfig,
) -> Result<HellyCenter> {
    let hypothesis = check_kwise_hypothesis(bodies, k, b, DykstraOptions::default())?;
    if !hypothesis.ok {
        return Err(Error::HypothesisViolated(format!(
            "{} of {} k-subsets miss B(b, 1), first {:?}",
            hypothesis.failures.len(),
            hypothesis.subsets_checked,
            hypothesis.failures[0]
        )));
    }
    let refs: Vec<&dyn Projector> = bodies.iter().map(|x| x as &dyn Projector).collect();
    let res = minimax_from(&refs, &[b.coords().to_vec()], cfg)?;
    let precise_bound = precise_helly_bound(bodies.len(), k);
    let simple_bound = helly_bound(k);
    Ok(HellyCenter {
        pass_precise: res.radius <= precise_bound + BOUND_SLACK,
        pass_simple: res.radius <= simple_bound + BOUND_SLACK,
        center: res.center,
        radius: res.radius,
        accuracy: res.accuracy,
        precise_bound,
        simple_bound,
        hypothesis,
    })
}

/// Outer facet halfspaces of the regular simplex on `n` vertices whose
/// inscribed ball is `B(0, sqrt((n - k) / (k (n - 1))))`.
///
/// `K_i = {x : v_i·x <= -r}` with `v_i` the unit vector towards vertex `i`.
/// Every `K(J)` with `|J| = k` is at distance exactly 1 from the origin, and
/// the minimax radius is `r` (attained at the origin).
pub fn simplex_facet_instance(n: usize, k: usize) -> Result<HellyInstance> {
    if n < 2 || k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "simplex facet instance needs 1 <= k < n, got n={n}, k={k}"
        )));
    }
    let r = precise_helly_bound(n, k);
    let verts = regular_simplex(n, 1.0)?;
    let c = verts.centroid();
    let bodies = verts
        .points()
        .iter()
        .map(|p| {
            let u = p.sub(&c);
            let len = u.norm();
            ConvexBody::halfspace(u, -r * len)
        })
        .collect::<Result<_>>()?;
    Ok(HellyInstance {
        bodies,
        k,
        anchor: Point::origin(n - 1),
    })
}

fn unit_gaussian(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = v::norm(&g);
        if n > 1e-9 {
            return v::scaled(&g, 1.0 / n);
        }
    }
}

/// A point uniform in the unit ball around `b`.
pub(crate) fn ball_sample(rng: &mut ChaCha8Rng, b: &[f64]) -> Vec<f64> {
    let u = unit_gaussian(rng, b.len());
    let t: f64 = rng.random::<f64>().powf(1.0 / b.len() as f64);
    v::add(b, &v::scaled(&u, t))
}

/// Random halfspaces `{u_i·x <= -s t_i}` around `b = 0`, with `s` chosen so
/// the worst `K(J)` is exactly at distance 1 from the origin.
///
/// The worst-case scaling makes the hypothesis tight. Retries when some
/// `K(J)` is empty.
pub fn random_halfspace_instance(n: usize, k: usize, d: usize, seed: u64) -> Result<HellyInstance> {
    if k == 0 || k > n || d == 0 {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n and d >= 1 (n={n}, k={k}, d={d})")));
    }
    guard("k-subsets", binomial(n, k), ENUMERATION_GUARD)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = vec![0.0; d];
    for _ in 0..1000 {
        let normals: Vec<Vec<f64>> = (0..n).map(|_| unit_gaussian(&mut rng, d)).collect();
        let depths: Vec<f64> = (0..n).map(|_| 0.2 + rng.random::<f64>()).collect();
        let mut worst = 0.0f64;
        let mut feasible = true;
        for j in (0..n).combinations(k) {
            let a: Vec<Vec<f64>> = j.iter().map(|&i| normals[i].clone()).collect();
            let o: Vec<f64> = j.iter().map(|&i| -depths[i]).collect();
            match project_onto_polyhedron(&origin, &a, &o) {
                Some(p) => worst = worst.max(v::norm(&p)),
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if !feasible || worst <= 0.0 {
            continue;
        }
        let bodies = normals
            .into_iter()
            .zip(&depths)
            .map(|(u, t)| ConvexBody::halfspace(Point::from_vec(u), -t / worst))
            .collect::<Result<_>>()?;
        return Ok(HellyInstance {
            bodies,
            k,
            anchor: Point::origin(d),
        });
    }
    Err(Error::InvalidArgument("no feasible halfspace family found in 1000 draws".into()))
}

const CLUSTER: f64 = 0.05;

/// Hull bodies built from witness points: one `z(J)` in `B(0, 1)` per
/// k-subset `J`, and `K_i = conv{z(J) : i in J}`.
///
/// The hypothesis holds by construction. Witnesses are drawn at radius
/// `0.85 + 0.1 u`; each is replaced by the cross polytope `z(J) +- 0.05 e_t`
/// so that every `K(J)` has interior and the intersection solver converges
/// linearly instead of crawling towards a shared vertex.
pub fn random_hull_instance(n: usize, k: usize, d: usize, seed: u64) -> Result<HellyInstance> {
    if k == 0 || k > n || d == 0 {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n and d >= 1 (n={n}, k={k}, d={d})")));
    }
    guard("k-subsets", binomial(n, k), ENUMERATION_GUARD)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members: Vec<Vec<Point>> = vec![Vec::new(); n];
    for j in (0..n).combinations(k) {
        let z = v::scaled(&unit_gaussian(&mut rng, d), 0.85 + 0.1 * rng.random::<f64>());
        for &i in &j {
            for t in 0..d {
                for s in [-CLUSTER, CLUSTER] {
                    let mut c = z.clone();
                    c[t] += s;
                    members[i].push(Point::from_vec(c));
                }
            }
        }
    }
    let bodies = members
        .into_iter()
        .map(|pts| Ok(ConvexBody::hull(PointSet::new(pts)?)))
        .collect::<Result<_>>()?;
    Ok(HellyInstance {
        bodies,
        k,
        anchor: Point::origin(d),
    })
}
