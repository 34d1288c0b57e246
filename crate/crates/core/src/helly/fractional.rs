//! Fractional Helly: measured alpha, required beta and a best-effort witness ball.
//!
//! The existence proof is a counting contrapositive, so a missing witness is
//! reported as "not found" and never read as a counterexample.

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ball_sample, subset_distance, BodyFamily, ENUMERATION_GUARD, HYPOTHESIS_TOL};
use crate::combinatorics::{binomial, guard, stirling2};
use crate::error::{Error, Result};
use crate::geometry::{
    distance_to_intersection, minimax_from, regular_simplex, vector as v, ConvexBody, DykstraOptions,
    MinimaxConfig, Point, Projector,
};

/// Cap on enumeration witness points kept as candidate centers.
pub const MAX_WITNESS_CANDIDATES: usize = 2000;
/// Random subfamily minimax attempts per family.
pub const SUBFAMILY_ATTEMPTS: usize = 8;
/// Samples from the anchor ball.
pub const BALL_SAMPLES: usize = 64;

/// `1 - (1 - alpha)^(1/k)`.
pub fn fractional_beta(alpha: f64, k: usize) -> f64 {
    1.0 - (1.0 - alpha.clamp(0.0, 1.0)).powf(1.0 / k as f64)
}

/// Which tuples the measured fraction ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleConvention {
    /// One body from each family.
    Transversal,
    /// Ordered k-tuples of distinct bodies of a single family.
    OrderedDistinct,
    /// Ordered k-tuples of a single family, repetitions allowed.
    WithRepetition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FractionalMode {
    /// Families `F_1..F_k` of the body family.
    Colored,
    /// The first family alone, with tuples of size `k` counted per `convention`.
    Single { k: usize, convention: TupleConvention },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FractionalWitness {
    pub center: Point,
    pub family_index: usize,
    /// Bodies of that family within `1/sqrt(k)` of the center.
    pub hits: usize,
    pub hit_fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FractionalReport {
    /// Convention that `alpha` and `beta_required` refer to.
    pub convention: TupleConvention,
    pub k: usize,
    pub alpha: f64,
    /// Single-family mode reports both tuple conventions.
    pub alpha_distinct: Option<f64>,
    pub alpha_repetition: Option<f64>,
    pub beta_required: f64,
    /// `ceil(beta n_i)` per family, the hit count a witness needs.
    pub hits_required: Vec<usize>,
    /// Best candidate by hit fraction, whether or not it meets the requirement.
    pub best: FractionalWitness,
    pub found: bool,
    pub candidates_tried: usize,
}

/// Measures alpha, then searches for a ball `B(q, 1/sqrt(k))` meeting at least
/// `beta n_i` bodies of some family.
///
/// Candidate centers: nearest points of the meeting intersections found during
/// enumeration, the anchor, samples from the anchor ball, and minimax centers
/// of random subfamilies of size `ceil(beta n_i)`.
pub fn fractional_helly_witness(bf: &BodyFamily, mode: FractionalMode, seed: u64) -> Result<FractionalReport> {
    let b = bf.anchor();
    let opts = DykstraOptions::default();
    let meets = |d: f64| d <= 1.0 + HYPOTHESIS_TOL;
    let mut candidates: Vec<Vec<f64>> = vec![b.coords().to_vec()];

    let (families, k, convention, alpha, alpha_distinct, alpha_repetition) = match mode {
        FractionalMode::Colored => {
            let total = bf.transversal_count();
            guard("transversals", total, ENUMERATION_GUARD)?;
            let fams = bf.families();
            let picks: Vec<Vec<usize>> = fams.iter().map(|f| 0..f.len()).multi_cartesian_product().collect();
            let results = picks
                .par_iter()
                .map(|pick| {
                    let bodies: Vec<&ConvexBody> = pick.iter().enumerate().map(|(i, &j)| &fams[i][j]).collect();
                    subset_distance(b, &bodies, pick, opts)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut hit = 0u128;
            for r in results {
                if meets(r.value()) {
                    hit += 1;
                    if let crate::geometry::IntersectionDistance::Distance { point, .. } = r {
                        candidates.push(point.into_vec());
                    }
                }
            }
            let alpha = hit as f64 / total as f64;
            (fams.to_vec(), bf.k(), TupleConvention::Transversal, alpha, None, None)
        }
        FractionalMode::Single { k, convention } => {
            if convention == TupleConvention::Transversal {
                return Err(Error::InvalidArgument("single-family mode counts tuples, not transversals".into()));
            }
            let fam = &bf.families()[0];
            let n = fam.len();
            if k == 0 || k > n {
                return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got k={k}, n={n}")));
            }
            let subsets: u128 = (1..=k).map(|j| binomial(n, j)).fold(0u128, u128::saturating_add);
            guard("index sets", subsets, ENUMERATION_GUARD)?;
            // A tuple's intersection depends only on its set of distinct indices:
            // with repetition, a j-set is hit by j! S(k, j) ordered k-tuples.
            let sets: Vec<Vec<usize>> = (1..=k).flat_map(|j| (0..n).combinations(j)).collect();
            let results = sets
                .par_iter()
                .map(|j| {
                    let bodies: Vec<&ConvexBody> = j.iter().map(|&i| &fam[i]).collect();
                    subset_distance(b, &bodies, j, opts)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut rep = 0f64;
            let mut distinct = 0f64;
            for (j, r) in sets.iter().zip(results) {
                if !meets(r.value()) {
                    continue;
                }
                let surj = (1..=j.len() as u128).product::<u128>() as f64 * stirling2(k, j.len()) as f64;
                rep += surj;
                if j.len() == k {
                    distinct += surj;
                }
                if j.len() == k {
                    if let crate::geometry::IntersectionDistance::Distance { point, .. } = r {
                        candidates.push(point.into_vec());
                    }
                }
            }
            let ordered_distinct = (0..k).map(|i| (n - i) as f64).product::<f64>();
            let a_d = distinct / ordered_distinct;
            let a_r = rep / (n as f64).powi(k as i32);
            let alpha = match convention {
                TupleConvention::OrderedDistinct => a_d,
                _ => a_r,
            };
            (vec![fam.clone()], k, convention, alpha, Some(a_d), Some(a_r))
        }
    };

    let beta = fractional_beta(alpha, k);
    let radius = 1.0 / (k as f64).sqrt() + HYPOTHESIS_TOL;
    let hits_required: Vec<usize> = families
        .iter()
        .map(|f| (beta * f.len() as f64 - 1e-9).ceil().max(0.0) as usize)
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if candidates.len() > MAX_WITNESS_CANDIDATES {
        let keep = sample(&mut rng, candidates.len(), MAX_WITNESS_CANDIDATES).into_vec();
        candidates = keep.into_iter().map(|i| candidates[i].clone()).collect();
    }
    for _ in 0..BALL_SAMPLES {
        candidates.push(ball_sample(&mut rng, b.coords()));
    }

    let score = |c: &[f64]| -> Result<(usize, usize, f64)> {
        let mut best = (0, 0, -1.0);
        for (i, fam) in families.iter().enumerate() {
            let mut hits = 0;
            for body in fam {
                if v::dist(&body.project(c)?, c) <= radius {
                    hits += 1;
                }
            }
            let frac = hits as f64 / fam.len() as f64;
            if frac > best.2 {
                best = (i, hits, frac);
            }
        }
        Ok(best)
    };
    let enough = |i: usize, hits: usize| hits >= hits_required[i];

    let mut tried = 0;
    // Candidate point with (family, hits, fraction).
    type Scored = Option<(Vec<f64>, (usize, usize, f64))>;
    let mut best: Scored = None;
    let consider = |c: Vec<f64>, best: &mut Scored| -> Result<bool> {
        let s = score(&c)?;
        let better = match best {
            None => true,
            Some((_, bs)) => s.2 > bs.2,
        };
        if better {
            *best = Some((c, s));
        }
        Ok(enough(s.0, s.1))
    };
    let mut found = false;
    for c in candidates {
        tried += 1;
        found |= consider(c, &mut best)?;
    }
    if !found {
        let cfg = MinimaxConfig { seed, ..MinimaxConfig::light() };
        'outer: for (i, fam) in families.iter().enumerate() {
            let size = hits_required[i].clamp(1, fam.len());
            for _ in 0..SUBFAMILY_ATTEMPTS {
                let idx = sample(&mut rng, fam.len(), size).into_vec();
                let refs: Vec<&dyn Projector> = idx.iter().map(|&j| &fam[j] as &dyn Projector).collect();
                let res = minimax_from(&refs, &[b.coords().to_vec()], &cfg)?;
                tried += 1;
                if consider(res.center.into_vec(), &mut best)? {
                    found = true;
                    break 'outer;
                }
            }
        }
    }
    let (center, (family_index, hits, hit_fraction)) = best.expect("anchor is always a candidate");
    Ok(FractionalReport {
        convention,
        k,
        alpha,
        alpha_distinct,
        alpha_repetition,
        beta_required: beta,
        hits_required,
        best: FractionalWitness {
            center: Point::from_vec(center),
            family_index,
            hits,
            hit_fraction,
        },
        found,
        candidates_tried: tried,
    })
}

/// Counts transversals of `families` with a nonempty intersection.
pub fn count_intersecting_transversals(families: &[Vec<ConvexBody>]) -> Result<(u128, u128)> {
    let total = families.iter().fold(1u128, |a, f| a.saturating_mul(f.len() as u128));
    guard("transversals", total, ENUMERATION_GUARD)?;
    let first = families
        .first()
        .and_then(|f| f.first())
        .ok_or_else(|| Error::InvalidArgument("empty family".into()))?;
    let start = first.anchor();
    let picks: Vec<Vec<usize>> = families.iter().map(|f| 0..f.len()).multi_cartesian_product().collect();
    let hits = picks
        .par_iter()
        .map(|pick| {
            let bodies: Vec<&ConvexBody> = pick.iter().enumerate().map(|(i, &j)| &families[i][j]).collect();
            Ok(!subset_distance(&start, &bodies, pick, DykstraOptions::default())?.is_empty())
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok((hits.into_iter().filter(|&h| h).count() as u128, total))
}

/// Largest subfamily with a common point, by exhaustive search from the top size down.
pub fn largest_intersecting_subfamily(family: &[ConvexBody]) -> Result<Vec<usize>> {
    let n = family.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let start = family[0].anchor();
    let mut budget: u128 = 0;
    for size in (1..=n).rev() {
        budget = budget.saturating_add(binomial(n, size));
        guard("subfamilies", budget, ENUMERATION_GUARD)?;
        let subsets: Vec<Vec<usize>> = (0..n).combinations(size).collect();
        let found = subsets
            .par_iter()
            .map(|s| {
                let bodies: Vec<ConvexBody> = s.iter().map(|&i| family[i].clone()).collect();
                Ok((!distance_to_intersection(&start, &bodies, DykstraOptions::default())?.is_empty()).then(|| s.clone()))
            })
            .collect::<Result<Vec<Option<Vec<usize>>>>>()?
            .into_iter()
            .flatten()
            .next();
        if let Some(s) = found {
            return Ok(s);
        }
    }
    Ok(Vec::new())
}

/// Families of parallel hyperplanes plus whole-space copies in `R^(k-1)`.
///
/// Family `i` holds `m_i` hyperplanes `{u_i·x = j + 1}` (`j < m_i`) and
/// `n_i - m_i` whole-space copies, where `u_1..u_k` are the vertex directions
/// of a regular simplex. Since `sum u_i = 0`, a hyperplane-only transversal
/// would need its offsets to sum to zero, so it is empty; any `k - 1` of the
/// `u_i` are independent, so every other transversal intersects.
pub fn fractional_tight_family(n: &[usize], m: &[usize]) -> Result<Vec<Vec<ConvexBody>>> {
    let k = n.len();
    if k < 2 || m.len() != k || n.iter().zip(m).any(|(&ni, &mi)| mi > ni || ni == 0) {
        return Err(Error::InvalidArgument("need k >= 2 families with m_i <= n_i, n_i >= 1".into()));
    }
    let dirs = regular_simplex(k, 1.0)?;
    let c = dirs.centroid();
    let mut families = Vec::with_capacity(k);
    for i in 0..k {
        let u = dirs.point(i).sub(&c);
        let mut fam = Vec::with_capacity(n[i]);
        for j in 0..m[i] {
            fam.push(ConvexBody::hyperplane(u.clone(), (j + 1) as f64 * u.norm())?);
        }
        fam.extend(std::iter::repeat_n(ConvexBody::whole_space(k - 1), n[i] - m[i]));
        families.push(fam);
    }
    Ok(families)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn beta_closed_forms() {
        assert_eq!(fractional_beta(1.0, 3), 1.0);
        assert!((fractional_beta(0.75, 2) - 0.5).abs() < 1e-15);
        assert!((fractional_beta(0.3, 1) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn alpha_one_forces_a_full_witness() {
        let fam: Vec<ConvexBody> = (0..4)
            .map(|i| ConvexBody::ball(pt(&[0.2 * i as f64, 0.0]), 0.7).unwrap())
            .collect();
        let bf = BodyFamily::new(vec![fam.clone(), fam], pt(&[0.0, 0.0])).unwrap();
        let rep = fractional_helly_witness(&bf, FractionalMode::Colored, 0).unwrap();
        assert_eq!(rep.alpha, 1.0);
        assert_eq!(rep.beta_required, 1.0);
        assert!(rep.found);
        assert_eq!(rep.best.hits, 4);
    }

    #[test]
    fn single_family_k1_gives_beta_alpha() {
        let fam = vec![
            ConvexBody::ball(pt(&[0.5, 0.0]), 0.1).unwrap(),
            ConvexBody::ball(pt(&[0.0, 0.5]), 0.1).unwrap(),
            ConvexBody::ball(pt(&[5.0, 0.0]), 0.1).unwrap(),
            ConvexBody::ball(pt(&[0.0, 7.0]), 0.1).unwrap(),
        ];
        let bf = BodyFamily::new(vec![fam], pt(&[0.0, 0.0])).unwrap();
        let mode = FractionalMode::Single { k: 1, convention: TupleConvention::OrderedDistinct };
        let rep = fractional_helly_witness(&bf, mode, 0).unwrap();
        assert_eq!(rep.alpha, 0.5);
        assert!((rep.beta_required - 0.5).abs() < 1e-15);
        assert_eq!(rep.hits_required, vec![2]);
        assert!(rep.found);
    }

    #[test]
    fn both_tuple_conventions_are_emitted() {
        // Two far-apart groups: pairs within a group meet, pairs across do not.
        let fam = vec![
            ConvexBody::ball(pt(&[0.0]), 0.5).unwrap(),
            ConvexBody::ball(pt(&[0.1]), 0.5).unwrap(),
            ConvexBody::ball(pt(&[10.0]), 0.5).unwrap(),
        ];
        let bf = BodyFamily::new(vec![fam], pt(&[0.0])).unwrap();
        let mode = FractionalMode::Single { k: 2, convention: TupleConvention::WithRepetition };
        let rep = fractional_helly_witness(&bf, mode, 0).unwrap();
        // Distinct ordered pairs meeting B(0, 1): (0,1), (1,0) of 6.
        assert!((rep.alpha_distinct.unwrap() - 2.0 / 6.0).abs() < 1e-15);
        // With repetition: also (0,0), (1,1), of 9.
        assert!((rep.alpha_repetition.unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(rep.alpha, rep.alpha_repetition.unwrap());
    }

    #[test]
    fn tight_family_counts() {
        let fams = fractional_tight_family(&[4, 4, 4], &[2, 2, 2]).unwrap();
        let (hit, total) = count_intersecting_transversals(&fams).unwrap();
        assert_eq!(total, 64);
        assert_eq!(total - hit, 8);
        for fam in &fams {
            assert_eq!(largest_intersecting_subfamily(fam).unwrap().len(), 3);
        }
    }
}
