//! Exhaustive counting of far transversals and the hyperplane tight family.
//!
//! The hypothesis "every point p sees at least m_i bodies of F_i farther than
//! rho_i" cannot be checked over all of space. We estimate m_i as a minimum
//! over a probe set that contains every point the induction actually queries:
//! the nearest point to `q` of `K(S)` for each transversal `S` of the earlier
//! families. With that probe set `far >= prod m_i` is a theorem, so the
//! estimate can only make the check stricter than necessary, never looser.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ball_sample, subset_distance, BodyFamily, ENUMERATION_GUARD};
use crate::combinatorics::guard;
use crate::error::{Error, Result};
use crate::geometry::{vector as v, ConvexBody, DykstraOptions, IntersectionDistance, Point, Projector};

/// Random samples from `B(b, 1)` added to the probe set.
pub const RANDOM_PROBES: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct CountingReport {
    pub total_transversals: u128,
    /// Transversals with `d(q, K(T)) > rho`, empty intersections included.
    pub far_transversals: u128,
    pub empty_transversals: u128,
    /// Transversals whose intersection solver gave no verdict; counted in neither class.
    pub undecided: u128,
    /// `prod per_family_m`.
    pub product_bound: u128,
    /// `sqrt(sum rho_i^2)`.
    pub rho: f64,
    /// Probe-set estimates of `min_p #{K in F_i : d(p, K) > rho_i}`.
    pub per_family_m: Vec<usize>,
    pub probes: Vec<usize>,
}

/// Mixed-radix decoding of a transversal index, last family fastest.
fn decode(mut idx: u128, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for (slot, &s) in out.iter_mut().zip(sizes).rev() {
        *slot = (idx % s as u128) as usize;
        idx /= s as u128;
    }
    out
}

fn far_count(p: &[f64], family: &[ConvexBody], rho: f64) -> Result<usize> {
    let mut c = 0;
    for body in family {
        if v::dist(&body.project(p)?, p) > rho {
            c += 1;
        }
    }
    Ok(c)
}

/// Counts transversals of `bf` whose intersection is farther than
/// `rho = |rhos|` from `q`, and estimates the per-family `m_i`.
pub fn count_far_transversals(
    bf: &BodyFamily,
    q: &Point,
    rhos: &[f64],
    opts: DykstraOptions,
    seed: u64,
) -> Result<CountingReport> {
    let k = bf.k();
    crate::geometry::check_dim(bf.dim(), q.dim())?;
    if rhos.len() != k || rhos.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
        return Err(Error::InvalidArgument(format!("need {k} nonnegative radii")));
    }
    let total = bf.transversal_count();
    guard("transversals", total, ENUMERATION_GUARD)?;
    let sizes = bf.sizes();
    let fams = bf.families();

    // Level i holds d(q, K(S)) for every transversal S of F_1..F_i.
    let mut prefix_points: Vec<Vec<f64>> = Vec::new();
    let mut per_family_m = Vec::with_capacity(k);
    let mut probes = Vec::with_capacity(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shared: Vec<Vec<f64>> = vec![q.coords().to_vec()];
    for body in fams.iter().flatten() {
        shared.push(body.project(q.coords())?);
    }
    for _ in 0..RANDOM_PROBES {
        shared.push(ball_sample(&mut rng, bf.anchor().coords()));
    }

    let mut report = None;
    for level in 0..k {
        let probe_set: Vec<&Vec<f64>> = shared.iter().chain(&prefix_points).collect();
        let m = probe_set
            .par_iter()
            .map(|p| far_count(p, &fams[level], rhos[level]))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .unwrap_or(0);
        per_family_m.push(m);
        probes.push(probe_set.len());

        let sizes_here = &sizes[..=level];
        let count: u128 = sizes_here.iter().map(|&s| s as u128).product();
        let results: Vec<Option<IntersectionDistance>> = (0..count)
            .into_par_iter()
            .map(|idx| {
                let pick = decode(idx, sizes_here);
                let bodies: Vec<&ConvexBody> = pick.iter().enumerate().map(|(i, &j)| &fams[i][j]).collect();
                match subset_distance(q, &bodies, &pick, opts) {
                    Ok(d) => Ok(Some(d)),
                    Err(Error::UndecidedSubset { .. }) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?;
        if level + 1 < k {
            prefix_points = results
                .iter()
                .filter_map(|r| match r {
                    Some(IntersectionDistance::Distance { point, .. }) => Some(point.coords().to_vec()),
                    _ => None,
                })
                .collect();
        } else {
            let rho = rhos.iter().map(|r| r * r).sum::<f64>().sqrt();
            let mut far = 0u128;
            let mut empty = 0u128;
            let mut und = 0u128;
            for r in &results {
                match r {
                    None => und += 1,
                    Some(d) if d.is_empty() => {
                        empty += 1;
                        far += 1;
                    }
                    Some(d) if d.value() > rho => far += 1,
                    Some(_) => {}
                }
            }
            report = Some(CountingReport {
                total_transversals: total,
                far_transversals: far,
                empty_transversals: empty,
                undecided: und,
                product_bound: per_family_m.iter().map(|&m| m as u128).product(),
                rho,
                per_family_m: per_family_m.clone(),
                probes: probes.clone(),
            });
        }
    }
    Ok(report.expect("k >= 1"))
}

/// How the `m_i` hyperplanes of family `i` are placed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HyperplaneSplit {
    /// `m_i` hyperplanes in total, alternating `x_i = r_i`, `x_i = -r_i`.
    /// Seen from the origin every one of them is far, so exactly `prod m_i`
    /// transversals are far.
    #[default]
    Alternating,
    /// `m_i` copies of each of `x_i = r_i` and `x_i = -r_i`. Every point sees at
    /// least `m_i` of them far, and the origin sees `prod 2 m_i` far transversals.
    Paired,
}

/// Hyperplane family in `R^k`: family `i` holds hyperplanes `x_i = +-r_i`
/// plus `whole` copies of the whole space, with `r_i` just above `rho_i`.
///
/// `r_i = rho_i (1 + tau)` where `tau` is small enough that any transversal
/// containing a whole-space copy stays within `rho` of the origin.
pub fn hyperplane_family(
    m: &[usize],
    rhos: &[f64],
    whole: usize,
    split: HyperplaneSplit,
) -> Result<BodyFamily> {
    let k = m.len();
    if k == 0 || rhos.len() != k || rhos.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidArgument("need one positive radius per family".into()));
    }
    let rho2: f64 = rhos.iter().map(|r| r * r).sum();
    let min2 = rhos.iter().map(|r| r * r).fold(f64::INFINITY, f64::min);
    // (1 + tau)^2 (rho^2 - min rho_i^2) < rho^2 with a wide margin.
    let room = (rho2 / (rho2 - min2)).sqrt() - 1.0;
    let tau = if room.is_finite() { (0.25 * room).min(1e-3) } else { 1e-3 };
    let mut families = Vec::with_capacity(k);
    for i in 0..k {
        let r = rhos[i] * (1.0 + tau);
        let mut e = vec![0.0; k];
        e[i] = 1.0;
        let e = Point::new(e)?;
        let mut fam = Vec::new();
        let planes = match split {
            HyperplaneSplit::Alternating => m[i],
            HyperplaneSplit::Paired => 2 * m[i],
        };
        for j in 0..planes {
            let sign = match split {
                HyperplaneSplit::Alternating => if j % 2 == 0 { 1.0 } else { -1.0 },
                HyperplaneSplit::Paired => if j < m[i] { 1.0 } else { -1.0 },
            };
            fam.push(ConvexBody::hyperplane(e.clone(), sign * r)?);
        }
        fam.extend(std::iter::repeat_n(ConvexBody::whole_space(k), whole));
        families.push(fam);
    }
    BodyFamily::new(families, Point::origin(k))
}
