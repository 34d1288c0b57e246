//! The simplex inequality: a ball meeting every k-vertex face of a simplex
//! (its affine span, or its outer cone) has radius at least `lambda_n r`.
//!
//! Computations run in local coordinates of the simplex's affine hull, where
//! the simplex is full-dimensional; components orthogonal to the hull only
//! increase every distance.

use itertools::Itertools;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, guard};
use crate::error::{Error, Result};
use crate::geometry::{
    minimax_from, vector as v, Polyhedron, MinimaxConfig, Point, PointSet, Projector,
};

/// Normalized Gram determinant below which vertices count as affinely dependent.
pub const GRAM_TOL: f64 = 1e-10;
/// Face guard for the minimax problem.
pub const FACE_GUARD: u128 = 100_000;

/// `lambda_n = sqrt((n - 1)(n - k) / k)` for `1 <= k <= n - 1`.
pub fn simplex_lambda(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k + 1 > n {
        return Err(Error::InvalidArgument(format!("lambda needs 1 <= k <= n - 1, got n={n}, k={k}")));
    }
    Ok((((n - 1) * (n - k)) as f64 / k as f64).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceMode {
    /// Distance to the affine span of the face.
    Affine,
    /// Distance to the outer cone of the face: the intersection of the outer
    /// facet halfspaces of all facets containing it.
    Cone,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceBall {
    pub mode: FaceMode,
    /// In the coordinates of the input vertices.
    pub center: Point,
    pub radius: f64,
    pub inradius: f64,
    /// `radius / inradius`.
    pub ratio: f64,
    pub lambda: f64,
    pub accuracy: f64,
}

/// Orthonormal basis of the span of `cols` (all of the same length), via QR.
fn orthonormal_basis(cols: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    if cols.is_empty() {
        return Vec::new();
    }
    let m = DMatrix::from_fn(dim, cols.len(), |i, j| cols[j][i]);
    let q = m.qr().q();
    (0..cols.len()).map(|j| q.column(j).iter().copied().collect()).collect()
}

/// An affine flat `origin + span(basis)` with an orthonormal basis.
struct Flat {
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

impl Flat {
    fn through(points: &[&[f64]]) -> Flat {
        let origin = points[0].to_vec();
        let cols: Vec<Vec<f64>> = points[1..].iter().map(|p| v::sub(p, &origin)).collect();
        Flat {
            basis: orthonormal_basis(&cols, origin.len()),
            origin,
        }
    }
}

impl Projector for Flat {
    fn dim(&self) -> usize {
        self.origin.len()
    }

    fn project(&self, q: &[f64]) -> Result<Vec<f64>> {
        let rel = v::sub(q, &self.origin);
        let mut out = self.origin.clone();
        for b in &self.basis {
            v::axpy(v::dot(b, &rel), b, &mut out);
        }
        Ok(out)
    }

    fn anchor(&self) -> Vec<f64> {
        self.origin.clone()
    }
}

/// `{x : a_i·x <= c_i}` over a few constraints, projected exactly.
struct Cone {
    sides: Polyhedron,
    apex: Vec<f64>,
}

impl Projector for Cone {
    fn dim(&self) -> usize {
        self.apex.len()
    }

    fn project(&self, q: &[f64]) -> Result<Vec<f64>> {
        self.sides
            .project(q)
            .ok_or_else(|| Error::InvalidArgument("outer cone reported empty".into()))
    }

    fn anchor(&self) -> Vec<f64> {
        self.apex.clone()
    }
}

/// The simplex in local coordinates of its affine hull.
struct LocalSimplex {
    base: Vec<f64>,
    /// Orthonormal basis of the edge space, in input coordinates.
    frame: Vec<Vec<f64>>,
    verts: Vec<Vec<f64>>,
}

impl LocalSimplex {
    fn new(vertices: &PointSet) -> Result<LocalSimplex> {
        let n = vertices.len();
        if n < 2 {
            return Err(Error::InvalidArgument("a simplex needs at least 2 vertices".into()));
        }
        let rows = vertices.rows();
        let base = rows[0].to_vec();
        let edges: Vec<Vec<f64>> = rows[1..].iter().map(|p| v::sub(p, &base)).collect();
        let scale = vertices.diameter();
        if edges.len() > vertices.dim() || !(scale > 0.0) {
            return Err(Error::DegenerateSimplex(0.0));
        }
        let gram = DMatrix::from_fn(n - 1, n - 1, |i, j| v::dot(&edges[i], &edges[j]) / (scale * scale));
        let det = gram.determinant();
        if !(det > GRAM_TOL) {
            return Err(Error::DegenerateSimplex(det));
        }
        let frame = orthonormal_basis(&edges, vertices.dim());
        let verts = rows
            .iter()
            .map(|p| {
                let rel = v::sub(p, &base);
                frame.iter().map(|f| v::dot(f, &rel)).collect()
            })
            .collect();
        Ok(LocalSimplex { base, frame, verts })
    }

    fn lift(&self, y: &[f64]) -> Vec<f64> {
        let mut out = self.base.clone();
        for (f, yi) in self.frame.iter().zip(y) {
            v::axpy(*yi, f, &mut out);
        }
        out
    }

    fn rows_except(&self, skip: usize) -> Vec<&[f64]> {
        self.verts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != skip)
            .map(|(_, p)| p.as_slice())
            .collect()
    }

    /// Inward unit normal `u_i` of the facet opposite vertex `i`, its offset
    /// `c_i = u_i·p_j` (`j != i`) and the height `h_i` of vertex `i`.
    fn facet(&self, i: usize) -> Result<(Vec<f64>, f64, f64)> {
        let rows = self.rows_except(i);
        let foot = Flat::through(&rows).project(&self.verts[i])?;
        let up = v::sub(&self.verts[i], &foot);
        let h = v::norm(&up);
        let u = v::scaled(&up, 1.0 / h);
        let c = v::dot(&u, rows[0]);
        Ok((u, c, h))
    }
}

/// Incenter and inradius from the facet heights.
///
/// The volume identity `r sum T_i = h_j T_j` gives `T_j ∝ 1/h_j`, so
/// `r = 1 / sum_j (1/h_j)` and the incenter is `sum (p_j/h_j) / sum (1/h_j)`.
pub fn incenter_and_inradius(vertices: &PointSet) -> Result<(Point, f64)> {
    let s = LocalSimplex::new(vertices)?;
    let (c, r) = local_incenter(&s)?;
    Ok((Point::from_vec(s.lift(&c)), r))
}

fn local_incenter(s: &LocalSimplex) -> Result<(Vec<f64>, f64)> {
    let n = s.verts.len();
    let mut inv = Vec::with_capacity(n);
    for i in 0..n {
        inv.push(1.0 / s.facet(i)?.2);
    }
    let total: f64 = inv.iter().sum();
    let rows: Vec<&[f64]> = s.verts.iter().map(|p| p.as_slice()).collect();
    let w: Vec<f64> = inv.iter().map(|x| x / total).collect();
    Ok((v::combine(&rows, &w), 1.0 / total))
}

/// Smallest ball meeting every face with `k` vertices, in the chosen mode.
///
/// Starts the minimax solver at the incenter and the centroid.
pub fn min_ball_meeting_faces(
    vertices: &PointSet,
    k: usize,
    mode: FaceMode,
    cfg: &MinimaxConfig,
) -> Result<FaceBall> {
    let n = vertices.len();
    let lambda = simplex_lambda(n, k)?;
    guard("faces", binomial(n, k), FACE_GUARD)?;
    let s = LocalSimplex::new(vertices)?;
    let (incenter, inradius) = local_incenter(&s)?;
    let facets = (0..n).map(|i| s.facet(i)).collect::<Result<Vec<_>>>()?;

    let mut bodies: Vec<Box<dyn Projector>> = Vec::new();
    for face in (0..n).combinations(k) {
        match mode {
            FaceMode::Affine => {
                let rows: Vec<&[f64]> = face.iter().map(|&j| s.verts[j].as_slice()).collect();
                bodies.push(Box::new(Flat::through(&rows)));
            }
            FaceMode::Cone => {
                // Facets containing the face are those opposite the other vertices;
                // the outer side of facet i is u_i·x <= c_i.
                let others: Vec<usize> = (0..n).filter(|i| !face.contains(i)).collect();
                bodies.push(Box::new(Cone {
                    sides: Polyhedron::new(
                        others.iter().map(|&i| facets[i].0.clone()).collect(),
                        others.iter().map(|&i| facets[i].1).collect(),
                    ),
                    apex: s.verts[face[0]].clone(),
                }));
            }
        }
    }
    let refs: Vec<&dyn Projector> = bodies.iter().map(|b| b.as_ref()).collect();
    let centroid: Vec<f64> = {
        let rows: Vec<&[f64]> = s.verts.iter().map(|p| p.as_slice()).collect();
        v::combine(&rows, &vec![1.0 / n as f64; n])
    };
    let res = minimax_from(&refs, &[incenter, centroid], cfg)?;
    Ok(FaceBall {
        mode,
        center: Point::from_vec(s.lift(res.center.coords())),
        radius: res.radius,
        inradius,
        ratio: res.radius / inradius,
        lambda,
        accuracy: res.accuracy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::regular_simplex;

    #[test]
    fn lambda_closed_forms() {
        assert_eq!(simplex_lambda(3, 1).unwrap(), 2.0);
        assert!((simplex_lambda(4, 2).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        for n in 2..10 {
            assert!((simplex_lambda(n, n - 1).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!(simplex_lambda(4, 4).is_err());
        assert!(simplex_lambda(4, 0).is_err());
    }

    #[test]
    fn inradius_of_regular_simplex() {
        // Circumradius of the unit-edge regular simplex is sqrt((n-1)/(2n)); inradius is that / (n-1).
        for n in 2..8 {
            let s = regular_simplex(n, 1.0).unwrap();
            let (c, r) = incenter_and_inradius(&s).unwrap();
            let expected = ((n - 1) as f64 / (2 * n) as f64).sqrt() / (n - 1) as f64;
            assert!((r - expected).abs() < 1e-12, "n={n}");
            assert!(c.norm() < 1e-12);
        }
    }

    #[test]
    fn right_triangle_inradius() {
        let s = PointSet::from_rows(vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let (c, r) = incenter_and_inradius(&s).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        assert!(c.dist(&Point::new(vec![1.0, 1.0]).unwrap()) < 1e-12);
    }

    #[test]
    fn degenerate_simplex_is_rejected() {
        let s = PointSet::from_rows(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert!(matches!(incenter_and_inradius(&s), Err(Error::DegenerateSimplex(_))));
    }

    #[test]
    fn regular_simplex_attains_lambda() {
        let cfg = MinimaxConfig::default();
        for n in 3..=5 {
            let s = regular_simplex(n, 1.0).unwrap();
            for k in 1..n {
                for mode in [FaceMode::Affine, FaceMode::Cone] {
                    let fb = min_ball_meeting_faces(&s, k, mode, &cfg).unwrap();
                    assert!((fb.ratio - fb.lambda).abs() < 1e-5, "n={n} k={k} {mode:?}: {} vs {}", fb.ratio, fb.lambda);
                }
            }
        }
    }

    #[test]
    fn embedded_simplex_matches_local_one() {
        // The same triangle placed in R^4 gives the same ball.
        let flat = PointSet::from_rows(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.5, 1.5]]).unwrap();
        let lifted = PointSet::from_rows(vec![
            vec![1.0, 0.0, 0.0, 1.0],
            vec![1.0, 2.0, 0.0, 1.0],
            vec![1.0, 0.5, 1.5, 1.0],
        ])
        .unwrap();
        let cfg = MinimaxConfig::default();
        let a = min_ball_meeting_faces(&flat, 1, FaceMode::Affine, &cfg).unwrap();
        let b = min_ball_meeting_faces(&lifted, 1, FaceMode::Affine, &cfg).unwrap();
        assert!((a.radius - b.radius).abs() < 1e-7);
        assert!((a.inradius - b.inradius).abs() < 1e-12);
    }
}
