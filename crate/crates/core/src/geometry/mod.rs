//! Dimension-agnostic points, point sets and convex bodies.
//!
//! Everything here is immutable after construction. Point sets may contain
//! duplicates; they are treated as multisets throughout.

mod min_norm;
mod minimax;
mod projection;
mod simplex;
pub mod vector;

pub use min_norm::{min_norm_point, min_norm_point_rows, MinNormResult, MIN_NORM_MAX_ITER};
pub use minimax::{minimax_center, minimax_from, minimax_over, MinimaxConfig, MinimaxResult};
pub use projection::{
    distance_to_intersection, project_onto_body, project_onto_polyhedron, DykstraOptions, IntersectionDistance,
    Polyhedron,
};
pub use simplex::regular_simplex;

use crate::error::{Error, Result};
use vector as v;

/// Radius used to stand in for the whole ambient space.
pub const WHOLE_SPACE_RADIUS: f64 = 1e9;

/// A point in d-dimensional Euclidean space with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Point(coords))
    }

    /// Wraps coordinates produced by internal arithmetic on finite inputs.
    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        v::norm(&self.0)
    }

    pub fn dist(&self, other: &Point) -> f64 {
        v::dist(&self.0, &other.0)
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(v::sub(&self.0, &other.0))
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(v::add(&self.0, &other.0))
    }

    pub fn scale(&self, s: f64) -> Point {
        Point(self.0.iter().map(|c| c * s).collect())
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Maximum pairwise Euclidean distance; 0 for a singleton.
pub fn diameter(points: &[Point]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut best2 = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best2 = best2.max(v::dist2(p.coords(), q.coords()));
        }
    }
    Ok(best2.sqrt())
}

/// Coordinate-wise mean.
pub fn centroid(points: &[Point]) -> Result<Point> {
    let first = points.first().ok_or(Error::EmptyPointSet)?;
    let mut acc = vec![0.0; first.dim()];
    for p in points {
        v::axpy(1.0, p.coords(), &mut acc);
    }
    let inv = 1.0 / points.len() as f64;
    acc.iter_mut().for_each(|c| *c *= inv);
    Ok(Point(acc))
}

/// A nonempty finite multiset of points of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    cached_diameter: Option<f64>,
    cached_centroid: Option<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let dim = points.first().ok_or(Error::EmptyPointSet)?.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(PointSet {
            points,
            cached_diameter: None,
            cached_centroid: None,
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows.into_iter().map(Point::new).collect::<Result<_>>()?)
    }

    /// Computes and stores the diameter and centroid.
    pub fn with_cache(mut self) -> Self {
        self.cached_diameter = Some(self.compute_diameter());
        self.cached_centroid = Some(self.compute_centroid());
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn rows(&self) -> Vec<&[f64]> {
        self.points.iter().map(|p| p.coords()).collect()
    }

    pub fn cached_diameter(&self) -> Option<f64> {
        self.cached_diameter
    }

    pub fn cached_centroid(&self) -> Option<&Point> {
        self.cached_centroid.as_ref()
    }

    pub fn diameter(&self) -> f64 {
        self.cached_diameter
            .unwrap_or_else(|| self.compute_diameter())
    }

    pub fn centroid(&self) -> Point {
        self.cached_centroid
            .clone()
            .unwrap_or_else(|| self.compute_centroid())
    }

    /// Subset by index (duplicates allowed).
    pub fn select(&self, indices: &[usize]) -> Result<PointSet> {
        PointSet::new(indices.iter().map(|&i| self.points[i].clone()).collect())
    }

    fn compute_diameter(&self) -> f64 {
        diameter(&self.points).expect("nonempty by construction")
    }

    fn compute_centroid(&self) -> Point {
        centroid(&self.points).expect("nonempty by construction")
    }
}

/// Closed convex bodies with a cheap Euclidean projection.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexBody {
    HullOfPoints(PointSet),
    Ball { center: Point, radius: f64 },
    /// `{x : normal·x <= offset}` with a unit normal.
    Halfspace { normal: Point, offset: f64 },
    /// `{x : normal·x == offset}` with a unit normal.
    Hyperplane { normal: Point, offset: f64 },
}

impl ConvexBody {
    pub fn hull(points: PointSet) -> Self {
        ConvexBody::HullOfPoints(points)
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("ball radius {radius}")));
        }
        Ok(ConvexBody::Ball { center, radius })
    }

    /// Normalizes `normal` (and scales `offset` with it).
    pub fn halfspace(normal: Point, offset: f64) -> Result<Self> {
        let (normal, offset) = unit_normal(normal, offset)?;
        Ok(ConvexBody::Halfspace { normal, offset })
    }

    pub fn hyperplane(normal: Point, offset: f64) -> Result<Self> {
        let (normal, offset) = unit_normal(normal, offset)?;
        Ok(ConvexBody::Hyperplane { normal, offset })
    }

    pub fn whole_space(dim: usize) -> Self {
        ConvexBody::Ball {
            center: Point::origin(dim),
            radius: WHOLE_SPACE_RADIUS,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::HullOfPoints(p) => p.dim(),
            ConvexBody::Ball { center, .. } => center.dim(),
            ConvexBody::Halfspace { normal, .. } | ConvexBody::Hyperplane { normal, .. } => {
                normal.dim()
            }
        }
    }

    /// Some point of the body.
    pub fn anchor(&self) -> Point {
        match self {
            ConvexBody::HullOfPoints(p) => p.centroid(),
            ConvexBody::Ball { center, .. } => center.clone(),
            ConvexBody::Halfspace { normal, offset } | ConvexBody::Hyperplane { normal, offset } => {
                normal.scale(*offset)
            }
        }
    }

    /// Membership up to `tol` (hulls are tested through their projection).
    pub fn contains(&self, q: &Point, tol: f64) -> Result<bool> {
        Ok(match self {
            ConvexBody::Ball { center, radius } => q.dist(center) <= radius + tol,
            ConvexBody::Halfspace { normal, offset } => v::dot(normal.coords(), q.coords()) <= offset + tol,
            ConvexBody::Hyperplane { normal, offset } => {
                (v::dot(normal.coords(), q.coords()) - offset).abs() <= tol
            }
            ConvexBody::HullOfPoints(_) => {
                let p = project_onto_body(q, self, 1e-14)?;
                p.dist(q) <= tol
            }
        })
    }
}

fn unit_normal(normal: Point, offset: f64) -> Result<(Point, f64)> {
    let n = normal.norm();
    if !(n > 0.0) || !offset.is_finite() {
        return Err(Error::InvalidArgument("degenerate halfspace normal".into()));
    }
    Ok((normal.scale(1.0 / n), offset / n))
}

/// A closed convex set that can report the nearest point to a query.
///
/// The minimax solver works over any list of projectors, which lets the
/// simplex lab reuse it for affine flats and polyhedral cones.
pub trait Projector: Send + Sync {
    fn dim(&self) -> usize;
    fn project(&self, q: &[f64]) -> Result<Vec<f64>>;
    fn anchor(&self) -> Vec<f64>;
}

/// Hull tolerance used when a body is projected through the [`Projector`] trait.
pub const PROJECTOR_HULL_TOL: f64 = 1e-14;

impl Projector for ConvexBody {
    fn dim(&self) -> usize {
        ConvexBody::dim(self)
    }

    fn project(&self, q: &[f64]) -> Result<Vec<f64>> {
        projection::project_slice(q, self, PROJECTOR_HULL_TOL)
    }

    fn anchor(&self) -> Vec<f64> {
        ConvexBody::anchor(self).into_vec()
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn unit_square_diameter() {
        let sq = ps(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        assert!((sq.diameter() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn singleton_diameter_is_zero() {
        assert_eq!(ps(&[&[3.0, -1.0]]).diameter(), 0.0);
    }

    #[test]
    fn empty_inputs_are_rejected() {
        assert_eq!(diameter(&[]), Err(Error::EmptyPointSet));
        assert_eq!(centroid(&[]), Err(Error::EmptyPointSet));
        assert_eq!(PointSet::new(vec![]), Err(Error::EmptyPointSet));
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(ps(&[&[0.0, 0.0], &[2.0, 0.0]]).centroid().coords(), &[1.0, 0.0]);
        let c = ps(&[&[1.0, 1.0], &[3.0, 5.0], &[2.0, 0.0]]).centroid();
        assert!((c.coords()[0] - 2.0).abs() < 1e-15 && (c.coords()[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cache_matches_recomputation() {
        let s = ps(&[&[0.0, 1.0], &[2.0, 3.0], &[-1.0, 0.5]]).with_cache();
        assert_eq!(s.cached_diameter(), Some(s.compute_diameter()));
        assert_eq!(s.cached_centroid(), Some(&s.compute_centroid()));
    }

    #[test]
    fn rejects_non_finite_and_mixed_dimensions() {
        assert_eq!(Point::new(vec![0.0, f64::NAN]), Err(Error::NonFinite { index: 1 }));
        let err = PointSet::from_rows(vec![vec![0.0], vec![0.0, 1.0]]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 1, found: 2 });
    }

    #[test]
    fn halfspace_normal_is_normalized() {
        let h = ConvexBody::halfspace(Point::new(vec![0.0, 2.0]).unwrap(), 2.0).unwrap();
        match h {
            ConvexBody::Halfspace { normal, offset } => {
                assert_eq!(normal.coords(), &[0.0, 1.0]);
                assert_eq!(offset, 1.0);
            }
            _ => unreachable!(),
        }
        assert!(ConvexBody::halfspace(Point::origin(2), 1.0).is_err());
        assert!(ConvexBody::ball(Point::origin(2), -1.0).is_err());
    }
}
