use super::PointSet;
use crate::error::{Error, Result};

/// Vertices of a regular simplex with `n` vertices, centered at the origin.
///
/// Points live in dimension `n - 1`: coordinate `j` of vertex `i` is the
/// `i`-th entry of the Helmert vector `(1, .., 1, -j, 0, ..) / sqrt(j (j + 1))`,
/// scaled so that adjacent vertices are `edge` apart.
pub fn regular_simplex(n: usize, edge: f64) -> Result<PointSet> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("regular simplex needs n >= 2, got {n}")));
    }
    if !(edge > 0.0) || !edge.is_finite() {
        return Err(Error::InvalidArgument(format!("edge length {edge}")));
    }
    let scale = edge / 2f64.sqrt();
    let rows = (0..n)
        .map(|i| {
            (1..n)
                .map(|j| {
                    let norm = ((j * (j + 1)) as f64).sqrt();
                    let entry = match i.cmp(&j) {
                        std::cmp::Ordering::Less => 1.0,
                        std::cmp::Ordering::Equal => -(j as f64),
                        std::cmp::Ordering::Greater => 0.0,
                    };
                    scale * entry / norm
                })
                .collect()
        })
        .collect();
    PointSet::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_distances_and_centroid() {
        for n in 2..=9 {
            let s = regular_simplex(n, 1.0).unwrap();
            assert_eq!(s.len(), n);
            assert_eq!(s.dim(), n - 1);
            for i in 0..n {
                for j in i + 1..n {
                    assert!((s.point(i).dist(s.point(j)) - 1.0).abs() < 1e-12);
                }
            }
            assert!(s.centroid().norm() < 1e-12);
            assert!((s.diameter() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_circumradius_is_twice_inradius() {
        let s = regular_simplex(3, 2.0).unwrap();
        let circ = s.point(0).norm();
        let mid = s.point(1).add(s.point(2)).scale(0.5);
        assert!((circ / mid.norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_small_n() {
        assert!(regular_simplex(1, 1.0).is_err());
        assert!(regular_simplex(3, 0.0).is_err());
    }
}
