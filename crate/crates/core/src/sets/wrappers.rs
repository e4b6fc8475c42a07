use std::sync::Arc;

use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;

use super::{BoundaryClass, Capabilities, ClosedSet};
use crate::error::{Error, Result};
use crate::geometry::{nearest_candidate, Point, UnitVector, Window};
use crate::sampling;

/// Finite union of closed sets. Distance is the minimum over the parts.
#[derive(Clone, Debug)]
pub struct Union {
    dim: usize,
    parts: Vec<Arc<dyn ClosedSet>>,
}

impl Union {
    pub fn new(parts: Vec<Arc<dyn ClosedSet>>) -> Result<Self> {
        let dim = parts.first().ok_or_else(|| Error::InvalidArgument("empty union".into()))?.dimension();
        if let Some(p) = parts.iter().find(|p| p.dimension() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dimension() });
        }
        Ok(Union { dim, parts })
    }

    pub fn parts(&self) -> &[Arc<dyn ClosedSet>] {
        &self.parts
    }
}

impl ClosedSet for Union {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn capabilities(&self) -> Capabilities {
        let all = |f: fn(&Capabilities) -> bool| self.parts.iter().all(|p| f(&p.capabilities()));
        Capabilities {
            exact_projection: all(|c| c.exact_projection),
            analytic_normals: false,
            interior_membership: false,
            closure_of_interior_available: false,
        }
    }

    fn is_empty(&self) -> bool {
        self.parts.iter().all(|p| p.is_empty())
    }

    fn contains(&self, p: &Point) -> bool {
        self.parts.iter().any(|s| s.contains(p))
    }

    fn project(&self, p: &Point) -> Option<Point> {
        nearest_candidate(p, self.parts.iter().filter_map(|s| s.project(p)))
    }

    fn sample_boundary(&self, budget: usize, rng: &mut ChaCha8Rng, window: &Window) -> Option<Vec<Point>> {
        let counts = sampling::allocate(budget, &vec![1.0; self.parts.len()]);
        let mut out = Vec::new();
        for (i, (part, count)) in self.parts.iter().zip(counts).enumerate() {
            let pts = part.sample_boundary(count, rng, window)?;
            out.extend(pts.into_iter().filter(|q| {
                self.parts
                    .iter()
                    .enumerate()
                    .all(|(j, other)| j == i || other.interior_contains(q) != Some(true))
            }));
        }
        Some(out)
    }
}

/// Forwards membership and projection only, hiding every analytic extra.
/// Generic code paths (searched normals, probed interiors, rejection
/// sampling) run against it.
#[derive(Clone, Debug)]
pub struct Opaque {
    inner: Arc<dyn ClosedSet>,
}

impl Opaque {
    pub fn new(inner: Arc<dyn ClosedSet>) -> Self {
        Opaque { inner }
    }
}

impl ClosedSet for Opaque {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { exact_projection: self.inner.capabilities().exact_projection, ..Capabilities::default() }
    }

    fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    fn contains(&self, p: &Point) -> bool {
        self.inner.contains(p)
    }

    fn project(&self, p: &Point) -> Option<Point> {
        self.inner.project(p)
    }
}

/// Image of a set under the rigid motion `p -> R p + t`.
#[derive(Clone, Debug)]
pub struct Transformed {
    inner: Arc<dyn ClosedSet>,
    rotation: DMatrix<f64>,
    shift: Point,
}

impl Transformed {
    /// `rotation` must be orthogonal (checked to 1e-9).
    pub fn new(inner: Arc<dyn ClosedSet>, rotation: DMatrix<f64>, shift: Point) -> Result<Self> {
        let n = inner.dimension();
        if rotation.nrows() != n || rotation.ncols() != n || shift.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: shift.len() });
        }
        let err = (rotation.transpose() * &rotation - DMatrix::identity(n, n)).amax();
        if err > 1e-9 {
            return Err(Error::InvalidArgument("rotation matrix is not orthogonal".into()));
        }
        Ok(Transformed { inner, rotation, shift })
    }

    /// Planar rotation by `angle` followed by translation.
    pub fn planar(inner: Arc<dyn ClosedSet>, angle: f64, shift: [f64; 2]) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        Self::new(inner, rot, Point::from_vec(shift.to_vec()))
    }

    fn forward(&self, p: &Point) -> Point {
        &self.rotation * p + &self.shift
    }

    fn back(&self, p: &Point) -> Point {
        self.rotation.transpose() * (p - &self.shift)
    }

    fn wrap(&self, inner: Arc<dyn ClosedSet>) -> Arc<dyn ClosedSet> {
        Arc::new(Transformed { inner, rotation: self.rotation.clone(), shift: self.shift.clone() })
    }
}

impl ClosedSet for Transformed {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn capabilities(&self) -> Capabilities {
        self.inner.capabilities()
    }

    fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    fn contains(&self, p: &Point) -> bool {
        self.inner.contains(&self.back(p))
    }

    fn project(&self, p: &Point) -> Option<Point> {
        self.inner.project(&self.back(p)).map(|q| self.forward(&q))
    }

    fn interior_contains(&self, p: &Point) -> Option<bool> {
        self.inner.interior_contains(&self.back(p))
    }

    fn interior_point_near(&self, p: &Point, eps: f64) -> Option<Point> {
        self.inner.interior_point_near(&self.back(p), eps).map(|q| self.forward(&q))
    }

    fn normals(&self, x: &Point) -> Option<Vec<UnitVector>> {
        let ns = self.inner.normals(&self.back(x))?;
        Some(ns.into_iter().filter_map(|n| UnitVector::new(&self.rotation * n.as_point()).ok()).collect())
    }

    fn boundary_class(&self, x: &Point) -> Option<BoundaryClass> {
        self.inner.boundary_class(&self.back(x))
    }

    fn sample_boundary(&self, budget: usize, rng: &mut ChaCha8Rng, window: &Window) -> Option<Vec<Point>> {
        let inner_window = window.transformed(&self.rotation.transpose(), &(-(self.rotation.transpose() * &self.shift)));
        let pts = self.inner.sample_boundary(budget, rng, &inner_window)?;
        Some(pts.iter().map(|q| self.forward(q)).collect())
    }

    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        self.inner.closure_of_interior().map(|s| self.wrap(s))
    }

    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        self.inner.thin_part().map(|s| self.wrap(s))
    }

    fn is_regular_closed(&self) -> Option<bool> {
        self.inner.is_regular_closed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use crate::sets::{ClosedBall, Segment};

    #[test]
    fn union_projects_to_nearest_part() {
        let u = Union::new(vec![
            Arc::new(ClosedBall::unit_disk()),
            Arc::new(Segment::new(point(&[2.0, 0.0]), point(&[3.0, 0.0])).unwrap()),
        ])
        .unwrap();
        assert_eq!(u.project(&point(&[2.5, 0.4])).unwrap(), point(&[2.5, 0.0]));
        assert!(u.contains(&point(&[0.0, 0.5])));
        assert!(!u.capabilities().analytic_normals);
    }

    #[test]
    fn transformed_disk_moves_with_the_motion() {
        let t = Transformed::planar(Arc::new(ClosedBall::unit_disk()), 0.7, [3.0, -1.0]).unwrap();
        let q = t.project(&point(&[6.0, -1.0])).unwrap();
        assert!((q - point(&[4.0, -1.0])).norm() < 1e-12);
        let ns = t.normals(&point(&[4.0, -1.0])).unwrap();
        assert!((ns[0][0] - 1.0).abs() < 1e-12);
    }
}
