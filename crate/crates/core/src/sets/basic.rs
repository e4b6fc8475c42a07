use std::sync::Arc;

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{complement_generators, sample_pieces, slack, BoundaryClass, Capabilities, ClosedSet, Piece, FEATURE_TOL};
use crate::error::{Error, Result};
use crate::geometry::{Point, UnitVector, Window};
use crate::sampling;

fn check_point(p: &Point, what: &str) -> Result<()> {
    if p.is_empty() || !crate::geometry::is_finite(p) {
        return Err(Error::InvalidArgument(format!("{what} must be a finite, nonempty vector")));
    }
    Ok(())
}

/// The closed half-space `{x : <a, x> <= b}` with `a` normalized.
#[derive(Clone, Debug)]
pub struct HalfSpace {
    normal: UnitVector,
    offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Point, offset: f64) -> Result<Self> {
        check_point(&normal, "normal")?;
        if !offset.is_finite() {
            return Err(Error::InvalidArgument("offset must be finite".into()));
        }
        let scale = normal.norm();
        Ok(HalfSpace { normal: UnitVector::new(normal)?, offset: offset / scale })
    }

    pub fn normal(&self) -> &UnitVector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    fn excess(&self, p: &Point) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

impl ClosedSet for HalfSpace {
    fn dimension(&self) -> usize {
        self.normal.dim()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ANALYTIC
    }

    fn contains(&self, p: &Point) -> bool {
        self.excess(p) <= slack(p)
    }

    fn project(&self, p: &Point) -> Option<Point> {
        let e = self.excess(p);
        if e <= 0.0 {
            Some(p.clone())
        } else {
            Some(p - self.normal.as_point() * e)
        }
    }

    fn interior_contains(&self, p: &Point) -> Option<bool> {
        Some(self.excess(p) < 0.0)
    }

    fn normals(&self, _x: &Point) -> Option<Vec<UnitVector>> {
        Some(vec![self.normal.clone()])
    }

    fn boundary_class(&self, _x: &Point) -> Option<BoundaryClass> {
        Some(BoundaryClass::InteriorBoundary)
    }

    fn sample_boundary(&self, budget: usize, rng: &mut ChaCha8Rng, window: &Window) -> Option<Vec<Point>> {
        let n = self.dimension();
        if n == 2 {
            let origin = self.normal.as_point() * self.offset;
            let dir = Point::from_vec(vec![-self.normal[1], self.normal[0]]);
            let (t0, t1) = window.clip_line(&origin, &dir)?;
            let piece = Piece::segment(&origin + &dir * t0, &origin + &dir * t1);
            return Some(sample_pieces(&[piece], budget, rng));
        }
        let mut out = Vec::with_capacity(budget);
        let mut attempts = 0usize;
        while out.len() < budget && attempts < 1000 * budget.max(1) {
            attempts += 1;
            let q = DVector::from_iterator(
                n,
                window.bounds.iter().map(|[lo, hi]| lo + (hi - lo) * rng.random::<f64>()),
            );
            let e = self.excess(&q);
            let b = q - self.normal.as_point() * e;
            if window.contains(&b) {
                out.push(b);
            }
        }
        Some(out)
    }

    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.clone()))
    }

    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(Empty::new(self.dimension())))
    }

    fn is_regular_closed(&self) -> Option<bool> {
        Some(true)
    }
}

/// The closed ball `B̄(c; R)`.
#[derive(Clone, Debug)]
pub struct ClosedBall {
    center: Point,
    radius: f64,
}

impl ClosedBall {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        check_point(&center, "center")?;
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidArgument("ball radius must be positive".into()));
        }
        Ok(ClosedBall { center, radius })
    }

    pub fn unit_disk() -> Self {
        ClosedBall { center: DVector::zeros(2), radius: 1.0 }
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl ClosedSet for ClosedBall {
    fn dimension(&self) -> usize {
        self.center.len()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ANALYTIC
    }

    fn contains(&self, p: &Point) -> bool {
        (p - &self.center).norm() <= self.radius + slack(p)
    }

    fn project(&self, p: &Point) -> Option<Point> {
        let v = p - &self.center;
        let d = v.norm();
        if d <= self.radius {
            Some(p.clone())
        } else {
            Some(&self.center + v * (self.radius / d))
        }
    }

    fn interior_contains(&self, p: &Point) -> Option<bool> {
        Some((p - &self.center).norm() < self.radius)
    }

    fn normals(&self, x: &Point) -> Option<Vec<UnitVector>> {
        Some(UnitVector::new(x - &self.center).into_iter().collect())
    }

    fn boundary_class(&self, _x: &Point) -> Option<BoundaryClass> {
        Some(BoundaryClass::InteriorBoundary)
    }

    fn sample_boundary(&self, budget: usize, rng: &mut ChaCha8Rng, _window: &Window) -> Option<Vec<Point>> {
        let n = self.dimension();
        if n == 2 {
            let piece = Piece::arc([self.center[0], self.center[1]], self.radius, 0.0, std::f64::consts::TAU);
            return Some(sample_pieces(&[piece], budget, rng));
        }
        Some(
            (0..budget)
                .map(|_| &self.center + sampling::random_direction(rng, n) * self.radius)
                .collect(),
        )
    }

    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.clone()))
    }

    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(Empty::new(self.dimension())))
    }

    fn is_regular_closed(&self) -> Option<bool> {
        Some(true)
    }
}

/// An affine line `{p + t u}`.
#[derive(Clone, Debug)]
pub struct Line {
    point: Point,
    direction: UnitVector,
}

impl Line {
    pub fn new(point: Point, direction: Point) -> Result<Self> {
        check_point(&point, "point")?;
        if point.len() != direction.len() {
            return Err(Error::DimensionMismatch { expected: point.len(), found: direction.len() });
        }
        Ok(Line { point, direction: UnitVector::new(direction)? })
    }

    /// The horizontal axis `{y = 0}` of the plane.
    pub fn x_axis() -> Self {
        Line { point: DVector::zeros(2), direction: super::unit(&[1.0, 0.0]) }
    }
}

impl ClosedSet for Line {
    fn dimension(&self) -> usize {
        self.point.len()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ANALYTIC
    }

    fn contains(&self, p: &Point) -> bool {
        (self.project(p).unwrap() - p).norm() <= slack(p)
    }

    fn project(&self, p: &Point) -> Option<Point> {
        let t = self.direction.dot(&(p - &self.point));
        Some(&self.point + self.direction.as_point() * t)
    }

    fn interior_contains(&self, _p: &Point) -> Option<bool> {
        Some(self.dimension() == 1)
    }

    fn normals(&self, _x: &Point) -> Option<Vec<UnitVector>> {
        Some(complement_generators(self.direction.as_point()))
    }

    fn boundary_class(&self, _x: &Point) -> Option<BoundaryClass> {
        Some(BoundaryClass::ThinBoundary)
    }

    fn sample_boundary(&self, budget: usize, rng: &mut ChaCha8Rng, window: &Window) -> Option<Vec<Point>> {
        let (t0, t1) = window.clip_line(&self.point, self.direction.as_point())?;
        let d = self.direction.as_point();
        let piece = Piece::segment(&self.point + d * t0, &self.point + d * t1);
        Some(sample_pieces(&[piece], budget, rng))
    }

    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(Empty::new(self.dimension())))
    }

    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.clone()))
    }

    fn is_regular_closed(&self) -> Option<bool> {
        Some(false)
    }
}

/// The closed segment `[a, b]`.
#[derive(Clone, Debug)]
pub struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        check_point(&a, "segment end")?;
        check_point(&b, "segment end")?;
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
        }
        Ok(Segment { a, b })
    }

    pub fn a(&self) -> &Point {
        &self.a
    }

    pub fn b(&self) -> &Point {
        &self.b
    }

    /// Parameter of the nearest point, clamped to [0, 1].
    pub fn param(&self, p: &Point) -> f64 {
        let ab = &self.b - &self.a;
        let len2 = ab.norm_squared();
        if len2 == 0.0 {
            return 0.0;
        }
        ((p - &self.a).dot(&ab) / len2).clamp(0.0, 1.0)
    }

    /// Generators of the proximal normal cone of the segment at `x`.
    pub(crate) fn cone(&self, x: &Point) -> Vec<UnitVector> {
        let n = self.a.len();
        let ab = &self.b - &self.a;
        let len = ab.norm();
        if len == 0.0 {
            let mut out = Vec::with_capacity(2 * n);
            for i in 0..n {
                let mut e = DVector::zeros(n);
                e[i] = 1.0;
                out.push(UnitVector::new(e.clone()).unwrap());
                out.push(UnitVector::new(-e).unwrap());
            }
            return out;
        }
        let u = &ab / len;
        let mut out = complement_generators(&u);
        let tol = FEATURE_TOL * (1.0 + len);
        if (x - &self.a).norm() <= tol {
            out.insert(0, UnitVector::new(-&u).unwrap());
        } else if (x - &self.b).norm() <= tol {
            out.insert(0, UnitVector::new(u).unwrap());
        }
        out
    }

    pub(crate) fn piece(&self) -> Piece {
        Piece::segment(self.a.clone(), self.b.clone())
    }
}

impl ClosedSet for Segment {
    fn dimension(&self) -> usize {
        self.a.len()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ANALYTIC
    }

    fn contains(&self, p: &Point) -> bool {
        (self.project(p).unwrap() - p).norm() <= slack(p)
    }

    fn project(&self, p: &Point) -> Option<Point> {
        let t = self.param(p);
        Some(&self.a + (&self.b - &self.a) * t)
    }

    fn interior_contains(&self, _p: &Point) -> Option<bool> {
        Some(false)
    }

    fn normals(&self, x: &Point) -> Option<Vec<UnitVector>> {
        Some(self.cone(x))
    }

    fn boundary_class(&self, _x: &Point) -> Option<BoundaryClass> {
        Some(BoundaryClass::ThinBoundary)
    }

    fn sample_boundary(&self, budget: usize, rng: &mut ChaCha8Rng, _window: &Window) -> Option<Vec<Point>> {
        Some(sample_pieces(&[self.piece()], budget, rng))
    }

    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(Empty::new(self.dimension())))
    }

    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.clone()))
    }

    fn is_regular_closed(&self) -> Option<bool> {
        Some(false)
    }
}

/// The empty subset of R^n.
#[derive(Clone, Debug)]
pub struct Empty {
    dim: usize,
}

impl Empty {
    pub fn new(dim: usize) -> Self {
        Empty { dim }
    }
}

impl ClosedSet for Empty {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ANALYTIC
    }

    fn is_empty(&self) -> bool {
        true
    }

    fn contains(&self, _p: &Point) -> bool {
        false
    }

    fn project(&self, _p: &Point) -> Option<Point> {
        None
    }

    fn interior_contains(&self, _p: &Point) -> Option<bool> {
        Some(false)
    }

    fn normals(&self, _x: &Point) -> Option<Vec<UnitVector>> {
        Some(Vec::new())
    }

    fn sample_boundary(&self, _budget: usize, _rng: &mut ChaCha8Rng, _window: &Window) -> Option<Vec<Point>> {
        Some(Vec::new())
    }

    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.clone()))
    }

    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.clone()))
    }

    fn is_regular_closed(&self) -> Option<bool> {
        Some(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;

    #[test]
    fn disk_projection_is_radial() {
        let d = ClosedBall::unit_disk();
        let q = d.project(&point(&[3.0, 4.0])).unwrap();
        assert!((q - point(&[0.6, 0.8])).norm() < 1e-15);
        assert!(d.contains(&point(&[0.5, 0.0])));
        assert!(!d.contains(&point(&[2.0, 0.0])));
    }

    #[test]
    fn line_drops_vertically() {
        let l = Line::x_axis();
        assert_eq!(l.project(&point(&[2.0, -3.0])).unwrap(), point(&[2.0, 0.0]));
        let normals = l.normals(&point(&[0.0, 0.0])).unwrap();
        assert_eq!(normals.len(), 2);
        assert!(normals.iter().any(|n| (n[1] - 1.0).abs() < 1e-15));
        assert!(normals.iter().any(|n| (n[1] + 1.0).abs() < 1e-15));
    }

    #[test]
    fn segment_end_cone_has_outward_axis() {
        let s = Segment::new(point(&[1.0, 0.0]), point(&[2.0, 0.0])).unwrap();
        let cone = s.cone(&point(&[2.0, 0.0]));
        assert_eq!(cone.len(), 3);
        assert!((cone[0][0] - 1.0).abs() < 1e-15);
        assert_eq!(s.cone(&point(&[1.5, 0.0])).len(), 2);
    }

    #[test]
    fn half_space_samples_lie_on_hyperplane() {
        let h = HalfSpace::new(point(&[0.0, 0.0, 2.0]), 2.0).unwrap();
        let mut rng = sampling::rng(3);
        let w = Window::cube(3, -2.0, 2.0);
        let pts = h.sample_boundary(20, &mut rng, &w).unwrap();
        assert_eq!(pts.len(), 20);
        assert!(pts.iter().all(|p| (p[2] - 1.0).abs() < 1e-12 && w.contains(p)));
    }
}
