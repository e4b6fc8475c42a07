use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use super::{
    sample_pieces, slack, unit, BoundaryClass, Capabilities, ClosedBall, ClosedSet, Empty, Piece, Segment,
    Whiskers, FEATURE_TOL,
};
use crate::error::{Error, Result};
use crate::geometry::{nearest_candidate, point, Point, UnitVector, Window};
use crate::sampling;

/// A closed ball with a closed segment attached from the outside.
#[derive(Clone, Debug)]
pub struct DiskWithSegment {
    disk: ClosedBall,
    segment: Segment,
}

impl DiskWithSegment {
    pub fn new(disk: ClosedBall, segment: Segment) -> Result<Self> {
        if disk.dimension() != segment.dimension() {
            return Err(Error::DimensionMismatch { expected: disk.dimension(), found: segment.dimension() });
        }
        let nearest = segment.project(disk.center()).unwrap();
        if (nearest - disk.center()).norm() < disk.radius() * (1.0 - 1e-12) {
            return Err(Error::InvalidArgument("the segment must stay outside the open ball".into()));
        }
        Ok(DiskWithSegment { disk, segment })
    }

    pub fn disk(&self) -> &ClosedBall {
        &self.disk
    }

    pub fn segment(&self) -> &Segment {
        &self.segment
    }

    fn on_circle(&self, x: &Point) -> bool {
        ((x - self.disk.center()).norm() - self.disk.radius()).abs() <= FEATURE_TOL * (1.0 + self.disk.radius())
    }

    fn on_segment(&self, x: &Point) -> bool {
        (self.segment.project(x).unwrap() - x).norm() <= FEATURE_TOL * (1.0 + x.amax())
    }

    /// Whether `v` is a proximal normal of the segment alone at `x`.
    fn in_segment_cone(&self, x: &Point, v: &Point) -> bool {
        let ab = self.segment.b() - self.segment.a();
        let len = ab.norm();
        let u = &ab / len;
        let tol = FEATURE_TOL * (1.0 + len);
        let along = v.dot(&u);
        if (x - self.segment.a()).norm() <= tol {
            along <= 1e-12
        } else if (x - self.segment.b()).norm() <= tol {
            along >= -1e-12
        } else {
            along.abs() <= 1e-12
        }
    }
}

impl ClosedSet for DiskWithSegment {
    fn dimension(&self) -> usize {
        self.disk.dimension()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ANALYTIC
    }

    fn contains(&self, p: &Point) -> bool {
        self.disk.contains(p) || self.segment.contains(p)
    }

    fn project(&self, p: &Point) -> Option<Point> {
        if (p - self.disk.center()).norm() <= self.disk.radius() {
            return Some(p.clone());
        }
        nearest_candidate(p, [self.disk.project(p).unwrap(), self.segment.project(p).unwrap()])
    }

    fn interior_contains(&self, p: &Point) -> Option<bool> {
        self.disk.interior_contains(p)
    }

    fn normals(&self, x: &Point) -> Option<Vec<UnitVector>> {
        let circle = self.on_circle(x);
        let seg = self.on_segment(x);
        if circle && seg {
            // intersection of the two cones: the radial normal survives only
            // if the segment admits it
            let radial = UnitVector::new(x - self.disk.center()).ok()?;
            let keep = self.in_segment_cone(x, radial.as_point());
            return Some(if keep { vec![radial] } else { Vec::new() });
        }
        if seg {
            return Some(self.segment.cone(x));
        }
        self.disk.normals(x)
    }

    fn boundary_class(&self, x: &Point) -> Option<BoundaryClass> {
        Some(if self.on_circle(x) { BoundaryClass::InteriorBoundary } else { BoundaryClass::ThinBoundary })
    }

    fn sample_boundary(&self, budget: usize, rng: &mut ChaCha8Rng, _window: &Window) -> Option<Vec<Point>> {
        let c = self.disk.center();
        let r = self.disk.radius();
        if self.dimension() == 2 {
            let pieces = [Piece::arc([c[0], c[1]], r, 0.0, 2.0 * PI), self.segment.piece()];
            return Some(sample_pieces(&pieces, budget, rng));
        }
        let n = self.dimension();
        let area = r.powi(n as i32 - 1);
        let len = (self.segment.b() - self.segment.a()).norm();
        let counts = sampling::allocate(budget, &[area, len]);
        let mut out: Vec<Point> = (0..counts[0]).map(|_| c + sampling::random_direction(rng, n) * r).collect();
        out.extend(sample_pieces(&[self.segment.piece()], counts[1], rng));
        Some(out)
    }

    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.disk.clone()))
    }

    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.segment.clone()))
    }

    fn is_regular_closed(&self) -> Option<bool> {
        Some(false)
    }
}

/// The half-strip `{x <= 0, |y| <= 1}`, optionally with the open unit disk
/// removed (the notch), which turns the right face into a concave arc with
/// cusps at `(0, ±1)`.
#[derive(Clone, Debug)]
pub struct NotchedSlab {
    notched: bool,
}

impl NotchedSlab {
    pub fn new(notched: bool) -> Self {
        NotchedSlab { notched }
    }

    pub fn is_notched(&self) -> bool {
        self.notched
    }

    fn at_tip(x: &Point) -> Option<f64> {
        [1.0, -1.0].into_iter().find(|s| (x[0].powi(2) + (x[1] - s).powi(2)).sqrt() <= FEATURE_TOL)
    }

    pub(crate) fn pieces(&self, window: &Window) -> Vec<Piece> {
        let left = window.lo(0).min(0.0);
        let mut out = Vec::new();
        out.push(Piece::segment(point(&[left, 1.0]), point(&[0.0, 1.0])));
        if self.notched {
            out.push(Piece::arc([0.0, 0.0], 1.0, FRAC_PI_2, 1.5 * PI));
        } else {
            out.push(Piece::segment(point(&[0.0, 1.0]), point(&[0.0, -1.0])));
        }
        out.push(Piece::segment(point(&[0.0, -1.0]), point(&[left, -1.0])));
        out
    }
}

impl ClosedSet for NotchedSlab {
    fn dimension(&self) -> usize {
        2
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ANALYTIC
    }

    fn contains(&self, p: &Point) -> bool {
        let s = slack(p);
        p[0] <= s && p[1].abs() <= 1.0 + s && (!self.notched || p.norm() >= 1.0 - s)
    }

    fn project(&self, p: &Point) -> Option<Point> {
        if p[0] <= 0.0 && p[1].abs() <= 1.0 && (!self.notched || p.norm() >= 1.0) {
            return Some(p.clone());
        }
        let x = p[0].min(0.0);
        let mut candidates = vec![point(&[x, 1.0]), point(&[x, -1.0])];
        if self.notched {
            let norm = p.norm();
            if norm == 0.0 {
                candidates.push(point(&[-1.0, 0.0]));
            } else if p[0] <= 0.0 {
                candidates.push(p / norm);
            }
        } else {
            candidates.push(point(&[0.0, p[1].clamp(-1.0, 1.0)]));
        }
        nearest_candidate(p, candidates)
    }

    fn interior_contains(&self, p: &Point) -> Option<bool> {
        Some(p[0] < 0.0 && p[1].abs() < 1.0 && (!self.notched || p.norm() > 1.0))
    }

    fn interior_point_near(&self, p: &Point, eps: f64) -> Option<Point> {
        // midline of the cusp between the unit circle and the edge |y| = 1
        for s in [1.0, -1.0] {
            let mut t = 0.5 * eps.min(1.0);
            for _ in 0..60 {
                let z = point(&[-t, s * 0.5 * (1.0 + (1.0 - t * t).sqrt())]);
                if (&z - p).norm() < eps {
                    if self.interior_contains(&z) == Some(true) {
                        return Some(z);
                    }
                } else if t < 1e-300 {
                    break;
                }
                t *= 0.5;
            }
        }
        None
    }

    fn normals(&self, x: &Point) -> Option<Vec<UnitVector>> {
        if let Some(s) = Self::at_tip(x) {
            return Some(if self.notched {
                vec![unit(&[1.0, 0.0]), unit(&[0.0, 1.0]), unit(&[0.0, -1.0])]
            } else {
                vec![unit(&[1.0, 0.0]), unit(&[0.0, s])]
            });
        }
        let tol = FEATURE_TOL;
        if self.notched && (x.norm() - 1.0).abs() <= tol && x[0] <= tol {
            return Some(UnitVector::new(-x).ok().into_iter().collect());
        }
        if !self.notched && x[0].abs() <= tol && x[1].abs() < 1.0 {
            return Some(vec![unit(&[1.0, 0.0])]);
        }
        Some(vec![unit(&[0.0, x[1].signum()])])
    }

    fn boundary_class(&self, _x: &Point) -> Option<BoundaryClass> {
        Some(BoundaryClass::InteriorBoundary)
    }

    fn sample_boundary(&self, budget: usize, rng: &mut ChaCha8Rng, window: &Window) -> Option<Vec<Point>> {
        Some(sample_pieces(&self.pieces(window), budget, rng))
    }

    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.clone()))
    }

    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(Empty::new(2)))
    }

    fn is_regular_closed(&self) -> Option<bool> {
        Some(true)
    }
}

/// A slab body with two whiskers attached at its tips `(0, ±1)`, pinching
/// towards the horizontal axis. Exterior sphere conditions hold at small
/// radii, while the gap between the whiskers shrinks to zero.
#[derive(Clone, Debug)]
pub struct PinchedSlab {
    body: NotchedSlab,
    whiskers: Whiskers,
}

impl PinchedSlab {
    pub fn new(notched: bool, decay: f64) -> Result<Self> {
        let whiskers = Whiskers::new(decay)?;
        if notched && decay > 0.5 {
            // whiskers must stay outside the open disk: g(t)^2 + t^2 >= 1
            return Err(Error::InvalidArgument("notched slab needs whisker decay at most 1/2".into()));
        }
        Ok(PinchedSlab { body: NotchedSlab::new(notched), whiskers })
    }

    pub fn body(&self) -> &NotchedSlab {
        &self.body
    }

    pub fn whiskers(&self) -> &Whiskers {
        &self.whiskers
    }

    fn on_whisker(&self, x: &Point) -> bool {
        x[0] > FEATURE_TOL && (x[1].abs() - self.whiskers.g(x[0])).abs() <= FEATURE_TOL * (1.0 + x.amax())
    }
}

impl ClosedSet for PinchedSlab {
    fn dimension(&self) -> usize {
        2
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ANALYTIC
    }

    fn contains(&self, p: &Point) -> bool {
        self.body.contains(p) || self.whiskers.contains(p)
    }

    fn project(&self, p: &Point) -> Option<Point> {
        if self.body.contains(p) && self.body.project(p).as_ref() == Some(p) {
            return Some(p.clone());
        }
        nearest_candidate(p, [self.body.project(p).unwrap(), self.whiskers.project(p).unwrap()])
    }

    fn interior_contains(&self, p: &Point) -> Option<bool> {
        self.body.interior_contains(p)
    }

    fn interior_point_near(&self, p: &Point, eps: f64) -> Option<Point> {
        self.body.interior_point_near(p, eps)
    }

    fn normals(&self, x: &Point) -> Option<Vec<UnitVector>> {
        if let Some(s) = NotchedSlab::at_tip(x) {
            // body cone intersected with the whisker-tip cone {v_x <= 0}
            return Some(if self.body.notched {
                vec![unit(&[0.0, 1.0]), unit(&[0.0, -1.0])]
            } else {
                vec![unit(&[0.0, s])]
            });
        }
        if self.on_whisker(x) {
            return self.whiskers.curve_normals(x);
        }
        self.body.normals(x)
    }

    fn boundary_class(&self, x: &Point) -> Option<BoundaryClass> {
        Some(if self.on_whisker(x) { BoundaryClass::ThinBoundary } else { BoundaryClass::InteriorBoundary })
    }

    fn sample_boundary(&self, budget: usize, rng: &mut ChaCha8Rng, window: &Window) -> Option<Vec<Point>> {
        let mut pieces = self.body.pieces(window);
        pieces.extend(self.whiskers.pieces(window));
        Some(sample_pieces(&pieces, budget, rng))
    }

    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.body.clone()))
    }

    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.whiskers.clone()))
    }

    fn is_regular_closed(&self) -> Option<bool> {
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example2() -> DiskWithSegment {
        DiskWithSegment::new(
            ClosedBall::unit_disk(),
            Segment::new(point(&[1.0, 0.0]), point(&[2.0, 0.0])).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn example2_projection_prefers_circle() {
        let s = example2();
        let p = point(&[1.5, 1.0]);
        let q = s.project(&p).unwrap();
        assert!(((q.clone() - &p).norm() - (3.25f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((q - point(&[1.5, 1.0]) / 3.25f64.sqrt()).norm() < 1e-12);
        assert!(s.contains(&point(&[1.5, 0.0])));
    }

    #[test]
    fn example2_junction_has_trivial_cone() {
        let s = example2();
        assert!(s.normals(&point(&[1.0, 0.0])).unwrap().is_empty());
        assert_eq!(s.normals(&point(&[1.5, 0.0])).unwrap().len(), 2);
        assert_eq!(s.boundary_class(&point(&[1.5, 0.0])), Some(BoundaryClass::ThinBoundary));
        assert_eq!(s.boundary_class(&point(&[0.5, 0.75f64.sqrt()])), Some(BoundaryClass::InteriorBoundary));
    }

    #[test]
    fn segment_inside_disk_rejected() {
        let seg = Segment::new(point(&[0.5, 0.0]), point(&[2.0, 0.0])).unwrap();
        assert!(DiskWithSegment::new(ClosedBall::unit_disk(), seg).is_err());
    }

    #[test]
    fn notch_projection() {
        let body = NotchedSlab::new(true);
        let q = body.project(&point(&[-0.3, 0.4])).unwrap();
        assert!((q - point(&[-0.6, 0.8])).norm() < 1e-12);
        let q = body.project(&point(&[0.5, 0.2])).unwrap();
        assert!((q - point(&[0.0, 1.0])).norm() < 1e-12);
        assert_eq!(body.project(&point(&[-2.0, 0.5])).unwrap(), point(&[-2.0, 0.5]));
    }

    #[test]
    fn pinched_slab_classes() {
        let s = PinchedSlab::new(true, 0.5).unwrap();
        let w = point(&[3.0, s.whiskers().g(3.0)]);
        assert!(s.contains(&w));
        assert_eq!(s.boundary_class(&w), Some(BoundaryClass::ThinBoundary));
        assert_eq!(s.boundary_class(&point(&[0.0, 1.0])), Some(BoundaryClass::InteriorBoundary));
        assert_eq!(s.normals(&point(&[0.0, -1.0])).unwrap().len(), 2);
        let q = s.project(&point(&[5.0, 0.0])).unwrap();
        assert!(s.whiskers().contains(&q));
    }
}
