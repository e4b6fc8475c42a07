//! Checked queries on a closed set: dimension validation, distances,
//! boundary sampling with a generic fallback, interior probes and boundary
//! classification.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point, Tolerances, Window};
use crate::sampling;
use crate::sets::{BoundaryClass, Capabilities, ClosedSet};

/// A closed set together with the sampling window and tolerances of a scene.
#[derive(Clone, Debug)]
pub struct SetOracle {
    set: Arc<dyn ClosedSet>,
    window: Window,
    tol: Tolerances,
}

impl SetOracle {
    pub fn new(set: Arc<dyn ClosedSet>, window: Window, tol: Tolerances) -> Result<Self> {
        window.validate()?;
        tol.validate()?;
        if window.dimension() != set.dimension() {
            return Err(Error::DimensionMismatch { expected: set.dimension(), found: window.dimension() });
        }
        Ok(SetOracle { set, window, tol })
    }

    /// Default window `[-5, 5]^n` and default tolerances.
    pub fn with_defaults(set: Arc<dyn ClosedSet>) -> Self {
        let n = set.dimension();
        SetOracle { set, window: Window::cube(n, -5.0, 5.0), tol: Tolerances::default() }
    }

    pub fn from_set<S: ClosedSet + 'static>(set: S) -> Self {
        Self::with_defaults(Arc::new(set))
    }

    pub fn with_window(mut self, window: Window) -> Result<Self> {
        if window.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: window.dimension() });
        }
        window.validate()?;
        self.window = window;
        Ok(self)
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Result<Self> {
        tol.validate()?;
        self.tol = tol;
        Ok(self)
    }

    pub fn set(&self) -> &Arc<dyn ClosedSet> {
        &self.set
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn dimension(&self) -> usize {
        self.set.dimension()
    }

    pub fn capabilities(&self) -> Capabilities {
        self.set.capabilities()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn check_dim(&self, p: &Point) -> Result<()> {
        if p.len() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: p.len() });
        }
        if !crate::geometry::is_finite(p) {
            return Err(Error::InvalidArgument("point has non-finite coordinates".into()));
        }
        Ok(())
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        self.check_dim(p)?;
        Ok(self.set.contains(p))
    }

    pub fn distance_and_project(&self, p: &Point) -> Result<(f64, Point)> {
        self.check_dim(p)?;
        let q = self.set.project(p).ok_or(Error::EmptySet)?;
        Ok(((p - &q).norm(), q))
    }

    /// Distance to the set; `+inf` for the empty set.
    pub fn distance(&self, p: &Point) -> Result<f64> {
        self.check_dim(p)?;
        Ok(self.set.project(p).map_or(f64::INFINITY, |q| (p - q).norm()))
    }

    /// Deterministic boundary samples. Analytic sets use their
    /// parametrization; otherwise window points outside the set are projected
    /// onto it.
    pub fn boundary_sample(&self, budget: usize, seed: u64) -> Result<Vec<Point>> {
        if budget == 0 {
            return Err(Error::InvalidArgument("boundary budget must be at least 1".into()));
        }
        let mut rng = sampling::rng(seed);
        if let Some(pts) = self.set.sample_boundary(budget, &mut rng, &self.window) {
            return Ok(pts);
        }
        if self.set.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = Vec::with_capacity(budget);
        let attempts = self.tol.probe_budget.saturating_mul(budget);
        for _ in 0..attempts {
            if out.len() == budget {
                break;
            }
            let q = Point::from_iterator(
                self.dimension(),
                self.window.bounds.iter().map(|[lo, hi]| lo + (hi - lo) * rng.random::<f64>()),
            );
            if self.set.contains(&q) {
                continue;
            }
            if let Some(b) = self.set.project(&q) {
                if self.window.contains(&b) {
                    out.push(b);
                }
            }
        }
        if 2 * out.len() < budget {
            return Err(Error::BoundarySamplingFailed { found: out.len(), budget });
        }
        Ok(out)
    }

    /// Interior membership: exact when the set knows its interior, otherwise
    /// certified by a cluster of `2n + 1` members at radius `tol_boundary`.
    pub fn in_interior(&self, q: &Point) -> bool {
        if let Some(v) = self.set.interior_contains(q) {
            return v;
        }
        if !self.set.contains(q) {
            return false;
        }
        let h = self.tol.tol_boundary;
        (0..self.dimension()).all(|i| {
            let mut a = q.clone();
            let mut b = q.clone();
            a[i] += h;
            b[i] -= h;
            self.set.contains(&a) && self.set.contains(&b)
        })
    }

    /// A point of `B(p; eps) ∩ int S`, found among `probe_budget`
    /// low-discrepancy probes, if any.
    pub fn interior_probe(&self, p: &Point, eps: f64) -> Result<Option<Point>> {
        self.check_dim(p)?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument("probe radius must be positive".into()));
        }
        if self.in_interior(p) {
            return Ok(Some(p.clone()));
        }
        for h in sampling::halton_ball_points(self.dimension(), self.tol.probe_budget) {
            let q = p + h * (0.95 * eps);
            if self.in_interior(&q) {
                return Ok(Some(q));
            }
        }
        Ok(self.set.interior_point_near(p, eps).filter(|q| (q - p).norm() < eps && self.in_interior(q)))
    }

    /// Splits boundary points into those on the boundary of the interior and
    /// the thin rest.
    pub fn classify_boundary(&self, p: &Point, eps: f64) -> Result<BoundaryClass> {
        let d = self.distance(p)?;
        if d > self.tol.tol_boundary * (1.0 + p.amax()) {
            return Err(Error::NotOnBoundary { distance: d });
        }
        if self.is_deep_inside(p) {
            return Err(Error::DeepInterior);
        }
        if let Some(c) = self.set.boundary_class(p) {
            return Ok(c);
        }
        Ok(match self.interior_probe(p, eps)? {
            Some(_) => BoundaryClass::InteriorBoundary,
            None => BoundaryClass::ThinBoundary,
        })
    }

    /// True when a small sphere of probes around `p` stays inside the set.
    pub fn is_deep_inside(&self, p: &Point) -> bool {
        let rad = self.tol.classify_scale();
        let n = self.dimension();
        sampling::sphere_directions(n, (4 * n).max(16))
            .into_iter()
            .all(|d| self.set.contains(&(p + d * rad)))
    }

    /// Oracle for cl(int S) on the same window and tolerances.
    pub fn closure_of_interior(&self) -> Result<SetOracle> {
        let set = self.set.closure_of_interior().ok_or(Error::MissingClosure)?;
        Ok(SetOracle { set, window: self.window.clone(), tol: self.tol.clone() })
    }

    /// Oracle for the closure of the thin boundary.
    pub fn thin_part(&self) -> Result<SetOracle> {
        let set = self.set.thin_part().ok_or(Error::MissingClosure)?;
        Ok(SetOracle { set, window: self.window.clone(), tol: self.tol.clone() })
    }

    pub fn is_regular_closed(&self) -> Option<bool> {
        self.set.is_regular_closed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use crate::sets::{ClosedBall, DiskWithSegment, Line, Opaque, Segment};

    fn example2() -> SetOracle {
        SetOracle::from_set(
            DiskWithSegment::new(
                ClosedBall::unit_disk(),
                Segment::new(point(&[1.0, 0.0]), point(&[2.0, 0.0])).unwrap(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn dimension_is_checked() {
        let o = SetOracle::from_set(ClosedBall::unit_disk());
        assert!(matches!(o.contains(&point(&[1.0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn probes_find_interior_of_disk_only() {
        let disk = SetOracle::from_set(ClosedBall::unit_disk());
        let z = disk.interior_probe(&point(&[1.0, 0.0]), 0.1).unwrap().unwrap();
        assert!(z.norm() < 1.0 && (z - point(&[1.0, 0.0])).norm() < 0.1);
        let line = SetOracle::from_set(Line::x_axis());
        assert!(line.interior_probe(&point(&[0.0, 0.0]), 0.1).unwrap().is_none());
        assert!(example2().interior_probe(&point(&[1.5, 0.0]), 0.1).unwrap().is_none());
    }

    #[test]
    fn opaque_probe_uses_cluster() {
        let o = SetOracle::from_set(Opaque::new(Arc::new(ClosedBall::unit_disk())));
        let z = o.interior_probe(&point(&[1.0, 0.0]), 0.1).unwrap().unwrap();
        assert!(z.norm() < 1.0);
        let l = SetOracle::from_set(Opaque::new(Arc::new(Line::x_axis())));
        assert!(l.interior_probe(&point(&[0.0, 0.0]), 0.1).unwrap().is_none());
    }

    #[test]
    fn classification() {
        let o = example2();
        let c = o.classify_boundary(&point(&[0.5, 0.75f64.sqrt()]), 1e-6).unwrap();
        assert_eq!(c, BoundaryClass::InteriorBoundary);
        assert_eq!(o.classify_boundary(&point(&[1.5, 0.0]), 1e-6).unwrap(), BoundaryClass::ThinBoundary);
        assert!(matches!(o.classify_boundary(&point(&[3.0, 0.0]), 1e-6), Err(Error::NotOnBoundary { .. })));
        assert!(matches!(o.classify_boundary(&point(&[0.0, 0.0]), 1e-6), Err(Error::DeepInterior)));
        let line = SetOracle::from_set(Opaque::new(Arc::new(Line::x_axis())));
        assert_eq!(line.classify_boundary(&point(&[0.0, 0.0]), 1e-6).unwrap(), BoundaryClass::ThinBoundary);
    }

    #[test]
    fn rejection_sampling_lands_on_boundary() {
        let o = SetOracle::from_set(Opaque::new(Arc::new(ClosedBall::unit_disk())));
        let pts = o.boundary_sample(50, 9).unwrap();
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
        assert_eq!(pts, o.boundary_sample(50, 9).unwrap());
    }
}
