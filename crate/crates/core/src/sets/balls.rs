use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand_chacha::ChaCha8Rng;

use super::{sample_pieces, slack, BoundaryClass, Capabilities, ClosedSet, Empty, Piece, FEATURE_TOL};
use crate::error::{Error, Result};
use crate::geometry::{nearest_candidate, Ball, Point, UnitVector, Window};
use crate::sampling;

/// `S = R^n \ (B(c_1; r_1) ∪ ... ∪ B(c_m; r_m))`, the complement of finitely
/// many open balls.
#[derive(Clone, Debug)]
pub struct ComplementOfOpenBalls {
    dim: usize,
    balls: Vec<Ball>,
}

impl ComplementOfOpenBalls {
    pub fn new(balls: Vec<Ball>) -> Result<Self> {
        let dim = balls.first().ok_or_else(|| Error::InvalidArgument("at least one ball is required".into()))?.center.len();
        for b in &balls {
            if b.center.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: b.center.len() });
            }
            if !(b.radius.is_finite() && b.radius > 0.0) || !crate::geometry::is_finite(&b.center) {
                return Err(Error::InvalidArgument("ball radii must be positive and centers finite".into()));
            }
        }
        let balls = balls.into_iter().map(|b| Ball::open(b.center, b.radius)).collect();
        Ok(ComplementOfOpenBalls { dim, balls })
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    fn inside_some(&self, p: &Point, slack: f64) -> bool {
        self.balls.iter().any(|b| (p - &b.center).norm() < b.radius - slack)
    }

    /// Nearest point to `p` on the intersection of the spheres indexed by
    /// `subset`. When the intersection is a pair of points both are returned.
    fn sphere_intersection_candidates(&self, p: &Point, subset: &[usize]) -> Vec<Point> {
        let n = self.dim;
        let first = &self.balls[subset[0]];
        let k = subset.len();
        // affine constraints 2 (c_j - c_1) . q = |c_j|^2 - |c_1|^2 - r_j^2 + r_1^2
        let mut a = DMatrix::zeros(k - 1, n);
        let mut rhs = DVector::zeros(k - 1);
        for (row, &j) in subset[1..].iter().enumerate() {
            let bj = &self.balls[j];
            let diff = &bj.center - &first.center;
            for col in 0..n {
                a[(row, col)] = 2.0 * diff[col];
            }
            rhs[row] = bj.center.norm_squared() - first.center.norm_squared() - bj.radius.powi(2)
                + first.radius.powi(2);
        }
        // projector onto the affine plane {q : A q = rhs}
        let (m, proj_p) = if k == 1 {
            (first.center.clone(), p.clone())
        } else {
            let gram = &a * a.transpose();
            let Some(inv) = gram.clone().try_inverse() else {
                return Vec::new();
            };
            if gram.determinant().abs() < 1e-14 {
                return Vec::new();
            }
            let onto = |q: &Point| -> Point { q - a.transpose() * (&inv * (&a * q - &rhs)) };
            (onto(&first.center), onto(p))
        };
        let rho2 = first.radius.powi(2) - (&m - &first.center).norm_squared();
        if rho2 < -1e-12 {
            return Vec::new();
        }
        let rho = rho2.max(0.0).sqrt();
        if k == n {
            // the plane is a line: the intersection is at most two points
            if n == 1 {
                return vec![&first.center + DVector::from_element(1, first.radius), &first.center - DVector::from_element(1, first.radius)];
            }
            let null = null_direction(&a);
            return vec![&m + &null * rho, &m - &null * rho];
        }
        let v = &proj_p - &m;
        let norm = v.norm();
        if norm > 1e-300 {
            vec![&m + v * (rho / norm)]
        } else {
            // p sits on the axis of the intersection: every point is nearest
            let dir = if k == 1 {
                let mut e = DVector::zeros(n);
                e[0] = -1.0;
                e
            } else {
                -null_direction(&a)
            };
            vec![&m + dir * rho]
        }
    }
}

/// A unit vector orthogonal to all rows of `a` (rank n - 1 assumed away from
/// degenerate configurations; otherwise the least singular direction).
fn null_direction(a: &DMatrix<f64>) -> Point {
    let n = a.ncols();
    let mut basis: Vec<Point> = Vec::new();
    for r in 0..a.nrows() {
        let mut v: Point = a.row(r).transpose();
        for b in &basis {
            v -= b * b.dot(&v);
        }
        let norm = v.norm();
        if norm > 1e-12 {
            basis.push(v / norm);
        }
    }
    for i in 0..n {
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        for b in &basis {
            e -= b * b.dot(&e);
        }
        let norm = e.norm();
        if norm > 1e-6 {
            let d = e / norm;
            // fix the sign deterministically
            let lead = d.iter().find(|c| c.abs() > 1e-12).copied().unwrap_or(1.0);
            return if lead < 0.0 { -d } else { d };
        }
    }
    DVector::zeros(n)
}

fn subsets_up_to(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, m: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !current.is_empty() {
            out.push(current.clone());
        }
        if current.len() == k {
            return;
        }
        for i in start..m {
            current.push(i);
            rec(i + 1, m, k, current, out);
            current.pop();
        }
    }
    rec(0, m, k, &mut current, &mut out);
    out
}

impl ClosedSet for ComplementOfOpenBalls {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ANALYTIC
    }

    fn contains(&self, p: &Point) -> bool {
        !self.inside_some(p, slack(p))
    }

    fn project(&self, p: &Point) -> Option<Point> {
        if !self.inside_some(p, 0.0) {
            return Some(p.clone());
        }
        let mut candidates = Vec::new();
        for subset in subsets_up_to(self.balls.len(), self.dim) {
            for c in self.sphere_intersection_candidates(p, &subset) {
                if crate::geometry::is_finite(&c) && self.contains(&c) {
                    candidates.push(c);
                }
            }
        }
        nearest_candidate(p, candidates)
    }

    fn interior_contains(&self, p: &Point) -> Option<bool> {
        Some(self.balls.iter().all(|b| (p - &b.center).norm() > b.radius))
    }

    fn normals(&self, x: &Point) -> Option<Vec<UnitVector>> {
        let tol = FEATURE_TOL * (1.0 + x.amax());
        Some(
            self.balls
                .iter()
                .filter(|b| ((x - &b.center).norm() - b.radius).abs() <= tol)
                .filter_map(|b| UnitVector::new(&b.center - x).ok())
                .collect(),
        )
    }

    fn boundary_class(&self, _x: &Point) -> Option<BoundaryClass> {
        Some(BoundaryClass::InteriorBoundary)
    }

    fn sample_boundary(&self, budget: usize, rng: &mut ChaCha8Rng, window: &Window) -> Option<Vec<Point>> {
        let n = self.dim;
        let mut out = Vec::with_capacity(budget);
        if n == 2 {
            // oversample the circles in order, keep exposed arcs
            let pieces: Vec<Piece> = self
                .balls
                .iter()
                .map(|b| Piece::arc([b.center[0], b.center[1]], b.radius, 0.0, std::f64::consts::TAU))
                .collect();
            let mut factor = 2;
            while factor <= 1 << 12 {
                let pts = sample_pieces(&pieces, budget * factor, rng);
                let kept: Vec<Point> =
                    pts.into_iter().filter(|p| !self.inside_some(p, slack(p)) && window.contains(p)).collect();
                if kept.len() >= budget {
                    let step = kept.len() as f64 / budget as f64;
                    return Some((0..budget).map(|i| kept[(i as f64 * step) as usize].clone()).collect());
                }
                factor *= 2;
            }
            return Some(out);
        }
        let areas: Vec<f64> = self.balls.iter().map(|b| b.radius.powi(n as i32 - 1)).collect();
        let mut attempts = 0usize;
        while out.len() < budget && attempts < 1000 * budget.max(1) {
            attempts += 1;
            let i = {
                let total: f64 = areas.iter().sum();
                let mut u = rand::Rng::random::<f64>(rng) * total;
                let mut idx = 0;
                while idx + 1 < areas.len() && u >= areas[idx] {
                    u -= areas[idx];
                    idx += 1;
                }
                idx
            };
            let b = &self.balls[i];
            let p = &b.center + sampling::random_direction(rng, n) * b.radius;
            if !self.inside_some(&p, slack(&p)) && window.contains(&p) {
                out.push(p);
            }
        }
        Some(out)
    }

    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.clone()))
    }

    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(Empty::new(self.dim)))
    }

    fn is_regular_closed(&self) -> Option<bool> {
        Some(true)
    }
}
