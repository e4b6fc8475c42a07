//! The closed-set contract and the concrete sets shipped with the crate.

use std::fmt::Debug;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{Point, UnitVector, Window};
use crate::sampling;

mod balls;
mod basic;
mod composite;
mod curves;
mod wrappers;

pub use balls::ComplementOfOpenBalls;
pub use basic::{ClosedBall, Empty, HalfSpace, Line, Segment};
pub use composite::{DiskWithSegment, NotchedSlab, PinchedSlab};
pub use curves::{ExpCurves, Whiskers};
pub use wrappers::{Opaque, Transformed, Union};

/// Relative slack used by membership tests so that projected points always
/// test as members.
pub const MEMBERSHIP_SLACK: f64 = 1e-12;

/// Distance under which a point is identified with a distinguished feature
/// (corner, junction, segment end) when assigning analytic normals.
pub const FEATURE_TOL: f64 = 1e-8;

pub(crate) fn slack(p: &Point) -> f64 {
    MEMBERSHIP_SLACK * (1.0 + p.amax())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Capabilities {
    pub exact_projection: bool,
    pub analytic_normals: bool,
    pub interior_membership: bool,
    pub closure_of_interior_available: bool,
}

impl Capabilities {
    pub const ANALYTIC: Capabilities = Capabilities {
        exact_projection: true,
        analytic_normals: true,
        interior_membership: true,
        closure_of_interior_available: true,
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryClass {
    /// The point lies on the boundary of the interior.
    InteriorBoundary,
    /// Boundary point with no interior nearby.
    ThinBoundary,
}

/// A nonempty (or explicitly empty) closed subset of R^n, queried through
/// membership, projection and optional analytic extras.
///
/// Implementations are immutable; every method may be called concurrently.
pub trait ClosedSet: Send + Sync + Debug {
    fn dimension(&self) -> usize;

    fn capabilities(&self) -> Capabilities;

    fn is_empty(&self) -> bool {
        false
    }

    /// Membership, tolerant to [`MEMBERSHIP_SLACK`].
    fn contains(&self, p: &Point) -> bool;

    /// A nearest point of the set, or `None` for the empty set.
    fn project(&self, p: &Point) -> Option<Point>;

    /// Exact membership in the interior, when known.
    fn interior_contains(&self, _p: &Point) -> Option<bool> {
        None
    }

    /// Unit generators of the proximal normal cone at a boundary point.
    /// An empty list means the cone is `{0}`.
    /// An interior point within `eps` of `p` located in closed form, for
    /// sets whose interior is too thin near `p` for random probes (cusps).
    fn interior_point_near(&self, _p: &Point, _eps: f64) -> Option<Point> {
        None
    }

    fn normals(&self, _x: &Point) -> Option<Vec<UnitVector>> {
        None
    }

    fn boundary_class(&self, _x: &Point) -> Option<BoundaryClass> {
        None
    }

    /// Closed-form boundary samples inside `window`, returned piece by piece
    /// in parameter order.
    fn sample_boundary(&self, _budget: usize, _rng: &mut ChaCha8Rng, _window: &Window) -> Option<Vec<Point>> {
        None
    }

    /// The set cl(int S).
    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        None
    }

    /// The closure of the thin boundary (boundary points away from cl(int S)).
    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        None
    }

    fn is_regular_closed(&self) -> Option<bool> {
        None
    }
}

/// A parametrized boundary piece: `at` maps [0,1] onto the piece.
pub(crate) struct Piece {
    pub len: f64,
    pub at: Box<dyn Fn(f64) -> Point>,
}

impl Piece {
    pub fn segment(a: Point, b: Point) -> Piece {
        let len = (&b - &a).norm();
        Piece { len, at: Box::new(move |u| &a + (&b - &a) * u) }
    }

    /// Circular arc in the plane from angle `t0` to `t1`.
    pub fn arc(center: [f64; 2], radius: f64, t0: f64, t1: f64) -> Piece {
        Piece {
            len: radius * (t1 - t0).abs(),
            at: Box::new(move |u| {
                let t = t0 + (t1 - t0) * u;
                Point::from_vec(vec![center[0] + radius * t.cos(), center[1] + radius * t.sin()])
            }),
        }
    }

    /// Curve sampled uniformly in its parameter over `[t0, t1]`, weighted by
    /// an approximate arc length.
    pub fn curve(t0: f64, t1: f64, f: impl Fn(f64) -> Point + 'static) -> Piece {
        let mut len = 0.0;
        let mut prev = f(t0);
        for k in 1..=256 {
            let q = f(t0 + (t1 - t0) * k as f64 / 256.0);
            len += (&q - &prev).norm();
            prev = q;
        }
        Piece { len, at: Box::new(move |u| f(t0 + (t1 - t0) * u)) }
    }
}

pub(crate) fn sample_pieces(pieces: &[Piece], budget: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let weights: Vec<f64> = pieces.iter().map(|p| p.len).collect();
    let counts = sampling::allocate(budget, &weights);
    let mut out = Vec::with_capacity(budget);
    for (piece, count) in pieces.iter().zip(counts) {
        for u in sampling::stratified(rng, count) {
            out.push((piece.at)(u));
        }
    }
    out
}

pub(crate) fn unit(coords: &[f64]) -> UnitVector {
    UnitVector::from_slice(coords).expect("nonzero literal direction")
}

/// Unit vectors `±b` for an orthonormal basis `b` of the complement of `u`.
pub(crate) fn complement_generators(u: &Point) -> Vec<UnitVector> {
    let mut out = Vec::new();
    for b in crate::geometry::orthonormal_complement(u) {
        out.push(UnitVector::new(b.clone()).expect("basis vector"));
        out.push(UnitVector::new(-b).expect("basis vector"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;

    #[test]
    fn pieces_sampled_in_order() {
        let pieces = vec![
            Piece::segment(point(&[0.0, 0.0]), point(&[1.0, 0.0])),
            Piece::segment(point(&[0.0, 1.0]), point(&[3.0, 1.0])),
        ];
        let mut rng = sampling::rng(0);
        let pts = sample_pieces(&pieces, 8, &mut rng);
        assert_eq!(pts.len(), 8);
        assert_eq!(pts.iter().filter(|p| p[1] == 0.0).count(), 2);
        assert!(pts.windows(2).all(|w| w[0][1] < w[1][1] || w[0][0] <= w[1][0]));
    }
}
