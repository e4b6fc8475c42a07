//! Points, unit directions, balls, sampling windows and numeric tolerances.

use std::cmp::Ordering;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of R^n. The dimension is carried by the vector length.
pub type Point = DVector<f64>;

/// Builds a point from a coordinate slice.
pub fn point(coords: &[f64]) -> Point {
    DVector::from_column_slice(coords)
}

pub fn is_finite(p: &Point) -> bool {
    p.iter().all(|c| c.is_finite())
}

/// Lexicographic order on coordinates, used to break ties between
/// equidistant candidates.
pub fn lex_cmp(a: &Point, b: &Point) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Picks the nearest candidate to `p`; exact ties go to the lexicographically
/// smallest point.
pub fn nearest_candidate<I>(p: &Point, candidates: I) -> Option<Point>
where
    I: IntoIterator<Item = Point>,
{
    let mut best: Option<(f64, Point)> = None;
    for c in candidates {
        let d = (&c - p).norm();
        best = match best {
            None => Some((d, c)),
            Some((bd, bc)) => {
                let scale = 1e-14 * (1.0 + bd);
                if d < bd - scale || ((d - bd).abs() <= scale && lex_cmp(&c, &bc) == Ordering::Less) {
                    Some((d, c))
                } else {
                    Some((bd, bc))
                }
            }
        };
    }
    best.map(|(_, c)| c)
}

/// Orthonormal basis of the hyperplane orthogonal to `u` (Gram-Schmidt over
/// the coordinate axes, deterministic).
pub fn orthonormal_complement(u: &Point) -> Vec<Point> {
    let n = u.len();
    let unit = u / u.norm();
    let mut basis: Vec<Point> = Vec::with_capacity(n.saturating_sub(1));
    let mut axes: Vec<usize> = (0..n).collect();
    // least-aligned axes first
    axes.sort_by(|&i, &j| unit[i].abs().total_cmp(&unit[j].abs()).then(i.cmp(&j)));
    for i in axes {
        if basis.len() + 1 == n {
            break;
        }
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v -= &unit * unit.dot(&v);
        for b in &basis {
            v -= b * b.dot(&v);
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / norm);
        }
    }
    basis
}

/// A direction of unit Euclidean length.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector(Point);

impl UnitVector {
    /// Normalizes `v`. Zero or non-finite input is rejected.
    pub fn new(v: Point) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() {
            return Err(Error::InvalidArgument("non-finite direction".into()));
        }
        if norm <= f64::MIN_POSITIVE {
            return Err(Error::ZeroDirection);
        }
        Ok(UnitVector(v / norm))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(point(coords))
    }

    /// Wraps a vector that is already unit length (within `tol`).
    pub fn from_normalized(v: Point, tol: f64) -> Result<Self> {
        if ((v.norm()) - 1.0).abs() > tol {
            return Err(Error::InvalidArgument("vector is not unit length".into()));
        }
        Ok(UnitVector(v))
    }

    pub fn as_point(&self) -> &Point {
        &self.0
    }

    pub fn into_inner(self) -> Point {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, v: &Point) -> f64 {
        self.0.dot(v)
    }

    pub fn negated(&self) -> UnitVector {
        UnitVector(-&self.0)
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.iter().copied().collect()
    }
}

impl std::ops::Deref for UnitVector {
    type Target = Point;
    fn deref(&self) -> &Point {
        &self.0
    }
}

impl Serialize for UnitVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

/// Open or closed Euclidean ball.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ball {
    #[serde(with = "serde_point")]
    pub center: Point,
    pub radius: f64,
    pub closed: bool,
}

impl Ball {
    pub fn open(center: Point, radius: f64) -> Self {
        Ball { center, radius, closed: false }
    }

    pub fn closed(center: Point, radius: f64) -> Self {
        Ball { center, radius, closed: true }
    }

    pub fn contains(&self, p: &Point) -> bool {
        let d = (p - &self.center).norm();
        if self.closed {
            d <= self.radius
        } else {
            d < self.radius
        }
    }
}

/// Axis-aligned sampling box: `[[lo, hi], ...]`, one pair per coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Window {
    pub bounds: Vec<[f64; 2]>,
}

impl Window {
    pub fn new(bounds: Vec<[f64; 2]>) -> Result<Self> {
        let w = Window { bounds };
        w.validate()?;
        Ok(w)
    }

    /// The cube `[lo, hi]^n`.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Self {
        Window { bounds: vec![[lo, hi]; n] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bounds.is_empty() {
            return Err(Error::Scene("window must have at least one axis".into()));
        }
        for [lo, hi] in &self.bounds {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Scene(format!("invalid window axis [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn lo(&self, axis: usize) -> f64 {
        self.bounds[axis][0]
    }

    pub fn hi(&self, axis: usize) -> f64 {
        self.bounds[axis][1]
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.iter().zip(&self.bounds).all(|(c, [lo, hi])| *lo <= *c && *c <= *hi)
    }

    pub fn diameter(&self) -> f64 {
        self.bounds.iter().map(|[lo, hi]| (hi - lo).powi(2)).sum::<f64>().sqrt()
    }

    /// Parameter range `[t0, t1]` for which `origin + t * dir` stays inside
    /// the box, if any.
    pub fn clip_line(&self, origin: &Point, dir: &Point) -> Option<(f64, f64)> {
        let mut t0 = f64::NEG_INFINITY;
        let mut t1 = f64::INFINITY;
        for (i, [lo, hi]) in self.bounds.iter().enumerate() {
            let (o, d) = (origin[i], dir[i]);
            if d.abs() < 1e-300 {
                if o < *lo || o > *hi {
                    return None;
                }
                continue;
            }
            let (a, b) = ((lo - o) / d, (hi - o) / d);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
        (t0 <= t1).then_some((t0, t1))
    }

    /// Bounding box of this window under `p -> rot * p + shift`.
    pub fn transformed(&self, rot: &nalgebra::DMatrix<f64>, shift: &Point) -> Window {
        let n = self.dimension();
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for mask in 0..(1usize << n.min(16)) {
            let corner = DVector::from_iterator(
                n,
                (0..n).map(|i| if mask >> i & 1 == 1 { self.hi(i) } else { self.lo(i) }),
            );
            let q = rot * corner + shift;
            for i in 0..n {
                lo[i] = lo[i].min(q[i]);
                hi[i] = hi[i].max(q[i]);
            }
        }
        Window { bounds: lo.into_iter().zip(hi).map(|(a, b)| [a, b]).collect() }
    }
}

/// Numeric tolerances shared by every query on a scene.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Allowed deviation of a unit vector's norm from one.
    pub tol_unit: f64,
    /// Slack in ball-emptiness tests, scaled by `max(1, radius)`.
    pub tol_emptiness: f64,
    /// Bisection bracket width and boundary-proximity threshold.
    pub tol_boundary: f64,
    pub max_bisection_iters: usize,
    /// Deterministic probes per interior search; also scales the rejection
    /// sampling budget.
    pub probe_budget: usize,
    /// Doubling-search ceiling for certified normal radii; reaching it is
    /// reported as an infinite radius.
    pub radius_cap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_unit: 1e-12,
            tol_emptiness: 1e-9,
            tol_boundary: 1e-10,
            max_bisection_iters: 200,
            probe_budget: 256,
            radius_cap: 1e6,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.tol_unit, self.tol_emptiness, self.tol_boundary, self.radius_cap];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Scene("tolerances must be finite and strictly positive".into()));
        }
        if self.max_bisection_iters < 32 {
            return Err(Error::Scene("max_bisection_iters must be at least 32".into()));
        }
        if self.probe_budget == 0 {
            return Err(Error::Scene("probe_budget must be positive".into()));
        }
        Ok(())
    }

    /// Step used when probing for proximal normals.
    pub fn probe_step(&self) -> f64 {
        10.0 * self.tol_boundary
    }

    /// Scale at which generic oracles decide interior membership near a
    /// boundary point.
    pub fn classify_scale(&self) -> f64 {
        1e3 * self.tol_boundary
    }
}

/// Serializes a [`Point`] as a plain coordinate array.
pub mod serde_point {
    use super::Point;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(p.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Point, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Ok(Point::from_vec(v))
    }
}

/// Same as [`serde_point`] for optional points (`null` when absent).
pub mod serde_opt_point {
    use super::Point;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(p: &Option<Point>, s: S) -> Result<S::Ok, S::Error> {
        match p {
            Some(p) => s.collect_seq(p.iter()),
            None => s.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_orthonormal() {
        let u = point(&[1.0, 2.0, -0.5, 0.25]);
        let basis = orthonormal_complement(&u);
        assert_eq!(basis.len(), 3);
        for (i, a) in basis.iter().enumerate() {
            assert!(a.dot(&u).abs() < 1e-12);
            for (j, b) in basis.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((a.dot(b) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unit_vector_rejects_zero() {
        assert!(matches!(UnitVector::from_slice(&[0.0, 0.0]), Err(Error::ZeroDirection)));
        let u = UnitVector::from_slice(&[3.0, 4.0]).unwrap();
        assert!((u[0] - 0.6).abs() < 1e-15 && (u[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn ties_break_lexicographically() {
        let p = point(&[0.0, 0.0]);
        let got = nearest_candidate(&p, vec![point(&[0.0, 1.0]), point(&[0.0, -1.0]), point(&[1.0, 0.0])]);
        assert_eq!(got, Some(point(&[0.0, -1.0])));
    }

    #[test]
    fn clip_line_to_window() {
        let w = Window::cube(2, -3.0, 3.0);
        let (t0, t1) = w.clip_line(&point(&[0.0, 0.0]), &point(&[1.0, 0.0])).unwrap();
        assert_eq!((t0, t1), (-3.0, 3.0));
        assert!(w.clip_line(&point(&[0.0, 5.0]), &point(&[1.0, 0.0])).is_none());
    }

    #[test]
    fn tolerances_validate() {
        assert!(Tolerances::default().validate().is_ok());
        let bad = Tolerances { max_bisection_iters: 8, ..Tolerances::default() };
        assert!(bad.validate().is_err());
    }
}
