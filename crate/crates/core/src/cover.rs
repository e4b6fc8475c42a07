//! Constructive covers of the complement of a closed set by closed balls of
//! radius `r / 2`, one verified ball per exterior point.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::conditions::{normal_directions, realized_by_sphere};
use crate::error::{Error, Result};
use crate::geometry::{serde_opt_point, serde_point, Ball, Point, UnitVector};
use crate::oracle::SetOracle;
use crate::sampling;
use crate::sets::BoundaryClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CoverCase {
    /// The point is farther than `r / 2` from the set.
    Case1,
    /// The nearest point is on the thin boundary.
    Case2,
    #[serde(rename = "Case3_y_eq_x")]
    Case3YEqX,
    #[serde(rename = "Case3_y_near")]
    Case3YNear,
    #[serde(rename = "Case3_y_far")]
    Case3YFar,
}

impl CoverCase {
    pub fn as_str(self) -> &'static str {
        match self {
            CoverCase::Case1 => "Case1",
            CoverCase::Case2 => "Case2",
            CoverCase::Case3YEqX => "Case3_y_eq_x",
            CoverCase::Case3YNear => "Case3_y_near",
            CoverCase::Case3YFar => "Case3_y_far",
        }
    }

    pub fn is_case3(self) -> bool {
        matches!(self, CoverCase::Case3YEqX | CoverCase::Case3YNear | CoverCase::Case3YFar)
    }
}

impl fmt::Display for CoverCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Every intermediate of one ball construction.
#[derive(Clone, Debug, Serialize)]
pub struct CoverTrace {
    #[serde(with = "serde_point")]
    pub x: Point,
    pub case: CoverCase,
    #[serde(with = "serde_point")]
    pub s0: Point,
    pub r0: f64,
    pub eps: Option<f64>,
    #[serde(with = "serde_opt_point")]
    pub z_eps: Option<Point>,
    #[serde(with = "serde_opt_point")]
    pub s_eps: Option<Point>,
    #[serde(with = "serde_opt_point")]
    pub y_eps: Option<Point>,
    pub zeta0: Option<UnitVector>,
    pub zeta_eps: Option<UnitVector>,
    pub r_eps: Option<f64>,
    pub ball: Ball,
    pub verified: bool,
    /// Distance from the ball center to the set.
    pub center_distance: f64,
    /// Case 2: the ball sits inside the tangent r-ball at `s0`.
    pub lemma_ok: Option<bool>,
    /// Case 3: `<xi, zeta_eps> < eps / (2r)` with `xi = (z_eps - x) / |z_eps - x|`.
    pub claim2_ok: Option<bool>,
    /// Far subcase: `r_eps > r / 2`.
    pub claim3_ok: Option<bool>,
    /// Far subcase: sampled containment of the `r_eps` ball in the two-ball union.
    pub claim1_ok: Option<bool>,
}

impl CoverTrace {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Whether all runtime claim checks that apply to this trace held.
    pub fn claims_hold(&self) -> bool {
        [self.lemma_ok, self.claim1_ok, self.claim2_ok, self.claim3_ok].iter().all(|c| c.unwrap_or(true))
    }
}

#[derive(Clone, Debug)]
pub struct CoverOptions {
    /// Normals examined at `s_eps`.
    pub normal_budget: usize,
    /// Sample count of the containment check in the far subcase.
    pub claim1_samples: usize,
    pub seed: u64,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions { normal_budget: 16, claim1_samples: 10_000, seed: 0 }
    }
}

/// `r_eps = r0^2 d / (d^2 + r0^2 - r^2)`, the radius of the ball through `x`
/// towards `y_eps` that fits in `B(x; r0) ∪ B(y_eps; r)`.
pub fn r_epsilon(r0: f64, d: f64, r: f64) -> Result<f64> {
    if !(r0 > 0.0 && r > 0.0 && d.is_finite()) {
        return Err(Error::InvalidArgument("r0 and r must be positive".into()));
    }
    if r0 > 0.5 * r * (1.0 + 1e-12) {
        return Err(Error::OutOfRegime(format!("r0 = {r0} exceeds r/2 = {}", 0.5 * r)));
    }
    if d < r {
        return Err(Error::OutOfRegime(format!("d = {d} is below r = {r}")));
    }
    Ok(r0 * r0 * d / (d * d + r0 * r0 - r * r))
}

/// Checks on `samples` low-discrepancy points of `B(x + r_eps u; r_eps)`,
/// `u = (y - x) / |y - x|`, that each lies in `B(x; r0) ∪ B(y; r)`.
pub fn verify_claim1(x: &Point, r0: f64, y: &Point, r: f64, r_eps: f64, samples: usize, seed: u64) -> bool {
    let v = y - x;
    let d = v.norm();
    if d == 0.0 {
        return false;
    }
    let center = x + v * (r_eps / d);
    let skip = (seed % 1024) as usize;
    let slack = 1e-12;
    sampling::halton_ball_points(x.len(), samples + skip)
        .into_iter()
        .skip(skip)
        .all(|h| {
            let p = &center + h * r_eps;
            (&p - x).norm() < r0 * (1.0 + slack) || (&p - y).norm() < r * (1.0 + slack)
        })
}

fn finish(oracle: &SetOracle, mut trace: CoverTrace) -> Result<CoverTrace> {
    let d = oracle.distance(&trace.ball.center)?;
    trace.center_distance = d;
    trace.verified = d >= trace.ball.radius - oracle.tolerances().tol_emptiness;
    Ok(trace)
}

fn base_trace(x: &Point, case: CoverCase, s0: &Point, r0: f64, center: Point, r: f64) -> CoverTrace {
    CoverTrace {
        x: x.clone(),
        case,
        s0: s0.clone(),
        r0,
        eps: None,
        z_eps: None,
        s_eps: None,
        y_eps: None,
        zeta0: None,
        zeta_eps: None,
        r_eps: None,
        ball: Ball::closed(center, 0.5 * r),
        verified: false,
        center_distance: f64::NAN,
        lemma_ok: None,
        claim2_ok: None,
        claim3_ok: None,
        claim1_ok: None,
    }
}

/// Boundary point of the segment `[inside, outside]` by bisection on
/// membership, snapped with one projection when projections are exact.
fn boundary_on_segment(oracle: &SetOracle, inside: &Point, outside: &Point) -> Result<Point> {
    let tol = oracle.tolerances();
    let (mut lo, mut hi) = (inside.clone(), outside.clone());
    for _ in 0..tol.max_bisection_iters {
        if (&hi - &lo).norm() <= tol.tol_boundary {
            break;
        }
        let mid = (&lo + &hi) * 0.5;
        if oracle.set().contains(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if oracle.capabilities().exact_projection {
        Ok(oracle.distance_and_project(&hi)?.1)
    } else {
        Ok(lo)
    }
}

/// One attempt of the boundary-of-interior case with a given starting `eps`.
fn case3(oracle: &SetOracle, x: &Point, s0: &Point, r0: f64, r: f64, eps_start: f64, opts: &CoverOptions) -> Result<CoverTrace> {
    let mut eps = eps_start;
    let mut z = None;
    for _ in 0..=8 {
        z = oracle.interior_probe(s0, eps)?;
        if z.is_some() {
            break;
        }
        eps *= 0.5;
    }
    let z = z.ok_or_else(|| Error::InteriorProbeExhausted { at: s0.iter().copied().collect() })?;
    let s_eps = boundary_on_segment(oracle, &z, x)?;
    let to_x = x - &s_eps;
    let to_x_norm = to_x.norm();
    let dirs = normal_directions(oracle, &s_eps, opts.normal_budget, opts.seed)?;
    let at = || s_eps.iter().copied().collect::<Vec<f64>>();
    if dirs.is_empty() && !oracle.capabilities().analytic_normals {
        return Err(Error::NormalSearchFailed { at: at() });
    }
    let mut best: Option<(f64, UnitVector)> = None;
    for d in dirs {
        if !realized_by_sphere(oracle, &s_eps, &d, r)? {
            continue;
        }
        let score = if to_x_norm > 0.0 { d.dot(&to_x) / to_x_norm } else { 0.0 };
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, d));
        }
    }
    let zeta = best.ok_or_else(|| Error::ExtendedConditionViolated { at: at() })?.1;
    let y = &s_eps + zeta.as_point() * r;
    let dvec = &y - x;
    let d = dvec.norm();
    let xi = &z - x;
    let claim2 = xi.dot(zeta.as_point()) / xi.norm() < eps / (2.0 * r) + oracle.tolerances().tol_emptiness;

    let (case, center, r_eps, claim1, claim3) = if d <= oracle.tolerances().tol_boundary {
        (CoverCase::Case3YEqX, x.clone(), None, None, None)
    } else if d < r {
        (CoverCase::Case3YNear, x + &dvec * (0.5 * r / d), None, None, None)
    } else {
        let r_eps = r_epsilon(r0, d, r)?;
        let c1 = verify_claim1(x, r0, &y, r, r_eps, opts.claim1_samples, opts.seed);
        (CoverCase::Case3YFar, x + &dvec * (0.5 * r / d), Some(r_eps), Some(c1), Some(r_eps > 0.5 * r))
    };
    let mut trace = base_trace(x, case, s0, r0, center, r);
    trace.eps = Some(eps);
    trace.z_eps = Some(z);
    trace.s_eps = Some(s_eps);
    trace.y_eps = Some(y);
    trace.zeta_eps = Some(zeta);
    trace.r_eps = r_eps;
    trace.claim1_ok = claim1;
    trace.claim2_ok = Some(claim2);
    trace.claim3_ok = claim3;
    finish(oracle, trace)
}

/// Builds a closed ball of radius `r / 2` containing `x` and missing the set,
/// following the three-case construction. The set is assumed to satisfy the
/// extended exterior `r`-sphere condition; where it does not, the error
/// names the offending boundary point.
pub fn cover_point(oracle: &SetOracle, x: &Point, r: f64) -> Result<CoverTrace> {
    cover_point_with(oracle, x, r, &CoverOptions::default())
}

pub fn cover_point_with(oracle: &SetOracle, x: &Point, r: f64, opts: &CoverOptions) -> Result<CoverTrace> {
    oracle.check_dim(x)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    if oracle.contains(x)? {
        return Err(Error::PointInSet);
    }
    let (r0, s0) = oracle.distance_and_project(x)?;
    if r0 == 0.0 {
        return Err(Error::PointInSet);
    }
    if r0 > 0.5 * r {
        return finish(oracle, base_trace(x, CoverCase::Case1, &s0, r0, x.clone(), r));
    }
    let class = oracle.classify_boundary(&s0, oracle.tolerances().classify_scale())?;
    if class == BoundaryClass::ThinBoundary {
        let zeta0 = UnitVector::new(x - &s0)?;
        if !realized_by_sphere(oracle, &s0, &zeta0, r)? {
            return Err(Error::ExtendedConditionViolated { at: s0.iter().copied().collect() });
        }
        let center = x + zeta0.as_point() * (0.5 * r);
        let tangent_center = &s0 + zeta0.as_point() * r;
        let lemma = (&center - &tangent_center).norm() <= (r - r0) - 0.5 * r + oracle.tolerances().tol_emptiness;
        let mut trace = base_trace(x, CoverCase::Case2, &s0, r0, center, r);
        trace.zeta0 = Some(zeta0);
        trace.lemma_ok = Some(lemma);
        let trace = finish(oracle, trace)?;
        if !trace.verified {
            return Err(Error::VerificationFailed { deficit: 0.5 * r - trace.center_distance });
        }
        return Ok(trace);
    }
    let eps0 = r0.powi(3) / (4.0 * r * r);
    let first = case3(oracle, x, &s0, r0, r, eps0, opts)?;
    if first.verified && first.claims_hold() {
        return Ok(first);
    }
    let second = case3(oracle, x, &s0, r0, r, eps0 / 4.0, opts)?;
    if second.verified {
        return Ok(second);
    }
    Err(Error::VerificationFailed { deficit: 0.5 * r - second.center_distance })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShrunkBranch {
    /// `y_x` is within `r'` of `x`: the ball is centered at `y_x`.
    Centered,
    /// The ball is slid from `x` towards `y_x`.
    Shifted,
}

/// A ball of radius `r' < r/2` built from the `r/2` construction on cl(int S).
#[derive(Clone, Debug, Serialize)]
pub struct ShrunkTrace {
    #[serde(with = "serde_point")]
    pub x: Point,
    pub branch: ShrunkBranch,
    #[serde(with = "serde_point")]
    pub y_x: Point,
    pub ball: Ball,
    pub verified: bool,
    pub center_distance: f64,
    pub upstream: CoverTrace,
}

/// Ball of radius `r_prime` containing `x` inside the complement of a regular
/// closed set.
pub fn cover_point_regular_closed(oracle: &SetOracle, x: &Point, r: f64, r_prime: f64) -> Result<ShrunkTrace> {
    oracle.check_dim(x)?;
    if !(r_prime > 0.0 && r_prime < 0.5 * r) {
        return Err(Error::OutOfRegime(format!("r' = {r_prime} must lie in (0, r/2) with r = {r}")));
    }
    if oracle.is_regular_closed() != Some(true) {
        return Err(Error::NotRegularClosed);
    }
    if oracle.contains(x)? {
        return Err(Error::PointInSet);
    }
    let closure = oracle.closure_of_interior()?;
    let upstream = cover_point(&closure, x, r)?;
    let y_x = upstream.ball.center.clone();
    let v = &y_x - x;
    let dist = v.norm();
    let (branch, center) = if dist < r_prime {
        (ShrunkBranch::Centered, y_x.clone())
    } else {
        (ShrunkBranch::Shifted, x + v * (r_prime / dist))
    };
    let center_distance = oracle.distance(&center)?;
    let ball = Ball::closed(center, r_prime);
    let verified = center_distance >= r_prime - oracle.tolerances().tol_emptiness;
    Ok(ShrunkTrace { x: x.clone(), branch, y_x, ball, verified, center_distance, upstream })
}

/// Axis-aligned lattice `lo:hi:step` per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub axes: Vec<(f64, f64, f64)>,
}

impl FromStr for Grid {
    type Err = Error;

    /// Parses `lo:hi:step` axis specs joined by `x`, e.g. `0:6:0.1x-1:1:0.05`.
    fn from_str(s: &str) -> Result<Self> {
        let mut axes = Vec::new();
        for part in s.split('x') {
            let nums: Vec<&str> = part.trim().split(':').collect();
            if nums.len() != 3 {
                return Err(Error::InvalidArgument(format!("axis spec `{part}` is not lo:hi:step")));
            }
            let parse = |t: &str| {
                t.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad number `{t}` in grid")))
            };
            let (lo, hi, step) = (parse(nums[0])?, parse(nums[1])?, parse(nums[2])?);
            if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0 && lo <= hi) {
                return Err(Error::InvalidArgument(format!("axis spec `{part}` needs lo <= hi and step > 0")));
            }
            axes.push((lo, hi, step));
        }
        Ok(Grid { axes })
    }
}

impl Grid {
    pub fn uniform(dim: usize, lo: f64, hi: f64, step: f64) -> Self {
        Grid { axes: vec![(lo, hi, step); dim] }
    }

    /// Lattice points in row-major order (first axis slowest). A single axis
    /// spec is used for every coordinate.
    pub fn points(&self, dim: usize) -> Result<Vec<Point>> {
        let axes: Vec<(f64, f64, f64)> = match self.axes.len() {
            1 => vec![self.axes[0]; dim],
            k if k == dim => self.axes.clone(),
            k => return Err(Error::DimensionMismatch { expected: dim, found: k }),
        };
        let ticks: Vec<Vec<f64>> = axes
            .iter()
            .map(|&(lo, hi, step)| {
                let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|k| lo + step * k as f64).collect()
            })
            .collect();
        let total: usize = ticks.iter().map(|t| t.len()).product();
        if total > 50_000_000 {
            return Err(Error::InvalidArgument(format!("grid has {total} points")));
        }
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            out.push(Point::from_iterator(dim, idx.iter().enumerate().map(|(a, &i)| ticks[a][i])));
            for a in (0..dim).rev() {
                idx[a] += 1;
                if idx[a] < ticks[a].len() {
                    break;
                }
                idx[a] = 0;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverFailure {
    pub index: usize,
    #[serde(with = "serde_point")]
    pub x: Point,
    pub reason: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CoverSummary {
    pub grid_points: usize,
    pub exterior_points: usize,
    pub verified: usize,
    pub unverified: usize,
    pub failed: usize,
    pub cases: BTreeMap<String, usize>,
    pub failure_reasons: BTreeMap<String, usize>,
}

impl CoverSummary {
    pub fn all_verified(&self) -> bool {
        self.failed == 0 && self.unverified == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverRegion {
    pub traces: Vec<CoverTrace>,
    pub failures: Vec<CoverFailure>,
    pub summary: CoverSummary,
}

/// Runs [`cover_point`] on every grid point outside the set. Per-point errors
/// are collected, never fatal; output order follows the grid.
pub fn cover_region(oracle: &SetOracle, r: f64, grid: &Grid) -> Result<CoverRegion> {
    cover_region_with(oracle, r, grid, &CoverOptions::default())
}

pub fn cover_region_with(oracle: &SetOracle, r: f64, grid: &Grid, opts: &CoverOptions) -> Result<CoverRegion> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let points = grid.points(oracle.dimension())?;
    let grid_points = points.len();
    let exterior: Vec<(usize, Point)> =
        points.into_iter().enumerate().filter(|(_, p)| !oracle.set().contains(p)).collect();
    let results: Vec<(usize, Point, Result<CoverTrace>)> = exterior
        .into_par_iter()
        .map(|(i, p)| {
            let res = cover_point_with(oracle, &p, r, opts);
            (i, p, res)
        })
        .collect();
    let mut summary = CoverSummary { grid_points, exterior_points: results.len(), ..Default::default() };
    let mut traces = Vec::new();
    let mut failures = Vec::new();
    for (index, x, res) in results {
        match res {
            Ok(t) => {
                *summary.cases.entry(t.case.as_str().to_string()).or_default() += 1;
                if t.verified {
                    summary.verified += 1;
                } else {
                    summary.unverified += 1;
                }
                traces.push(t);
            }
            Err(e) => {
                summary.failed += 1;
                *summary.failure_reasons.entry(e.reason().to_string()).or_default() += 1;
                failures.push(CoverFailure { index, x, reason: e.reason().to_string(), message: e.to_string() });
            }
        }
    }
    Ok(CoverRegion { traces, failures, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use crate::sets::{ClosedBall, DiskWithSegment, Line, Segment};

    fn disk() -> SetOracle {
        SetOracle::from_set(ClosedBall::unit_disk())
    }

    #[test]
    fn far_point_is_case1() {
        let t = cover_point(&disk(), &point(&[3.0, 0.0]), 1.0).unwrap();
        assert_eq!(t.case, CoverCase::Case1);
        assert_eq!(t.ball.center, point(&[3.0, 0.0]));
        assert_eq!(t.ball.radius, 0.5);
        assert!(t.verified);
    }

    #[test]
    fn line_point_is_case2() {
        let o = SetOracle::from_set(Line::x_axis());
        let t = cover_point(&o, &point(&[0.0, 0.3]), 1.0).unwrap();
        assert_eq!(t.case, CoverCase::Case2);
        assert!((&t.ball.center - point(&[0.0, 0.8])).norm() < 1e-15);
        assert!(t.verified && t.lemma_ok == Some(true));
    }

    #[test]
    fn near_disk_is_case3_near() {
        let t = cover_point(&disk(), &point(&[1.2, 0.0]), 1.0).unwrap();
        assert_eq!(t.case, CoverCase::Case3YNear);
        assert!((&t.ball.center - point(&[1.7, 0.0])).norm() < 1e-2);
        assert!(t.verified && t.claim2_ok == Some(true));
        assert!(t.eps.unwrap() <= 0.008 / 4.0);
    }

    #[test]
    fn r_epsilon_values() {
        assert!((r_epsilon(0.5, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((r_epsilon(0.5, 1.1, 1.0).unwrap() - 0.275 / 0.46).abs() < 1e-12);
        assert!((r_epsilon(0.5, 1.2, 1.0).unwrap() - 0.3 / 0.69).abs() < 1e-12);
        assert!(matches!(r_epsilon(0.5, 0.9, 1.0), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn claim1_samples() {
        let x = point(&[0.0, 0.0]);
        assert!(verify_claim1(&x, 0.5, &point(&[1.0, 0.0]), 1.0, 1.0, 10_000, 0));
        let r_eps = r_epsilon(0.5, 1.1, 1.0).unwrap();
        assert!(verify_claim1(&x, 0.5, &point(&[1.1, 0.0]), 1.0, r_eps, 10_000, 0));
        assert!(!verify_claim1(&x, 0.5, &point(&[1.2, 0.0]), 1.0, 0.6, 10_000, 0));
    }

    #[test]
    fn shrunk_ball_examples() {
        let t = cover_point_regular_closed(&disk(), &point(&[1.2, 0.0]), 1.0, 0.4).unwrap();
        assert_eq!(t.branch, ShrunkBranch::Shifted);
        assert!((&t.ball.center - point(&[1.6, 0.0])).norm() < 1e-2);
        assert!(t.verified);
        let t = cover_point_regular_closed(&disk(), &point(&[2.5, 0.0]), 1.0, 0.4).unwrap();
        assert_eq!(t.branch, ShrunkBranch::Centered);
        assert_eq!(t.ball.center, point(&[2.5, 0.0]));
        let ex2 = SetOracle::from_set(
            DiskWithSegment::new(ClosedBall::unit_disk(), Segment::new(point(&[1.0, 0.0]), point(&[2.0, 0.0])).unwrap())
                .unwrap(),
        );
        assert!(matches!(
            cover_point_regular_closed(&ex2, &point(&[1.5, 0.01]), 1.0, 0.4),
            Err(Error::NotRegularClosed)
        ));
        assert!(matches!(cover_point_regular_closed(&disk(), &point(&[2.5, 0.0]), 1.0, 0.5), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn grid_parsing() {
        let g: Grid = "0:6:0.1x-1:1:0.05".parse().unwrap();
        assert_eq!(g.axes, vec![(0.0, 6.0, 0.1), (-1.0, 1.0, 0.05)]);
        assert_eq!(g.points(2).unwrap().len(), 61 * 41);
        let g: Grid = "-2:2:0.1".parse().unwrap();
        let pts = g.points(2).unwrap();
        assert_eq!(pts.len(), 41 * 41);
        assert_eq!(pts[1], point(&[-2.0, -1.9]));
        assert!("1:0:0.1".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
    }

    #[test]
    fn point_in_set_rejected() {
        assert!(matches!(cover_point(&disk(), &point(&[0.2, 0.0]), 1.0), Err(Error::PointInSet)));
    }
}
