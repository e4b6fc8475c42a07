//! Regular-simplex ball configurations and the largest closed ball through a
//! point inside a union of open balls.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{serde_point, Ball, Point};
use crate::sampling;
use crate::sets::{ClosedSet, ComplementOfOpenBalls};

/// `n + 1` centers of a regular simplex around the origin, each carrying an
/// open ball of radius `r`.
#[derive(Clone, Debug, Serialize)]
pub struct SimplexConfig {
    pub n: usize,
    pub r: f64,
    #[serde(serialize_with = "ser_points")]
    pub centers: Vec<Point>,
}

fn ser_points<S: serde::Serializer>(pts: &[Point], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(pts.len()))?;
    for p in pts {
        seq.serialize_element(p.as_slice())?;
    }
    seq.end()
}

impl SimplexConfig {
    pub fn balls(&self) -> Vec<Ball> {
        self.centers.iter().map(|c| Ball::open(c.clone(), self.r)).collect()
    }

    /// `n r / sqrt(n^2 - 1)`, the common norm of the centers.
    pub fn center_norm(&self) -> f64 {
        let n = self.n as f64;
        n * self.r / (n * n - 1.0).sqrt()
    }

    /// `n r / (2 sqrt(n^2 - 1))`.
    pub fn formula_radius(&self) -> f64 {
        0.5 * self.center_norm()
    }
}

/// `C_i = (-n r / sqrt(n(n-1))) (sqrt(i/(i+1)) e_i - sum_{k>i} e_k / sqrt(k(k+1)))`
/// with `e_0 = 0`.
pub fn simplex_centers(n: usize, r: f64) -> Result<SimplexConfig> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("simplex needs n >= 2, got {n}")));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let nf = n as f64;
    let scale = -nf * r / (nf * (nf - 1.0)).sqrt();
    let centers: Vec<Point> = (0..=n)
        .map(|i| {
            let mut c = Point::zeros(n);
            if i > 0 {
                c[i - 1] = (i as f64 / (i as f64 + 1.0)).sqrt();
            }
            for k in i + 1..=n {
                let kf = k as f64;
                c[k - 1] = -1.0 / (kf * (kf + 1.0)).sqrt();
            }
            c * scale
        })
        .collect();
    let cfg = SimplexConfig { n, r, centers };
    let norm = cfg.center_norm();
    let side = (&cfg.centers[0] - &cfg.centers[1]).norm();
    for (i, c) in cfg.centers.iter().enumerate() {
        debug_assert!((c.norm() - norm).abs() <= 1e-12 * norm, "norm of C_{i}");
        for d in &cfg.centers[i + 1..] {
            debug_assert!(((c - d).norm() - side).abs() <= 1e-12 * side);
        }
    }
    Ok(cfg)
}

/// Result of the inscribed-ball search.
#[derive(Clone, Debug, Serialize)]
pub struct InscribedBall {
    #[serde(with = "serde_point")]
    pub center: Point,
    pub radius: f64,
    /// Every sampled sphere direction at 0.999999 radius stayed in some ball.
    pub sampled_ok: bool,
}

struct Union<'a> {
    balls: &'a [Ball],
    complement: ComplementOfOpenBalls,
}

impl Union<'_> {
    /// Radius of the largest closed ball at `c` inside the closure of the union.
    fn room(&self, c: &Point) -> f64 {
        match self.complement.project(c) {
            Some(q) if self.inside(c) => (c - q).norm(),
            _ => 0.0,
        }
    }

    fn inside(&self, p: &Point) -> bool {
        self.balls.iter().any(|b| (p - &b.center).norm() < b.radius)
    }

    /// Penalized objective: room when `p` is inside the ball, decreasing
    /// with the violation otherwise.
    fn score(&self, c: &Point, p: &Point) -> f64 {
        let room = self.room(c);
        let gap = (c - p).norm() - room;
        if gap <= 0.0 {
            room
        } else {
            room - 4.0 * gap - 1.0
        }
    }
}

fn check_balls(balls: &[Ball], p: &Point) -> Result<()> {
    let first = balls.first().ok_or_else(|| Error::InvalidArgument("no balls".into()))?;
    for b in balls {
        if b.center.len() != first.center.len() {
            return Err(Error::DimensionMismatch { expected: first.center.len(), found: b.center.len() });
        }
    }
    if p.len() != first.center.len() {
        return Err(Error::DimensionMismatch { expected: first.center.len(), found: p.len() });
    }
    Ok(())
}

/// `sup{rho : exists c, p in B̄(c; rho) ⊆ ∪ B(c_i; r_i)}` by multistart
/// compass search; starts are `p`, the centers and the midpoints between `p`
/// and each center. Errors when `p` is outside the union.
pub fn max_inscribed_radius_through_point(balls: &[Ball], p: &Point, budget: usize) -> Result<InscribedBall> {
    check_balls(balls, p)?;
    let u = Union { balls, complement: ComplementOfOpenBalls::new(balls.to_vec())? };
    if !u.inside(p) {
        return Err(Error::PointOutsideUnion);
    }
    let mut starts = vec![p.clone()];
    for b in balls {
        starts.push(b.center.clone());
        starts.push((&b.center + p) * 0.5);
    }
    let scale = balls.iter().map(|b| b.radius).fold(0.0, f64::max);
    let n = p.len();
    let mut best: Option<(f64, Point)> = None;
    for start in starts {
        let mut c = start;
        let mut val = u.score(&c, p);
        let mut step = 0.25 * scale;
        while step > 1e-11 * scale {
            let mut moved = false;
            for axis in 0..n {
                for sign in [1.0, -1.0] {
                    let mut q = c.clone();
                    q[axis] += sign * step;
                    let v = u.score(&q, p);
                    if v > val {
                        c = q;
                        val = v;
                        moved = true;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| val > *b) {
            best = Some((val, c));
        }
    }
    let (val, center) = best.expect("at least one start");
    let radius = val.max(0.0);
    let sampled_ok = sampled_containment(&u, &center, radius, budget);
    Ok(InscribedBall { center, radius, sampled_ok })
}

fn sampled_containment(u: &Union<'_>, center: &Point, radius: f64, budget: usize) -> bool {
    sampling::sphere_directions(center.len(), budget.max(1))
        .into_iter()
        .all(|d| u.inside(&(center + d * (radius * 0.999_999))))
}

/// Exact search for the symmetric simplex configuration: centers along the
/// axis through the origin and `C_0` (and the opposite face center).
pub fn simplex_inscribed_radius(cfg: &SimplexConfig, budget: usize) -> Result<InscribedBall> {
    let balls = cfg.balls();
    let origin = Point::zeros(cfg.n);
    let u = Union { complement: ComplementOfOpenBalls::new(balls.clone())?, balls: &balls };
    if !u.inside(&origin) {
        return Err(Error::PointOutsideUnion);
    }
    let axis = &cfg.centers[0] / cfg.centers[0].norm();
    let reach = cfg.center_norm() + cfg.r;
    let f = |t: f64| u.score(&(&axis * t), &origin);
    let samples = 4000;
    let (mut t_best, mut v_best) = (0.0, f(0.0));
    for k in 0..=samples {
        let t = -reach + 2.0 * reach * k as f64 / samples as f64;
        let v = f(t);
        if v > v_best {
            t_best = t;
            v_best = v;
        }
    }
    // golden-section refinement around the best sample
    let h = 2.0 * reach / samples as f64;
    let (mut a, mut b) = (t_best - h, t_best + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let t = 0.5 * (a + b);
    let (t, v) = if f(t) >= v_best { (t, f(t)) } else { (t_best, v_best) };
    let center = &axis * t;
    let radius = v.max(0.0);
    let sampled_ok = sampled_containment(&u, &center, radius, budget);
    Ok(InscribedBall { center, radius, sampled_ok })
}

#[derive(Clone, Debug, Serialize)]
pub struct TightnessRow {
    pub n: usize,
    pub r: f64,
    pub formula_value: f64,
    pub measured_value: Option<f64>,
    pub abs_error: Option<f64>,
    /// `ok`, or the reason code of the failed measurement.
    pub status: String,
    /// `min_i |C_i| - r`; positive when the origin is outside every ball.
    pub origin_gap: f64,
}

impl TightnessRow {
    pub fn rel_error(&self) -> Option<f64> {
        self.abs_error.map(|e| e / self.formula_value)
    }
}

/// Parses `"3"` or `"2..10"` (inclusive).
pub fn parse_n_range(s: &str) -> Result<Vec<usize>> {
    let parse = |t: &str| {
        t.trim().parse::<usize>().map_err(|_| Error::InvalidArgument(format!("bad dimension `{t}`")))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if a < 2 || b < a || b > 50 {
        return Err(Error::InvalidArgument(format!("dimension range `{s}` must lie within 2..50")));
    }
    Ok((a..=b).collect())
}

/// One row per `n`, computed in parallel.
pub fn tightness_sweep(ns: &[usize], r: f64, budget: usize) -> Result<Vec<TightnessRow>> {
    let configs = ns.iter().map(|&n| simplex_centers(n, r)).collect::<Result<Vec<_>>>()?;
    Ok(configs
        .par_iter()
        .map(|cfg| {
            let formula_value = cfg.formula_radius();
            let origin_gap = cfg.centers.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min) - cfg.r;
            match simplex_inscribed_radius(cfg, budget) {
                Ok(ball) => TightnessRow {
                    n: cfg.n,
                    r: cfg.r,
                    formula_value,
                    measured_value: Some(ball.radius),
                    abs_error: Some((ball.radius - formula_value).abs()),
                    status: if ball.sampled_ok { "ok".into() } else { "containment-sample-failed".into() },
                    origin_gap,
                },
                Err(e) => TightnessRow {
                    n: cfg.n,
                    r: cfg.r,
                    formula_value,
                    measured_value: None,
                    abs_error: None,
                    status: e.reason().to_string(),
                    origin_gap,
                },
            }
        })
        .collect())
}

pub fn rows_to_csv(rows: &[TightnessRow]) -> String {
    let mut out = String::from("n,r,formula_value,measured_value,abs_error,status\n");
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.9}"));
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{:.9},{},{},{}",
            row.n,
            row.r,
            row.formula_value,
            opt(row.measured_value),
            opt(row.abs_error),
            row.status
        );
    }
    out
}
