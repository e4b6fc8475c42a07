use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use super::{sample_pieces, slack, unit, BoundaryClass, Capabilities, ClosedSet, Empty, Piece, FEATURE_TOL};
use crate::error::{Error, Result};
use crate::geometry::{nearest_candidate, point, Point, UnitVector, Window};

/// Bisection for a sign change of `f` on `[lo, hi]`, run to machine precision.
fn bisect_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
fn golden_min(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if hi - lo <= 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// The two graphs `y = e^x` and `y = -e^x`.
#[derive(Clone, Debug, Default)]
pub struct ExpCurves;

impl ExpCurves {
    pub fn new() -> Self {
        ExpCurves
    }

    /// Nearest point of the upper graph to `(a, b)`.
    ///
    /// Stationary points solve `f(t) = t - a + (e^t - b) e^t = 0`. Since
    /// `f'(t) = 1 + 2e^{2t} - b e^t` vanishes at most twice, the search
    /// bracket splits into monotone pieces, each holding at most one root.
    fn project_upper(a: f64, b: f64) -> Point {
        let d = (a.exp() - b).abs();
        if d == 0.0 {
            return point(&[a, a.exp()]);
        }
        let lo = a - d;
        let mut hi = a + d;
        let cap = b.abs() + d;
        if cap > 0.0 {
            hi = hi.min(cap.ln());
        }
        let hi = hi.max(lo);
        let f = |t: f64| t - a + (t.exp() - b) * t.exp();
        let mut cuts = vec![lo];
        if b * b > 8.0 && b > 0.0 {
            let s = (b * b - 8.0).sqrt();
            for u in [(b - s) / 4.0, (b + s) / 4.0] {
                let t = u.ln();
                if t > lo && t < hi {
                    cuts.push(t);
                }
            }
        }
        cuts.push(hi);
        let mut ts = vec![lo, hi, a];
        for w in cuts.windows(2) {
            let (l, h) = (w[0], w[1]);
            let (fl, fh) = (f(l), f(h));
            if fl == 0.0 {
                ts.push(l);
            } else if fh == 0.0 {
                ts.push(h);
            } else if (fl < 0.0) != (fh < 0.0) {
                ts.push(bisect_root(f, l, h));
            }
        }
        let p = point(&[a, b]);
        nearest_candidate(&p, ts.into_iter().map(|t| point(&[t, t.exp()]))).expect("candidates")
    }
}

impl ClosedSet for ExpCurves {
    fn dimension(&self) -> usize {
        2
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ANALYTIC
    }

    fn contains(&self, p: &Point) -> bool {
        let e = p[0].exp();
        (p[1].abs() - e).abs() <= slack(p) * (1.0 + e)
    }

    fn project(&self, p: &Point) -> Option<Point> {
        let up = Self::project_upper(p[0], p[1]);
        let down = Self::project_upper(p[0], -p[1]);
        let down = point(&[down[0], -down[1]]);
        nearest_candidate(p, [up, down])
    }

    fn interior_contains(&self, _p: &Point) -> Option<bool> {
        Some(false)
    }

    fn normals(&self, x: &Point) -> Option<Vec<UnitVector>> {
        let e = x[0].exp();
        let n = if x[1] >= 0.0 { unit(&[-e, 1.0]) } else { unit(&[e, 1.0]) };
        Some(vec![n.clone(), n.negated()])
    }

    fn boundary_class(&self, _x: &Point) -> Option<BoundaryClass> {
        Some(BoundaryClass::ThinBoundary)
    }

    fn sample_boundary(&self, budget: usize, rng: &mut ChaCha8Rng, window: &Window) -> Option<Vec<Point>> {
        let (lo, hi) = (window.lo(0), window.hi(0));
        let mut pieces = Vec::new();
        for sign in [1.0, -1.0] {
            let ybound = if sign > 0.0 { window.hi(1) } else { -window.lo(1) };
            if ybound <= 0.0 {
                continue;
            }
            let t1 = hi.min(ybound.ln());
            if t1 <= lo {
                continue;
            }
            pieces.push(Piece {
                len: t1 - lo,
                at: Box::new(move |u| {
                    let t = lo + (t1 - lo) * u;
                    point(&[t, sign * t.exp()])
                }),
            });
        }
        Some(sample_pieces(&pieces, budget, rng))
    }

    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(Empty::new(2)))
    }

    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.clone()))
    }

    fn is_regular_closed(&self) -> Option<bool> {
        Some(false)
    }
}

/// The two curves `(t, ±g(t))`, `t >= 0`, with `g(t) = 1 / (1 + c t^2)`.
/// They start at `(0, ±1)` and close in on the horizontal axis.
#[derive(Clone, Debug)]
pub struct Whiskers {
    c: f64,
}

impl Whiskers {
    pub fn new(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidArgument("whisker decay must be positive".into()));
        }
        Ok(Whiskers { c })
    }

    pub fn decay(&self) -> f64 {
        self.c
    }

    pub fn g(&self, t: f64) -> f64 {
        1.0 / (1.0 + self.c * t * t)
    }

    pub fn dg(&self, t: f64) -> f64 {
        let q = 1.0 + self.c * t * t;
        -2.0 * self.c * t / (q * q)
    }

    fn project_upper(&self, a: f64, b: f64) -> Point {
        let t0 = a.max(0.0);
        let d = ((t0 - a).powi(2) + (self.g(t0) - b).powi(2)).sqrt();
        let lo = (a - d).max(0.0);
        let hi = (a + d).max(lo);
        let psi = |t: f64| (t - a).powi(2) + (self.g(t) - b).powi(2);
        const STEPS: usize = 256;
        let h = (hi - lo) / STEPS as f64;
        let grid: Vec<f64> = (0..=STEPS).map(|k| lo + h * k as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| psi(t)).collect();
        let mut ts = vec![lo, hi, t0];
        for k in 0..=STEPS {
            let left = if k == 0 { f64::INFINITY } else { vals[k - 1] };
            let right = if k == STEPS { f64::INFINITY } else { vals[k + 1] };
            if vals[k] <= left && vals[k] <= right {
                let l = if k == 0 { grid[0] } else { grid[k - 1] };
                let r = if k == STEPS { grid[STEPS] } else { grid[k + 1] };
                let mut t = golden_min(&psi, l, r);
                // Newton polish on psi'
                for _ in 0..3 {
                    let (g, dg) = (self.g(t), self.dg(t));
                    let q = 1.0 + self.c * t * t;
                    let d2g = (6.0 * self.c * self.c * t * t - 2.0 * self.c) / (q * q * q);
                    let d1 = (t - a) + (g - b) * dg;
                    let d2 = 1.0 + dg * dg + (g - b) * d2g;
                    if d2 <= 0.0 {
                        break;
                    }
                    let next = (t - d1 / d2).clamp(l, r);
                    if psi(next) <= psi(t) {
                        t = next;
                    } else {
                        break;
                    }
                }
                ts.push(t);
            }
        }
        let p = point(&[a, b]);
        nearest_candidate(&p, ts.into_iter().map(|t| point(&[t, self.g(t)]))).expect("candidates")
    }

    pub(crate) fn pieces(&self, window: &Window) -> Vec<Piece> {
        let hi = window.hi(0);
        if hi <= 0.0 {
            return Vec::new();
        }
        [1.0, -1.0]
            .into_iter()
            .map(|sign| {
                let w = self.clone();
                Piece::curve(0.0, hi, move |t| point(&[t, sign * w.g(t)]))
            })
            .collect()
    }

    /// Normal generators at a whisker point; `None` if `x` is at a tip
    /// `(0, ±1)`.
    pub(crate) fn curve_normals(&self, x: &Point) -> Option<Vec<UnitVector>> {
        if x[0] <= FEATURE_TOL {
            return None;
        }
        let dg = self.dg(x[0]);
        let n = if x[1] >= 0.0 { unit(&[-dg, 1.0]) } else { unit(&[dg, 1.0]) };
        Some(vec![n.clone(), n.negated()])
    }
}

impl ClosedSet for Whiskers {
    fn dimension(&self) -> usize {
        2
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ANALYTIC
    }

    fn contains(&self, p: &Point) -> bool {
        let s = slack(p);
        p[0] >= -s && (p[1].abs() - self.g(p[0].max(0.0))).abs() <= s
    }

    fn project(&self, p: &Point) -> Option<Point> {
        let up = self.project_upper(p[0], p[1]);
        let down = self.project_upper(p[0], -p[1]);
        let down = point(&[down[0], -down[1]]);
        nearest_candidate(p, [up, down])
    }

    fn interior_contains(&self, _p: &Point) -> Option<bool> {
        Some(false)
    }

    fn normals(&self, x: &Point) -> Option<Vec<UnitVector>> {
        Some(self.curve_normals(x).unwrap_or_else(|| vec![unit(&[-1.0, 0.0]), unit(&[0.0, 1.0]), unit(&[0.0, -1.0])]))
    }

    fn boundary_class(&self, _x: &Point) -> Option<BoundaryClass> {
        Some(BoundaryClass::ThinBoundary)
    }

    fn sample_boundary(&self, budget: usize, rng: &mut ChaCha8Rng, window: &Window) -> Option<Vec<Point>> {
        Some(sample_pieces(&self.pieces(window), budget, rng))
    }

    fn closure_of_interior(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(Empty::new(2)))
    }

    fn thin_part(&self) -> Option<Arc<dyn ClosedSet>> {
        Some(Arc::new(self.clone()))
    }

    fn is_regular_closed(&self) -> Option<bool> {
        Some(false)
    }
}
