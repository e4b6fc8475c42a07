//! Library results against independent brute-force computations.

use proxgeom::cover::r_epsilon;
use proxgeom::gallery::make_gallery_set;
use proxgeom::tightness::simplex_centers;
use proxgeom::{point, Point, SetOracle};
use serde_json::Value;

fn gallery(id: &str) -> SetOracle {
    make_gallery_set(id, &Value::Null).unwrap()
}

/// Nearest of a dense family of points.
fn brute_min(p: &Point, pts: impl Iterator<Item = Point>) -> f64 {
    pts.map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min)
}

fn dense_curve(t0: f64, t1: f64, n: usize, f: impl Fn(f64) -> [f64; 2]) -> impl Iterator<Item = Point> {
    (0..=n).map(move |k| {
        let c = f(t0 + (t1 - t0) * k as f64 / n as f64);
        point(&c)
    })
}

#[test]
fn projection_examples() {
    let ex2 = gallery("example2");
    let (d, q) = ex2.distance_and_project(&point(&[1.5, 1.0])).unwrap();
    assert!((d - 0.802776).abs() < 1e-6);
    assert!((q - point(&[0.83205, 0.55470])).norm() < 1e-5);
    let (d, q) = gallery("line").distance_and_project(&point(&[2.0, -3.0])).unwrap();
    assert_eq!(d, 3.0);
    assert_eq!(q, point(&[2.0, 0.0]));
}

#[test]
fn exponential_curves_against_dense_scan() {
    let o = gallery("example1");
    let probes = [[0.3, 0.2], [-2.0, 0.0], [1.0, 5.0], [0.0, -0.5], [-1.0, 3.0], [2.0, 0.1]];
    for p in probes {
        let p = point(&p);
        let upper = dense_curve(-8.0, 4.0, 400_000, |t| [t, t.exp()]);
        let lower = dense_curve(-8.0, 4.0, 400_000, |t| [t, -t.exp()]);
        let brute = brute_min(&p, upper).min(brute_min(&p, lower));
        let d = o.distance(&p).unwrap();
        assert!(d <= brute + 1e-12 && brute - d < 1e-4, "{p}: {d} vs {brute}");
    }
}

#[test]
fn two_ball_complement_against_dense_scan() {
    let o = gallery("complement_of_balls");
    for p in [[0.0, 0.0], [-1.0, 0.3], [0.5, -0.7], [0.1, 0.8]] {
        let p = point(&p);
        let circles = (0..2).flat_map(|i| {
            let cx = if i == 0 { -0.8 } else { 0.8 };
            dense_curve(0.0, std::f64::consts::TAU, 200_000, move |t| [cx + 1.2 * t.cos(), 1.2 * t.sin()])
        });
        let brute = brute_min(&p, circles.filter(|q| o.contains(q).unwrap()));
        let d = o.distance(&p).unwrap();
        assert!(d <= brute + 1e-12 && brute - d < 1e-4, "{p}: {d} vs {brute}");
    }
}

#[test]
fn pinched_slab_against_dense_scan() {
    let o = gallery("example3_surrogate");
    let g = |t: f64| 1.0 / (1.0 + 0.5 * t * t);
    for p in [[1.0, 0.0], [0.3, 0.9], [-0.2, 0.1], [4.0, 0.02], [0.5, 1.5]] {
        let p = point(&p);
        let pieces = dense_curve(0.0, 8.0, 200_000, move |t| [t, g(t)])
            .chain(dense_curve(0.0, 8.0, 200_000, move |t| [t, -g(t)]))
            .chain(dense_curve(std::f64::consts::FRAC_PI_2, 1.5 * std::f64::consts::PI, 200_000, |t| [t.cos(), t.sin()]))
            .chain(dense_curve(-3.0, 0.0, 100_000, |t| [t, 1.0]))
            .chain(dense_curve(-3.0, 0.0, 100_000, |t| [t, -1.0]));
        let brute = brute_min(&p, pieces);
        let d = o.distance(&p).unwrap();
        assert!(d <= brute + 1e-12 && brute - d < 1e-4, "{p}: {d} vs {brute}");
    }
}

#[test]
fn boundary_samples_lie_on_the_sets() {
    let disk = gallery("disk").boundary_sample(4, 0).unwrap();
    assert_eq!(disk.len(), 4);
    assert!(disk.iter().all(|p| (p.norm() - 1.0).abs() <= 1e-9));
    let line = gallery("line").boundary_sample(3, 0).unwrap();
    assert!(line.len() == 3 && line.iter().all(|p| p[1].abs() <= 1e-9 && p[0].abs() <= 3.0));
    let curves = gallery("example1").boundary_sample(100, 0).unwrap();
    assert_eq!(curves.len(), 100);
    assert!(curves.iter().all(|p| (p[1].abs() - p[0].exp()).abs() <= 1e-9 * p[1].abs().max(1.0) && p[0].abs() <= 5.0));
}

#[test]
fn curvature_minimum_of_exponential() {
    // radius of curvature of t -> (t, e^t), minimized by golden section
    let rho = |t: f64| (1.0 + (2.0 * t).exp()).powf(1.5) / t.exp();
    let (mut a, mut b) = (-3.0, 3.0);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if rho(c) < rho(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let t = 0.5 * (a + b);
    assert!((t + 0.5 * 2f64.ln()).abs() < 1e-7);
    assert!((rho(t) - 1.5 * 3f64.sqrt()).abs() < 1e-12);
}

#[test]
fn telescoping_sums() {
    for n in 2..=25usize {
        for i in 0..=n {
            let direct: f64 = (i + 1..=n).map(|k| 1.0 / ((k * (k + 1)) as f64)).sum();
            let closed = 1.0 / (i + 1) as f64 - 1.0 / (n + 1) as f64;
            assert!((direct - closed).abs() < 1e-15);
        }
    }
}

#[test]
fn simplex_centers_in_the_plane_are_outside_the_balls_at_the_origin() {
    let cfg = simplex_centers(2, 1.0).unwrap();
    // brute force over a grid of candidate centers: no ball of the union
    // contains the origin, so no inscribed ball can pass through it
    let mut covered = false;
    for i in 0..=140 {
        for j in 0..=140 {
            let c = point(&[-0.7 + 0.01 * i as f64, -0.7 + 0.01 * j as f64]);
            let room = cfg.centers.iter().map(|k| 1.0 - (&c - k).norm()).fold(f64::NEG_INFINITY, f64::max);
            if room > 0.0 && c.norm() <= room {
                covered = true;
            }
        }
    }
    assert!(!covered);
    assert!(cfg.centers.iter().all(|c| c.norm() > 1.0));
}

#[test]
fn r_epsilon_table() {
    for (d, expected) in [(1.0, 1.0), (1.1, 0.597826), (1.2, 0.434783)] {
        assert!((r_epsilon(0.5, d, 1.0).unwrap() - expected).abs() < 1e-6);
    }
}
