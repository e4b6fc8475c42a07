//! Deterministic sampling: Halton sequences, seeded RNGs, sphere and ball
//! directions, and budget allocation across boundary pieces.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geometry::Point;

const PRIMES: [u64; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131,
];

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * f;
        index /= base;
        f *= inv;
    }
    out
}

/// The `index`-th point of the `dim`-dimensional Halton sequence in [0,1)^dim.
/// Dimensions beyond the prime table reuse primes with a scrambled index.
pub fn halton(index: u64, dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|k| {
            let base = PRIMES[k % PRIMES.len()];
            let idx = index + (k / PRIMES.len()) as u64 * 7919;
            radical_inverse(idx, base)
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for sub-task `index` of a seeded run.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index.wrapping_add(1));
    r
}

/// Uniform direction on the unit sphere of R^n.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Point {
    loop {
        let v = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let norm = v.norm();
        if norm > 1e-12 {
            return v / norm;
        }
    }
}

/// Uniform point in the unit ball of R^n.
pub fn random_in_ball<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Point {
    let dir = random_direction(rng, n);
    let u: f64 = rng.random();
    dir * u.powf(1.0 / n as f64)
}

/// The first `count` low-discrepancy points of the open unit ball of R^n
/// (Halton points of the cube, rejected outside the ball). Above six
/// dimensions rejection is too wasteful, so a normalized cube point is scaled
/// by a radial coordinate instead.
pub fn halton_ball_points(n: usize, count: usize) -> Vec<Point> {
    if n > 6 {
        return (1..=count as u64)
            .map(|k| {
                let h = halton(k, n + 1);
                let v = DVector::from_iterator(n, h[..n].iter().map(|u| 2.0 * u - 1.0));
                let norm = v.norm().max(1e-12);
                v * (h[n].powf(1.0 / n as f64) * (1.0 - 1e-12) / norm)
            })
            .collect();
    }
    let mut out = Vec::with_capacity(count);
    let mut k = 1u64;
    while out.len() < count {
        let h = halton(k, n);
        k += 1;
        let v = DVector::from_iterator(n, h.iter().map(|u| 2.0 * u - 1.0));
        if v.norm() < 1.0 {
            out.push(v);
        }
    }
    out
}

/// Deterministic, roughly uniform directions on the unit sphere. In the plane
/// these are equally spaced angles; otherwise Halton points in the cube are
/// normalized.
pub fn sphere_directions(n: usize, count: usize) -> Vec<Point> {
    if n == 1 {
        return [1.0, -1.0].iter().take(count.max(1)).map(|&s| DVector::from_element(1, s)).collect();
    }
    if n == 2 {
        return (0..count)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / count as f64;
                DVector::from_vec(vec![a.cos(), a.sin()])
            })
            .collect();
    }
    let mut out = Vec::with_capacity(count);
    let mut k = 1u64;
    while out.len() < count {
        let h = halton(k, n);
        k += 1;
        let v = DVector::from_iterator(n, h.iter().map(|u| 2.0 * u - 1.0));
        let norm = v.norm();
        if norm < 1.0 && norm > 1e-3 {
            out.push(v / norm);
        }
    }
    out
}

/// Splits `budget` across pieces proportionally to `weights`
/// (largest-remainder rounding, ties to the lower index).
pub fn allocate(budget: usize, weights: &[f64]) -> Vec<usize> {
    let total: f64 = weights.iter().sum();
    if weights.is_empty() || total <= 0.0 {
        return vec![0; weights.len()];
    }
    let exact: Vec<f64> = weights.iter().map(|w| budget as f64 * w / total).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut rest = budget - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for i in order {
        if rest == 0 {
            break;
        }
        counts[i] += 1;
        rest -= 1;
    }
    counts
}

/// Stratified parameters in [0,1): `(k + phase) / count`, with a phase
/// drawn once from the rng.
pub fn stratified<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<f64> {
    let phase: f64 = rng.random();
    (0..count).map(|k| (k as f64 + phase) / count as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
    }

    #[test]
    fn allocation_sums_to_budget() {
        let c = allocate(10, &[1.0, 1.0, 1.0]);
        assert_eq!(c.iter().sum::<usize>(), 10);
        assert_eq!(c, vec![4, 3, 3]);
        assert_eq!(allocate(5, &[0.0, 0.0]), vec![0, 0]);
    }

    #[test]
    fn halton_ball_points_inside() {
        let pts = halton_ball_points(3, 500);
        assert_eq!(pts.len(), 500);
        assert!(pts.iter().all(|p| p.norm() < 1.0));
    }

    #[test]
    fn seeded_streams_repeat() {
        let a: Vec<u64> = (0..4).map(|_| substream(7, 3).random()).collect();
        let b: Vec<u64> = (0..4).map(|_| substream(7, 3).random()).collect();
        assert_eq!(a, b);
        let mut r = rng(1);
        let d = random_direction(&mut r, 5);
        assert!((d.norm() - 1.0).abs() < 1e-12);
    }
}
