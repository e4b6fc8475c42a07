//! Separation between the thin boundary and cl(int S), and the resulting
//! prox-regularity radius estimate.

use rayon::prelude::*;
use serde::Serialize;

use crate::conditions::{check_condition, ConditionKind};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::oracle::SetOracle;

/// `rho`, `r'`, `r_S` and `min{rho, r', r_S/4}`. Non-finite values serialize
/// as `null`; `r_estimate` is present exactly when `r_S > 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityEstimate {
    pub rho: f64,
    pub r_prime: f64,
    #[serde(rename = "r_S")]
    pub r_s: f64,
    pub r_estimate: Option<f64>,
}

impl RegularityEstimate {
    pub fn new(rho: f64, r_prime: f64, r_s: f64) -> Result<Self> {
        let r_estimate = if r_s > 0.0 { Some(prox_radius_estimate(rho, r_prime, r_s)?) } else { None };
        Ok(RegularityEstimate { rho, r_prime, r_s, r_estimate })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// `min{rho, r_prime, r_s / 4}`; every argument must be positive.
pub fn prox_radius_estimate(rho: f64, r_prime: f64, r_s: f64) -> Result<f64> {
    for (name, v) in [("rho", rho), ("r_prime", r_prime), ("r_S", r_s)] {
        if v.is_nan() || v <= 0.0 {
            return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(rho.min(r_prime).min(0.25 * r_s))
}

/// Distance from the thin boundary to cl(int S): the smaller of the two
/// sampled one-sided distances, refined by alternating projections from the
/// closest pair. `+inf` when either part is empty.
pub fn r_s_distance(oracle: &SetOracle, budget: usize, seed: u64) -> Result<f64> {
    let closure = oracle.closure_of_interior()?;
    let thin = oracle.thin_part()?;
    if thin.is_empty() || closure.is_empty() {
        return Ok(f64::INFINITY);
    }
    let from_thin = thin.boundary_sample(budget, seed)?;
    let from_closure = closure.boundary_sample(budget, seed.wrapping_add(1))?;
    let pairs = |pts: &[Point], to: &SetOracle| -> Result<Option<(f64, Point)>> {
        let best = pts
            .par_iter()
            .map(|p| Ok((to.distance(p)?, p.clone())))
            .collect::<Result<Vec<(f64, Point)>>>()?
            .into_iter()
            .min_by(|a, b| a.0.total_cmp(&b.0));
        Ok(best)
    };
    let mut best = f64::INFINITY;
    let mut start = None;
    if let Some((d, b)) = pairs(&from_thin, &closure)? {
        best = d;
        start = Some(b);
    }
    if let Some((d, a)) = pairs(&from_closure, &thin)? {
        if d < best {
            best = d;
            start = Some(thin.distance_and_project(&a)?.1);
        }
    }
    if let Some(mut b) = start {
        for _ in 0..200 {
            let (_, a) = closure.distance_and_project(&b)?;
            let (d, next) = thin.distance_and_project(&a)?;
            let improved = d < best - 1e-15;
            best = best.min(d);
            b = next;
            if !improved {
                break;
            }
        }
    }
    Ok(best)
}

/// Largest radius in `[lo, hi]` at which `kind` is not refuted on samples,
/// by `steps` bisection steps. Errors when `lo` already fails.
#[allow(clippy::too_many_arguments)]
pub fn certified_radius(
    oracle: &SetOracle,
    kind: ConditionKind,
    lo: f64,
    hi: f64,
    steps: usize,
    samples: usize,
    normal_budget: usize,
    seed: u64,
) -> Result<f64> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidArgument("need 0 < lo < hi".into()));
    }
    let pass = |r: f64| check_condition(oracle, kind, r, samples, normal_budget, seed).map(|rep| rep.pass);
    if !pass(lo)? {
        return Err(Error::OutOfRegime(format!("{kind} already refuted at r = {lo}")));
    }
    if pass(hi)? {
        return Ok(hi);
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..steps {
        let mid = 0.5 * (a + b);
        if pass(mid)? {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(a)
}

/// Budgets for [`estimate`].
#[derive(Clone, Debug)]
pub struct EstimateOptions {
    pub samples: usize,
    pub normal_budget: usize,
    pub seed: u64,
    /// Bracket used when `rho` or `r'` must be searched for.
    pub bracket: (f64, f64),
    pub steps: usize,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions { samples: 2000, normal_budget: 16, seed: 0, bracket: (1e-3, 10.0), steps: 10 }
    }
}

/// Fills in missing `rho` (prox-regularity of cl(int S)) and `r'` (extended
/// condition on S) by bisection, then combines them with `r_S`.
pub fn estimate(oracle: &SetOracle, rho: Option<f64>, r_prime: Option<f64>, opts: &EstimateOptions) -> Result<RegularityEstimate> {
    let (lo, hi) = opts.bracket;
    let rho = match rho {
        Some(v) => v,
        None => {
            let closure = oracle.closure_of_interior()?;
            if closure.is_empty() {
                f64::INFINITY
            } else {
                certified_radius(&closure, ConditionKind::ProxRegular, lo, hi, opts.steps, opts.samples, opts.normal_budget, opts.seed)?
            }
        }
    };
    let r_prime = match r_prime {
        Some(v) => v,
        None => certified_radius(oracle, ConditionKind::ExtendedExterior, lo, hi, opts.steps, opts.samples, opts.normal_budget, opts.seed)?,
    };
    let r_s = r_s_distance(oracle, opts.samples, opts.seed)?;
    RegularityEstimate::new(rho, r_prime, r_s)
}
