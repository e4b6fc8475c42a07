//! Proximal normals and sampled checks of the exterior, extended exterior and
//! prox-regularity sphere conditions.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{serde_point, Point, UnitVector};
use crate::oracle::SetOracle;
use crate::sampling;
use crate::sets::BoundaryClass;

/// Tests whether the open ball of radius `r` tangent at `x` in direction
/// `zeta` misses the set, up to `tol_emptiness * max(1, r)`.
pub fn realized_by_sphere(oracle: &SetOracle, x: &Point, zeta: &Point, r: f64) -> Result<bool> {
    oracle.check_dim(x)?;
    if zeta.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: zeta.len() });
    }
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let u = UnitVector::new(zeta.clone())?;
    let center = x + u.as_point() * r;
    let d = oracle.distance(&center)?;
    Ok(d >= r - oracle.tolerances().tol_emptiness * r.max(1.0))
}

/// A proximal normal at `base` with its certified realization radius.
#[derive(Clone, Debug, Serialize)]
pub struct ProximalNormalCandidate {
    #[serde(with = "serde_point")]
    pub base: Point,
    pub dir: UnitVector,
    /// Constant of the proximal normal inequality, `1 / (2 * realized_radius)`.
    pub sigma: Option<f64>,
    /// Largest certified radius (to a factor of two); `inf` once the search
    /// reaches its cap.
    #[serde(serialize_with = "serialize_radius")]
    pub realized_radius: Option<f64>,
}

fn serialize_radius<S: Serializer>(r: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(v) if v.is_finite() => s.serialize_f64(*v),
        Some(_) => s.serialize_str("inf"),
        None => s.serialize_none(),
    }
}

fn dedup_push(out: &mut Vec<UnitVector>, u: UnitVector) {
    if out.iter().all(|v| (v.as_point() - u.as_point()).norm() > 1e-6) {
        out.push(u);
    }
}

/// Unit proximal normal directions at a boundary point `x`.
///
/// Analytic sets return their cone generators, topped up with normalized
/// pairwise sums (still in the convex cone) up to `budget`. Otherwise
/// directions are discovered by probing: for `q = x + t d` the direction
/// `q - proj(q)` is kept if the ball of radius `t` tangent at `x` in that
/// direction is empty.
pub fn normal_directions(oracle: &SetOracle, x: &Point, budget: usize, seed: u64) -> Result<Vec<UnitVector>> {
    oracle.check_dim(x)?;
    if budget == 0 {
        return Err(Error::InvalidArgument("normal budget must be at least 1".into()));
    }
    if let Some(gens) = oracle.set().normals(x) {
        let mut out = Vec::with_capacity(budget.max(gens.len()));
        for g in &gens {
            dedup_push(&mut out, g.clone());
        }
        'fill: for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                if out.len() >= budget {
                    break 'fill;
                }
                if let Ok(m) = UnitVector::new(gens[i].as_point() + gens[j].as_point()) {
                    if (gens[i].as_point() + gens[j].as_point()).norm() > 1e-9 {
                        dedup_push(&mut out, m);
                    }
                }
            }
        }
        return Ok(out);
    }
    let t = oracle.tolerances().probe_step();
    let n = oracle.dimension();
    let mut dirs = sampling::sphere_directions(n, budget.max(2 * n));
    if n == 2 {
        // rotate the probe fan by a seed-dependent phase
        let phase = sampling::rng(seed).random::<f64>() * std::f64::consts::TAU / dirs.len() as f64;
        let (s, c) = phase.sin_cos();
        for d in &mut dirs {
            *d = Point::from_vec(vec![c * d[0] - s * d[1], s * d[0] + c * d[1]]);
        }
    }
    let accept = |u: &UnitVector| -> Result<bool> { Ok(oracle.distance(&(x + u.as_point() * t))? >= t * (1.0 - 1e-3)) };
    let mut out = Vec::new();
    for d in dirs {
        let q = x + &d * t;
        if oracle.set().contains(&q) {
            continue;
        }
        let (_, p) = oracle.distance_and_project(&q)?;
        for cand in [UnitVector::new(&q - &p), UnitVector::new(d.clone())].into_iter().flatten() {
            if accept(&cand)? {
                dedup_push(&mut out, cand);
            }
        }
    }
    Ok(out)
}

/// Largest radius of the form `t * 2^k` at which `zeta` is realized at `x`,
/// `+inf` once the doubling reaches `radius_cap`, `None` if not even the
/// probe step is realized.
pub fn realized_radius(oracle: &SetOracle, x: &Point, zeta: &UnitVector) -> Result<Option<f64>> {
    let tol = oracle.tolerances();
    let mut r = tol.probe_step();
    if !realized_by_sphere(oracle, x, zeta, r)? {
        return Ok(None);
    }
    while r < tol.radius_cap {
        let next = (2.0 * r).min(tol.radius_cap);
        if !realized_by_sphere(oracle, x, zeta, next)? {
            return Ok(Some(r));
        }
        r = next;
    }
    Ok(Some(f64::INFINITY))
}

/// Proximal normals at `x` with certified realization radii.
pub fn sample_proximal_normals(
    oracle: &SetOracle,
    x: &Point,
    budget: usize,
    seed: u64,
) -> Result<Vec<ProximalNormalCandidate>> {
    normal_directions(oracle, x, budget, seed)?
        .into_iter()
        .map(|dir| {
            let rho = realized_radius(oracle, x, &dir)?;
            let sigma = rho.map(|r| if r.is_finite() { 1.0 / (2.0 * r) } else { 0.0 });
            Ok(ProximalNormalCandidate { base: x.clone(), dir, sigma, realized_radius: rho })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ConditionKind {
    #[serde(rename = "exterior")]
    Exterior,
    #[serde(rename = "extended")]
    ExtendedExterior,
    #[serde(rename = "prox_regular")]
    ProxRegular,
}

impl ConditionKind {
    pub const ALL: [ConditionKind; 3] = [ConditionKind::Exterior, ConditionKind::ExtendedExterior, ConditionKind::ProxRegular];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionKind::Exterior => "exterior",
            ConditionKind::ExtendedExterior => "extended",
            ConditionKind::ProxRegular => "prox_regular",
        }
    }
}

impl FromStr for ConditionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exterior" => Ok(ConditionKind::Exterior),
            "extended" => Ok(ConditionKind::ExtendedExterior),
            "prox_regular" => Ok(ConditionKind::ProxRegular),
            other => Err(Error::InvalidArgument(format!("unknown condition `{other}`"))),
        }
    }
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const NO_NORMAL_FOUND: &str = "no-normal-found";
pub const NOT_REALIZED: &str = "not-realized";
pub const THIN_NOT_REALIZED: &str = "thin-boundary-normal-not-realized";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    #[serde(skip)]
    pub index: usize,
    #[serde(with = "serde_point")]
    pub point: Point,
    /// `None` when no normal was found at the point.
    pub dir: Option<UnitVector>,
    pub reason: String,
    #[serde(skip)]
    pub thin: bool,
}

/// Verdict of a sampled sphere-condition check. A pass only means no sample
/// refuted the condition.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub condition: ConditionKind,
    pub radius: f64,
    #[serde(rename = "samples")]
    pub samples_checked: usize,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
    pub seed: u64,
    #[serde(skip)]
    pub thin_samples: usize,
}

impl ConditionReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "not refuted" } else { "refuted" };
        write!(
            f,
            "{} r={} on {} samples (seed {}): {}",
            self.condition, self.radius, self.samples_checked, self.seed, verdict
        )?;
        if self.pass && self.thin_samples > 0 {
            write!(f, " ({} thin-boundary samples, all sampled normals realized)", self.thin_samples)?;
        }
        if !self.witnesses.is_empty() {
            write!(f, ", {} witnesses", self.witnesses.len())?;
            if let Some(w) = self.witnesses.first() {
                let p: Vec<String> = w.point.iter().map(|c| format!("{c:.6}")).collect();
                write!(f, ", first at ({}) [{}]", p.join(", "), w.reason)?;
            }
        }
        Ok(())
    }
}

struct PointVerdict {
    witness: Option<Witness>,
    thin: bool,
}

fn check_point(
    oracle: &SetOracle,
    kind: ConditionKind,
    r: f64,
    index: usize,
    x: &Point,
    normal_budget: usize,
    seed: u64,
) -> Result<PointVerdict> {
    let dirs = normal_directions(oracle, x, normal_budget, seed.wrapping_add(index as u64))?;
    let thin = match kind {
        ConditionKind::ExtendedExterior => {
            // unclassifiable points get the stricter thin-boundary test
            oracle
                .classify_boundary(x, oracle.tolerances().classify_scale())
                .map_or(true, |c| c == BoundaryClass::ThinBoundary)
        }
        _ => false,
    };
    let witness = |dir: Option<UnitVector>, reason: &str| Witness {
        index,
        point: x.clone(),
        dir,
        reason: reason.to_string(),
        thin,
    };
    if dirs.is_empty() {
        return Ok(PointVerdict { witness: Some(witness(None, NO_NORMAL_FOUND)), thin });
    }
    let need_all = kind == ConditionKind::ProxRegular || thin;
    let mut first_fail = None;
    let mut any_ok = false;
    for d in &dirs {
        if realized_by_sphere(oracle, x, d, r)? {
            any_ok = true;
            if !need_all {
                break;
            }
        } else if first_fail.is_none() {
            first_fail = Some(d.clone());
            if need_all {
                break;
            }
        }
    }
    let w = if need_all {
        first_fail.map(|d| witness(Some(d), if thin { THIN_NOT_REALIZED } else { NOT_REALIZED }))
    } else if any_ok {
        None
    } else {
        Some(witness(first_fail, NOT_REALIZED))
    };
    Ok(PointVerdict { witness: w, thin })
}

/// Checks a sphere condition at radius `r` on `boundary_budget` boundary
/// samples, with up to `normal_budget` normals per sample.
pub fn check_condition(
    oracle: &SetOracle,
    kind: ConditionKind,
    r: f64,
    boundary_budget: usize,
    normal_budget: usize,
    seed: u64,
) -> Result<ConditionReport> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    if normal_budget == 0 {
        return Err(Error::InvalidArgument("normal budget must be at least 1".into()));
    }
    let samples = oracle.boundary_sample(boundary_budget, seed)?;
    check_condition_on(oracle, kind, r, &samples, normal_budget, seed)
}

/// Same as [`check_condition`] on a caller-supplied boundary sample.
pub fn check_condition_on(
    oracle: &SetOracle,
    kind: ConditionKind,
    r: f64,
    samples: &[Point],
    normal_budget: usize,
    seed: u64,
) -> Result<ConditionReport> {
    let verdicts: Vec<PointVerdict> = samples
        .par_iter()
        .enumerate()
        .map(|(i, x)| check_point(oracle, kind, r, i, x, normal_budget, seed))
        .collect::<Result<_>>()?;
    let thin_samples = verdicts.iter().filter(|v| v.thin).count();
    let mut witnesses: Vec<Witness> = verdicts.into_iter().filter_map(|v| v.witness).collect();
    witnesses.sort_by_key(|w| w.index);
    Ok(ConditionReport {
        condition: kind,
        radius: r,
        samples_checked: samples.len(),
        pass: witnesses.is_empty(),
        witnesses,
        seed,
        thin_samples,
    })
}

/// Exterior checks on S and on cl(int S). The pair is consistent unless S
/// passes while cl(int S) fails.
#[derive(Clone, Debug, Serialize)]
pub struct InheritanceCheck {
    pub report_set: ConditionReport,
    pub report_closure: ConditionReport,
    pub consistent: bool,
}

pub fn closure_inheritance_check(
    oracle: &SetOracle,
    r: f64,
    boundary_budget: usize,
    normal_budget: usize,
    seed: u64,
) -> Result<InheritanceCheck> {
    let closure = oracle.closure_of_interior()?;
    let report_set = check_condition(oracle, ConditionKind::Exterior, r, boundary_budget, normal_budget, seed)?;
    let report_closure = check_condition(&closure, ConditionKind::Exterior, r, boundary_budget, normal_budget, seed)?;
    let consistent = !(report_set.pass && !report_closure.pass);
    Ok(InheritanceCheck { report_set, report_closure, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use crate::sets::{ClosedBall, DiskWithSegment, HalfSpace, Line, Opaque, Segment};
    use std::sync::Arc;

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
    fn realized_examples() {
        let disk = SetOracle::from_set(ClosedBall::unit_disk());
        assert!(realized_by_sphere(&disk, &point(&[1.0, 0.0]), &point(&[1.0, 0.0]), 100.0).unwrap());
        let h = SetOracle::from_set(HalfSpace::new(point(&[0.0, 1.0]), 0.0).unwrap());
        assert!(realized_by_sphere(&h, &point(&[0.0, 0.0]), &point(&[0.0, 1.0]), 7.0).unwrap());
        assert!(!realized_by_sphere(&example2(), &point(&[1.01, 0.0]), &point(&[0.0, 1.0]), 0.5).unwrap());
        assert!(matches!(
            realized_by_sphere(&disk, &point(&[1.0, 0.0]), &point(&[0.0, 0.0]), 1.0),
            Err(Error::ZeroDirection)
        ));
    }

    #[test]
    fn generic_normals_of_a_line() {
        let l = SetOracle::from_set(Opaque::new(Arc::new(Line::x_axis())));
        let ns = normal_directions(&l, &point(&[0.0, 0.0]), 16, 0).unwrap();
        assert_eq!(ns.len(), 2, "{ns:?}");
        assert!(ns.iter().any(|n| (n[1] - 1.0).abs() < 1e-9));
        assert!(ns.iter().any(|n| (n[1] + 1.0).abs() < 1e-9));
    }

    #[test]
    fn generic_normal_of_a_disk() {
        let d = SetOracle::from_set(Opaque::new(Arc::new(ClosedBall::unit_disk())));
        let ns = sample_proximal_normals(&d, &point(&[1.0, 0.0]), 16, 0).unwrap();
        assert!(!ns.is_empty());
        for c in &ns {
            assert!((c.dir[0] - 1.0).abs() < 1e-3);
            assert_eq!(c.realized_radius, Some(f64::INFINITY));
            assert_eq!(c.sigma, Some(0.0));
        }
    }

    #[test]
    fn example2_segment_normals() {
        let ns = sample_proximal_normals(&example2(), &point(&[1.5, 0.0]), 16, 0).unwrap();
        assert!(ns.iter().any(|c| (c.dir[1] - 1.0).abs() < 1e-12));
        assert!(ns.iter().any(|c| (c.dir[1] + 1.0).abs() < 1e-12));
        // blocked by the disk at radius about 0.4
        let up = ns.iter().find(|c| c.dir[1] > 0.5).unwrap();
        let rho = up.realized_radius.unwrap();
        assert!(rho > 0.2 && rho <= 0.625, "{rho}");
    }

    #[test]
    fn disk_passes_everything() {
        let disk = SetOracle::from_set(ClosedBall::unit_disk());
        for kind in ConditionKind::ALL {
            let rep = check_condition(&disk, kind, 5.0, 200, 8, 1).unwrap();
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn example2_exterior_fails_near_junction() {
        let rep = check_condition(&example2(), ConditionKind::Exterior, 0.1, 2000, 16, 0).unwrap();
        assert!(!rep.pass);
        // circle points next to the junction fail too: their radial ball
        // runs into the segment
        for w in &rep.witnesses {
            assert!((&w.point - point(&[1.0, 0.0])).norm() < 0.2, "{:?}", w.point);
        }
        assert!(rep.witnesses.iter().any(|w| w.point[1] == 0.0 && w.point[0] > 1.0));
        let json = rep.to_json().unwrap();
        assert!(json.starts_with("{\"condition\":\"exterior\",\"radius\":0.1,\"samples\":2000,\"pass\":false"));
    }

    #[test]
    fn inheritance_on_example2() {
        let c = closure_inheritance_check(&example2(), 1.0, 500, 16, 0).unwrap();
        assert!(!c.report_set.pass && c.report_closure.pass && c.consistent);
    }

    #[test]
    fn condition_names_round_trip() {
        for kind in ConditionKind::ALL {
            assert_eq!(kind.as_str().parse::<ConditionKind>().unwrap(), kind);
        }
        assert!("interior".parse::<ConditionKind>().is_err());
    }
}
