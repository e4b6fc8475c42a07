//! One PASS/FAIL line per acceptance criterion. Tolerances are pinned here.

use std::io::Write;

use proxgeom::conditions::{check_condition, closure_inheritance_check, ConditionKind, THIN_NOT_REALIZED};
use proxgeom::cover::{cover_point, cover_point_regular_closed, cover_region, CoverCase, Grid};
use proxgeom::gallery::{make_gallery_set, GALLERY_IDS};
use proxgeom::regularity::{prox_radius_estimate, r_s_distance};
use proxgeom::sampling::halton;
use proxgeom::tightness::{simplex_centers, tightness_sweep};
use proxgeom::{point, Error, SetOracle};
use serde_json::{json, Value};

const TIGHTNESS_REL_TOL: f64 = 1e-3;
const SIMPLEX_REL_TOL: f64 = 1e-10;
const CENTER_DISTANCE_SLACK: f64 = 1e-7;
const MIN_EXTERIOR_POINTS: usize = 10_000;
const EXAMPLE1_WITNESS_TOL: f64 = 0.05;
const R_S_TOL: f64 = 1e-6;
const EXAMPLE2_R_S_MAX: f64 = 1e-3;
const SAMPLES: usize = 2000;
const NORMALS: usize = 16;

type Verdict = (bool, String);
type Criterion = (&'static str, fn() -> Verdict);

fn gallery(id: &str) -> SetOracle {
    make_gallery_set(id, &Value::Null).unwrap()
}

fn tightness_constants() -> Verdict {
    let ns: Vec<usize> = (2..=10).collect();
    let rows = tightness_sweep(&ns, 1.0, 2000).unwrap();
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut missing = Vec::new();
    for row in &rows {
        match row.rel_error() {
            Some(e) => {
                worst = worst.max(e);
                ok &= e <= TIGHTNESS_REL_TOL && row.measured_value.unwrap() > 0.5;
            }
            None => {
                ok = false;
                missing.push(format!("n={} {}", row.n, row.status));
            }
        }
    }
    let values: Vec<f64> = rows.iter().filter_map(|r| r.measured_value).collect();
    ok &= values.len() == rows.len() && values.windows(2).all(|w| w[1] < w[0]);
    let gap = rows.iter().map(|r| r.origin_gap).fold(f64::INFINITY, f64::min);
    let detail = if missing.is_empty() {
        format!("max rel error {worst:.2e}")
    } else {
        format!(
            "no measurement for {} of {} rows ({}); origin lies outside every ball (smallest gap {gap:.6})",
            missing.len(),
            rows.len(),
            missing.first().unwrap()
        )
    };
    (ok, detail)
}

fn simplex_geometry() -> Verdict {
    let mut worst = 0.0f64;
    for n in 2..=25usize {
        let cfg = simplex_centers(n, 1.0).unwrap();
        let nf = n as f64;
        let expected = nf / (nf * nf - 1.0).sqrt();
        for (i, c) in cfg.centers.iter().enumerate() {
            // |C_i|^2 = n/(n-1) (i/(i+1) + sum_{k>i} 1/(k(k+1))), summed directly
            let tail: f64 = (i + 1..=n).map(|k| 1.0 / (k as f64 * (k as f64 + 1.0))).sum();
            let oracle = (nf / (nf - 1.0) * (i as f64 / (i as f64 + 1.0) + tail)).sqrt();
            worst = worst.max((c.norm() - expected).abs() / expected);
            worst = worst.max((oracle - expected).abs() / expected);
        }
        let side = (&cfg.centers[0] - &cfg.centers[1]).norm();
        for i in 0..=n {
            for j in i + 1..=n {
                worst = worst.max(((&cfg.centers[i] - &cfg.centers[j]).norm() - side).abs() / side);
            }
        }
    }
    (worst <= SIMPLEX_REL_TOL, format!("max rel deviation {worst:.2e} over n = 2..25"))
}

fn covering_soundness() -> Verdict {
    let scenes: [(&str, Value, &str); 4] = [
        ("disk", Value::Null, "-3:3:0.04"),
        ("line", Value::Null, "-3:3:0.04"),
        ("halfspace", Value::Null, "-3:3:0.04"),
        ("complement_of_balls", Value::Null, "-3:3:0.02"),
    ];
    let r = 1.0;
    let mut ok = true;
    let mut parts = Vec::new();
    for (id, params, grid) in scenes {
        let o = make_gallery_set(id, &params).unwrap();
        let region = cover_region(&o, r, &grid.parse::<Grid>().unwrap()).unwrap();
        let s = &region.summary;
        let mut bad = 0usize;
        let mut far = 0usize;
        for t in &region.traces {
            let fine = t.verified
                && t.ball.radius == 0.5 * r
                && t.center_distance >= 0.5 * r - CENTER_DISTANCE_SLACK
                && t.claim2_ok != Some(false)
                && t.claim3_ok != Some(false)
                && t.claim1_ok != Some(false)
                && (t.case != CoverCase::Case3YFar || t.claim1_ok == Some(true));
            if !fine {
                bad += 1;
            }
            if t.case == CoverCase::Case3YFar {
                far += 1;
            }
        }
        let scene_ok = s.exterior_points >= MIN_EXTERIOR_POINTS && s.failed == 0 && bad == 0;
        ok &= scene_ok;
        parts.push(format!("{id}: {}/{} verified, {far} far", s.verified, s.exterior_points));
        if !scene_ok {
            parts.push(format!("{id}: {bad} bad traces, failures {:?}", s.failure_reasons));
        }
    }
    (ok, parts.join("; "))
}

fn example1() -> Verdict {
    let o = gallery("example1");
    let bound = 1.5 * 3f64.sqrt();
    let t0 = -(2f64.sqrt()).ln();
    let below = check_condition(&o, ConditionKind::Exterior, bound * (1.0 - 1e-3), SAMPLES, NORMALS, 0).unwrap();
    let above = check_condition(&o, ConditionKind::Exterior, bound * 1.1, SAMPLES, NORMALS, 0).unwrap();
    let nearest = above.witnesses.iter().map(|w| (w.point[0] - t0).abs()).fold(f64::INFINITY, f64::min);
    let mut ok = below.pass && !above.pass && nearest <= EXAMPLE1_WITNESS_TOL;
    for r in [0.5, 1.0] {
        let ext = check_condition(&o, ConditionKind::ExtendedExterior, r, SAMPLES, NORMALS, 0).unwrap();
        ok &= !ext.pass && ext.witnesses.iter().any(|w| w.reason == THIN_NOT_REALIZED);
    }
    (ok, format!("pass below bound: {}, nearest witness above bound at |t - t0| = {nearest:.4}", below.pass))
}

fn example2() -> Verdict {
    let o = gallery("example2");
    let junction = point(&[1.0, 0.0]);
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [0.5, 0.1, 0.01] {
        let inh = closure_inheritance_check(&o, r, SAMPLES, NORMALS, 42).unwrap();
        let rep = &inh.report_set;
        let on_segment = rep.witnesses.iter().filter(|w| w.point[0] > 1.0 && w.point[1].abs() < 1e-9).count();
        let farthest = rep.witnesses.iter().map(|w| (&w.point - &junction).norm()).fold(0.0, f64::max);
        ok &= !rep.pass && on_segment > 0 && farthest <= 2.0 * r && inh.consistent;
        parts.push(format!("r={r}: {on_segment} segment witnesses, farthest {farthest:.4}"));
    }
    let closure = o.closure_of_interior().unwrap();
    let big = check_condition(&closure, ConditionKind::Exterior, 10.0, SAMPLES, NORMALS, 42).unwrap();
    ok &= big.pass;
    parts.push(format!("cl(int S) at r=10: {}", big.pass));
    (ok, parts.join("; "))
}

fn example3() -> Verdict {
    let o = gallery("example3_surrogate");
    let ext = check_condition(&o, ConditionKind::Exterior, 0.2, SAMPLES, NORMALS, 0).unwrap();
    let extended = check_condition(&o, ConditionKind::ExtendedExterior, 0.2, SAMPLES, NORMALS, 0).unwrap();
    let mut violated = 0;
    for k in 0..40 {
        let x = point(&[3.0 + 0.075 * k as f64, 0.0]);
        if let Err(Error::ExtendedConditionViolated { .. }) = cover_point(&o, &x, 0.2) {
            violated += 1;
        }
    }
    let ok = ext.pass && !extended.pass && violated > 0;
    (ok, format!("exterior {}, extended {}, {violated}/40 gap points rejected", ext.pass, extended.pass))
}

fn shrunk_cover() -> Verdict {
    let o = gallery("disk");
    let mut count = 0;
    let mut bad = 0;
    let mut i = 1;
    while count < 1000 {
        let h = halton(i, 2);
        let x = point(&[-3.0 + 6.0 * h[0], -3.0 + 6.0 * h[1]]);
        i += 1;
        if o.contains(&x).unwrap() {
            continue;
        }
        count += 1;
        let t = cover_point_regular_closed(&o, &x, 1.0, 0.4).unwrap();
        if !(t.ball.radius == 0.4 && (&x - &t.ball.center).norm() <= 0.4 + 1e-12 && t.verified) {
            bad += 1;
        }
    }
    (bad == 0, format!("{} of {count} balls bad", bad))
}

fn regularity() -> Verdict {
    let ds = gallery("disk_segment");
    let r_s = r_s_distance(&ds, SAMPLES, 0).unwrap();
    let est = prox_radius_estimate(1.0, 1.0, r_s).unwrap();
    let check = check_condition(&ds, ConditionKind::ProxRegular, est, SAMPLES, NORMALS, 0).unwrap();
    let ex2 = r_s_distance(&gallery("example2"), SAMPLES, 0).unwrap();
    let ok = (r_s - 1.0).abs() <= R_S_TOL && est == 0.25 && check.pass && ex2 <= EXAMPLE2_R_S_MAX;
    (ok, format!("r_S = {r_s:.9}, estimate {est}, prox-regular check {}, example2 r_S = {ex2:.2e}", check.pass))
}

fn ladder() -> Verdict {
    let mut checked = 0;
    let mut violations = Vec::new();
    for id in GALLERY_IDS {
        let params = if *id == "union" {
            json!({"parts": [{"kind": "disk"}, {"kind": "segment", "params": {"a": [2, 0], "b": [3, 0]}}]})
        } else {
            Value::Null
        };
        let o = make_gallery_set(id, &params).unwrap();
        for r in [0.1, 0.5, 1.0] {
            let pass = |k| check_condition(&o, k, r, 500, NORMALS, 7).unwrap().pass;
            let (pr, ee, e) = (pass(ConditionKind::ProxRegular), pass(ConditionKind::ExtendedExterior), pass(ConditionKind::Exterior));
            checked += 1;
            if (pr && !ee) || (ee && !e) {
                violations.push(format!("{id} r={r}"));
            }
        }
    }
    (violations.is_empty(), format!("{checked} (set, r) pairs, violations: {violations:?}"))
}

fn determinism() -> Verdict {
    let o = gallery("example2");
    let a = check_condition(&o, ConditionKind::Exterior, 0.1, SAMPLES, NORMALS, 42).unwrap().to_json().unwrap();
    let b = check_condition(&o, ConditionKind::Exterior, 0.1, SAMPLES, NORMALS, 42).unwrap().to_json().unwrap();
    let grid: Grid = "-2:2:0.1".parse().unwrap();
    let two = gallery("complement_of_balls");
    let c = serde_json::to_string(&cover_region(&two, 1.0, &grid).unwrap()).unwrap();
    let d = serde_json::to_string(&cover_region(&two, 1.0, &grid).unwrap()).unwrap();
    (a == b && c == d, format!("report {} bytes, cover {} bytes", a.len(), c.len()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("tightness constants", tightness_constants),
        ("simplex geometry", simplex_geometry),
        ("covering soundness", covering_soundness),
        ("exponential curves", example1),
        ("disk with segment", example2),
        ("pinched slab", example3),
        ("shrunk balls for regular closed sets", shrunk_cover),
        ("regularity estimates", regularity),
        ("implication ladder", ladder),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = run();
        let tag = if ok { "PASS" } else { "FAIL" };
        writeln!(out, "{tag} criterion {}: {name} ({detail})", i + 1).unwrap();
        out.flush().unwrap();
        if !ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
