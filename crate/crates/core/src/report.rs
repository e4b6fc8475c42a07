//! Output plumbing for the command line: atomic file writes, JSON lines, SVG
//! rendering of planar covers, and the four command drivers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::conditions::{check_condition, ConditionKind, ConditionReport};
use crate::cover::{cover_point_regular_closed, cover_region_with, CoverCase, CoverOptions, CoverRegion, Grid, ShrunkTrace};
use crate::error::{Error, Result};
use crate::gallery::{Scene, GALLERY_IDS};
use crate::geometry::{Ball, Point};
use crate::oracle::SetOracle;
use crate::regularity::{estimate, EstimateOptions, RegularityEstimate};
use crate::tightness::{parse_n_range, rows_to_csv, tightness_sweep, TightnessRow};

/// Writes `contents` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    let name = path.file_name().ok_or_else(|| Error::InvalidArgument(format!("`{}` is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, contents)?;
    if let Err(e) = std::fs::rename(&tmp, path) {
        let _ = std::fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}

pub fn json_lines<T: Serialize>(items: &[T]) -> Result<String> {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item)?);
        out.push('\n');
    }
    Ok(out)
}

/// Loads a scene file, or a gallery scene when `spec` is a bare gallery id.
pub fn load_scene(spec: &str) -> Result<Scene> {
    let path = PathBuf::from(spec);
    if !path.exists() && GALLERY_IDS.contains(&spec) {
        return Scene::gallery(spec);
    }
    Scene::load(path)
}

fn case_color(case: CoverCase) -> &'static str {
    match case {
        CoverCase::Case1 => "#4c72b0",
        CoverCase::Case2 => "#dd8452",
        CoverCase::Case3YEqX => "#8172b3",
        CoverCase::Case3YNear => "#55a868",
        CoverCase::Case3YFar => "#c44e52",
    }
}

/// Planar picture: boundary polylines, grid points, covering balls.
#[derive(Default)]
pub struct SvgScene {
    pub polylines: Vec<Vec<Point>>,
    /// `(ball, stroke color)`.
    pub balls: Vec<(Ball, String)>,
    /// `(point, fill color)`.
    pub points: Vec<(Point, String)>,
}

impl SvgScene {
    /// Boundary samples in parameter order, split wherever consecutive
    /// samples jump by more than `gap`.
    pub fn boundary(oracle: &SetOracle, budget: usize, gap: f64) -> Result<Vec<Vec<Point>>> {
        let pts = oracle.boundary_sample(budget, 0)?;
        let mut lines: Vec<Vec<Point>> = Vec::new();
        for p in pts {
            match lines.last_mut() {
                Some(line) if line.last().is_some_and(|q| (q - &p).norm() <= gap) => line.push(p),
                _ => lines.push(vec![p]),
            }
        }
        Ok(lines)
    }

    pub fn render(&self, bounds: [[f64; 2]; 2], width: f64) -> String {
        let [[x0, x1], [y0, y1]] = bounds;
        let scale = width / (x1 - x0);
        let height = (y1 - y0) * scale;
        let tx = |x: f64| (x - x0) * scale;
        let ty = |y: f64| (y1 - y) * scale;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.3} {height:.3}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        for (b, color) in &self.balls {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="{color}" stroke-width="0.6" stroke-opacity="0.5"/>"#,
                tx(b.center[0]),
                ty(b.center[1]),
                b.radius * scale
            );
        }
        for (p, color) in &self.points {
            let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="1.2" fill="{color}"/>"#, tx(p[0]), ty(p[1]));
        }
        for line in &self.polylines {
            if line.len() == 1 {
                let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="1" fill="black"/>"#, tx(line[0][0]), ty(line[0][1]));
                continue;
            }
            let coords: Vec<String> = line.iter().map(|p| format!("{:.3},{:.3}", tx(p[0]), ty(p[1]))).collect();
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#, coords.join(" "));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn cover_svg(oracle: &SetOracle, region: &CoverRegion, shrunk: &[ShrunkTrace]) -> Result<String> {
    let w = oracle.window();
    let gap = 0.05 * w.diameter();
    let mut scene = SvgScene { polylines: SvgScene::boundary(oracle, 4000, gap)?, ..Default::default() };
    for t in &region.traces {
        scene.balls.push((t.ball.clone(), case_color(t.case).to_string()));
        scene.points.push((t.x.clone(), "#444444".into()));
    }
    for t in shrunk {
        scene.balls.push((t.ball.clone(), "#937860".into()));
        scene.points.push((t.x.clone(), "#444444".into()));
    }
    for f in &region.failures {
        scene.points.push((f.x.clone(), "#e00000".into()));
    }
    Ok(scene.render([[w.lo(0), w.hi(0)], [w.lo(1), w.hi(1)]], 800.0))
}

/// A finished command: exit code, report for standard output, diagnostics.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub notes: Vec<String>,
}

pub struct VerifyConfig {
    pub scene: String,
    pub condition: ConditionKind,
    pub radius: f64,
    pub samples: usize,
    pub normal_budget: usize,
    pub seed: u64,
    pub json: Option<PathBuf>,
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<Outcome> {
    let oracle = load_scene(&cfg.scene)?.oracle()?;
    let report = check_condition(&oracle, cfg.condition, cfg.radius, cfg.samples, cfg.normal_budget, cfg.seed)?;
    let json = report.to_json()? + "\n";
    if let Some(path) = &cfg.json {
        write_atomic(path, &json)?;
    }
    Ok(Outcome { code: if report.pass { 0 } else { 1 }, stdout: json, notes: vec![report.to_string()] })
}

pub struct CoverConfig {
    pub scene: String,
    pub radius: f64,
    pub radius_prime: Option<f64>,
    pub grid: Grid,
    pub normal_budget: usize,
    pub seed: u64,
    pub json: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Serialize)]
struct ShrunkSummary {
    exterior_points: usize,
    verified: usize,
    failed: usize,
}

pub fn run_cover(cfg: &CoverConfig) -> Result<Outcome> {
    let oracle = load_scene(&cfg.scene)?.oracle()?;
    if cfg.svg.is_some() && oracle.dimension() != 2 {
        return Err(Error::InvalidArgument("SVG output needs a planar scene".into()));
    }
    let opts = CoverOptions { normal_budget: cfg.normal_budget, seed: cfg.seed, ..CoverOptions::default() };
    let mut notes = Vec::new();
    let (lines, summary_json, ok, region, shrunk) = match cfg.radius_prime {
        None => {
            let region = cover_region_with(&oracle, cfg.radius, &cfg.grid, &opts)?;
            for f in region.failures.iter().take(5) {
                let p: Vec<String> = f.x.iter().map(|c| format!("{c:.4}")).collect();
                notes.push(format!("failure at ({}): {}", p.join(", "), f.message));
            }
            let ok = region.summary.all_verified();
            let lines = json_lines(&region.traces)?;
            let summary = serde_json::to_string(&region.summary)?;
            (lines, summary, ok, region, Vec::new())
        }
        Some(rp) => {
            let points = cfg.grid.points(oracle.dimension())?;
            let mut traces = Vec::new();
            let mut failed = 0;
            for x in points.iter().filter(|p| !oracle.set().contains(p)) {
                match cover_point_regular_closed(&oracle, x, cfg.radius, rp) {
                    Ok(t) => traces.push(t),
                    Err(e @ (Error::NotRegularClosed | Error::OutOfRegime(_))) => return Err(e),
                    Err(e) => {
                        failed += 1;
                        if notes.len() < 5 {
                            notes.push(format!("failure at {:?}: {e}", x.as_slice()));
                        }
                    }
                }
            }
            let verified = traces.iter().filter(|t| t.verified).count();
            let s = ShrunkSummary { exterior_points: traces.len() + failed, verified, failed };
            let ok = failed == 0 && verified == traces.len();
            let empty = CoverRegion { traces: Vec::new(), failures: Vec::new(), summary: Default::default() };
            (json_lines(&traces)?, serde_json::to_string(&s)?, ok, empty, traces)
        }
    };
    if let Some(path) = &cfg.json {
        write_atomic(path, &lines)?;
    }
    if let Some(path) = &cfg.svg {
        write_atomic(path, &cover_svg(&oracle, &region, &shrunk)?)?;
    }
    Ok(Outcome { code: if ok { 0 } else { 1 }, stdout: summary_json + "\n", notes })
}

pub struct TightnessConfig {
    pub n: String,
    pub radius: f64,
    pub samples: usize,
    pub csv: Option<PathBuf>,
}

/// Largest relative error over the rows; infinite when a row has no value.
pub fn max_rel_error(rows: &[TightnessRow]) -> f64 {
    rows.iter().map(|r| r.rel_error().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
}

pub fn run_tightness(cfg: &TightnessConfig) -> Result<Outcome> {
    let ns = parse_n_range(&cfg.n)?;
    let rows = tightness_sweep(&ns, cfg.radius, cfg.samples)?;
    let csv = rows_to_csv(&rows);
    if let Some(path) = &cfg.csv {
        write_atomic(path, &csv)?;
    }
    let notes = rows
        .iter()
        .filter(|r| r.status != "ok")
        .map(|r| format!("n={}: {} (origin is {:.6} outside the nearest ball)", r.n, r.status, r.origin_gap))
        .collect();
    let code = if max_rel_error(&rows) <= 1e-3 { 0 } else { 1 };
    Ok(Outcome { code, stdout: csv, notes })
}

pub struct EstimateConfig {
    pub scene: String,
    pub rho: Option<f64>,
    pub radius_prime: Option<f64>,
    pub samples: usize,
    pub normal_budget: usize,
    pub seed: u64,
    pub json: Option<PathBuf>,
}

#[derive(Serialize)]
struct EstimateReport {
    regularity: RegularityEstimate,
    check: Option<ConditionReport>,
}

pub fn run_estimate(cfg: &EstimateConfig) -> Result<Outcome> {
    let oracle = load_scene(&cfg.scene)?.oracle()?;
    let opts = EstimateOptions { samples: cfg.samples, normal_budget: cfg.normal_budget, seed: cfg.seed, ..Default::default() };
    let regularity = estimate(&oracle, cfg.rho, cfg.radius_prime, &opts)?;
    let check = match regularity.r_estimate {
        Some(r) if r.is_finite() => {
            Some(check_condition(&oracle, ConditionKind::ProxRegular, r, cfg.samples, cfg.normal_budget, cfg.seed)?)
        }
        _ => None,
    };
    let ok = check.as_ref().is_some_and(|c| c.pass);
    let mut notes = Vec::new();
    if let Some(c) = &check {
        notes.push(c.to_string());
    } else {
        notes.push("no finite estimate: thin boundary touches cl(int S)".into());
    }
    let json = serde_json::to_string(&EstimateReport { regularity, check })? + "\n";
    if let Some(path) = &cfg.json {
        write_atomic(path, &json)?;
    }
    Ok(Outcome { code: if ok { 0 } else { 1 }, stdout: json, notes })
}

/// Exit code 2 for usage and input problems, 1 for mathematical failures.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Scene(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::InvalidArgument(_)
        | Error::DimensionMismatch { .. }
        | Error::UnknownGalleryId(_)
        | Error::OutOfRegime(_)
        | Error::NotRegularClosed
        | Error::MissingClosure => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;

    #[test]
    fn atomic_write_replaces() {
        let dir = std::env::temp_dir().join(format!("proxgeom-report-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("out.txt");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn polylines_split_at_gaps() {
        let o = crate::gallery::make_gallery_set("disk_segment", &serde_json::Value::Null).unwrap();
        let lines = SvgScene::boundary(&o, 400, 0.2).unwrap();
        assert!(lines.len() >= 2);
        let svg = SvgScene { polylines: lines, balls: vec![(Ball::closed(point(&[2.0, 0.0]), 0.5), "red".into())], points: vec![] }
            .render([[-3.0, 3.0], [-3.0, 3.0]], 600.0);
        assert!(svg.contains("<polyline") && svg.contains("<circle") && svg.ends_with("</svg>\n"));
    }
}
