//! Named example sets and JSON scene files.

use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{Ball, Point, Tolerances, Window};
use crate::oracle::SetOracle;
use crate::sets::{
    ClosedBall, ClosedSet, ComplementOfOpenBalls, DiskWithSegment, ExpCurves, HalfSpace, Line, PinchedSlab, Segment,
    Union,
};
use crate::tightness::simplex_centers;

pub const GALLERY_IDS: &[&str] = &[
    "example1",
    "example2",
    "example3_surrogate",
    "disk",
    "line",
    "halfspace",
    "complement_of_balls",
    "disk_segment",
    "segment",
    "simplex_complement",
    "union",
];

/// `{"kind": ..., "params": {...}}`; missing params take the defaults of the kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
}

impl SetSpec {
    pub fn new(kind: &str) -> Self {
        SetSpec { kind: kind.to_string(), params: Value::Null }
    }

    pub fn with_params(kind: &str, params: Value) -> Self {
        SetSpec { kind: kind.to_string(), params }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scene {
    pub dimension: usize,
    pub set: SetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Scene(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Scene(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Gallery set with its default window.
    pub fn gallery(id: &str) -> Result<Self> {
        let set = build_set(id, &Value::Null)?;
        let dimension = set.dimension();
        Ok(Scene { dimension, set: SetSpec::new(id), window: Some(default_window(id, dimension)), tolerances: Tolerances::default() })
    }

    pub fn oracle(&self) -> Result<SetOracle> {
        let set = build_set(&self.set.kind, &self.set.params)?;
        if set.dimension() != self.dimension {
            return Err(Error::Scene(format!(
                "scene dimension {} does not match set dimension {}",
                self.dimension,
                set.dimension()
            )));
        }
        let window = self.window.clone().unwrap_or_else(|| default_window(&self.set.kind, self.dimension));
        if window.dimension() != self.dimension {
            return Err(Error::Scene("window dimension does not match scene dimension".into()));
        }
        SetOracle::new(set, window, self.tolerances.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Oracle for a gallery id with the given params (`null` for defaults).
pub fn make_gallery_set(id: &str, params: &Value) -> Result<SetOracle> {
    let set = build_set(id, params)?;
    let n = set.dimension();
    SetOracle::new(set, default_window(id, n), Tolerances::default())
}

pub fn default_window(id: &str, dim: usize) -> Window {
    match id {
        "example1" => Window::new(vec![[-5.0, 5.0], [-200.0, 200.0]]).expect("valid window"),
        "example3_surrogate" => Window::new(vec![[-3.0, 6.0], [-2.0, 2.0]]).expect("valid window"),
        "disk_segment" | "example2" => Window::cube(dim, -3.0, 4.0),
        _ => Window::cube(dim, -3.0, 3.0),
    }
}

fn params<T: DeserializeOwned + Default>(kind: &str, v: &Value) -> Result<T> {
    if v.is_null() {
        return Ok(T::default());
    }
    serde_json::from_value(v.clone()).map_err(|e| Error::Scene(format!("params of `{kind}`: {e}")))
}

fn pt(v: &[f64]) -> Point {
    Point::from_column_slice(v)
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct DiskParams {
    center: Vec<f64>,
    radius: f64,
}

impl Default for DiskParams {
    fn default() -> Self {
        DiskParams { center: vec![0.0, 0.0], radius: 1.0 }
    }
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct LineParams {
    point: Vec<f64>,
    direction: Vec<f64>,
}

impl Default for LineParams {
    fn default() -> Self {
        LineParams { point: vec![0.0, 0.0], direction: vec![1.0, 0.0] }
    }
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct HalfspaceParams {
    normal: Vec<f64>,
    offset: f64,
}

impl Default for HalfspaceParams {
    fn default() -> Self {
        HalfspaceParams { normal: vec![0.0, 1.0], offset: 0.0 }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BallParams {
    center: Vec<f64>,
    radius: f64,
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct BallsParams {
    balls: Vec<BallParams>,
}

impl Default for BallsParams {
    fn default() -> Self {
        BallsParams {
            balls: vec![
                BallParams { center: vec![-0.8, 0.0], radius: 1.2 },
                BallParams { center: vec![0.8, 0.0], radius: 1.2 },
            ],
        }
    }
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct DiskSegmentParams {
    center: Vec<f64>,
    radius: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Default for DiskSegmentParams {
    fn default() -> Self {
        DiskSegmentParams { center: vec![0.0, 0.0], radius: 1.0, a: vec![2.0, 0.0], b: vec![3.0, 0.0] }
    }
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SegmentParams {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Default for SegmentParams {
    fn default() -> Self {
        SegmentParams { a: vec![0.0, 0.0], b: vec![1.0, 0.0] }
    }
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SurrogateParams {
    notched: bool,
    decay: f64,
}

impl Default for SurrogateParams {
    fn default() -> Self {
        SurrogateParams { notched: true, decay: 0.5 }
    }
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SimplexParams {
    n: usize,
    r: f64,
}

impl Default for SimplexParams {
    fn default() -> Self {
        SimplexParams { n: 2, r: 1.0 }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct UnionParams {
    parts: Vec<SetSpec>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct NoParams {}

/// Builds the closed set named by `kind`.
pub fn build_set(kind: &str, v: &Value) -> Result<Arc<dyn ClosedSet>> {
    let set: Arc<dyn ClosedSet> = match kind {
        "example1" => {
            params::<NoParams>(kind, v)?;
            Arc::new(ExpCurves::new())
        }
        "example2" => {
            params::<NoParams>(kind, v)?;
            Arc::new(DiskWithSegment::new(ClosedBall::unit_disk(), Segment::new(pt(&[1.0, 0.0]), pt(&[2.0, 0.0]))?)?)
        }
        "example3_surrogate" => {
            let p: SurrogateParams = params(kind, v)?;
            Arc::new(PinchedSlab::new(p.notched, p.decay)?)
        }
        "disk" => {
            let p: DiskParams = params(kind, v)?;
            Arc::new(ClosedBall::new(pt(&p.center), p.radius)?)
        }
        "line" => {
            let p: LineParams = params(kind, v)?;
            Arc::new(Line::new(pt(&p.point), pt(&p.direction))?)
        }
        "halfspace" => {
            let p: HalfspaceParams = params(kind, v)?;
            Arc::new(HalfSpace::new(pt(&p.normal), p.offset)?)
        }
        "complement_of_balls" => {
            let p: BallsParams = params(kind, v)?;
            Arc::new(ComplementOfOpenBalls::new(p.balls.iter().map(|b| Ball::open(pt(&b.center), b.radius)).collect())?)
        }
        "disk_segment" => {
            let p: DiskSegmentParams = params(kind, v)?;
            Arc::new(DiskWithSegment::new(ClosedBall::new(pt(&p.center), p.radius)?, Segment::new(pt(&p.a), pt(&p.b))?)?)
        }
        "segment" => {
            let p: SegmentParams = params(kind, v)?;
            Arc::new(Segment::new(pt(&p.a), pt(&p.b))?)
        }
        "simplex_complement" => {
            let p: SimplexParams = params(kind, v)?;
            let cfg = simplex_centers(p.n, p.r)?;
            Arc::new(ComplementOfOpenBalls::new(cfg.balls())?)
        }
        "union" => {
            let p: UnionParams = params(kind, v)?;
            let parts = p.parts.iter().map(|s| build_set(&s.kind, &s.params)).collect::<Result<Vec<_>>>()?;
            Arc::new(Union::new(parts)?)
        }
        other => return Err(Error::UnknownGalleryId(other.to_string())),
    };
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use crate::sets::BoundaryClass;
    use serde_json::json;

    #[test]
    fn every_id_builds() {
        for id in GALLERY_IDS {
            if *id == "union" {
                continue;
            }
            let o = make_gallery_set(id, &Value::Null).unwrap();
            assert!(o.dimension() >= 2, "{id}");
        }
        assert!(matches!(make_gallery_set("nope", &Value::Null), Err(Error::UnknownGalleryId(_))));
    }

    #[test]
    fn example2_closure_is_disk() {
        let o = make_gallery_set("example2", &Value::Null).unwrap();
        let c = o.closure_of_interior().unwrap();
        assert!(c.contains(&point(&[0.0, 1.0])).unwrap());
        assert!(!c.contains(&point(&[1.5, 0.0])).unwrap());
        assert_eq!(o.is_regular_closed(), Some(false));
    }

    #[test]
    fn example1_is_thin() {
        let o = make_gallery_set("example1", &Value::Null).unwrap();
        for p in o.boundary_sample(50, 1).unwrap() {
            assert_eq!(o.classify_boundary(&p, 1e-6).unwrap(), BoundaryClass::ThinBoundary);
        }
        assert_eq!(o.is_regular_closed(), Some(false));
    }

    #[test]
    fn scene_round_trip() {
        let text = r#"{"dimension": 2, "set": {"kind": "disk", "params": {"center": [1, 0], "radius": 2}},
                       "window": [[-4, 4], [-4, 4]], "tolerances": {"tol_boundary": 1e-11}}"#;
        let scene = Scene::from_json(text).unwrap();
        assert_eq!(scene.tolerances.tol_boundary, 1e-11);
        assert_eq!(scene.tolerances.tol_emptiness, 1e-9);
        let o = scene.oracle().unwrap();
        assert!((o.distance(&point(&[4.0, 0.0])).unwrap() - 1.0).abs() < 1e-15);
        let back = Scene::from_json(&scene.to_json().unwrap()).unwrap();
        assert_eq!(back.set, scene.set);
    }

    #[test]
    fn malformed_scenes() {
        assert!(matches!(Scene::from_json("{"), Err(Error::Scene(_))));
        let bad_dim = r#"{"dimension": 3, "set": {"kind": "disk"}}"#;
        assert!(matches!(Scene::from_json(bad_dim).unwrap().oracle(), Err(Error::Scene(_))));
        let bad_param = Scene { dimension: 2, set: SetSpec::with_params("disk", json!({"radius": "x"})), window: None, tolerances: Tolerances::default() };
        assert!(bad_param.oracle().is_err());
    }

    #[test]
    fn union_scene() {
        let spec = json!({"parts": [{"kind": "disk"}, {"kind": "segment", "params": {"a": [2, 0], "b": [3, 0]}}]});
        let o = make_gallery_set("union", &spec).unwrap();
        assert!((o.distance(&point(&[1.5, 0.0])).unwrap() - 0.5).abs() < 1e-12);
    }
}
