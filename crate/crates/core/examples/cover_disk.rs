//! Covers the complement of the unit disk on a grid and writes an SVG.
//!
//! `cargo run --example cover_disk -- out.svg`

use proxgeom::cover::{cover_point, cover_region, Grid};
use proxgeom::gallery::make_gallery_set;
use proxgeom::point;
use proxgeom::report::{write_atomic, SvgScene};
use serde_json::Value;

fn main() -> proxgeom::Result<()> {
    let disk = make_gallery_set("disk", &Value::Null)?;
    for x in [point(&[3.0, 0.0]), point(&[1.2, 0.0])] {
        let t = cover_point(&disk, &x, 1.0)?;
        println!("{}", t.to_json()?);
    }
    let region = cover_region(&disk, 1.0, &"-3:3:0.25".parse::<Grid>()?)?;
    println!("{}", serde_json::to_string(&region.summary)?);

    if let Some(path) = std::env::args().nth(1) {
        let mut svg = SvgScene { polylines: SvgScene::boundary(&disk, 400, 0.1)?, ..Default::default() };
        for t in &region.traces {
            svg.balls.push((t.ball.clone(), "#55a868".into()));
            svg.points.push((t.x.clone(), "#444444".into()));
        }
        write_atomic(&path, &svg.render([[-3.0, 3.0], [-3.0, 3.0]], 600.0))?;
        println!("wrote {path}");
    }
    Ok(())
}
