//! Balls of radius r' < r/2 for a regular closed set, built from the r/2
//! construction.

use proxgeom::cover::cover_point_regular_closed;
use proxgeom::gallery::make_gallery_set;
use proxgeom::point;
use serde_json::Value;

fn main() -> proxgeom::Result<()> {
    let disk = make_gallery_set("disk", &Value::Null)?;
    for x in [point(&[1.2, 0.0]), point(&[2.5, 0.0]), point(&[-0.9, 0.6])] {
        let t = cover_point_regular_closed(&disk, &x, 1.0, 0.4)?;
        println!(
            "x={:?} branch={:?} center={:?} verified={}",
            x.as_slice(),
            t.branch,
            t.ball.center.as_slice(),
            t.verified
        );
    }
    let seg = make_gallery_set("example2", &Value::Null)?;
    if let Err(e) = cover_point_regular_closed(&seg, &point(&[1.5, 0.5]), 1.0, 0.4) {
        println!("disk+segment: {e}");
    }
    Ok(())
}
