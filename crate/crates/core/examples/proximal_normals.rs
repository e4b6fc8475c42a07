//! Proximal normals and their realization radii at a few boundary points.

use proxgeom::conditions::sample_proximal_normals;
use proxgeom::gallery::make_gallery_set;
use proxgeom::point;
use serde_json::Value;

fn main() -> proxgeom::Result<()> {
    let lens = make_gallery_set("complement_of_balls", &Value::Null)?;
    let h = (1.44f64 - 0.64).sqrt();
    for x in [point(&[0.0, h]), point(&[-2.0, 0.0])] {
        for c in sample_proximal_normals(&lens, &x, 5, 0)? {
            println!("{}", serde_json::to_string(&c)?);
        }
    }
    let curves = make_gallery_set("example1", &Value::Null)?;
    let t = -0.5 * 2f64.ln();
    for c in sample_proximal_normals(&curves, &point(&[t, t.exp()]), 2, 0)? {
        println!("{}", serde_json::to_string(&c)?);
    }
    Ok(())
}
