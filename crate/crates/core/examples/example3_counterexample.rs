//! The pinched slab: the exterior condition holds at r = 0.2, the extended
//! one fails on the whiskers, and the cover construction stops in the gap.

use proxgeom::conditions::{check_condition, ConditionKind};
use proxgeom::cover::{cover_point, cover_region, Grid};
use proxgeom::gallery::make_gallery_set;
use proxgeom::point;
use serde_json::Value;

fn main() -> proxgeom::Result<()> {
    let s = make_gallery_set("example3_surrogate", &Value::Null)?;
    println!("{}", check_condition(&s, ConditionKind::Exterior, 0.2, 2000, 16, 0)?);
    println!("{}", check_condition(&s, ConditionKind::ExtendedExterior, 0.2, 2000, 16, 0)?);

    match cover_point(&s, &point(&[5.0, 0.0]), 0.2) {
        Ok(t) => println!("unexpected ball {:?}", t.ball),
        Err(e) => println!("gap point (5, 0): {} [{}]", e, e.reason()),
    }
    let region = cover_region(&s, 0.2, &"0:6:0.1x-1:1:0.05".parse::<Grid>()?)?;
    println!("{}", serde_json::to_string(&region.summary)?);
    Ok(())
}
