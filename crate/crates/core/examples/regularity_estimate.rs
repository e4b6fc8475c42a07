//! Thin-boundary separation r_S and the radius min{rho, r', r_S/4}.

use proxgeom::conditions::{check_condition, ConditionKind};
use proxgeom::gallery::make_gallery_set;
use proxgeom::regularity::{r_s_distance, RegularityEstimate};
use serde_json::Value;

fn main() -> proxgeom::Result<()> {
    let s = make_gallery_set("disk_segment", &Value::Null)?;
    let est = RegularityEstimate::new(1.0, 1.0, r_s_distance(&s, 2000, 0)?)?;
    println!("{}", est.to_json()?);
    if let Some(r) = est.r_estimate {
        println!("{}", check_condition(&s, ConditionKind::ProxRegular, r, 2000, 16, 0)?);
    }
    for id in ["example2", "disk"] {
        let o = make_gallery_set(id, &Value::Null)?;
        println!("{id}: r_S = {}", r_s_distance(&o, 2000, 0)?);
    }
    Ok(())
}
