//! Exterior, extended and prox-regular checks on the exponential curves and
//! on the disk with an attached segment.

use proxgeom::conditions::{check_condition, closure_inheritance_check, ConditionKind};
use proxgeom::gallery::make_gallery_set;
use serde_json::Value;

fn main() -> proxgeom::Result<()> {
    let curves = make_gallery_set("example1", &Value::Null)?;
    let bound = 1.5 * 3f64.sqrt();
    for r in [bound * (1.0 - 1e-3), bound * 1.1] {
        let rep = check_condition(&curves, ConditionKind::Exterior, r, 2000, 16, 0)?;
        println!("curves: {rep}");
    }
    let rep = check_condition(&curves, ConditionKind::ExtendedExterior, 0.5, 2000, 16, 0)?;
    println!("curves: {rep}");

    let disk_seg = make_gallery_set("example2", &Value::Null)?;
    for r in [0.5, 0.1, 0.01] {
        let inh = closure_inheritance_check(&disk_seg, r, 2000, 16, 42)?;
        println!("disk+segment: {}", inh.report_set);
        println!("  closure:    {} (consistent: {})", inh.report_closure, inh.consistent);
    }
    Ok(())
}
