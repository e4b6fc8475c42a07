//! Loads a JSON scene and checks all three conditions at one radius.
//!
//! `cargo run --example scene_file -- crates/core/scenes/two_balls.json 1.0`

use proxgeom::conditions::{check_condition, ConditionKind};
use proxgeom::gallery::Scene;

fn main() -> proxgeom::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenes/two_balls.json").into());
    let r: f64 = args.next().map(|s| s.parse().expect("radius")).unwrap_or(1.0);
    let oracle = Scene::load(&path)?.oracle()?;
    for kind in ConditionKind::ALL {
        println!("{}", check_condition(&oracle, kind, r, 1000, 16, 0)?);
    }
    Ok(())
}
