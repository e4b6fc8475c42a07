//! Regular-simplex ball configurations and the inscribed-ball search through
//! the origin.

use proxgeom::tightness::{max_inscribed_radius_through_point, rows_to_csv, simplex_centers, tightness_sweep};
use proxgeom::{point, Ball};

fn main() -> proxgeom::Result<()> {
    let cfg = simplex_centers(2, 1.0)?;
    for c in &cfg.centers {
        println!("C = ({:.6}, {:.6}), |C| = {:.6}", c[0], c[1], c.norm());
    }
    let balls = [Ball::open(point(&[-0.8, 0.0]), 1.2), Ball::open(point(&[0.8, 0.0]), 1.2)];
    let b = max_inscribed_radius_through_point(&balls, &point(&[0.0, 0.0]), 256)?;
    println!("two balls through the origin: radius {:.6}", b.radius);

    let ns: Vec<usize> = (2..=10).collect();
    print!("{}", rows_to_csv(&tightness_sweep(&ns, 1.0, 512)?));
    Ok(())
}
