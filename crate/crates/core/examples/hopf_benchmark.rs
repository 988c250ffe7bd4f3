// Two round circles through each other's centres: the tight Hopf link.

use std::f64::consts::{FRAC_PI_4, PI};

use ropebound::construct::{build_planar_link, PlanarFamily, PlanarParams};
use ropebound::geom::measure_link;

pub fn run_example() -> ropebound::Result<()> {
    let params = PlanarParams {
        rho: 0.5,
        psi: FRAC_PI_4,
        ..Default::default()
    };
    let link = build_planar_link(2, PlanarFamily::Circles, &params, 1000)?;
    let m = measure_link(&link)?;
    println!(
        "normalized ropelength {:.5}, 8 pi = {:.5}",
        m.normalized_ropelength,
        8.0 * PI
    );
    Ok(())
}

fn main() -> ropebound::Result<()> {
    run_example()
}
