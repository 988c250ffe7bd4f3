// Threads two copies of an increment torus through each other and confirms
// that every pair of components links.

use ropebound::construct::{
    build_increment_spec, donut_double, Increment, JengaMode, RealizeOptions,
};
use ropebound::geom::linking_matrix;

pub fn run_example() -> ropebound::Result<()> {
    let spec = build_increment_spec(1, Increment::Four, JengaMode::Naive)?;
    let opts = RealizeOptions {
        n_points: 300,
        ..Default::default()
    };
    let doubled = donut_double(&spec, false, opts)?;
    if let Some(r0) = doubled.report.inflated_from {
        println!(
            "major radius raised from {r0:.3} to {:.3}",
            spec.min_doubling_radius()
        );
    }
    let m = linking_matrix(&doubled.link.components)?;
    let unlinked = (0..m.len())
        .flat_map(|i| (i + 1..m.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| m[i][j].abs() != 1)
        .count();
    println!(
        "{} components, crossing number {}, unlinked pairs: {unlinked}",
        doubled.link.components.len(),
        doubled.report.crossing_number
    );
    Ok(())
}

fn main() -> ropebound::Result<()> {
    run_example()
}
