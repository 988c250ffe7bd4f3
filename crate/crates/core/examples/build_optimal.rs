// Builds a three-shell optimal torus, realizes it and checks clearance.

use ropebound::construct::{build_optimal_spec, realize_torus};
use ropebound::geom::measure_link;
use ropebound::helix::CountMode;

pub fn run_example() -> ropebound::Result<()> {
    let spec = build_optimal_spec(3, CountMode::Exact)?;
    for s in &spec.shells {
        println!("shell r={} holds {}", s.radius, s.count);
    }
    let link = realize_torus(&spec, 400)?;
    let m = measure_link(&link)?;
    println!(
        "Q={} length {:.3} (predicted {:.3}), clearance {:.4}, alpha {:.4}",
        spec.q(),
        m.total_length,
        spec.predicted_length()?,
        m.min_distance(),
        m.alpha
    );
    Ok(())
}

fn main() -> ropebound::Result<()> {
    run_example()
}
