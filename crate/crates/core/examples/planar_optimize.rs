// Tightens three gibbous curves with the bounded simplex search.

use ropebound::bounds::lower_bound_report;
use ropebound::construct::PlanarFamily;
use ropebound::optimize::{minimize_params, OptimizationProblem, SimplexOptions};

pub fn run_example() -> ropebound::Result<()> {
    let problem = OptimizationProblem::planar(3, PlanarFamily::Gibbous, 200);
    let opts = SimplexOptions {
        restarts: 2,
        ..Default::default()
    };
    let r = minimize_params(&problem, &opts)?;
    let lower = lower_bound_report(1, 3)?.best_bound;
    println!(
        "params {:?}\nropelength {:.4} = {:.4} x lower bound ({} evaluations)",
        r.best_params,
        r.best_value,
        r.best_value / lower,
        r.evaluations
    );
    Ok(())
}

fn main() -> ropebound::Result<()> {
    run_example()
}
