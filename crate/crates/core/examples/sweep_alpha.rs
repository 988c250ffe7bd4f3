// Doubled three-quarter coefficients of the optimal construction as T grows.

use ropebound::construct::{sweep, SweepMethod};
use ropebound::helix::CountMode;
use ropebound::report::sweep_csv;

pub fn run_example() -> ropebound::Result<()> {
    let rows = sweep(SweepMethod::Optimal, 2, 30, CountMode::Exact)?;
    print!("{}", sweep_csv(&rows));
    Ok(())
}

fn main() -> ropebound::Result<()> {
    run_example()
}
