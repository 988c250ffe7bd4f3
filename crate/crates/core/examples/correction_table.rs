// Toroidal length corrections, as a CSV table and for whole optimal tori.

use ropebound::helix::{aggregate_correction, toroidal_correction};
use ropebound::report::correction_table_csv;

pub fn run_example() -> ropebound::Result<()> {
    print!(
        "{}",
        correction_table_csv(|ratio, p| toroidal_correction(ratio, p).unwrap_or(f64::NAN))
    );
    for t in [10, 100, 1000] {
        println!("aggregate over {t} shells: {:.6}", aggregate_correction(t)?);
    }
    Ok(())
}

fn main() -> ropebound::Result<()> {
    run_example()
}
