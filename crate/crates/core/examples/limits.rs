// Closed-form limiting coefficients of the shell constructions.

use ropebound::construct::{kappa, limiting_alpha, LimitMethod};

pub fn run_example() -> ropebound::Result<()> {
    println!("kappa = {:.4}", kappa());
    for m in LimitMethod::ALL {
        println!(
            "{m:?}: {:.4} (corrected {:.4})",
            limiting_alpha(m, false),
            limiting_alpha(m, true)
        );
    }
    Ok(())
}

fn main() -> ropebound::Result<()> {
    run_example()
}
