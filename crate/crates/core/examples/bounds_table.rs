// Lower bounds for small torus links and the large-Q coefficients.

use ropebound::bounds::{asymptotic_coefficients, lower_bound_report};

pub fn run_example() -> ropebound::Result<()> {
    println!("p  q   best_bound   alpha_best  rigor");
    for p in [1, 2] {
        for q in 2..=12 {
            let r = lower_bound_report(p, q)?;
            println!(
                "{p}  {q:<3} {:>11.4}  {:>10.4}  {:?}",
                r.best_bound,
                r.alpha_best(),
                r.rigor_flag
            );
        }
    }
    for p in [1, 4, 16] {
        let a = asymptotic_coefficients(p)?;
        println!(
            "p={p}: alpha_w -> {:.4}, alpha_iso -> {:.4}, next term {:.3}/sqrt(Q)",
            a.alpha_w_limit, a.alpha_iso_limit, a.subleading
        );
    }
    Ok(())
}

fn main() -> ropebound::Result<()> {
    run_example()
}
