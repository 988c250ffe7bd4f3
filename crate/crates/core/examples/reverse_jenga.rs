// Moves helices out of an under-filled outer shell when that shrinks the torus.

use ropebound::construct::{build_optimal_spec, Shell, TorusSpec};
use ropebound::helix::CountMode;
use ropebound::optimize::{predicted_length, reverse_jenga};

pub fn run_example() -> ropebound::Result<()> {
    let full = build_optimal_spec(4, CountMode::Exact)?;
    // leave every shell at 90% of capacity
    let sparse = TorusSpec {
        shells: full
            .shells
            .iter()
            .map(|s| Shell {
                count: (s.count * 9 / 10).max(1),
                ..*s
            })
            .collect(),
        ..full
    };
    let moved = reverse_jenga(&sparse)?;
    let counts = |s: &TorusSpec| s.shells.iter().map(|x| x.count).collect::<Vec<_>>();
    println!(
        "{:?} R0={:.3} L={:.2}  ->  {:?} R0={:.3} L={:.2}",
        counts(&sparse),
        sparse.major_radius,
        predicted_length(&sparse)?,
        counts(&moved),
        moved.major_radius,
        predicted_length(&moved)?
    );
    Ok(())
}

fn main() -> ropebound::Result<()> {
    run_example()
}
