// How many helices fit on one shell, exactly and by the rectangle estimate.

use ropebound::helix::{
    max_helices, pair_min_distance, required_hole_exact, CountMode, DEFAULT_EPSILON,
};

pub fn run_example() -> ropebound::Result<()> {
    println!("   r      h  exact  approx  clearance");
    for (r, h) in [
        (2.0, 4.0),
        (4.0, 8.0),
        (10.0, 20.0),
        (10.0, 200.0),
        (40.0, 80.0),
    ] {
        let exact = max_helices(r, h, CountMode::Exact)?;
        let approx = max_helices(r, h, CountMode::Approx(DEFAULT_EPSILON))?;
        let d = pair_min_distance(exact, r, h)?.distance;
        println!("{r:>4} {h:>6} {exact:>6} {approx:>7} {d:>10.5}");
    }
    if let Some(h) = required_hole_exact(12, 4.0)? {
        println!("12 helices at r=4 need a hole of {h:.5}");
    }
    Ok(())
}

fn main() -> ropebound::Result<()> {
    run_example()
}
