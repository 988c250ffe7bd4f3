// Writes a doubled torus link as a VECT file for an external tightener and
// reads it back.

use ropebound::construct::{
    build_increment_spec, donut_double, Increment, JengaMode, RealizeOptions,
};
use ropebound::io::{export_geometry, import_geometry, GeometryFormat};

pub fn run_example() -> ropebound::Result<()> {
    let spec = build_increment_spec(1, Increment::Four, JengaMode::Naive)?;
    let link = donut_double(
        &spec,
        true,
        RealizeOptions {
            n_points: 200,
            check: false,
            ..Default::default()
        },
    )?
    .link;
    let path = std::env::temp_dir().join(format!("ropebound-{}.vect", std::process::id()));
    export_geometry(&link, GeometryFormat::Vect, &path)?;
    let back = import_geometry(&path)?;
    std::fs::remove_file(&path).ok();
    println!(
        "wrote {} components; read back {} with identical vertices: {}",
        link.components.len(),
        back.components.len(),
        back.components == link.components
    );
    Ok(())
}

fn main() -> ropebound::Result<()> {
    run_example()
}
