//! Plane-strain plate with a circular hole under uniaxial tension.

use isomortar::spaces::MultiplierVariant;
use isomortar::studies::{run_convergence, Case, PlateWithHole};

fn main() -> isomortar::Result<()> {
    let levels = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(4);
    let plate = PlateWithHole::standard();
    let [sxx, _, _] = plate.stress(nalgebra::Vector2::new(0.0, plate.radius));
    println!(
        "stress concentration at the hole: {:.4}",
        sxx / plate.tension
    );
    for p in [2, 3] {
        let report = run_convergence(
            &Case::Plate,
            MultiplierVariant::EqualOrderModified,
            p,
            levels,
        )?;
        report.write_csv(std::io::stdout())?;
        println!(
            "P{p}: broken V slope {:.3}, max |Bu|/|u| {:.1e}",
            report.broken_v_slopes().asymptotic.unwrap_or(f64::NAN),
            report.max_constraint_residual()
        );
    }
    Ok(())
}
