//! On matching meshes the mortar solution equals the solution of the
//! merged conforming space.

use std::sync::Arc;

use isomortar::assembly::{solve_conforming, solve_problem};
use isomortar::geometry::builders;
use isomortar::spaces::MultiplierVariant;
use isomortar::studies::{problem_data, ScalarField, ScalarShape};

fn main() -> isomortar::Result<()> {
    let data = problem_data(Arc::new(ScalarField::new(ScalarShape::SinePi)));
    for p in [2, 3, 4] {
        let domain = builders::annulus(p, 4, false)?;
        let (system, mortar) =
            solve_problem(&domain, &data, MultiplierVariant::EqualOrderModified)?;
        let conforming = solve_conforming(&domain, &system)?;
        let diff = mortar
            .u
            .iter()
            .zip(&conforming)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!(
            "P{p}: {} unknowns, max coefficient difference {diff:.2e}, |Bu|/|u| {:.2e}",
            mortar.u.len(),
            mortar.relative_constraint_residual()
        );
    }
    Ok(())
}
