//! Manufactured-solution convergence studies: exact fields, error norms,
//! refinement loops and slope estimates.

mod convergence;
mod errors;
mod fields;

pub use convergence::{run_convergence, solve_level, Case, ConvergenceReport, WAVY_AMPLITUDE};
pub use errors::{
    error_norms, error_norms_with, least_squares_slope, pairwise_slopes, slope_fit, ErrorRow,
    SlopeFit,
};
pub use fields::{
    hooke, named_field, problem_data, ExactSolution, PlateWithHole, ScalarField, ScalarShape,
};
