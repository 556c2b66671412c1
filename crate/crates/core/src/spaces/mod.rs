//! Primal spline spaces, slave trace spaces and the Lagrange multiplier
//! spaces: equal order with degree reduction at cross points, and reduced
//! degree on trimmed knot vectors.

mod multiplier;
mod trace;

pub use multiplier::{
    boundary_modification_coeffs, checkerboard_mode, End, MultiplierSpace, MultiplierVariant,
};
pub use trace::{SplineSpace, TraceSpace};

use crate::error::Result;
use crate::geometry::MultipatchDomain;

/// Multiplier space of interface `l` with modification flags taken from the
/// domain topology.
pub fn build_multiplier_space(
    domain: &MultipatchDomain,
    l: usize,
    variant: MultiplierVariant,
) -> Result<MultiplierSpace> {
    let trace = TraceSpace::build(domain, l, false);
    let [start, end] = domain.cross_points(l)?;
    Ok(MultiplierSpace::new(trace.knots(), variant, start, end)?.with_interface(l))
}
