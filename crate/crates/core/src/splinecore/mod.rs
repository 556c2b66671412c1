//! Univariate B-spline machinery: open knot vectors, Cox–de Boor evaluation
//! with derivatives, Boehm knot insertion, refinement and Gauss quadrature.

mod knots;
mod quadrature;

pub use knots::{BasisEvaluation, KnotVector, KNOT_SNAP};
pub use quadrature::{adaptive_gauss, QuadratureRule};
