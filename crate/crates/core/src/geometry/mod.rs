//! NURBS patches, multipatch domains with mortar interfaces, and the JSON
//! domain format.

pub mod builders;
mod domain;
mod io;
mod patch;

pub use domain::{BoundaryCondition, Interface, InterfaceSpec, MultipatchDomain, POINT_TOL};
pub use io::{BoundaryFile, Coefficient, DomainFile, InterfaceFile, PatchFile, ProblemFile};
pub use patch::{
    Face, FaceCurve, Inversion, NurbsPatch, PatchEval, DET_TOL, NEWTON_MAX_ITER, NEWTON_TOL,
    SEED_SAMPLES,
};
