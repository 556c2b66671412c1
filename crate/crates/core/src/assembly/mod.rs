//! Element assembly of the scalar diffusion-reaction and plane-strain
//! elasticity forms, mortar coupling matrices, Dirichlet elimination and
//! the saddle-point solve.

mod conforming;
mod coupling;
mod local;
mod problem;
mod system;

pub use conforming::solve_conforming;
pub use coupling::{assemble_coupling, PrimalLayout};
pub use local::{
    assemble_elasticity, assemble_neumann, assemble_scalar, face_quadrature, volume_quadrature,
    PatchSystem,
};
pub use problem::{FluxFn, ProblemData, ProblemKind, ScalarFn, VectorFn};
pub use system::{
    apply_dirichlet, assemble_system, solve_problem, solve_saddle, DofMap, SaddleSolution,
    SaddleSystem,
};
