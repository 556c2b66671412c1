//! Matrix-level inf-sup bench: interface Gram matrices, the smallest
//! generalized eigenvalue of the Schur form, and sweeps over meshes and
//! pairings.

mod grams;
mod sweep;

pub use grams::{
    build_grams, infsup_constant, interface_grams, maximizer, sup_ratio, GramTriple, Measure,
};
pub use sweep::{
    checkerboard, checkerboard_start, pairing_constant, sweep, BcMode, SweepConfig, SweepResult,
    SweepRow,
};
