//! Direct linear algebra for desk-scale problems: dense LU and Cholesky,
//! cyclic Jacobi eigensolver with Cholesky reduction for symmetric-definite
//! pencils, and a reordered banded LU for sparse (indefinite) systems.

mod dense;
mod eigen;
mod lu;
mod sparse;

pub use dense::{dot, max_abs, solve_lower, solve_lower_transpose, DenseLu, DenseMatrix};
pub use eigen::{gen_eig_sym, jacobi_eigen, SymmetricEigen};
pub use lu::{bandwidths, lu_solve, reverse_cuthill_mckee, SparseLu};
pub use sparse::{SparseMatrix, TripletBuilder};
