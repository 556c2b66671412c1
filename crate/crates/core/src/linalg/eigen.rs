use super::dense::{solve_lower, solve_lower_transpose, DenseMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
    pub sweeps: usize,
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// `1e-12 · ‖A‖_F`.
pub fn jacobi_eigen(a: &DenseMatrix) -> Result<SymmetricEigen> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "square matrix required");
    let mut m = a.clone();
    let mut v = DenseMatrix::identity(n);
    let norm = a.frobenius();
    let target = 1e-12 * norm;
    let mut sweeps = 0;
    loop {
        let off = off_diagonal(&m);
        if off <= target || norm == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenFailure { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap());
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

fn off_diagonal(m: &DenseMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)] * m[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Generalized symmetric-definite problem `K x = λ M x`. Eigenvectors are
/// `M`-orthonormal columns.
pub fn gen_eig_sym(k: &DenseMatrix, m: &DenseMatrix) -> Result<SymmetricEigen> {
    let n = k.rows();
    if k.asymmetry() > 1e-10 * k.max_abs().max(1.0) {
        return Err(Error::Precondition("K is not symmetric".into()));
    }
    let l = m.cholesky()?;
    // C = L⁻¹ K L⁻ᵀ, built column by column.
    let mut tmp = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| k[(i, j)]).collect();
        let y = solve_lower(&l, &col);
        for i in 0..n {
            tmp[(i, j)] = y[i];
        }
    }
    let mut c = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let row: Vec<f64> = tmp.row(i).to_vec();
        let y = solve_lower(&l, &row);
        for j in 0..n {
            c[(i, j)] = y[j];
        }
    }
    // symmetrize round-off
    for i in 0..n {
        for j in 0..i {
            let s = 0.5 * (c[(i, j)] + c[(j, i)]);
            c[(i, j)] = s;
            c[(j, i)] = s;
        }
    }
    let eig = jacobi_eigen(&c)?;
    let mut vectors = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let y: Vec<f64> = (0..n).map(|i| eig.vectors[(i, j)]).collect();
        let x = solve_lower_transpose(&l, &y);
        for i in 0..n {
            vectors[(i, j)] = x[i];
        }
    }
    Ok(SymmetricEigen {
        values: eig.values,
        vectors,
        sweeps: eig.sweeps,
    })
}
