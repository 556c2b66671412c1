use approx::assert_abs_diff_eq;
use isomortar::linalg::{
    bandwidths, gen_eig_sym, jacobi_eigen, lu_solve, max_abs, reverse_cuthill_mckee, DenseLu,
    DenseMatrix, SparseMatrix, TripletBuilder,
};
use isomortar::Error;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_spd(n: usize, rng: &mut StdRng) -> DenseMatrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let a = DenseMatrix::from_rows(&rows);
    let mut m = a.transpose().matmul(&a);
    for i in 0..n {
        m[(i, i)] += n as f64 * 0.1;
    }
    m
}

/// Strictly diagonally dominant and nonsymmetric, with a few row pairs
/// swapped so that zero diagonal entries force pivoting.
fn random_sparse(n: usize, rng: &mut StdRng) -> SparseMatrix {
    let row_of = |i: usize| match i % 17 {
        5 if i + 1 < n => i + 1,
        6 => i - 1,
        _ => i,
    };
    let mut t = TripletBuilder::new(n, n);
    for i in 0..n {
        let r = row_of(i);
        t.add(r, i, 4.0 + rng.random::<f64>());
        for _ in 0..4 {
            let j = (i + rng.random_range(1..12)) % n;
            t.add(r, j, rng.random_range(-0.5..0.5));
        }
    }
    t.finalize()
}

#[test]
fn lu_identity() {
    let x = lu_solve(&SparseMatrix::identity(5), &[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    assert_eq!(x, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
}

#[test]
fn lu_swaps_for_zero_pivot() {
    let m = SparseMatrix::from_dense(&DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]));
    assert_eq!(lu_solve(&m, &[2.0, 3.0]).unwrap(), vec![3.0, 2.0]);
}

#[test]
fn singular_matrix_is_reported() {
    let m = SparseMatrix::from_dense(&DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]));
    assert!(matches!(
        lu_solve(&m, &[1.0, 1.0]),
        Err(Error::Singular { .. })
    ));
}

#[test]
fn sparse_lu_matches_dense_oracle() {
    let mut rng = StdRng::seed_from_u64(7);
    let n = 200;
    let m = random_sparse(n, &mut rng);
    let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let x = lu_solve(&m, &b).unwrap();
    let oracle = DenseLu::factor(&m.to_dense()).unwrap().solve(&b).unwrap();
    for (a, o) in x.iter().zip(&oracle) {
        assert_abs_diff_eq!(a, o, epsilon = 1e-9);
    }
    let r: Vec<f64> = m.matvec(&x).iter().zip(&b).map(|(a, b)| a - b).collect();
    assert!(max_abs(&r) <= 1e-10 * (m.max_abs() * max_abs(&x) + max_abs(&b)));
}

#[test]
fn rcm_is_a_permutation_that_narrows_the_band() {
    let mut rng = StdRng::seed_from_u64(3);
    let n = 120;
    // A shuffled grid Laplacian.
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut t = TripletBuilder::new(n, n);
    for i in 0..n {
        t.add(perm[i], perm[i], 4.0);
        for j in [i + 1, i + 10] {
            if j < n && (j != i + 1 || i % 10 != 9) {
                t.add(perm[i], perm[j], -1.0);
                t.add(perm[j], perm[i], -1.0);
            }
        }
    }
    let m = t.finalize();
    let order = reverse_cuthill_mckee(&m);
    let mut seen = order.clone();
    seen.sort();
    assert_eq!(seen, (0..n).collect::<Vec<_>>());
    let identity: Vec<usize> = (0..n).collect();
    let (lo, up) = bandwidths(&m, &order);
    let (lo0, up0) = bandwidths(&m, &identity);
    assert!(lo + up < lo0 + up0);
    assert!(lo <= 20 && up <= 20, "bandwidths {lo} {up}");
}

#[test]
fn pencil_with_equal_matrices() {
    let mut rng = StdRng::seed_from_u64(11);
    let m = random_spd(6, &mut rng);
    for v in gen_eig_sym(&m, &m).unwrap().values {
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
    }
}

#[test]
fn diagonal_pencil() {
    let e = gen_eig_sym(&DenseMatrix::diag(&[4.0, 1.0]), &DenseMatrix::identity(2)).unwrap();
    assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(e.values[1], 4.0, epsilon = 1e-14);
}

#[test]
fn three_by_three_characteristic_polynomial() {
    // K x = λ x with K symmetric: roots of det(K - λ I) by bisection.
    let k = DenseMatrix::from_rows(&[
        vec![2.0, -1.0, 0.0],
        vec![-1.0, 2.0, -1.0],
        vec![0.0, -1.0, 2.0],
    ]);
    let det = |l: f64| {
        let a = |i: usize, j: usize| k[(i, j)] - if i == j { l } else { 0.0 };
        a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
            - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
    };
    let roots: Vec<f64> = [(0.0, 1.0), (1.0, 3.0), (3.0, 4.0)]
        .iter()
        .map(|&(mut lo, mut hi)| {
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if det(lo) * det(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect();
    let e = gen_eig_sym(&k, &DenseMatrix::identity(3)).unwrap();
    for (a, b) in e.values.iter().zip(&roots) {
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
    }
    assert_abs_diff_eq!(roots[0], 2.0 - 2f64.sqrt(), epsilon = 1e-12);
}

#[test]
fn indefinite_mass_is_rejected() {
    let m = DenseMatrix::diag(&[1.0, -1.0]);
    assert!(gen_eig_sym(&DenseMatrix::identity(2), &m).is_err());
}

#[test]
fn jacobi_reduces_off_diagonal() {
    let mut rng = StdRng::seed_from_u64(5);
    let a = random_spd(25, &mut rng);
    let e = jacobi_eigen(&a).unwrap();
    // VᵀAV is diagonal up to the stopping tolerance.
    let d = e.vectors.transpose().matmul(&a).matmul(&e.vectors);
    let mut off = 0.0;
    for i in 0..25 {
        for j in 0..25 {
            if i != j {
                off += d[(i, j)].powi(2);
            }
        }
    }
    assert!(off.sqrt() < 1e-11 * a.frobenius());
    assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generalized_residual_and_orthonormality(seed in 0u64..10_000) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = 30;
        let kmat = random_spd(n, &mut rng);
        let mmat = random_spd(n, &mut rng);
        let e = gen_eig_sym(&kmat, &mmat).unwrap();
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(e.values[0] > -1e-12);
        for j in 0..n {
            let x: Vec<f64> = (0..n).map(|i| e.vectors[(i, j)]).collect();
            let kx = kmat.matvec(&x);
            let mx = mmat.matvec(&x);
            let r: Vec<f64> = kx.iter().zip(&mx).map(|(a, b)| a - e.values[j] * b).collect();
            prop_assert!(max_abs(&r) < 1e-9 * (1.0 + e.values[j]), "residual {}", max_abs(&r));
            for k in 0..n {
                let y: Vec<f64> = (0..n).map(|i| e.vectors[(i, k)]).collect();
                let g = mmat.bilinear(&y, &x);
                let expect = if j == k { 1.0 } else { 0.0 };
                prop_assert!((g - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sparse_solve_residual(seed in 0u64..10_000, n in 5usize..80) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_sparse(n, &mut rng);
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = lu_solve(&m, &b).unwrap();
        let r: Vec<f64> = m.matvec(&x).iter().zip(&b).map(|(a, b)| a - b).collect();
        prop_assert!(max_abs(&r) <= 1e-10 * (m.max_abs() * max_abs(&x) + max_abs(&b)));
    }
}
