use approx::assert_abs_diff_eq;
use isomortar::geometry::builders;
use isomortar::infsup::{
    build_grams, checkerboard, checkerboard_start, infsup_constant, interface_grams, maximizer,
    pairing_constant, sup_ratio, sweep, BcMode, GramTriple, Measure, SweepConfig,
};
use isomortar::linalg::{gen_eig_sym, DenseMatrix};
use isomortar::spaces::{MultiplierSpace, MultiplierVariant, TraceSpace};
use isomortar::splinecore::KnotVector;
use proptest::prelude::*;

const EQ: MultiplierVariant = MultiplierVariant::EqualOrderModified;
const VARIANTS: [MultiplierVariant; 3] = [
    EQ,
    MultiplierVariant::DEGREE_MINUS_ONE,
    MultiplierVariant::DEGREE_MINUS_TWO,
];

fn grams(p: usize, e: usize, variant: MultiplierVariant, edge_zero: bool) -> GramTriple {
    let kv = KnotVector::uniform(p, e);
    let mult = MultiplierSpace::new(&kv, variant, true, true).unwrap();
    build_grams(
        &TraceSpace::parametric(kv, edge_zero),
        &mult,
        &Measure::Parametric,
    )
    .unwrap()
}

/// `G T⁻¹ Gᵀ` by dense solves.
fn schur(g: &GramTriple) -> DenseMatrix {
    let nm = g.g.rows();
    let cols: Vec<Vec<f64>> = (0..nm).map(|j| g.t.solve(g.g.row(j)).unwrap()).collect();
    DenseMatrix::from_fn(nm, nm, |i, j| {
        g.g.row(i).iter().zip(&cols[j]).map(|(a, b)| a * b).sum()
    })
}

fn column(m: &DenseMatrix, j: usize) -> Vec<f64> {
    (0..m.rows()).map(|i| m[(i, j)]).collect()
}

fn norm_in(m: &DenseMatrix, x: &[f64]) -> f64 {
    m.bilinear(x, x).sqrt()
}

#[test]
fn linear_trace_mass_oracle() {
    let g = grams(1, 2, EQ, false);
    let expect = [[2.0, 1.0, 0.0], [1.0, 4.0, 1.0], [0.0, 1.0, 2.0]];
    for (i, row) in expect.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            assert_abs_diff_eq!(g.t[(i, j)], e / 12.0, epsilon = 1e-15);
        }
    }
}

#[test]
fn identical_spaces_give_unit_constant() {
    for p in 1..=4 {
        let kv = KnotVector::uniform(p, 6);
        let mult = MultiplierSpace::new(&kv, EQ, false, false).unwrap();
        let g = build_grams(
            &TraceSpace::parametric(kv, false),
            &mult,
            &Measure::Parametric,
        )
        .unwrap();
        assert!(g.g.asymmetry() < 1e-15);
        assert_abs_diff_eq!(infsup_constant(&g).unwrap(), 1.0, epsilon = 1e-10);
    }
}

#[test]
fn unit_speed_interface_measures_agree() {
    let d = builders::two_squares(3, [2, 4], [3, 5]).unwrap();
    let i = d.interfaces()[0];
    let mult =
        MultiplierSpace::new(d.patch(i.slave).face_knots(i.slave_face), EQ, true, true).unwrap();
    let physical = interface_grams(&d, 0, &mult, true, true).unwrap();
    let parametric = interface_grams(&d, 0, &mult, true, false).unwrap();
    assert!(physical.physical && !parametric.physical);
    for (a, b) in [
        (&physical.g, &parametric.g),
        (&physical.s, &parametric.s),
        (&physical.t, &parametric.t),
    ] {
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                assert_abs_diff_eq!(a[(r, c)], b[(r, c)], epsilon = 1e-14);
            }
        }
    }
}

#[test]
fn physical_and_parametric_constants_are_comparable() {
    // The quarter-circle interface speed varies by less than a factor two.
    for p in 2..=4 {
        for variant in [EQ, MultiplierVariant::DEGREE_MINUS_TWO] {
            let a = pairing_constant(p, variant, 8, BcMode::Free, false).unwrap();
            let b = pairing_constant(p, variant, 8, BcMode::Free, true).unwrap();
            assert!(b > 0.5 * a && b < 2.0 * a, "P{p} {variant}: {a} vs {b}");
        }
    }
}

#[test]
fn maximizer_attains_the_sup() {
    let g = grams(3, 7, MultiplierVariant::DEGREE_MINUS_ONE, false);
    let mu: Vec<f64> = (0..g.s.rows()).map(|j| (1.3 * j as f64).cos()).collect();
    let w = maximizer(&g, &mu).unwrap();
    let pairing: f64 = g.g.matvec(&w).iter().zip(&mu).map(|(a, b)| a * b).sum();
    let ratio = pairing / (norm_in(&g.t, &w) * norm_in(&g.s, &mu));
    assert_abs_diff_eq!(ratio, sup_ratio(&g, &mu).unwrap(), epsilon = 1e-12);
}

#[test]
fn sup_ratio_rejects_bad_input() {
    let g = grams(2, 4, EQ, false);
    assert!(sup_ratio(&g, &[1.0]).is_err());
    assert!(sup_ratio(&g, &vec![0.0; g.s.rows()]).is_err());
}

#[test]
fn checkerboard_ratio_decays_linearly() {
    let first = checkerboard_start(2);
    assert_eq!(first, 3);
    assert_eq!(checkerboard_start(10), 6);
    let rows = checkerboard(2, first, 4).unwrap();
    for w in rows.windows(2) {
        let slope = (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln();
        assert!((slope - 1.0).abs() < 0.15, "slope {slope}");
    }
}

#[test]
fn sweep_rows_are_ordered_and_consistent() {
    let config = SweepConfig {
        degrees: vec![2, 3],
        variants: vec![EQ, MultiplierVariant::DEGREE_MINUS_TWO],
        levels: 3,
        ..SweepConfig::default()
    };
    let result = sweep(&config).unwrap();
    assert_eq!(result.rows.len(), 12);
    for r in &result.rows {
        let direct =
            pairing_constant(r.degree, r.variant, 4 << r.level, BcMode::Free, false).unwrap();
        assert_eq!(r.constant, direct);
    }
    // Equal-order modified is exactly bounded below by one in the free mode.
    assert!(result.variation(2, EQ).unwrap() < 1e-10);
    assert!(
        result
            .variation(3, MultiplierVariant::DEGREE_MINUS_TWO)
            .unwrap()
            < 0.1
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn masses_are_positive_definite(p in 2usize..=5, e in 2usize..=12, v in 0usize..3, edge_zero: bool) {
        let g = grams(p, e, VARIANTS[v], edge_zero);
        prop_assert!(g.s.cholesky().is_ok());
        prop_assert!(g.t.cholesky().is_ok());
        prop_assert!(g.s.asymmetry() < 1e-14 && g.t.asymmetry() < 1e-14);
    }

    #[test]
    fn constant_bounds_every_direction(p in 2usize..=4, e in 3usize..=10, v in 0usize..3, seed in 0u64..1000) {
        let g = grams(p, e, VARIANTS[v], false);
        let beta = infsup_constant(&g).unwrap();
        let eig = gen_eig_sym(&schur(&g), &g.s).unwrap();
        let top = eig.values.len() - 1;
        prop_assert!((sup_ratio(&g, &column(&eig.vectors, top)).unwrap() - eig.values[top].sqrt()).abs() < 1e-9);
        prop_assert!((sup_ratio(&g, &column(&eig.vectors, 0)).unwrap() - beta).abs() < 1e-9);
        let mu: Vec<f64> = (0..g.s.rows()).map(|j| ((j as u64 * 131 + seed) as f64).sin()).collect();
        let r = sup_ratio(&g, &mu).unwrap();
        prop_assert!(beta <= r + 1e-12, "{} > {}", beta, r);
        prop_assert!(r <= eig.values[top].sqrt() + 1e-12);
    }
}
