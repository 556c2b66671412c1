use std::f64::consts::PI;
use std::sync::Arc;

use approx::assert_abs_diff_eq;
use isomortar::assembly::solve_problem;
use isomortar::geometry::builders;
use isomortar::spaces::MultiplierVariant;
use isomortar::studies::{
    error_norms, error_norms_with, hooke, least_squares_slope, pairwise_slopes, problem_data,
    run_convergence, solve_level, Case, ExactSolution, PlateWithHole, ScalarField, ScalarShape,
};
use nalgebra::Vector2;
use proptest::prelude::*;

const EQ: MultiplierVariant = MultiplierVariant::EqualOrderModified;
const H: f64 = 1e-4;

fn fd_gradient(f: impl Fn(Vector2<f64>) -> f64, x: Vector2<f64>) -> [f64; 2] {
    let e = [Vector2::new(H, 0.0), Vector2::new(0.0, H)];
    e.map(|d| (f(x + d) - f(x - d)) / (2.0 * H))
}

fn fd_laplacian(f: impl Fn(Vector2<f64>) -> f64, x: Vector2<f64>) -> f64 {
    let h = 1e-3;
    let (dx, dy) = (Vector2::new(h, 0.0), Vector2::new(0.0, h));
    (f(x + dx) + f(x - dx) + f(x + dy) + f(x - dy) - 4.0 * f(x)) / (h * h)
}

#[test]
fn linear_field_is_reproduced_on_nested_meshes() {
    let exact = Arc::new(ScalarField::new(ScalarShape::Linear));
    for (degree, slave) in [(1, [3, 4]), (2, [2, 4]), (3, [3, 8])] {
        let d = builders::two_squares(degree, [2, 2], slave).unwrap();
        let row = solve_level(&d, exact.clone(), EQ, 0).unwrap();
        assert!(row.l2 < 1e-11 && row.broken_v < 1e-11, "P{degree}: {row:?}");
        // λ recovers the normal flux ∇u · n = -1 of the slave side.
        assert!(row.dual_l2[0] < 1e-11, "P{degree}: {row:?}");
    }
}

#[test]
fn extra_quadrature_changes_errors_negligibly() {
    let exact = Arc::new(ScalarField::new(ScalarShape::SinePi));
    let d = builders::annulus(3, 2, true).unwrap();
    let (system, sol) = solve_problem(&d, &problem_data(exact.clone()), EQ).unwrap();
    let base = error_norms(&d, &system, &sol.u, &sol.lambda, exact.as_ref()).unwrap();
    let fine = error_norms_with(&d, &system, &sol.u, &sol.lambda, exact.as_ref(), 4).unwrap();
    for (a, b) in [
        (base.l2, fine.l2),
        (base.broken_v, fine.broken_v),
        (base.dual_l2[0], fine.dual_l2[0]),
    ] {
        assert!((a - b).abs() < 1e-3 * b, "{a} vs {b}");
    }
    let total: f64 = base.patch_v.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert_abs_diff_eq!(total, base.broken_v, epsilon = 1e-14);
}

#[test]
fn slopes_of_exact_power_laws() {
    let hs = [0.5, 0.25, 0.125, 0.0625];
    let errors: Vec<f64> = hs.iter().map(|h: &f64| 3.0 * h.powi(4)).collect();
    for s in pairwise_slopes(&errors, &hs) {
        assert_abs_diff_eq!(s.unwrap(), 4.0, epsilon = 1e-12);
    }
    assert_abs_diff_eq!(
        least_squares_slope(&errors, &hs, 3).unwrap(),
        4.0,
        epsilon = 1e-12
    );
    assert_eq!(pairwise_slopes(&[1e-3, 0.0], &[0.5, 0.25]), vec![None]);
}

#[test]
fn cases_parse_and_reject() {
    for name in [
        "annulus",
        "annulus-nonmatching",
        "corner",
        "plate",
        "wavy",
        "wavy-nonmatching",
    ] {
        assert_eq!(Case::parse(name).unwrap().name(), name);
    }
    assert!(Case::parse("moon").is_err());
    assert!(run_convergence(&Case::Corner, EQ, 2, 0).is_err());
}

#[test]
fn annulus_errors_decrease_with_refinement() {
    let report = run_convergence(&Case::Annulus { nonmatching: true }, EQ, 2, 3).unwrap();
    let rows = &report.rows;
    assert!(rows
        .windows(2)
        .all(|w| w[1].l2 < w[0].l2 && w[1].broken_v < w[0].broken_v));
    assert!(rows
        .windows(2)
        .all(|w| w[1].h < w[0].h && w[1].unknowns > w[0].unknowns));
    assert!(report.max_constraint_residual() < 1e-10);
    let mut csv = Vec::new();
    report.write_csv(&mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 4);
}

#[test]
fn plate_stress_is_traction_free_on_the_hole() {
    let plate = PlateWithHole::standard();
    for k in 0..=8 {
        let th = k as f64 * PI / 16.0;
        let n = Vector2::new(-th.cos(), -th.sin());
        let t = plate.flux(0, -n * plate.radius, n);
        assert!(t[0].abs() < 1e-12 && t[1].abs() < 1e-12, "{t:?} at {th}");
    }
    // Far field tends to uniaxial tension; the hole concentrates it threefold.
    let far = plate.stress(Vector2::new(0.0, 1e4));
    assert_abs_diff_eq!(far[0], plate.tension, epsilon = 1e-6);
    assert_abs_diff_eq!(
        plate.stress(Vector2::new(0.0, plate.radius))[0],
        3.0 * plate.tension,
        epsilon = 1e-12
    );
}

fn arb_scalar_point() -> impl Strategy<Value = (ScalarShape, Vector2<f64>)> {
    (0usize..4, 0.05..0.95f64, 0.05..0.95f64).prop_map(|(s, a, b)| {
        let shape = [
            ScalarShape::SinePi,
            ScalarShape::Sine56,
            ScalarShape::Linear,
            ScalarShape::Corner,
        ][s];
        // Corner points stay inside the L-shape and off the branch cut.
        let x = if shape == ScalarShape::Corner {
            Vector2::new(2.0 * a - 1.0, b)
        } else {
            Vector2::new(a, b)
        };
        (shape, x)
    })
}

proptest! {
    #[test]
    fn scalar_fields_are_consistent((shape, x) in arb_scalar_point()) {
        let f = ScalarField::new(shape);
        let u = |y: Vector2<f64>| f.value(y)[0];
        let g = f.gradient(x)[0];
        let fd = fd_gradient(u, x);
        for d in 0..2 {
            prop_assert!((g[d] - fd[d]).abs() < 1e-6 * (1.0 + g[d].abs()), "{:?}: {:?} vs {:?}", shape, g, fd);
        }
        let lap = fd_laplacian(u, x);
        let src = f.source(0, x)[0];
        prop_assert!((src + lap).abs() < 1e-3 * (1.0 + src.abs()), "{:?}: {} vs {}", shape, src, -lap);
        let n = Vector2::new(0.6, -0.8);
        prop_assert!((f.flux(0, x, n)[0] - (g[0] * n.x + g[1] * n.y)).abs() < 1e-12);
    }

    #[test]
    fn plate_field_is_in_equilibrium(r in 0.25..1.8f64, th in 0.0..(PI / 2.0)) {
        let plate = PlateWithHole::standard();
        let x = Vector2::new(r * th.cos(), r * th.sin());
        // Closed-form stress agrees with Hooke's law applied to the displacement.
        let s = plate.stress(x);
        let h = hooke(plate.lambda, plate.mu, plate.gradient(x));
        for c in 0..3 {
            prop_assert!((s[c] - h[c]).abs() < 1e-9 * plate.tension, "{:?} vs {:?}", s, h);
        }
        let comp = |c: usize| move |y: Vector2<f64>| plate.stress(y)[c];
        let dxx = fd_gradient(comp(0), x);
        let dyy = fd_gradient(comp(1), x);
        let dxy = fd_gradient(comp(2), x);
        let div = [dxx[0] + dxy[1], dxy[0] + dyy[1]];
        prop_assert!(div[0].abs() < 1e-5 * plate.tension && div[1].abs() < 1e-5 * plate.tension, "{:?}", div);
        // Displacement gradient matches differences of the displacement.
        let g = plate.gradient(x);
        for (c, row) in g.iter().enumerate() {
            let fd = fd_gradient(|y| plate.value(y)[c], x);
            for (a, b) in row.iter().zip(fd) {
                prop_assert!((a - b).abs() < 1e-5 * (a.abs() + 1e-4), "{} vs {}", a, b);
            }
        }
    }
}
