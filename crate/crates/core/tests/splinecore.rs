use approx::assert_abs_diff_eq;
use isomortar::splinecore::{adaptive_gauss, KnotVector, QuadratureRule};
use isomortar::Error;
use proptest::prelude::*;

/// Open knot vector of degree `p` with the given interior breakpoints
/// (in thousandths) and multiplicities.
fn knot_vector(p: usize, interior: &[(u32, usize)]) -> KnotVector {
    let mut pts: Vec<(u32, usize)> = interior.to_vec();
    pts.sort();
    pts.dedup_by_key(|x| x.0);
    let mut knots = vec![0.0; p + 1];
    for &(b, m) in &pts {
        knots.extend(std::iter::repeat_n(b as f64 / 1000.0, m));
    }
    knots.extend(std::iter::repeat_n(1.0, p + 1));
    KnotVector::new(p, knots).unwrap()
}

/// Degree in `1..=5` and up to six interior breakpoints with multiplicity
/// at most `p - max_drop`.
fn arb_knots(max_drop: usize) -> impl Strategy<Value = KnotVector> {
    (1 + max_drop..=5usize).prop_flat_map(move |p| {
        prop::collection::vec((1u32..1000, 1..=p - max_drop), 0..6)
            .prop_map(move |interior| knot_vector(p, &interior))
    })
}

fn greville_coeffs(kv: &KnotVector, seed: u64) -> Vec<f64> {
    (0..kv.dim())
        .map(|i| ((i as f64 + 1.0) * 0.7 + seed as f64 * 0.13).sin())
        .collect()
}

#[test]
fn hat_functions() {
    let kv = KnotVector::new(1, vec![0.0, 0.0, 1.0, 1.0]).unwrap();
    let b = kv.eval_basis(0.3, 0).unwrap();
    assert_abs_diff_eq!(b.values()[0], 0.7, epsilon = 1e-15);
    assert_abs_diff_eq!(b.values()[1], 0.3, epsilon = 1e-15);
}

#[test]
fn bernstein_at_midpoint() {
    let kv = KnotVector::new(2, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
    let b = kv.eval_basis(0.5, 0).unwrap();
    for (v, e) in b.values().iter().zip([0.25, 0.5, 0.25]) {
        assert_abs_diff_eq!(*v, e, epsilon = 1e-15);
    }
}

#[test]
fn span_conventions() {
    let kv = KnotVector::new(2, vec![0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0]).unwrap();
    let first = kv.find_span(0.25).unwrap();
    let last = kv.find_span(1.0).unwrap();
    assert_eq!(kv.knots()[first], 0.0);
    assert_eq!(kv.knots()[first + 1], 0.5);
    assert_eq!(kv.knots()[last], 0.5);
    assert_eq!(kv.knots()[last + 1], 1.0);
    assert!(matches!(kv.find_span(1.5), Err(Error::Domain { .. })));
    assert!(matches!(kv.eval_basis(-0.1, 0), Err(Error::Domain { .. })));
}

#[test]
fn boehm_example() {
    let kv = KnotVector::new(2, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
    let (fine, c) = kv.insert_knot(&[1.0, 0.0, 0.0], 0.5).unwrap();
    assert_eq!(fine.knots(), &[0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0]);
    for (v, e) in c.iter().zip([1.0, 0.5, 0.0, 0.0]) {
        assert_abs_diff_eq!(*v, e, epsilon = 1e-15);
    }
}

#[test]
fn insertion_to_full_multiplicity_keeps_continuity() {
    let kv = KnotVector::uniform(3, 4);
    let coeffs = greville_coeffs(&kv, 3);
    let (mut k, mut c) = (kv.clone(), coeffs.clone());
    for _ in 0..3 {
        (k, c) = k.insert_knot(&c, 0.6).unwrap();
    }
    assert!(k.insert_knot(&c, 0.6).is_err());
    let left = k.eval_spline(&c, 0.6 - 1e-13).unwrap();
    let right = k.eval_spline(&c, 0.6).unwrap();
    assert_abs_diff_eq!(left, right, epsilon = 1e-10);
    assert_abs_diff_eq!(
        right,
        kv.eval_spline(&coeffs, 0.6).unwrap(),
        epsilon = 1e-12
    );
}

#[test]
fn uniform_refinement_examples() {
    let kv = KnotVector::new(1, vec![0.0, 0.0, 1.0, 1.0]).unwrap();
    assert_eq!(kv.uniform_refine(1).knots(), &[0.0, 0.0, 0.5, 1.0, 1.0]);
    let q = KnotVector::new(2, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
    assert_eq!(
        q.uniform_refine(2).breakpoints(),
        vec![0.0, 0.25, 0.5, 0.75, 1.0]
    );
}

#[test]
fn trimming_examples() {
    let kv = KnotVector::new(2, vec![0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0]).unwrap();
    let t1 = kv.trim(1).unwrap();
    assert_eq!(
        (t1.degree(), t1.knots()),
        (1, &[0.0, 0.0, 0.5, 1.0, 1.0][..])
    );
    let t2 = kv.trim(2).unwrap();
    assert_eq!((t2.degree(), t2.knots()), (0, &[0.0, 0.5, 1.0][..]));
    let doubled = KnotVector::new(2, vec![0.0, 0.0, 0.0, 0.5, 0.5, 1.0, 1.0, 1.0]).unwrap();
    match doubled.trim(2) {
        Err(Error::Precondition(msg)) => assert!(msg.contains("0.5"), "{msg}"),
        other => panic!("expected precondition error, got {other:?}"),
    }
}

#[test]
fn adaptive_quadrature_of_oscillatory_integrand() {
    let v = adaptive_gauss(&|x: f64| (20.0 * x).sin() * x.exp(), 0.0, 1.0, 1e-13);
    let exact = {
        let f = |x: f64| x.exp() * ((20.0 * x).sin() - 20.0 * (20.0 * x).cos()) / 401.0;
        f(1.0) - f(0.0)
    };
    assert_abs_diff_eq!(v, exact, epsilon = 1e-12);
}

proptest! {
    #[test]
    fn partition_of_unity(kv in arb_knots(0), t in 0.0..=1.0f64) {
        let b = kv.eval_basis(t, kv.degree()).unwrap();
        prop_assert_eq!(b.values().len(), kv.degree() + 1);
        prop_assert!(b.values().iter().all(|v| *v >= 0.0));
        prop_assert!((b.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for k in 1..=kv.degree() {
            let s: f64 = b.derivative(k).iter().sum();
            let scale: f64 = b.derivative(k).iter().map(|d| d.abs()).sum::<f64>().max(1.0);
            prop_assert!(s.abs() < 1e-11 * scale, "order {} sums to {}", k, s);
        }
    }

    #[test]
    fn local_support(kv in arb_knots(0), t in 0.0..1.0f64) {
        let b = kv.eval_basis(t, 0).unwrap();
        let p = kv.degree();
        for (a, i) in b.indices().enumerate() {
            if b.values()[a] != 0.0 {
                prop_assert!(kv.knots()[i] <= t && t <= kv.knots()[i + p + 1]);
            }
        }
    }

    #[test]
    fn derivative_matches_differences(kv in arb_knots(0), t in 0.01..0.99f64, seed in 0u64..100) {
        let c = greville_coeffs(&kv, seed);
        let h = 1e-6;
        let fd = (kv.eval_spline(&c, t + h).unwrap() - kv.eval_spline(&c, t - h).unwrap()) / (2.0 * h);
        let d = kv.eval_spline_derivative(&c, t, 1).unwrap();
        // A breakpoint inside the stencil makes the difference meaningless.
        let near_break = kv.breakpoints().iter().any(|z| (z - t).abs() < 2.0 * h);
        prop_assume!(!near_break);
        prop_assert!((fd - d).abs() < 1e-5 * (1.0 + d.abs()), "fd {} vs {}", fd, d);
    }

    #[test]
    fn derivative_lives_in_trimmed_space(kv in arb_knots(1), t in 0.0..=1.0f64, seed in 0u64..100) {
        let c = greville_coeffs(&kv, seed);
        let p = kv.degree();
        let xi = kv.knots();
        let d: Vec<f64> = (0..kv.dim() - 1)
            .map(|i| p as f64 * (c[i + 1] - c[i]) / (xi[i + p + 1] - xi[i + 1]))
            .collect();
        let lower = kv.trim(1).unwrap();
        let a = kv.eval_spline_derivative(&c, t, 1).unwrap();
        let b = lower.eval_spline(&d, t).unwrap();
        prop_assert!((a - b).abs() < 1e-11 * (1.0 + a.abs()), "{} vs {}", a, b);
    }

    #[test]
    fn insertion_preserves_values(kv in arb_knots(1), s in 0.001..0.999f64, seed in 0u64..100,
                                  ts in prop::collection::vec(0.0..=1.0f64, 50)) {
        let c = greville_coeffs(&kv, seed);
        let (fine, fc) = kv.insert_knot(&c, s).unwrap();
        prop_assert_eq!(fine.dim(), kv.dim() + 1);
        for t in ts {
            let a = kv.eval_spline(&c, t).unwrap();
            let b = fine.eval_spline(&fc, t).unwrap();
            prop_assert!((a - b).abs() < 1e-12, "{} vs {} at {}", a, b, t);
        }
    }

    #[test]
    fn refinement_doubles_spans(kv in arb_knots(0), levels in 0usize..3) {
        let fine = kv.uniform_refine(levels);
        prop_assert_eq!(fine.num_elements(), kv.num_elements() << levels);
        prop_assert!((fine.quasi_uniformity() - kv.quasi_uniformity()).abs() < 1e-9);
    }

    #[test]
    fn gauss_top_monomial(q in 1usize..12, a in 0.0..3.0f64, len in 0.01..4.0f64) {
        let b = a + len;
        let k = 2 * q as i32 - 1;
        let rule = QuadratureRule::gauss_legendre(q);
        prop_assert!(rule.weights.iter().all(|w| *w > 0.0));
        let v = rule.integrate(a, b, |x| x.powi(k));
        let exact = (b.powi(k + 1) - a.powi(k + 1)) / (k + 1) as f64;
        prop_assert!((v - exact).abs() <= 1e-13 * exact, "q={} exact {} got {}", q, exact, v);
    }
}
