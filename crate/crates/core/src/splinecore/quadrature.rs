use std::f64::consts::PI;

/// Gauss–Legendre rule with `order` points on the reference interval `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn gauss_legendre(order: usize) -> Self {
        assert!(order > 0, "quadrature order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            // Chebyshev-like initial guess, refined by Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        QuadratureRule {
            order,
            nodes,
            weights,
        }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive bisection driven by the difference of a 10- and a 15-point Gauss
/// rule on each subinterval. Used as an independent reference integrator.
pub fn adaptive_gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        lo: &QuadratureRule,
        hi: &QuadratureRule,
        a: f64,
        b: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let coarse = lo.integrate(a, b, f);
        let fine = hi.integrate(a, b, f);
        if (fine - coarse).abs() <= tol || depth == 0 {
            return fine;
        }
        let m = 0.5 * (a + b);
        rec(f, lo, hi, a, m, 0.5 * tol, depth - 1) + rec(f, lo, hi, m, b, 0.5 * tol, depth - 1)
    }
    let lo = QuadratureRule::gauss_legendre(10);
    let hi = QuadratureRule::gauss_legendre(15);
    rec(f, &lo, &hi, a, b, tol, 40)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules() {
        let q = QuadratureRule::gauss_legendre(1);
        assert_eq!(q.nodes, vec![0.0]);
        assert!((q.weights[0] - 2.0).abs() < 1e-15);
        let q = QuadratureRule::gauss_legendre(2);
        assert!((q.nodes[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((q.nodes[0] + 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn exact_for_top_monomial_on_subintervals() {
        for q in 1..=20 {
            let rule = QuadratureRule::gauss_legendre(q);
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            let deg = 2 * q - 1;
            for &(a, b) in &[(0.0, 1.0), (-0.3, 0.7), (0.25, 0.375), (1.0, 3.5)] {
                let exact = (f64::powi(b, deg as i32 + 1) - f64::powi(a, deg as i32 + 1))
                    / (deg as f64 + 1.0);
                let got = rule.integrate(a, b, |x| x.powi(deg as i32));
                assert!(
                    ((got - exact) / exact).abs() < 1e-13,
                    "q={q} [{a},{b}] got {got} exact {exact}"
                );
            }
        }
    }

    #[test]
    fn adaptive_smooth() {
        let v = adaptive_gauss(&|x: f64| x.sin().exp(), 0.0, 2.0, 1e-14);
        let reference = QuadratureRule::gauss_legendre(60).integrate(0.0, 2.0, |x| x.sin().exp());
        assert!((v - reference).abs() < 1e-13);
    }
}
