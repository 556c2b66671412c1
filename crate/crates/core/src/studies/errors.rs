use nalgebra::Vector2;

use super::fields::ExactSolution;
use crate::assembly::{face_quadrature, SaddleSystem};
use crate::error::Result;
use crate::geometry::MultipatchDomain;
use crate::splinecore::QuadratureRule;

/// Errors of one solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub level: usize,
    pub h: f64,
    pub l2: f64,
    /// `(Σ_k ‖u − u_h‖²_{H¹(Ω_k)})^{1/2}`
    pub broken_v: f64,
    /// `‖α ∂u/∂n − λ_h‖_{L²(γ_l)}` per interface, `n` the slave outward
    /// normal.
    pub dual_l2: Vec<f64>,
    pub patch_l2: Vec<f64>,
    pub patch_v: Vec<f64>,
    pub unknowns: usize,
    pub constraint_residual: f64,
}

/// Error norms with `q = p + 2` Gauss points per direction.
pub fn error_norms(
    domain: &MultipatchDomain,
    system: &SaddleSystem,
    u: &[f64],
    lambda: &[f64],
    exact: &dyn ExactSolution,
) -> Result<ErrorRow> {
    error_norms_with(domain, system, u, lambda, exact, 0)
}

/// As [`error_norms`] with `extra` additional Gauss points per direction.
pub fn error_norms_with(
    domain: &MultipatchDomain,
    system: &SaddleSystem,
    u: &[f64],
    lambda: &[f64],
    exact: &dyn ExactSolution,
    extra: usize,
) -> Result<ErrorRow> {
    let layout = &system.dofs.layout;
    let comps = layout.components;
    let mut patch_l2 = Vec::new();
    let mut patch_v = Vec::new();
    for (k, patch) in domain.patches().iter().enumerate() {
        let (mut e0, mut e1) = (0.0, 0.0);
        patch.for_each_element(face_quadrature(patch) + extra, |points| {
            for (ev, w) in points {
                let grads = ev.physical_gradients().expect("regular patch");
                let dx = w * ev.jacobian.determinant().abs();
                let uex = exact.value(ev.point);
                let gex = exact.gradient(ev.point);
                for c in 0..comps {
                    let (mut uh, mut gh) = (0.0, Vector2::zeros());
                    for (a, i) in ev.indices.iter().enumerate() {
                        let coef = u[layout.index(k, c, *i)];
                        uh += coef * ev.values[a];
                        gh += coef * grads[a];
                    }
                    e0 += (uex[c] - uh).powi(2) * dx;
                    e1 += ((gex[c][0] - gh.x).powi(2) + (gex[c][1] - gh.y).powi(2)) * dx;
                }
            }
            Ok(())
        })?;
        patch_l2.push(e0);
        patch_v.push(e0 + e1);
    }
    let mut dual_l2 = Vec::new();
    for (l, iface) in domain.interfaces().iter().enumerate() {
        let slave = domain.patch(iface.slave);
        let mult = &system.multipliers[l];
        let nm = mult.dim();
        let block = &lambda[system.dofs.interface_range(l)];
        let dir = iface.slave_face.tangential_dir();
        let rule = QuadratureRule::gauss_legendre(face_quadrature(slave) + extra);
        let mut err = 0.0;
        for (_, a, b) in slave.face_knots(iface.slave_face).elements() {
            for (t, w) in rule.mapped(a, b) {
                let ev = slave.eval(iface.slave_face.param(t))?;
                let meas = ev.jacobian.column(dir).norm();
                let n = slave.outward_normal(iface.slave_face, t)?;
                let flux = exact.flux(iface.slave, ev.point, n);
                let mu = mult.eval(t)?;
                for c in 0..comps {
                    let lh: f64 = mu.iter().map(|(j, v)| block[c * nm + j] * v).sum();
                    err += (flux[c] - lh).powi(2) * w * meas;
                }
            }
        }
        dual_l2.push(err.sqrt());
    }
    let l2 = patch_l2.iter().sum::<f64>().sqrt();
    let broken_v = patch_v.iter().sum::<f64>().sqrt();
    Ok(ErrorRow {
        level: 0,
        h: domain.mesh_size(),
        l2,
        broken_v,
        dual_l2,
        patch_l2: patch_l2.into_iter().map(f64::sqrt).collect(),
        patch_v: patch_v.into_iter().map(f64::sqrt).collect(),
        unknowns: u.len() + lambda.len(),
        constraint_residual: 0.0,
    })
}

/// Pairwise rates `log(e_i / e_{i+1}) / log(h_i / h_{i+1})`; `None` where
/// either error is below `1e-14`.
pub fn pairwise_slopes(errors: &[f64], hs: &[f64]) -> Vec<Option<f64>> {
    errors
        .windows(2)
        .zip(hs.windows(2))
        .map(|(e, h)| {
            (e[0] > 1e-14 && e[1] > 1e-14 && h[0] != h[1])
                .then(|| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        })
        .collect()
}

/// Least-squares slope of `log e` against `log h` over the last `count`
/// levels with errors above `1e-14`.
pub fn least_squares_slope(errors: &[f64], hs: &[f64], count: usize) -> Option<f64> {
    let pts: Vec<(f64, f64)> = errors
        .iter()
        .zip(hs)
        .filter(|(e, _)| **e > 1e-14)
        .map(|(e, h)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let pts = &pts[pts.len().saturating_sub(count)..];
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Slopes of an error sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub pairwise: Vec<Option<f64>>,
    /// Least squares over the last three levels.
    pub asymptotic: Option<f64>,
}

pub fn slope_fit(errors: &[f64], hs: &[f64]) -> SlopeFit {
    SlopeFit {
        pairwise: pairwise_slopes(errors, hs),
        asymptotic: least_squares_slope(errors, hs, 3),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bisection_slope() {
        let s = pairwise_slopes(&[1.0, 0.125], &[1.0, 0.5]);
        assert_abs_diff_eq!(s[0].unwrap(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn table_slope_value() {
        let s = pairwise_slopes(&[1.100586e-03, 4.794994e-05], &[0.25, 0.125]);
        assert_abs_diff_eq!(s[0].unwrap(), 4.521, epsilon = 5e-4);
    }

    #[test]
    fn power_law_recovered() {
        let hs: Vec<f64> = (0..6).map(|k| 0.5f64.powi(k)).collect();
        let es: Vec<f64> = hs.iter().map(|h| 3.7 * h.powf(2.6)).collect();
        let fit = slope_fit(&es, &hs);
        assert_abs_diff_eq!(fit.asymptotic.unwrap(), 2.6, epsilon = 1e-12);
        for s in fit.pairwise {
            assert_abs_diff_eq!(s.unwrap(), 2.6, epsilon = 1e-12);
        }
    }

    #[test]
    fn tiny_errors_skipped() {
        let s = pairwise_slopes(&[1e-3, 1e-16, 1e-17], &[1.0, 0.5, 0.25]);
        assert!(s.iter().all(Option::is_none));
    }
}
