use crate::error::{Error, Result};
use crate::geometry::{FaceCurve, MultipatchDomain};
use crate::linalg::{dot, gen_eig_sym, solve_lower, solve_lower_transpose, DenseMatrix};
use crate::spaces::{MultiplierSpace, TraceSpace};
use crate::splinecore::QuadratureRule;

/// Measure of the interface integrals.
#[derive(Debug, Clone)]
pub enum Measure {
    /// Lebesgue measure on the parameter interval.
    Parametric,
    /// Arc length of the curve.
    Physical(FaceCurve),
}

impl Measure {
    fn weight(&self, t: f64) -> f64 {
        match self {
            Measure::Parametric => 1.0,
            Measure::Physical(c) => c.eval(t).1.norm(),
        }
    }

    pub fn is_physical(&self) -> bool {
        matches!(self, Measure::Physical(_))
    }
}

/// Interface mass matrices: `g[j][i] = ∫ μ_j w_i`, `s` the multiplier mass
/// and `t` the trace mass.
#[derive(Debug, Clone)]
pub struct GramTriple {
    pub g: DenseMatrix,
    pub s: DenseMatrix,
    pub t: DenseMatrix,
    pub interface: Option<usize>,
    pub physical: bool,
}

/// Gram matrices of a trace and a multiplier space on the same interval,
/// integrated element by element on the trace mesh with `p + 2` Gauss
/// points.
pub fn build_grams(
    trace: &TraceSpace,
    mult: &MultiplierSpace,
    measure: &Measure,
) -> Result<GramTriple> {
    let (nt, nm) = (trace.dim(), mult.dim());
    let mut g = DenseMatrix::zeros(nm, nt);
    let mut s = DenseMatrix::zeros(nm, nm);
    let mut t = DenseMatrix::zeros(nt, nt);
    let rule = QuadratureRule::gauss_legendre(trace.knots().degree() + 2);
    for (_, a, b) in trace.knots().elements() {
        for (x, w) in rule.mapped(a, b) {
            let w = w * measure.weight(x);
            let wt = trace.eval(x)?;
            let mu = mult.eval(x)?;
            for &(i, vi) in &wt {
                for &(k, vk) in &wt {
                    t[(i, k)] += vi * vk * w;
                }
            }
            for &(j, vj) in &mu {
                for &(k, vk) in &mu {
                    s[(j, k)] += vj * vk * w;
                }
                for &(i, vi) in &wt {
                    g[(j, i)] += vj * vi * w;
                }
            }
        }
    }
    Ok(GramTriple {
        g,
        s,
        t,
        interface: trace.interface,
        physical: measure.is_physical(),
    })
}

/// Gram matrices of interface `l`: the slave trace space, with the end
/// functions dropped when `edge_zero` holds, against `mult`.
pub fn interface_grams(
    domain: &MultipatchDomain,
    l: usize,
    mult: &MultiplierSpace,
    edge_zero: bool,
    physical: bool,
) -> Result<GramTriple> {
    let trace = TraceSpace::build(domain, l, edge_zero);
    let measure = if physical {
        let i = domain.interfaces()[l];
        Measure::Physical(domain.patch(i.slave).face_curve(i.slave_face))
    } else {
        Measure::Parametric
    };
    build_grams(&trace, mult, &measure)
}

/// `G T⁻¹ Gᵀ`, symmetrized.
fn schur(g: &GramTriple) -> Result<DenseMatrix> {
    let l = g.t.cholesky()?;
    let nm = g.g.rows();
    // rows of L⁻¹ Gᵀ columns: y_j = L⁻¹ g_j
    let ys: Vec<Vec<f64>> = (0..nm).map(|j| solve_lower(&l, g.g.row(j))).collect();
    let mut k = DenseMatrix::zeros(nm, nm);
    for i in 0..nm {
        for j in 0..=i {
            let v = dot(&ys[i], &ys[j]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    Ok(k)
}

/// Discrete inf-sup constant `sqrt(λ_min)` of `G T⁻¹ Gᵀ x = λ S x`.
pub fn infsup_constant(g: &GramTriple) -> Result<f64> {
    let eig = gen_eig_sym(&schur(g)?, &g.s)?;
    let min = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(min.max(0.0).sqrt())
}

/// `sup_w (μᵀ G w) / (‖w‖ ‖μ‖)` in closed form.
pub fn sup_ratio(g: &GramTriple, mu: &[f64]) -> Result<f64> {
    if mu.len() != g.s.rows() {
        return Err(Error::Precondition(format!(
            "multiplier vector has length {}, expected {}",
            mu.len(),
            g.s.rows()
        )));
    }
    let den = g.s.bilinear(mu, mu);
    if !(den > 0.0) {
        return Err(Error::Precondition("zero multiplier direction".into()));
    }
    let gtmu = g.g.transpose().matvec(mu);
    let l = g.t.cholesky()?;
    let y = solve_lower(&l, &gtmu);
    Ok((dot(&y, &y) / den).sqrt())
}

/// The trace function attaining the supremum for `mu`: `w = T⁻¹ Gᵀ μ`.
pub fn maximizer(g: &GramTriple, mu: &[f64]) -> Result<Vec<f64>> {
    let l = g.t.cholesky()?;
    let y = solve_lower(&l, &g.g.transpose().matvec(mu));
    Ok(solve_lower_transpose(&l, &y))
}
