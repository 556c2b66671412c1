use crate::error::Result;
use crate::geometry::MultipatchDomain;
use crate::linalg::TripletBuilder;
use crate::spaces::MultiplierSpace;
use crate::splinecore::QuadratureRule;

use super::local::face_quadrature;

/// Offsets of the primal unknowns: patch `k`, component `c` and basis `a`
/// live at `patch_offsets[k] + c * n_k + a`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimalLayout {
    pub components: usize,
    pub patch_offsets: Vec<usize>,
    pub patch_sizes: Vec<usize>,
    pub total: usize,
}

impl PrimalLayout {
    pub fn new(domain: &MultipatchDomain, components: usize) -> Self {
        let mut patch_offsets = Vec::new();
        let mut patch_sizes = Vec::new();
        let mut total = 0;
        for p in domain.patches() {
            patch_offsets.push(total);
            patch_sizes.push(p.num_basis());
            total += components * p.num_basis();
        }
        PrimalLayout {
            components,
            patch_offsets,
            patch_sizes,
            total,
        }
    }

    pub fn index(&self, patch: usize, component: usize, basis: usize) -> usize {
        self.patch_offsets[patch] + component * self.patch_sizes[patch] + basis
    }
}

/// Coupling rows `∫_γ μ_j [v]` of one interface, jump = master − slave,
/// for every component. Rows are `component * dim(M) + j`; columns are
/// global primal indices. Slave values come from direct trace evaluation,
/// master values from closest-point inversion of each slave Gauss point.
pub fn assemble_coupling(
    domain: &MultipatchDomain,
    l: usize,
    mult: &MultiplierSpace,
    layout: &PrimalLayout,
) -> Result<TripletBuilder> {
    let iface = domain.interfaces()[l];
    let slave = domain.patch(iface.slave);
    let master = domain.patch(iface.master);
    let master_curve = master.face_curve(iface.master_face);
    let comps = layout.components;
    let nm = mult.dim();
    let mut b = TripletBuilder::new(comps * nm, layout.total);
    let dir = iface.slave_face.tangential_dir();
    let rule = QuadratureRule::gauss_legendre(face_quadrature(slave));
    for (_, a, bnd) in slave.face_knots(iface.slave_face).elements() {
        for (t, w) in rule.mapped(a, bnd) {
            let ev_s = slave.eval(iface.slave_face.param(t))?;
            let meas = ev_s.jacobian.column(dir).norm();
            let inv = master_curve.closest_point(ev_s.point)?;
            let ev_m = master.eval(iface.master_face.param(inv.param[0]))?;
            for (j, mu) in mult.eval(t)? {
                let s = mu * w * meas;
                for c in 0..comps {
                    let row = c * nm + j;
                    for (k, v) in ev_m.indices.iter().zip(&ev_m.values) {
                        b.add(row, layout.index(iface.master, c, *k), s * v);
                    }
                    for (k, v) in ev_s.indices.iter().zip(&ev_s.values) {
                        b.add(row, layout.index(iface.slave, c, *k), -s * v);
                    }
                }
            }
        }
    }
    Ok(b)
}
