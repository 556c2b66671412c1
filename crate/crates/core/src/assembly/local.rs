use nalgebra::Vector2;

use super::problem::ProblemData;
use crate::error::{Error, Result};
use crate::geometry::{Face, NurbsPatch, PatchEval, DET_TOL};
use crate::linalg::TripletBuilder;
use crate::splinecore::QuadratureRule;

/// Gauss points per direction for stiffness and load integrals.
pub fn volume_quadrature(patch: &NurbsPatch) -> usize {
    patch.degrees()[0].max(patch.degrees()[1]) + 1
}

/// Gauss points per element on faces and interfaces.
pub fn face_quadrature(patch: &NurbsPatch) -> usize {
    patch.degrees()[0].max(patch.degrees()[1]) + 2
}

/// Patch matrix and load vector, indexed `component * n + basis`.
#[derive(Debug, Clone)]
pub struct PatchSystem {
    pub matrix: TripletBuilder,
    pub load: Vec<f64>,
}

fn point_weight(ev: &PatchEval, w: f64, patch_id: usize) -> Result<(Vec<Vector2<f64>>, f64)> {
    let det = ev.jacobian.determinant();
    if det.abs() <= DET_TOL {
        return Err(Error::GeometryDegenerate {
            patch: patch_id,
            u: ev.point.x,
            v: ev.point.y,
            det,
        });
    }
    let grads = ev.physical_gradients().expect("non-singular Jacobian");
    Ok((grads, w * det.abs()))
}

fn flush(t: &mut TripletBuilder, idx: &[usize], ke: &[f64]) {
    let m = idx.len();
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            t.add(i, j, ke[a * m + b]);
        }
    }
}

/// Galerkin matrix of `α ∇u·∇v + β u v` and the load `∫ f v` on one patch.
pub fn assemble_scalar(
    patch: &NurbsPatch,
    patch_id: usize,
    data: &ProblemData,
) -> Result<PatchSystem> {
    let n = patch.num_basis();
    let mut t = TripletBuilder::new(n, n);
    let mut load = vec![0.0; n];
    let mut ke = Vec::new();
    patch.for_each_element(volume_quadrature(patch), |points| {
        let idx = &points[0].0.indices;
        let m = idx.len();
        ke.clear();
        ke.resize(m * m, 0.0);
        for (ev, w) in points {
            let (grads, dx) = point_weight(ev, *w, patch_id)?;
            let alpha = (data.alpha)(patch_id, ev.point);
            if !(alpha > 0.0) {
                return Err(Error::Coefficient(format!(
                    "alpha = {alpha} at ({}, {}) on patch {patch_id}",
                    ev.point.x, ev.point.y
                )));
            }
            let beta = (data.beta)(patch_id, ev.point);
            if beta < 0.0 {
                return Err(Error::Coefficient(format!(
                    "beta = {beta} at ({}, {}) on patch {patch_id}",
                    ev.point.x, ev.point.y
                )));
            }
            let f = (data.source)(patch_id, ev.point)[0];
            for a in 0..m {
                load[idx[a]] += f * ev.values[a] * dx;
                for b in 0..m {
                    ke[a * m + b] +=
                        (alpha * grads[a].dot(&grads[b]) + beta * ev.values[a] * ev.values[b]) * dx;
                }
            }
        }
        flush(&mut t, idx, &ke);
        Ok(())
    })?;
    Ok(PatchSystem { matrix: t, load })
}

/// Plane-strain stiffness `∫ σ(u) : ε(v)` with `σ = λ tr(ε) I + 2 μ ε` and the
/// body-force load.
pub fn assemble_elasticity(
    patch: &NurbsPatch,
    patch_id: usize,
    lambda: f64,
    mu: f64,
    data: &ProblemData,
) -> Result<PatchSystem> {
    if !(mu > 0.0) || lambda < 0.0 {
        return Err(Error::Coefficient(format!(
            "Lamé parameters lambda = {lambda}, mu = {mu}"
        )));
    }
    let n = patch.num_basis();
    let mut t = TripletBuilder::new(2 * n, 2 * n);
    let mut load = vec![0.0; 2 * n];
    let mut ke = Vec::new();
    let mut gidx = Vec::new();
    let l2m = lambda + 2.0 * mu;
    patch.for_each_element(volume_quadrature(patch), |points| {
        let idx = &points[0].0.indices;
        let m = idx.len();
        gidx.clear();
        gidx.extend(idx.iter().copied());
        gidx.extend(idx.iter().map(|i| i + n));
        ke.clear();
        ke.resize(4 * m * m, 0.0);
        let w2 = 2 * m;
        for (ev, w) in points {
            let (g, dx) = point_weight(ev, *w, patch_id)?;
            let f = (data.source)(patch_id, ev.point);
            for a in 0..m {
                load[idx[a]] += f[0] * ev.values[a] * dx;
                load[idx[a] + n] += f[1] * ev.values[a] * dx;
                for b in 0..m {
                    let (ga, gb) = (g[a], g[b]);
                    ke[a * w2 + b] += (l2m * ga.x * gb.x + mu * ga.y * gb.y) * dx;
                    ke[a * w2 + m + b] += (lambda * ga.x * gb.y + mu * ga.y * gb.x) * dx;
                    ke[(m + a) * w2 + b] += (lambda * ga.y * gb.x + mu * ga.x * gb.y) * dx;
                    ke[(m + a) * w2 + m + b] += (l2m * ga.y * gb.y + mu * ga.x * gb.x) * dx;
                }
            }
        }
        flush(&mut t, &gidx, &ke);
        Ok(())
    })?;
    Ok(PatchSystem { matrix: t, load })
}

/// Adds `∫ g · v` over `face`, with `g` the Neumann flux or traction for
/// the outward normal. `load` is indexed `component * n + basis`.
pub fn assemble_neumann(
    patch: &NurbsPatch,
    patch_id: usize,
    face: Face,
    data: &ProblemData,
    load: &mut [f64],
) -> Result<()> {
    let n = patch.num_basis();
    let comps = data.components();
    let dir = face.tangential_dir();
    let kv = patch.face_knots(face);
    let rule = QuadratureRule::gauss_legendre(face_quadrature(patch));
    let flip = match face {
        Face::South | Face::East => 1.0,
        Face::North | Face::West => -1.0,
    };
    for (_, a, b) in kv.elements() {
        for (t, w) in rule.mapped(a, b) {
            let ev = patch.eval(face.param(t))?;
            let tangent = ev.jacobian.column(dir).into_owned();
            let meas = tangent.norm();
            let sign = flip * ev.jacobian.determinant().signum();
            let normal = Vector2::new(tangent.y, -tangent.x) * (sign / meas);
            let g = (data.neumann)(patch_id, ev.point, normal);
            for (k, v) in ev.indices.iter().zip(&ev.values) {
                if *v == 0.0 {
                    continue;
                }
                for c in 0..comps {
                    load[c * n + k] += g[c] * v * w * meas;
                }
            }
        }
    }
    Ok(())
}
