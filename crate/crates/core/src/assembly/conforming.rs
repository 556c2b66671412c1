use super::system::SaddleSystem;
use crate::error::{Error, Result};
use crate::geometry::MultipatchDomain;
use crate::linalg::{SparseLu, TripletBuilder};

/// Tolerance for identifying coincident control points.
const MATCH_TOL: f64 = 1e-10;

/// Solves the fully conforming problem obtained by gluing coincident
/// interface control points, using the stiffness, load and Dirichlet values
/// of `system`. Only defined for matching meshes. The result uses the
/// primal numbering of `system`, glued unknowns sharing one value.
pub fn solve_conforming(domain: &MultipatchDomain, system: &SaddleSystem) -> Result<Vec<f64>> {
    let layout = &system.dofs.layout;
    let n = layout.total;
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for (l, iface) in domain.interfaces().iter().enumerate() {
        let sp = domain.patch(iface.slave);
        let mp = domain.patch(iface.master);
        let mdofs = mp.face_dofs(iface.master_face);
        for d in sp.face_dofs(iface.slave_face) {
            let c = sp.control_points()[d];
            let w = sp.weights()[d];
            let m = mdofs
                .iter()
                .copied()
                .find(|&e| {
                    (mp.control_points()[e] - c).norm() < MATCH_TOL
                        && (mp.weights()[e] - w).abs() < MATCH_TOL
                })
                .ok_or_else(|| {
                    Error::Precondition(format!(
                        "interface {l}: slave control point ({}, {}) has no master counterpart",
                        c.x, c.y
                    ))
                })?;
            for comp in 0..layout.components {
                let a = root(&mut parent, layout.index(iface.slave, comp, d));
                let b = root(&mut parent, layout.index(iface.master, comp, m));
                parent[a] = b;
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| root(&mut parent, i)).collect();
    let mut merged = vec![usize::MAX; n];
    let mut count = 0;
    for &r in &roots {
        if merged[r] == usize::MAX {
            merged[r] = count;
            count += 1;
        }
    }
    let of = |i: usize| merged[roots[i]];
    let mut fixed: Vec<Option<f64>> = vec![None; count];
    for (i, d) in system.dofs.dirichlet.iter().enumerate() {
        if let Some(v) = d {
            fixed[of(i)] = Some(*v);
        }
    }
    let free: Vec<usize> = (0..count).filter(|&g| fixed[g].is_none()).collect();
    let mut pos = vec![usize::MAX; count];
    for (r, &g) in free.iter().enumerate() {
        pos[g] = r;
    }
    let mut k = TripletBuilder::new(free.len(), free.len());
    let mut rhs = vec![0.0; free.len()];
    for (i, v) in system.f.iter().enumerate() {
        if pos[of(i)] != usize::MAX {
            rhs[pos[of(i)]] += v;
        }
    }
    for (i, j, v) in system.a.triplets() {
        let (gi, gj) = (of(i), of(j));
        if pos[gi] == usize::MAX {
            continue;
        }
        match fixed[gj] {
            Some(ud) => rhs[pos[gi]] -= v * ud,
            None => k.add(pos[gi], pos[gj], v),
        }
    }
    let x = SparseLu::factor(&k.finalize())?.solve(&rhs)?;
    Ok((0..n)
        .map(|i| fixed[of(i)].unwrap_or_else(|| x[pos[of(i)]]))
        .collect())
}
