use super::coupling::{assemble_coupling, PrimalLayout};
use super::local::{assemble_elasticity, assemble_neumann, assemble_scalar};
use super::problem::{ProblemData, ProblemKind};
use crate::error::{Error, Result};
use crate::geometry::{Face, MultipatchDomain};
use crate::linalg::{max_abs, DenseLu, DenseMatrix, SparseLu, SparseMatrix, TripletBuilder};
use crate::spaces::{build_multiplier_space, MultiplierSpace, MultiplierVariant};

/// Global numbering of primal and multiplier unknowns.
#[derive(Debug, Clone)]
pub struct DofMap {
    pub layout: PrimalLayout,
    /// Start of each interface block inside the multiplier unknowns.
    pub multiplier_offsets: Vec<usize>,
    pub multiplier_sizes: Vec<usize>,
    /// Prescribed value of every primal unknown on a Dirichlet face.
    pub dirichlet: Vec<Option<f64>>,
}

impl DofMap {
    pub fn num_primal(&self) -> usize {
        self.layout.total
    }

    pub fn num_multipliers(&self) -> usize {
        self.multiplier_sizes.iter().sum()
    }

    pub fn free_primal(&self) -> Vec<usize> {
        (0..self.num_primal())
            .filter(|&i| self.dirichlet[i].is_none())
            .collect()
    }

    /// Slice of the multiplier vector belonging to interface `l`.
    pub fn interface_range(&self, l: usize) -> std::ops::Range<usize> {
        self.multiplier_offsets[l]..self.multiplier_offsets[l] + self.multiplier_sizes[l]
    }

    /// Slice of the primal vector belonging to patch `k` (all components).
    pub fn patch_range(&self, k: usize) -> std::ops::Range<usize> {
        let start = self.layout.patch_offsets[k];
        start..start + self.layout.components * self.layout.patch_sizes[k]
    }
}

/// Block system `[[A, Bᵀ], [B, 0]] (u, λ) = (f, 0)` before elimination of
/// Dirichlet unknowns.
#[derive(Debug, Clone)]
pub struct SaddleSystem {
    pub dofs: DofMap,
    pub a: SparseMatrix,
    pub b: SparseMatrix,
    pub f: Vec<f64>,
    pub multipliers: Vec<MultiplierSpace>,
}

/// Assembles stiffness, loads (including Neumann faces) and the coupling
/// matrices of all interfaces. Multiplier spaces follow `variant`, modified
/// at cross points.
pub fn assemble_system(
    domain: &MultipatchDomain,
    data: &ProblemData,
    variant: MultiplierVariant,
) -> Result<SaddleSystem> {
    let comps = data.components();
    let layout = PrimalLayout::new(domain, comps);
    let mut a = TripletBuilder::new(layout.total, layout.total);
    let mut f = vec![0.0; layout.total];
    for (k, patch) in domain.patches().iter().enumerate() {
        let mut local = match data.kind {
            ProblemKind::Scalar => assemble_scalar(patch, k, data)?,
            ProblemKind::Elasticity { lambda, mu } => {
                assemble_elasticity(patch, k, lambda, mu, data)?
            }
        };
        // natural conditions also hold on components left free by a partial
        // Dirichlet tag
        for face in Face::ALL {
            if domain.interface_on(k, face).is_none() {
                assemble_neumann_masked(patch, k, face, data, domain, &mut local.load)?;
            }
        }
        let off = layout.patch_offsets[k];
        a.append(&local.matrix, off, off);
        for (i, v) in local.load.into_iter().enumerate() {
            f[off + i] += v;
        }
    }
    let mut multipliers = Vec::new();
    let mut offsets = Vec::new();
    let mut sizes = Vec::new();
    let mut blocks = Vec::new();
    let mut nm = 0;
    for l in 0..domain.interfaces().len() {
        let m = build_multiplier_space(domain, l, variant)?;
        blocks.push(assemble_coupling(domain, l, &m, &layout)?);
        offsets.push(nm);
        sizes.push(comps * m.dim());
        nm += comps * m.dim();
        multipliers.push(m);
    }
    let mut b = TripletBuilder::new(nm, layout.total);
    for (blk, off) in blocks.iter().zip(&offsets) {
        b.append(blk, *off, 0);
    }
    let n = layout.total;
    Ok(SaddleSystem {
        dofs: DofMap {
            layout,
            multiplier_offsets: offsets,
            multiplier_sizes: sizes,
            dirichlet: vec![None; n],
        },
        a: a.finalize(),
        b: b.finalize(),
        f,
        multipliers,
    })
}

/// Neumann load on the components of `face` not constrained by a Dirichlet
/// tag.
fn assemble_neumann_masked(
    patch: &crate::geometry::NurbsPatch,
    k: usize,
    face: Face,
    data: &ProblemData,
    domain: &MultipatchDomain,
    load: &mut [f64],
) -> Result<()> {
    let bc = domain.boundary(k, face);
    let comps = data.components();
    if (0..comps).all(|c| bc.constrains(c)) {
        return Ok(());
    }
    let mut extra = vec![0.0; load.len()];
    assemble_neumann(patch, k, face, data, &mut extra)?;
    let n = patch.num_basis();
    for c in (0..comps).filter(|&c| !bc.constrains(c)) {
        for i in 0..n {
            load[c * n + i] += extra[c * n + i];
        }
    }
    Ok(())
}

/// Prescribes Dirichlet unknowns by interpolating the boundary data at the
/// Greville points of each Dirichlet face with the rational trace basis.
pub fn apply_dirichlet(
    mut system: SaddleSystem,
    domain: &MultipatchDomain,
    data: &ProblemData,
) -> Result<SaddleSystem> {
    let comps = data.components();
    for (k, patch) in domain.patches().iter().enumerate() {
        for face in Face::ALL {
            let bc = domain.boundary(k, face);
            if !bc.is_dirichlet() {
                continue;
            }
            let curve = patch.face_curve(face);
            let sites = curve.knots.greville();
            let n = sites.len();
            let mut colloc = DenseMatrix::zeros(n, n);
            let mut values = vec![[0.0; 2]; n];
            for (r, &s) in sites.iter().enumerate() {
                let (first, vals) = curve.basis(s);
                for (j, v) in vals.iter().enumerate() {
                    colloc[(r, first + j)] = *v;
                }
                values[r] = (data.dirichlet)(k, curve.eval(s).0);
            }
            let lu = DenseLu::factor(&colloc)?;
            let dofs = patch.face_dofs(face);
            for c in (0..comps).filter(|&c| bc.constrains(c)) {
                let rhs: Vec<f64> = values.iter().map(|v| v[c]).collect();
                let coeffs = lu.solve(&rhs)?;
                for (d, v) in dofs.iter().zip(coeffs) {
                    let g = system.dofs.layout.index(k, c, *d);
                    system.dofs.dirichlet[g] = Some(v);
                }
            }
        }
    }
    Ok(system)
}

/// Solution of a saddle system with its residuals.
#[derive(Debug, Clone)]
pub struct SaddleSolution {
    /// All primal coefficients, Dirichlet values included.
    pub u: Vec<f64>,
    pub lambda: Vec<f64>,
    /// `‖A u + Bᵀ λ − f‖_∞` over the free rows.
    pub primal_residual: f64,
    /// `‖B u‖_∞`.
    pub constraint_residual: f64,
}

impl SaddleSolution {
    /// `‖B u‖_∞ / ‖u‖_∞`.
    pub fn relative_constraint_residual(&self) -> f64 {
        let nu = max_abs(&self.u);
        if nu == 0.0 {
            self.constraint_residual
        } else {
            self.constraint_residual / nu
        }
    }
}

/// Eliminates Dirichlet unknowns and solves the indefinite block system by
/// a reordered banded LU factorization.
pub fn solve_saddle(system: &SaddleSystem) -> Result<SaddleSolution> {
    let nv = system.dofs.num_primal();
    let nm = system.dofs.num_multipliers();
    let free = system.dofs.free_primal();
    let mut pos = vec![usize::MAX; nv];
    for (r, &g) in free.iter().enumerate() {
        pos[g] = r;
    }
    let nf = free.len();
    let ud: Vec<f64> = system
        .dofs
        .dirichlet
        .iter()
        .map(|d| d.unwrap_or(0.0))
        .collect();
    // multipliers are solved for as λ / s so that both blocks share a scale
    let (amax, bmax) = (system.a.max_abs(), system.b.max_abs());
    let s = if amax > 0.0 && bmax > 0.0 {
        amax / bmax
    } else {
        1.0
    };
    let mut kkt = TripletBuilder::new(nf + nm, nf + nm);
    let mut rhs = vec![0.0; nf + nm];
    for (r, &g) in free.iter().enumerate() {
        rhs[r] = system.f[g];
    }
    for (i, j, v) in system.a.triplets() {
        if pos[i] == usize::MAX {
            continue;
        }
        if pos[j] == usize::MAX {
            rhs[pos[i]] -= v * ud[j];
        } else {
            kkt.add(pos[i], pos[j], v);
        }
    }
    for (i, j, v) in system.b.triplets() {
        if pos[j] == usize::MAX {
            rhs[nf + i] -= s * v * ud[j];
        } else {
            kkt.add(nf + i, pos[j], s * v);
            kkt.add(pos[j], nf + i, s * v);
        }
    }
    let kkt = kkt.finalize();
    let x = match SparseLu::factor(&kkt) {
        Ok(lu) => lu.solve(&rhs)?,
        Err(Error::Singular { index }) => {
            return Err(diagnose_constraints(system, &pos).unwrap_or(Error::Singular { index }))
        }
        Err(e) => return Err(e),
    };
    let mut u = ud;
    for (r, &g) in free.iter().enumerate() {
        u[g] = x[r];
    }
    let lambda: Vec<f64> = x[nf..].iter().map(|v| s * v).collect();
    let au = system.a.matvec(&u);
    let btl = system.b.transpose().matvec(&lambda);
    let primal_residual = free
        .iter()
        .map(|&g| (au[g] + btl[g] - system.f[g]).abs())
        .fold(0.0, f64::max);
    let constraint_residual = max_abs(&system.b.matvec(&u));
    Ok(SaddleSolution {
        u,
        lambda,
        primal_residual,
        constraint_residual,
    })
}

/// Finds an interface whose coupling rows are rank deficient on the free
/// primal unknowns.
fn diagnose_constraints(system: &SaddleSystem, pos: &[usize]) -> Option<Error> {
    for l in 0..system.dofs.multiplier_sizes.len() {
        let rows: Vec<usize> = system.dofs.interface_range(l).collect();
        let mut cols: Vec<usize> = rows
            .iter()
            .flat_map(|&r| system.b.row(r).map(|(j, _)| j))
            .filter(|&j| pos[j] != usize::MAX)
            .collect();
        cols.sort_unstable();
        cols.dedup();
        let block = system.b.select(&rows, &cols).to_dense();
        if block.rank(1e-12) < rows.len() {
            return Some(Error::SingularConstraint { interface: l });
        }
    }
    None
}

/// Assembles, applies boundary data and solves in one call.
pub fn solve_problem(
    domain: &MultipatchDomain,
    data: &ProblemData,
    variant: MultiplierVariant,
) -> Result<(SaddleSystem, SaddleSolution)> {
    let system = apply_dirichlet(assemble_system(domain, data, variant)?, domain, data)?;
    let sol = solve_saddle(&system)?;
    Ok((system, sol))
}
