use nalgebra::{Matrix2, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::splinecore::{KnotVector, QuadratureRule};

/// Minimum admissible `|det J|`.
pub const DET_TOL: f64 = 1e-10;
/// Newton tolerance on the parametric increment of point inversion.
pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;
/// Samples of the seeding grid search along a face.
pub const SEED_SAMPLES: usize = 32;

/// One of the four sides of the parametric square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Face {
    /// `ζ_2 = 0`
    South,
    /// `ζ_1 = 1`
    East,
    /// `ζ_2 = 1`
    North,
    /// `ζ_1 = 0`
    West,
}

impl Face {
    pub const ALL: [Face; 4] = [Face::South, Face::East, Face::North, Face::West];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Face::South => "south",
            Face::East => "east",
            Face::North => "north",
            Face::West => "west",
        }
    }

    pub fn parse(s: &str) -> Result<Face> {
        match s.to_ascii_lowercase().as_str() {
            "south" => Ok(Face::South),
            "east" => Ok(Face::East),
            "north" => Ok(Face::North),
            "west" => Ok(Face::West),
            other => Err(Error::Config(format!("unknown face `{other}`"))),
        }
    }

    /// Parametric direction running along the face.
    pub fn tangential_dir(self) -> usize {
        match self {
            Face::South | Face::North => 0,
            Face::East | Face::West => 1,
        }
    }

    /// Parametric point of the face at curve parameter `t`.
    pub fn param(self, t: f64) -> [f64; 2] {
        match self {
            Face::South => [t, 0.0],
            Face::East => [1.0, t],
            Face::North => [t, 1.0],
            Face::West => [0.0, t],
        }
    }

    /// Faces meeting this one at `t = 0` and `t = 1`.
    pub fn neighbours(self) -> [Face; 2] {
        match self {
            Face::South | Face::North => [Face::West, Face::East],
            Face::East | Face::West => [Face::South, Face::North],
        }
    }
}

impl std::fmt::Display for Face {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Rational basis and mapping data at one parametric point.
#[derive(Debug, Clone)]
pub struct PatchEval {
    /// Flat indices of the non-vanishing functions.
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    /// Parametric derivatives `∂R/∂ζ_1`, `∂R/∂ζ_2`.
    pub dparam: Vec<[f64; 2]>,
    pub point: Vector2<f64>,
    /// Columns are `∂F/∂ζ_δ`.
    pub jacobian: Matrix2<f64>,
}

impl PatchEval {
    /// Physical gradients `J⁻ᵀ ∇_ζ R`.
    pub fn physical_gradients(&self) -> Option<Vec<Vector2<f64>>> {
        let jinv_t = self.jacobian.try_inverse()?.transpose();
        Some(
            self.dparam
                .iter()
                .map(|d| jinv_t * Vector2::new(d[0], d[1]))
                .collect(),
        )
    }
}

/// Result of a point inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub param: [f64; 2],
    /// Distance between the target and the image of `param`.
    pub residual: f64,
    pub iterations: usize,
}

/// Restriction of a patch to one face: a univariate NURBS curve.
#[derive(Debug, Clone)]
pub struct FaceCurve {
    pub knots: KnotVector,
    /// Homogeneous control points `(w x, w y, w)`.
    pub control: Vec<Vector3<f64>>,
}

impl FaceCurve {
    /// Point, first and second derivative at `t`.
    pub fn eval(&self, t: f64) -> (Vector2<f64>, Vector2<f64>, Vector2<f64>) {
        let t = t.clamp(0.0, 1.0);
        let ev = self.knots.eval_basis(t, 2).expect("clamped parameter");
        let mut a = [Vector3::zeros(); 3];
        for (k, row) in ev.ders.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                a[k] += self.control[ev.first + j] * *b;
            }
        }
        let w = a[0].z;
        let c = a[0].xy() / w;
        let d1 = (a[1].xy() - c * a[1].z) / w;
        let d2 = (a[2].xy() - d1 * (2.0 * a[1].z) - c * a[2].z) / w;
        (c, d1, d2)
    }

    /// Rational trace basis `R_i(t)` on the face as `(first index, values)`.
    pub fn basis(&self, t: f64) -> (usize, Vec<f64>) {
        let ev = self
            .knots
            .eval_basis(t.clamp(0.0, 1.0), 0)
            .expect("clamped");
        let w: Vec<f64> = ev
            .indices()
            .zip(ev.values())
            .map(|(i, b)| self.control[i].z * b)
            .collect();
        let total: f64 = w.iter().sum();
        (ev.first, w.into_iter().map(|v| v / total).collect())
    }

    pub fn closest_point(&self, x: Vector2<f64>) -> Result<Inversion> {
        let mut best = (f64::INFINITY, 0.0);
        for k in 0..SEED_SAMPLES {
            let t = k as f64 / (SEED_SAMPLES - 1) as f64;
            let d = (self.eval(t).0 - x).norm();
            if d < best.0 {
                best = (d, t);
            }
        }
        let mut t = best.1;
        for it in 0..NEWTON_MAX_ITER {
            let (c, d1, d2) = self.eval(t);
            let r = c - x;
            let g = r.dot(&d1);
            let mut gp = d1.norm_squared() + r.dot(&d2);
            if gp <= 0.0 {
                gp = d1.norm_squared();
            }
            let t_new = (t - g / gp).clamp(0.0, 1.0);
            let step = (t_new - t).abs();
            t = t_new;
            if step < NEWTON_TOL {
                let residual = (self.eval(t).0 - x).norm();
                return Ok(Inversion {
                    param: [t, 0.0],
                    residual,
                    iterations: it + 1,
                });
            }
        }
        Err(Error::InversionFailed {
            x: x.x,
            y: x.y,
            residual: (self.eval(t).0 - x).norm(),
        })
    }
}

/// Tensor-product NURBS patch in the plane. Control points are indexed
/// row-major over `(i_1, i_2)`: flat index `i_1 * n_2 + i_2`.
#[derive(Debug, Clone, PartialEq)]
pub struct NurbsPatch {
    knots: [KnotVector; 2],
    control: Vec<Vector2<f64>>,
    weights: Vec<f64>,
}

impl NurbsPatch {
    pub fn new(
        knots: [KnotVector; 2],
        control: Vec<Vector2<f64>>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let n = knots[0].dim() * knots[1].dim();
        if control.len() != n || weights.len() != n {
            return Err(Error::InvalidDomain(format!(
                "control net has {} points and {} weights, expected {n}",
                control.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| !(w > 0.0)) {
            return Err(Error::InvalidDomain(format!("non-positive weight {w}")));
        }
        Ok(NurbsPatch {
            knots,
            control,
            weights,
        })
    }

    /// B-spline patch (unit weights).
    pub fn bspline(knots: [KnotVector; 2], control: Vec<Vector2<f64>>) -> Result<Self> {
        let n = control.len();
        Self::new(knots, control, vec![1.0; n])
    }

    /// Bilinear patch through four corners given in the order
    /// `(0,0), (1,0), (0,1), (1,1)` of the parametric square.
    pub fn bilinear(corners: [[f64; 2]; 4]) -> Self {
        let kv = KnotVector::uniform(1, 1);
        let c = |k: usize| Vector2::new(corners[k][0], corners[k][1]);
        // flat index i1 * 2 + i2
        let control = vec![c(0), c(2), c(1), c(3)];
        Self::bspline([kv.clone(), kv], control).expect("consistent net")
    }

    /// Identity map of the unit square with the given degree and elements.
    pub fn unit_square(degree: usize, elements: usize) -> Self {
        Self::bilinear([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
            .elevated_to(degree)
            .expect("elevation of a bilinear patch")
            .subdivided(0, elements)
            .subdivided(1, elements)
    }

    pub fn from_homogeneous(knots: [KnotVector; 2], hom: &[Vector3<f64>]) -> Result<Self> {
        let control = hom.iter().map(|h| h.xy() / h.z).collect();
        let weights = hom.iter().map(|h| h.z).collect();
        Self::new(knots, control, weights)
    }

    pub fn knots(&self) -> &[KnotVector; 2] {
        &self.knots
    }

    pub fn control_points(&self) -> &[Vector2<f64>] {
        &self.control
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Degrees per direction.
    pub fn degrees(&self) -> [usize; 2] {
        [self.knots[0].degree(), self.knots[1].degree()]
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.knots[0].dim(), self.knots[1].dim()]
    }

    pub fn num_basis(&self) -> usize {
        self.knots[0].dim() * self.knots[1].dim()
    }

    pub fn flat(&self, i1: usize, i2: usize) -> usize {
        i1 * self.knots[1].dim() + i2
    }

    pub fn unflat(&self, k: usize) -> (usize, usize) {
        let n2 = self.knots[1].dim();
        (k / n2, k % n2)
    }

    fn homogeneous(&self) -> Vec<Vector3<f64>> {
        self.control
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| Vector3::new(c.x * w, c.y * w, *w))
            .collect()
    }

    /// Flat indices of the functions that do not vanish on `face`, ordered
    /// along the face parameter.
    pub fn face_dofs(&self, face: Face) -> Vec<usize> {
        let [n1, n2] = self.dims();
        match face {
            Face::South => (0..n1).map(|i| self.flat(i, 0)).collect(),
            Face::North => (0..n1).map(|i| self.flat(i, n2 - 1)).collect(),
            Face::West => (0..n2).map(|j| self.flat(0, j)).collect(),
            Face::East => (0..n2).map(|j| self.flat(n1 - 1, j)).collect(),
        }
    }

    pub fn face_knots(&self, face: Face) -> &KnotVector {
        &self.knots[face.tangential_dir()]
    }

    pub fn face_curve(&self, face: Face) -> FaceCurve {
        let hom = self.homogeneous();
        FaceCurve {
            knots: self.face_knots(face).clone(),
            control: self.face_dofs(face).into_iter().map(|k| hom[k]).collect(),
        }
    }

    fn check_param(z: [f64; 2]) -> Result<()> {
        for v in z {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain { value: v });
            }
        }
        Ok(())
    }

    /// Rational basis, its parametric gradient and the geometric map at `ζ`.
    pub fn eval(&self, z: [f64; 2]) -> Result<PatchEval> {
        Self::check_param(z)?;
        let e1 = self.knots[0].eval_basis(z[0], 1)?;
        let e2 = self.knots[1].eval_basis(z[1], 1)?;
        Ok(self.eval_tensor(&e1, &e2))
    }

    /// Combines precomputed univariate evaluations.
    pub fn eval_tensor(
        &self,
        e1: &crate::splinecore::BasisEvaluation,
        e2: &crate::splinecore::BasisEvaluation,
    ) -> PatchEval {
        let m = e1.values().len() * e2.values().len();
        let mut indices = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        let mut db = Vec::with_capacity(m);
        let (mut w, mut dw1, mut dw2) = (0.0, 0.0, 0.0);
        for (a, i1) in e1.indices().enumerate() {
            for (c, i2) in e2.indices().enumerate() {
                let k = self.flat(i1, i2);
                let wk = self.weights[k];
                let v = wk * e1.ders[0][a] * e2.ders[0][c];
                let d1 = wk * e1.ders[1][a] * e2.ders[0][c];
                let d2 = wk * e1.ders[0][a] * e2.ders[1][c];
                w += v;
                dw1 += d1;
                dw2 += d2;
                indices.push(k);
                b.push(v);
                db.push([d1, d2]);
            }
        }
        let mut point = Vector2::zeros();
        let mut jac = Matrix2::zeros();
        let mut values = Vec::with_capacity(m);
        let mut dparam = Vec::with_capacity(m);
        for ((k, v), d) in indices.iter().zip(b).zip(db) {
            let r = v / w;
            let r1 = (d[0] - r * dw1) / w;
            let r2 = (d[1] - r * dw2) / w;
            let c = self.control[*k];
            point += c * r;
            jac[(0, 0)] += c.x * r1;
            jac[(1, 0)] += c.y * r1;
            jac[(0, 1)] += c.x * r2;
            jac[(1, 1)] += c.y * r2;
            values.push(r);
            dparam.push([r1, r2]);
        }
        PatchEval {
            indices,
            values,
            dparam,
            point,
            jacobian: jac,
        }
    }

    /// Weight function `Σ ω_i B_i(ζ)`.
    pub fn weight_function(&self, z: [f64; 2]) -> Result<f64> {
        Self::check_param(z)?;
        let e1 = self.knots[0].eval_basis(z[0], 0)?;
        let e2 = self.knots[1].eval_basis(z[1], 0)?;
        let mut w = 0.0;
        for (a, i1) in e1.indices().enumerate() {
            for (c, i2) in e2.indices().enumerate() {
                w += self.weights[self.flat(i1, i2)] * e1.ders[0][a] * e2.ders[0][c];
            }
        }
        Ok(w)
    }

    pub fn map_point(&self, z: [f64; 2]) -> Result<Vector2<f64>> {
        Ok(self.eval(z)?.point)
    }

    pub fn jacobian(&self, z: [f64; 2]) -> Result<Matrix2<f64>> {
        let j = self.eval(z)?.jacobian;
        let det = j.determinant();
        if det.abs() <= DET_TOL {
            return Err(Error::GeometryDegenerate {
                patch: usize::MAX,
                u: z[0],
                v: z[1],
                det,
            });
        }
        Ok(j)
    }

    /// Length of the tangent vector of `face` at curve parameter `t`.
    pub fn edge_measure(&self, face: Face, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain { value: t });
        }
        Ok(self.face_curve(face).eval(t).1.norm())
    }

    /// Sign of `det J` and its minimum modulus over the Gauss points of the
    /// current mesh. Fails when the sign changes or the modulus is too small.
    pub fn check_regularity(&self, patch_id: usize) -> Result<f64> {
        let q = QuadratureRule::gauss_legendre(self.degrees()[0].max(self.degrees()[1]) + 1);
        let mut sign = 0.0;
        let mut min_det = f64::INFINITY;
        for (_, a1, b1) in self.knots[0].elements() {
            for (x1, _) in q.mapped(a1, b1) {
                for (_, a2, b2) in self.knots[1].elements() {
                    for (x2, _) in q.mapped(a2, b2) {
                        let det = self.eval([x1, x2])?.jacobian.determinant();
                        if det.abs() <= DET_TOL || (sign != 0.0 && det.signum() != sign) {
                            return Err(Error::GeometryDegenerate {
                                patch: patch_id,
                                u: x1,
                                v: x2,
                                det,
                            });
                        }
                        sign = det.signum();
                        min_det = min_det.min(det.abs());
                    }
                }
            }
        }
        Ok(sign * min_det)
    }

    /// Calls `f` once per element with the rational basis at its `q × q`
    /// Gauss points, each paired with the product of the parametric weights.
    pub fn for_each_element(
        &self,
        q: usize,
        mut f: impl FnMut(&[(PatchEval, f64)]) -> Result<()>,
    ) -> Result<()> {
        let rule = QuadratureRule::gauss_legendre(q);
        let cache = |kv: &KnotVector| -> Vec<Vec<(crate::splinecore::BasisEvaluation, f64)>> {
            kv.elements()
                .into_iter()
                .map(|(span, a, b)| {
                    rule.mapped(a, b)
                        .map(|(t, w)| (kv.eval_at_span(span, t, 1), w))
                        .collect()
                })
                .collect()
        };
        let e1 = cache(&self.knots[0]);
        let e2 = cache(&self.knots[1]);
        let mut points = Vec::with_capacity(q * q);
        for el1 in &e1 {
            for el2 in &e2 {
                points.clear();
                for (b1, w1) in el1 {
                    for (b2, w2) in el2 {
                        points.push((self.eval_tensor(b1, b2), w1 * w2));
                    }
                }
                f(&points)?;
            }
        }
        Ok(())
    }

    /// Unit outward normal on `face` at curve parameter `t`.
    pub fn outward_normal(&self, face: Face, t: f64) -> Result<Vector2<f64>> {
        let tangent = self.face_curve(face).eval(t).1;
        let z = face.param(t);
        let inner = [z[0].clamp(1e-9, 1.0 - 1e-9), z[1].clamp(1e-9, 1.0 - 1e-9)];
        let det = self.eval(inner)?.jacobian.determinant();
        let n = match face {
            Face::South | Face::East => Vector2::new(tangent.y, -tangent.x),
            Face::North | Face::West => Vector2::new(-tangent.y, tangent.x),
        };
        Ok(n.normalize() * det.signum())
    }

    /// Parametric preimage of `x`, restricted to `face` when given. Returns
    /// the closest point when no exact preimage exists.
    pub fn invert_point(&self, x: Vector2<f64>, face: Option<Face>) -> Result<Inversion> {
        if let Some(face) = face {
            let inv = self.face_curve(face).closest_point(x)?;
            return Ok(Inversion {
                param: face.param(inv.param[0]),
                ..inv
            });
        }
        let seeds = 16;
        let mut best = (f64::INFINITY, [0.5, 0.5]);
        for a in 0..seeds {
            for b in 0..seeds {
                let z = [
                    (a as f64 + 0.5) / seeds as f64,
                    (b as f64 + 0.5) / seeds as f64,
                ];
                let d = (self.map_point(z)? - x).norm();
                if d < best.0 {
                    best = (d, z);
                }
            }
        }
        let mut z = best.1;
        for it in 0..NEWTON_MAX_ITER {
            let ev = self.eval(z)?;
            let r = x - ev.point;
            let Some(inv) = ev.jacobian.try_inverse() else {
                break;
            };
            let dz = inv * r;
            let new = [(z[0] + dz.x).clamp(0.0, 1.0), (z[1] + dz.y).clamp(0.0, 1.0)];
            let step = ((new[0] - z[0]).powi(2) + (new[1] - z[1]).powi(2)).sqrt();
            z = new;
            if step < NEWTON_TOL {
                let residual = (self.map_point(z)? - x).norm();
                return Ok(Inversion {
                    param: z,
                    residual,
                    iterations: it + 1,
                });
            }
        }
        Err(Error::InversionFailed {
            x: x.x,
            y: x.y,
            residual: (self.map_point(z)? - x).norm(),
        })
    }

    fn map_rows(
        &self,
        dir: usize,
        new_kv: KnotVector,
        f: impl Fn(&[Vector3<f64>]) -> Vec<Vector3<f64>>,
    ) -> Self {
        let hom = self.homogeneous();
        let [n1, n2] = self.dims();
        let mut knots = self.knots.clone();
        let out = if dir == 0 {
            let m1 = new_kv.dim();
            let mut out = vec![Vector3::zeros(); m1 * n2];
            for j in 0..n2 {
                let line: Vec<_> = (0..n1).map(|i| hom[i * n2 + j]).collect();
                for (i, v) in f(&line).into_iter().enumerate() {
                    out[i * n2 + j] = v;
                }
            }
            out
        } else {
            let m2 = new_kv.dim();
            let mut out = vec![Vector3::zeros(); n1 * m2];
            for i in 0..n1 {
                let line = &hom[i * n2..(i + 1) * n2];
                for (j, v) in f(line).into_iter().enumerate() {
                    out[i * m2 + j] = v;
                }
            }
            out
        };
        knots[dir] = new_kv;
        Self::from_homogeneous(knots, &out).expect("refinement keeps weights positive")
    }

    /// Inserts `t` into the knot vector of direction `dir`.
    pub fn insert_knot(&self, dir: usize, t: f64) -> Result<Self> {
        let kv = &self.knots[dir];
        let (new_kv, _) = kv.insert_knot(&vec![0.0; kv.dim()], t)?;
        Ok(self.map_rows(dir, new_kv, |line| kv.insert_knot_with(line, t).unwrap().1))
    }

    /// Bisects every span of direction `dir` `levels` times.
    pub fn refined(&self, dir: usize, levels: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..levels {
            for t in p.knots[dir].midpoints() {
                p = p.insert_knot(dir, t).expect("midpoint insertion");
            }
        }
        p
    }

    /// Uniform bisection in both directions.
    pub fn refined_uniform(&self, levels: usize) -> Self {
        self.refined(0, levels).refined(1, levels)
    }

    /// Subdivides direction `dir` into `parts` equal pieces per existing span.
    pub fn subdivided(&self, dir: usize, parts: usize) -> Self {
        let mut p = self.clone();
        for (_, a, b) in self.knots[dir].elements() {
            for k in 1..parts {
                p = p
                    .insert_knot(dir, a + (b - a) * k as f64 / parts as f64)
                    .expect("subdivision");
            }
        }
        p
    }

    /// Degree elevation of both directions to `degree` keeping continuity;
    /// the new control net interpolates the homogeneous map at the Greville
    /// points of the elevated space, which reproduces it exactly.
    pub fn elevated_to(&self, degree: usize) -> Result<Self> {
        let mut patch = self.clone();
        for dir in 0..2 {
            let kv = patch.knots[dir].clone();
            if degree < kv.degree() {
                return Err(Error::Precondition(format!(
                    "cannot lower degree {} to {degree}",
                    kv.degree()
                )));
            }
            let mut target = kv.clone();
            while target.degree() < degree {
                target = target.elevated();
            }
            if target.degree() == kv.degree() {
                continue;
            }
            let sites = target.greville();
            let colloc = DenseMatrix::from_fn(sites.len(), target.dim(), |r, c| {
                let ev = target.eval_basis(sites[r], 0).unwrap();
                ev.indices()
                    .position(|i| i == c)
                    .map_or(0.0, |k| ev.values()[k])
            });
            let lu = crate::linalg::DenseLu::factor(&colloc)?;
            let old_rows: Vec<Vec<f64>> = sites
                .iter()
                .map(|&s| {
                    let ev = kv.eval_basis(s, 0).unwrap();
                    let mut row = vec![0.0; kv.dim()];
                    for (i, v) in ev.indices().zip(ev.values()) {
                        row[i] = *v;
                    }
                    row
                })
                .collect();
            patch = patch.map_rows(dir, target.clone(), |line| {
                let mut out = vec![Vector3::zeros(); target.dim()];
                for comp in 0..3 {
                    let rhs: Vec<f64> = old_rows
                        .iter()
                        .map(|row| row.iter().zip(line).map(|(b, c)| b * c[comp]).sum())
                        .collect();
                    let sol = lu.solve(&rhs).expect("collocation solve");
                    for (o, s) in out.iter_mut().zip(sol) {
                        o[comp] = s;
                    }
                }
                out
            });
        }
        Ok(patch)
    }
}
