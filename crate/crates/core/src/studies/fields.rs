use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::Vector2;

use crate::assembly::{ProblemData, ProblemKind};
use crate::error::{Error, Result};
use crate::geometry::Coefficient;

/// Closed-form solution with the data it induces.
pub trait ExactSolution: Send + Sync {
    fn kind(&self) -> ProblemKind;
    fn value(&self, x: Vector2<f64>) -> [f64; 2];
    /// `gradient[c][d] = ∂u_c / ∂x_d`.
    fn gradient(&self, x: Vector2<f64>) -> [[f64; 2]; 2];
    /// `α ∇u · n` for scalar problems, the traction `σ n` for elasticity.
    fn flux(&self, patch: usize, x: Vector2<f64>, n: Vector2<f64>) -> [f64; 2];
    /// Right-hand side of the differential equation.
    fn source(&self, patch: usize, x: Vector2<f64>) -> [f64; 2];
    fn alpha(&self, _patch: usize) -> f64 {
        1.0
    }
    fn beta(&self, _patch: usize) -> f64 {
        0.0
    }
}

/// Problem data whose solution is `exact`: source, Dirichlet values and
/// Neumann fluxes all come from the closed form.
pub fn problem_data(exact: Arc<dyn ExactSolution>) -> ProblemData {
    let base = match exact.kind() {
        ProblemKind::Scalar => ProblemData::scalar(),
        ProblemKind::Elasticity { lambda, mu } => ProblemData::elasticity(lambda, mu),
    };
    let (e1, e2, e3, e4, e5) = (
        exact.clone(),
        exact.clone(),
        exact.clone(),
        exact.clone(),
        exact,
    );
    base.with_alpha(move |k, _| e1.alpha(k))
        .with_beta(move |k, _| e2.beta(k))
        .with_source(move |k, x| e3.source(k, x))
        .with_dirichlet(move |_, x| e4.value(x))
        .with_neumann(move |k, x, n| e5.flux(k, x, n))
}

/// Named scalar solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarShape {
    /// `sin(πx) sin(πy)`
    SinePi,
    /// `r^{2/3} sin(2φ/3)` with `φ ∈ [0, 2π)`.
    Corner,
    /// `sin(5y) sin(6x)`
    Sine56,
    /// `1 + x + 2y`
    Linear,
}

impl ScalarShape {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "sine_pi" => Ok(ScalarShape::SinePi),
            "corner" => Ok(ScalarShape::Corner),
            "sine_5_6" => Ok(ScalarShape::Sine56),
            "linear" => Ok(ScalarShape::Linear),
            other => Err(Error::Config(format!("unknown scalar field `{other}`"))),
        }
    }

    /// Value, gradient and Laplacian.
    pub fn eval(self, x: Vector2<f64>) -> (f64, [f64; 2], f64) {
        match self {
            ScalarShape::SinePi => {
                let (sx, cx) = (PI * x.x).sin_cos();
                let (sy, cy) = (PI * x.y).sin_cos();
                let u = sx * sy;
                (u, [PI * cx * sy, PI * sx * cy], -2.0 * PI * PI * u)
            }
            ScalarShape::Sine56 => {
                let (s6, c6) = (6.0 * x.x).sin_cos();
                let (s5, c5) = (5.0 * x.y).sin_cos();
                let u = s5 * s6;
                (u, [6.0 * s5 * c6, 5.0 * c5 * s6], -61.0 * u)
            }
            ScalarShape::Corner => {
                let r = x.norm();
                let mut phi = x.y.atan2(x.x);
                if phi < 0.0 {
                    phi += 2.0 * PI;
                }
                if r == 0.0 {
                    return (0.0, [0.0; 2], 0.0);
                }
                let a = 2.0 / 3.0;
                let (s, c) = (a * phi).sin_cos();
                let u = r.powf(a) * s;
                // ∂_r u = a r^{a-1} sin, (1/r) ∂_φ u = a r^{a-1} cos
                let ur = a * r.powf(a - 1.0) * s;
                let ut = a * r.powf(a - 1.0) * c;
                let (sp, cp) = phi.sin_cos();
                (u, [ur * cp - ut * sp, ur * sp + ut * cp], 0.0)
            }
            ScalarShape::Linear => (1.0 + x.x + 2.0 * x.y, [1.0, 2.0], 0.0),
        }
    }
}

/// `-div(α ∇u) + β u = f` with patchwise constant coefficients.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub shape: ScalarShape,
    pub alpha: Coefficient,
    pub beta: Coefficient,
}

impl ScalarField {
    pub fn new(shape: ScalarShape) -> Self {
        ScalarField {
            shape,
            alpha: Coefficient::Constant(1.0),
            beta: Coefficient::Constant(0.0),
        }
    }
}

impl ExactSolution for ScalarField {
    fn kind(&self) -> ProblemKind {
        ProblemKind::Scalar
    }

    fn value(&self, x: Vector2<f64>) -> [f64; 2] {
        [self.shape.eval(x).0, 0.0]
    }

    fn gradient(&self, x: Vector2<f64>) -> [[f64; 2]; 2] {
        [self.shape.eval(x).1, [0.0; 2]]
    }

    fn flux(&self, patch: usize, x: Vector2<f64>, n: Vector2<f64>) -> [f64; 2] {
        let g = self.shape.eval(x).1;
        [self.alpha(patch) * (g[0] * n.x + g[1] * n.y), 0.0]
    }

    fn source(&self, patch: usize, x: Vector2<f64>) -> [f64; 2] {
        let (u, _, lap) = self.shape.eval(x);
        [-self.alpha(patch) * lap + self.beta(patch) * u, 0.0]
    }

    fn alpha(&self, patch: usize) -> f64 {
        self.alpha.on_patch(patch).unwrap_or(1.0)
    }

    fn beta(&self, patch: usize) -> f64 {
        self.beta.on_patch(patch).unwrap_or(0.0)
    }
}

/// Infinite plane-strain plate with a circular hole of radius `a` under
/// uniaxial tension `t` along `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateWithHole {
    pub radius: f64,
    pub tension: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl PlateWithHole {
    pub fn from_engineering(radius: f64, tension: f64, young: f64, poisson: f64) -> Self {
        PlateWithHole {
            radius,
            tension,
            lambda: young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson)),
            mu: young / (2.0 * (1.0 + poisson)),
        }
    }

    /// Benchmark parameters: `a = 0.2`, `T = 10`, `E = 1e5`, `ν = 0.3`.
    pub fn standard() -> Self {
        Self::from_engineering(0.2, 10.0, 1e5, 0.3)
    }

    fn kappa(&self) -> f64 {
        // plane strain: 3 - 4ν with ν = λ / (2(λ + μ))
        3.0 - 2.0 * self.lambda / (self.lambda + self.mu)
    }

    fn polar(x: Vector2<f64>) -> (f64, f64) {
        (x.norm(), x.y.atan2(x.x))
    }

    /// Cartesian stresses `(σ_xx, σ_yy, σ_xy)`.
    pub fn stress(&self, x: Vector2<f64>) -> [f64; 3] {
        let (r, th) = Self::polar(x);
        let (a2, a4) = (
            self.radius.powi(2) / r.powi(2),
            self.radius.powi(4) / r.powi(4),
        );
        let (c2, s2) = ((2.0 * th).cos(), (2.0 * th).sin());
        let (c4, s4) = ((4.0 * th).cos(), (4.0 * th).sin());
        let t = self.tension;
        [
            t * (1.0 - a2 * (1.5 * c2 + c4) + 1.5 * a4 * c4),
            t * (-a2 * (0.5 * c2 - c4) - 1.5 * a4 * c4),
            t * (-a2 * (0.5 * s2 + s4) + 1.5 * a4 * s4),
        ]
    }

    /// Polar displacement `(u_r, u_θ)` and its derivatives
    /// `(∂_r u_r, ∂_θ u_r, ∂_r u_θ, ∂_θ u_θ)`.
    fn polar_displacement(&self, r: f64, th: f64) -> ([f64; 2], [f64; 4]) {
        let g = self.tension / (4.0 * self.mu);
        let k = self.kappa();
        let a = self.radius;
        let (a2, a4) = (a * a, a.powi(4));
        let (c2, s2) = ((2.0 * th).cos(), (2.0 * th).sin());
        let k1 = 0.5 * (k - 1.0);
        let ur = g * (r * (k1 + c2) + a2 / r * (1.0 + (1.0 + k) * c2) - a4 / r.powi(3) * c2);
        let ut_amp = (1.0 - k) * a2 / r - r - a4 / r.powi(3);
        let ut = g * ut_amp * s2;
        let dr_ur =
            g * ((k1 + c2) - a2 / (r * r) * (1.0 + (1.0 + k) * c2) + 3.0 * a4 / r.powi(4) * c2);
        let dt_ur = g * s2 * (-2.0 * r - 2.0 * (1.0 + k) * a2 / r + 2.0 * a4 / r.powi(3));
        let dr_ut = g * s2 * (-(1.0 - k) * a2 / (r * r) - 1.0 + 3.0 * a4 / r.powi(4));
        let dt_ut = 2.0 * g * ut_amp * c2;
        ([ur, ut], [dr_ur, dt_ur, dr_ut, dt_ut])
    }
}

impl ExactSolution for PlateWithHole {
    fn kind(&self) -> ProblemKind {
        ProblemKind::Elasticity {
            lambda: self.lambda,
            mu: self.mu,
        }
    }

    fn value(&self, x: Vector2<f64>) -> [f64; 2] {
        let (r, th) = Self::polar(x);
        let ([ur, ut], _) = self.polar_displacement(r, th);
        let (s, c) = th.sin_cos();
        [ur * c - ut * s, ur * s + ut * c]
    }

    fn gradient(&self, x: Vector2<f64>) -> [[f64; 2]; 2] {
        let (r, th) = Self::polar(x);
        let ([ur, ut], [dr_ur, dt_ur, dr_ut, dt_ut]) = self.polar_displacement(r, th);
        let (s, c) = th.sin_cos();
        // u_x = u_r cos − u_θ sin, u_y = u_r sin + u_θ cos
        let dr_ux = dr_ur * c - dr_ut * s;
        let dt_ux = dt_ur * c - ur * s - dt_ut * s - ut * c;
        let dr_uy = dr_ur * s + dr_ut * c;
        let dt_uy = dt_ur * s + ur * c + dt_ut * c - ut * s;
        let dx = |dr: f64, dt: f64| c * dr - s / r * dt;
        let dy = |dr: f64, dt: f64| s * dr + c / r * dt;
        [
            [dx(dr_ux, dt_ux), dy(dr_ux, dt_ux)],
            [dx(dr_uy, dt_uy), dy(dr_uy, dt_uy)],
        ]
    }

    fn flux(&self, _patch: usize, x: Vector2<f64>, n: Vector2<f64>) -> [f64; 2] {
        let [sxx, syy, sxy] = self.stress(x);
        [sxx * n.x + sxy * n.y, sxy * n.x + syy * n.y]
    }

    fn source(&self, _patch: usize, _x: Vector2<f64>) -> [f64; 2] {
        [0.0; 2]
    }
}

/// Stress `σ = λ tr(ε) I + 2 μ ε` of a displacement gradient.
pub fn hooke(lambda: f64, mu: f64, g: [[f64; 2]; 2]) -> [f64; 3] {
    let tr = g[0][0] + g[1][1];
    [
        lambda * tr + 2.0 * mu * g[0][0],
        lambda * tr + 2.0 * mu * g[1][1],
        mu * (g[0][1] + g[1][0]),
    ]
}

/// Exact solution for a named field: `sine_pi`, `corner`, `sine_5_6`,
/// `linear` or `plate_with_hole`.
pub fn named_field(
    name: &str,
    alpha: Option<Coefficient>,
    beta: Option<Coefficient>,
) -> Result<Arc<dyn ExactSolution>> {
    if name == "plate_with_hole" {
        return Ok(Arc::new(PlateWithHole::standard()));
    }
    let mut f = ScalarField::new(ScalarShape::parse(name)?);
    if let Some(a) = alpha {
        f.alpha = a;
    }
    if let Some(b) = beta {
        f.beta = b;
    }
    Ok(Arc::new(f))
}
