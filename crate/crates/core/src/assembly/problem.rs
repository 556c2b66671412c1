use std::sync::Arc;

use nalgebra::Vector2;

pub type ScalarFn = Arc<dyn Fn(usize, Vector2<f64>) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(usize, Vector2<f64>) -> [f64; 2] + Send + Sync>;
/// Boundary flux or traction at a point given the unit outward normal.
pub type FluxFn = Arc<dyn Fn(usize, Vector2<f64>, Vector2<f64>) -> [f64; 2] + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemKind {
    /// `-div(α ∇u) + β u = f`
    Scalar,
    /// Plane strain with Lamé parameters.
    Elasticity { lambda: f64, mu: f64 },
}

impl ProblemKind {
    pub fn components(self) -> usize {
        match self {
            ProblemKind::Scalar => 1,
            ProblemKind::Elasticity { .. } => 2,
        }
    }
}

/// Coefficients and data of a boundary value problem. Every function takes
/// the patch index and a physical point; scalar problems use component 0.
#[derive(Clone)]
pub struct ProblemData {
    pub kind: ProblemKind,
    pub alpha: ScalarFn,
    pub beta: ScalarFn,
    pub source: VectorFn,
    pub dirichlet: VectorFn,
    pub neumann: FluxFn,
}

impl std::fmt::Debug for ProblemData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemData")
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

impl ProblemData {
    /// Laplace problem with `α = 1`, `β = 0` and homogeneous data.
    pub fn scalar() -> Self {
        ProblemData {
            kind: ProblemKind::Scalar,
            alpha: Arc::new(|_, _| 1.0),
            beta: Arc::new(|_, _| 0.0),
            source: Arc::new(|_, _| [0.0; 2]),
            dirichlet: Arc::new(|_, _| [0.0; 2]),
            neumann: Arc::new(|_, _, _| [0.0; 2]),
        }
    }

    pub fn elasticity(lambda: f64, mu: f64) -> Self {
        ProblemData {
            kind: ProblemKind::Elasticity { lambda, mu },
            ..Self::scalar()
        }
    }

    pub fn components(&self) -> usize {
        self.kind.components()
    }

    pub fn with_alpha(
        mut self,
        f: impl Fn(usize, Vector2<f64>) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.alpha = Arc::new(f);
        self
    }

    pub fn with_beta(
        mut self,
        f: impl Fn(usize, Vector2<f64>) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.beta = Arc::new(f);
        self
    }

    pub fn with_source(
        mut self,
        f: impl Fn(usize, Vector2<f64>) -> [f64; 2] + Send + Sync + 'static,
    ) -> Self {
        self.source = Arc::new(f);
        self
    }

    pub fn with_dirichlet(
        mut self,
        f: impl Fn(usize, Vector2<f64>) -> [f64; 2] + Send + Sync + 'static,
    ) -> Self {
        self.dirichlet = Arc::new(f);
        self
    }

    pub fn with_neumann(
        mut self,
        f: impl Fn(usize, Vector2<f64>, Vector2<f64>) -> [f64; 2] + Send + Sync + 'static,
    ) -> Self {
        self.neumann = Arc::new(f);
        self
    }
}
