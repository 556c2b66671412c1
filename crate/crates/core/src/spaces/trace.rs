use crate::error::Result;
use crate::geometry::{MultipatchDomain, NurbsPatch};
use crate::splinecore::KnotVector;

/// Tensor-product spline space of one patch.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineSpace {
    pub knots: [KnotVector; 2],
}

impl SplineSpace {
    pub fn of(patch: &NurbsPatch) -> Self {
        SplineSpace {
            knots: patch.knots().clone(),
        }
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.knots[0].dim(), self.knots[1].dim()]
    }

    pub fn dim(&self) -> usize {
        self.knots[0].dim() * self.knots[1].dim()
    }

    pub fn flat(&self, i1: usize, i2: usize) -> usize {
        i1 * self.knots[1].dim() + i2
    }

    pub fn unflat(&self, k: usize) -> (usize, usize) {
        (k / self.knots[1].dim(), k % self.knots[1].dim())
    }
}

/// Traces of the slave-patch functions on an interface.
#[derive(Debug, Clone)]
pub struct TraceSpace {
    pub interface: Option<usize>,
    knots: KnotVector,
    /// Weights of the face control points (all 1 for B-splines).
    weights: Vec<f64>,
    /// Retained univariate indices.
    active: Vec<usize>,
    /// Slave-patch volume dof of each retained function.
    volume_dofs: Vec<usize>,
    /// Position in `active` of every univariate index.
    position: Vec<Option<usize>>,
}

impl TraceSpace {
    /// Plain B-spline trace space on a parametric interval; the first and
    /// last functions are dropped when `edge_zero` holds.
    pub fn parametric(knots: KnotVector, edge_zero: bool) -> Self {
        let n = knots.dim();
        let weights = vec![1.0; n];
        let dofs: Vec<usize> = (0..n).collect();
        Self::from_parts(None, knots, weights, dofs, edge_zero)
    }

    fn from_parts(
        interface: Option<usize>,
        knots: KnotVector,
        weights: Vec<f64>,
        face_dofs: Vec<usize>,
        edge_zero: bool,
    ) -> Self {
        let n = knots.dim();
        let active: Vec<usize> = if edge_zero && n >= 2 {
            (1..n - 1).collect()
        } else {
            (0..n).collect()
        };
        let mut position = vec![None; n];
        for (k, &i) in active.iter().enumerate() {
            position[i] = Some(k);
        }
        let volume_dofs = active.iter().map(|&i| face_dofs[i]).collect();
        TraceSpace {
            interface,
            knots,
            weights,
            active,
            volume_dofs,
            position,
        }
    }

    /// Traces of the slave patch of interface `l`.
    pub fn build(domain: &MultipatchDomain, l: usize, edge_zero: bool) -> Self {
        let i = domain.interfaces()[l];
        let patch = domain.patch(i.slave);
        let curve = patch.face_curve(i.slave_face);
        let weights = curve.control.iter().map(|c| c.z).collect();
        Self::from_parts(
            Some(l),
            curve.knots,
            weights,
            patch.face_dofs(i.slave_face),
            edge_zero,
        )
    }

    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    pub fn dim(&self) -> usize {
        self.active.len()
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn volume_dofs(&self) -> &[usize] {
        &self.volume_dofs
    }

    /// Non-zero `(k, w_k(t))` pairs, `k` indexing the retained functions.
    pub fn eval(&self, t: f64) -> Result<Vec<(usize, f64)>> {
        let ev = self.knots.eval_basis(t, 0)?;
        let wsum: f64 = ev
            .indices()
            .zip(ev.values())
            .map(|(i, b)| self.weights[i] * b)
            .sum();
        Ok(ev
            .indices()
            .zip(ev.values())
            .filter_map(|(i, b)| self.position[i].map(|k| (k, self.weights[i] * b / wsum)))
            .collect())
    }
}
