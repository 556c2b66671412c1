//! JSON description of a multipatch domain.
//!
//! ```json
//! {
//!   "patches": [{
//!     "degrees": [1, 1],
//!     "knots": [[0, 0, 1, 1], [0, 0, 1, 1]],
//!     "control_points": [[0, 0], [0, 1], [1, 0], [1, 1]],
//!     "weights": [1, 1, 1, 1]
//!   }],
//!   "interfaces": [{"master": 0, "slave": 1, "master_face": "east", "slave_face": "west"}],
//!   "boundary": [{"patch": 0, "face": "south", "type": "dirichlet"}],
//!   "problem": {"kind": "scalar", "field": "sine_pi", "alpha": 1.0}
//! }
//! ```
//!
//! Control points are listed row-major over `(i_1, i_2)`. Knot vectors on
//! any interval are rescaled to `[0, 1]`. Weights default to 1.

use std::path::Path;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use super::domain::{BoundaryCondition, InterfaceSpec, MultipatchDomain};
use super::patch::{Face, NurbsPatch};
use crate::error::{Error, Result};
use crate::splinecore::KnotVector;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatchFile {
    pub degrees: [usize; 2],
    pub knots: [Vec<f64>; 2],
    pub control_points: Vec<[f64; 2]>,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterfaceFile {
    pub master: usize,
    pub slave: usize,
    pub master_face: String,
    pub slave_face: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryFile {
    pub patch: usize,
    pub face: String,
    /// `dirichlet` or `neumann`.
    #[serde(rename = "type")]
    pub kind: String,
    /// Constrained components for vector problems; all when absent.
    #[serde(default)]
    pub components: Option<[bool; 2]>,
}

/// A constant, or one value per patch.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Coefficient {
    Constant(f64),
    PerPatch(Vec<f64>),
}

impl Coefficient {
    pub fn on_patch(&self, k: usize) -> Result<f64> {
        match self {
            Coefficient::Constant(v) => Ok(*v),
            Coefficient::PerPatch(v) => v.get(k).copied().ok_or_else(|| {
                Error::Config(format!("coefficient list has no entry for patch {k}"))
            }),
        }
    }
}

/// Problem data attached to a domain file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    /// `scalar` or `elasticity`.
    pub kind: String,
    /// Named manufactured field providing source and boundary data.
    pub field: String,
    #[serde(default)]
    pub alpha: Option<Coefficient>,
    #[serde(default)]
    pub beta: Option<Coefficient>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainFile {
    pub patches: Vec<PatchFile>,
    #[serde(default)]
    pub interfaces: Vec<InterfaceFile>,
    #[serde(default)]
    pub boundary: Vec<BoundaryFile>,
    #[serde(default)]
    pub problem: Option<ProblemFile>,
}

fn rescaled(knots: &[f64]) -> Result<Vec<f64>> {
    let (a, b) = match (knots.first(), knots.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        _ => {
            return Err(Error::InvalidKnotVector(
                "empty or degenerate knot vector".into(),
            ))
        }
    };
    Ok(knots.iter().map(|t| (t - a) / (b - a)).collect())
}

impl PatchFile {
    pub fn to_patch(&self) -> Result<NurbsPatch> {
        let k0 = KnotVector::new(self.degrees[0], rescaled(&self.knots[0])?)?;
        let k1 = KnotVector::new(self.degrees[1], rescaled(&self.knots[1])?)?;
        let control = self
            .control_points
            .iter()
            .map(|c| Vector2::new(c[0], c[1]))
            .collect::<Vec<_>>();
        let weights = self
            .weights
            .clone()
            .unwrap_or_else(|| vec![1.0; control.len()]);
        NurbsPatch::new([k0, k1], control, weights)
    }

    pub fn from_patch(p: &NurbsPatch) -> Self {
        PatchFile {
            degrees: p.degrees(),
            knots: [p.knots()[0].knots().to_vec(), p.knots()[1].knots().to_vec()],
            control_points: p.control_points().iter().map(|c| [c.x, c.y]).collect(),
            weights: Some(p.weights().to_vec()),
        }
    }
}

impl DomainFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_domain(&self) -> Result<MultipatchDomain> {
        let patches = self
            .patches
            .iter()
            .map(PatchFile::to_patch)
            .collect::<Result<Vec<_>>>()?;
        let mut tags = vec![[BoundaryCondition::Neumann; 4]; patches.len()];
        let mut seen = Vec::new();
        for b in &self.boundary {
            let face = Face::parse(&b.face)?;
            if b.patch >= patches.len() {
                return Err(Error::InvalidDomain(format!(
                    "boundary tag for missing patch {}",
                    b.patch
                )));
            }
            if seen.contains(&(b.patch, face)) {
                return Err(Error::InvalidDomain(format!(
                    "conflicting tags on patch {} face {face}",
                    b.patch
                )));
            }
            seen.push((b.patch, face));
            tags[b.patch][face.index()] = match b.kind.to_ascii_lowercase().as_str() {
                "dirichlet" => BoundaryCondition::Dirichlet {
                    components: b.components.unwrap_or([true, true]),
                },
                "neumann" => BoundaryCondition::Neumann,
                other => return Err(Error::Config(format!("unknown boundary type `{other}`"))),
            };
        }
        let specs = self
            .interfaces
            .iter()
            .map(|i| {
                Ok((
                    i.master,
                    i.slave,
                    Face::parse(&i.master_face)?,
                    Face::parse(&i.slave_face)?,
                ))
            })
            .collect::<Result<Vec<InterfaceSpec>>>()?;
        MultipatchDomain::new(patches, &specs, tags)
    }

    /// Serializable description of an existing domain.
    pub fn from_domain(d: &MultipatchDomain, problem: Option<ProblemFile>) -> Self {
        let mut boundary = Vec::new();
        for (k, tags) in d.boundary_tags().iter().enumerate() {
            for face in Face::ALL {
                if let BoundaryCondition::Dirichlet { components } = tags[face.index()] {
                    boundary.push(BoundaryFile {
                        patch: k,
                        face: face.name().into(),
                        kind: "dirichlet".into(),
                        components: Some(components),
                    });
                }
            }
        }
        DomainFile {
            patches: d.patches().iter().map(PatchFile::from_patch).collect(),
            interfaces: d
                .interfaces()
                .iter()
                .map(|i| InterfaceFile {
                    master: i.master,
                    slave: i.slave,
                    master_face: i.master_face.name().into(),
                    slave_face: i.slave_face.name().into(),
                })
                .collect(),
            boundary,
            problem,
        }
    }
}
