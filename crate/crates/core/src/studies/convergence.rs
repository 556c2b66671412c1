use std::io::Write;
use std::sync::Arc;

use super::errors::{error_norms, slope_fit, ErrorRow, SlopeFit};
use super::fields::{
    named_field, problem_data, ExactSolution, PlateWithHole, ScalarField, ScalarShape,
};
use crate::assembly::solve_problem;
use crate::error::{Error, Result};
use crate::geometry::{builders, DomainFile, MultipatchDomain};
use crate::spaces::MultiplierVariant;

/// Benchmark problem: a domain family indexed by refinement level and a
/// closed-form solution.
#[derive(Debug, Clone)]
pub enum Case {
    /// `sin(πx) sin(πy)` on the two-patch quarter annulus.
    Annulus { nonmatching: bool },
    /// `r^{2/3} sin(2φ/3)` on the three-patch L-shape.
    Corner,
    /// `sin(5y) sin(6x)` on the unit square cut by a curved interface that
    /// each side approximates on its own mesh.
    Wavy { matching: bool, amplitude: f64 },
    /// Kirsch solution on the two-patch plate with a hole.
    Plate,
    /// Domain and field read from a file; level `k` bisects every patch
    /// `k + 1` times so that interfaces have at least two elements.
    File(Box<DomainFile>),
}

impl Case {
    pub fn parse(name: &str) -> Result<Case> {
        match name {
            "annulus" => Ok(Case::Annulus { nonmatching: false }),
            "annulus-nonmatching" => Ok(Case::Annulus { nonmatching: true }),
            "corner" => Ok(Case::Corner),
            "plate" => Ok(Case::Plate),
            "wavy" => Ok(Case::Wavy {
                matching: true,
                amplitude: WAVY_AMPLITUDE,
            }),
            "wavy-nonmatching" => Ok(Case::Wavy {
                matching: false,
                amplitude: WAVY_AMPLITUDE,
            }),
            other => Err(Error::Config(format!("unknown case `{other}`"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Case::Annulus { nonmatching: false } => "annulus".into(),
            Case::Annulus { nonmatching: true } => "annulus-nonmatching".into(),
            Case::Corner => "corner".into(),
            Case::Plate => "plate".into(),
            Case::Wavy { matching: true, .. } => "wavy".into(),
            Case::Wavy {
                matching: false, ..
            } => "wavy-nonmatching".into(),
            Case::File(_) => "file".into(),
        }
    }

    /// Spans per direction at level 0 (per file element for `File`).
    pub fn initial_elements(&self) -> usize {
        match self {
            Case::Annulus { .. } => 2,
            Case::Corner => 2,
            Case::Wavy { .. } => 2,
            Case::Plate => 8,
            Case::File(_) => 2,
        }
    }

    pub fn exact(&self) -> Result<Arc<dyn ExactSolution>> {
        Ok(match self {
            Case::Annulus { .. } => Arc::new(ScalarField::new(ScalarShape::SinePi)),
            Case::Corner => Arc::new(ScalarField::new(ScalarShape::Corner)),
            Case::Wavy { .. } => Arc::new(ScalarField::new(ScalarShape::Sine56)),
            Case::Plate => Arc::new(PlateWithHole::standard()),
            Case::File(file) => {
                let p = file
                    .problem
                    .as_ref()
                    .ok_or_else(|| Error::Config("domain file has no `problem` section".into()))?;
                named_field(&p.field, p.alpha.clone(), p.beta.clone())?
            }
        })
    }

    /// Mesh of `level`: the level-0 mesh bisected `level` times. Curved
    /// interfaces are re-approximated on every mesh.
    pub fn domain(&self, degree: usize, level: usize) -> Result<MultipatchDomain> {
        let e = self.initial_elements() << level;
        match self {
            Case::Annulus { nonmatching } => builders::annulus(degree, e, *nonmatching),
            Case::Corner => builders::corner(degree, e),
            Case::Wavy {
                matching,
                amplitude,
            } => builders::wavy_square(degree, e, *matching, *amplitude),
            Case::Plate => builders::plate_with_hole(degree, e, PlateWithHole::standard().radius),
            Case::File(file) => file.to_domain()?.elevated_to(degree)?.refined(level + 1),
        }
    }
}

/// Amplitude of the curved interface of the wavy cases.
pub const WAVY_AMPLITUDE: f64 = 0.2;

/// Errors per level with fitted slopes.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub case: String,
    pub degree: usize,
    pub variant: MultiplierVariant,
    pub rows: Vec<ErrorRow>,
}

impl ConvergenceReport {
    fn hs(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.h).collect()
    }

    pub fn l2_slopes(&self) -> SlopeFit {
        let e: Vec<f64> = self.rows.iter().map(|r| r.l2).collect();
        slope_fit(&e, &self.hs())
    }

    pub fn broken_v_slopes(&self) -> SlopeFit {
        let e: Vec<f64> = self.rows.iter().map(|r| r.broken_v).collect();
        slope_fit(&e, &self.hs())
    }

    pub fn dual_slopes(&self, interface: usize) -> SlopeFit {
        let e: Vec<f64> = self.rows.iter().map(|r| r.dual_l2[interface]).collect();
        slope_fit(&e, &self.hs())
    }

    /// Largest `‖B u‖_∞ / ‖u‖_∞` over all levels.
    pub fn max_constraint_residual(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.constraint_residual)
            .fold(0.0, f64::max)
    }

    /// CSV with header `level,h,l2,brokenV,dual_l2_0,...,slope_l2`; the
    /// slope column is empty on the first level.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let ni = self.rows.first().map_or(0, |r| r.dual_l2.len());
        let mut header = vec![
            "level".to_string(),
            "h".into(),
            "l2".into(),
            "brokenV".into(),
        ];
        header.extend((0..ni).map(|l| format!("dual_l2_{l}")));
        header.push("slope_l2".into());
        w.write_record(&header)?;
        let slopes = self.l2_slopes().pairwise;
        for (i, r) in self.rows.iter().enumerate() {
            let mut rec = vec![
                r.level.to_string(),
                format!("{:e}", r.h),
                format!("{:e}", r.l2),
                format!("{:e}", r.broken_v),
            ];
            rec.extend(r.dual_l2.iter().map(|d| format!("{d:e}")));
            rec.push(match i.checked_sub(1).and_then(|k| slopes[k]) {
                Some(s) => format!("{s:.4}"),
                None => String::new(),
            });
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Solves one level and measures its errors.
pub fn solve_level(
    domain: &MultipatchDomain,
    exact: Arc<dyn ExactSolution>,
    variant: MultiplierVariant,
    level: usize,
) -> Result<ErrorRow> {
    let data = problem_data(exact.clone());
    let (system, sol) = solve_problem(domain, &data, variant)?;
    let mut row = error_norms(domain, &system, &sol.u, &sol.lambda, exact.as_ref())?;
    row.level = level;
    row.constraint_residual = sol.relative_constraint_residual();
    Ok(row)
}

/// Uniform refinement loop over `levels` meshes.
pub fn run_convergence(
    case: &Case,
    variant: MultiplierVariant,
    degree: usize,
    levels: usize,
) -> Result<ConvergenceReport> {
    if levels == 0 {
        return Err(Error::Config("at least one level is required".into()));
    }
    let exact = case.exact()?;
    let mut rows = Vec::new();
    for level in 0..levels {
        let domain = case.domain(degree, level)?;
        rows.push(solve_level(&domain, exact.clone(), variant, level)?);
    }
    Ok(ConvergenceReport {
        case: case.name(),
        degree,
        variant,
        rows,
    })
}
