use std::io::Write;

use super::grams::{build_grams, infsup_constant, interface_grams, sup_ratio, Measure};
use crate::error::{Error, Result};
use crate::geometry::builders;
use crate::spaces::{checkerboard_mode, MultiplierSpace, MultiplierVariant, TraceSpace};
use crate::splinecore::KnotVector;

/// Boundary behaviour of the trace space on the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcMode {
    /// All traces.
    Free,
    /// Traces vanishing at both ends.
    Dirichlet,
}

impl std::str::FromStr for BcMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" | "none" => Ok(BcMode::Free),
            "dirichlet" | "homogeneous" => Ok(BcMode::Dirichlet),
            other => Err(Error::Config(format!("unknown bc mode `{other}`"))),
        }
    }
}

/// Grid of inf-sup computations.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub degrees: Vec<usize>,
    pub variants: Vec<MultiplierVariant>,
    pub levels: usize,
    /// Spans at level 0; level `k` has `base_elements * 2^k`.
    pub base_elements: usize,
    pub bc: BcMode,
    /// Arc-length measure on the curved annulus interface instead of the
    /// unit interval.
    pub physical: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            degrees: vec![2, 3, 4, 5],
            variants: vec![
                MultiplierVariant::EqualOrderModified,
                MultiplierVariant::DEGREE_MINUS_ONE,
                MultiplierVariant::DEGREE_MINUS_TWO,
            ],
            levels: 5,
            base_elements: 4,
            bc: BcMode::Free,
            physical: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub degree: usize,
    pub variant: MultiplierVariant,
    pub level: usize,
    pub h: f64,
    pub constant: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Constants of one pairing ordered by level.
    pub fn series(&self, degree: usize, variant: MultiplierVariant) -> Vec<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.degree == degree && r.variant == variant)
            .collect()
    }

    /// `(max - min) / max` of the constants of one pairing.
    pub fn variation(&self, degree: usize, variant: MultiplierVariant) -> Option<f64> {
        let c: Vec<f64> = self
            .series(degree, variant)
            .iter()
            .map(|r| r.constant)
            .collect();
        let max = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = c.iter().copied().fold(f64::INFINITY, f64::min);
        (!c.is_empty() && max > 0.0).then(|| (max - min) / max)
    }

    /// CSV with header `degree,variant,level,h,constant`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["degree", "variant", "level", "h", "constant"])?;
        for r in &self.rows {
            w.write_record([
                r.degree.to_string(),
                r.variant.to_string(),
                r.level.to_string(),
                format!("{:e}", r.h),
                format!("{:e}", r.constant),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Inf-sup constant of one pairing on a uniform mesh with `elements` spans.
/// Equal-order multipliers are modified at both ends.
pub fn pairing_constant(
    degree: usize,
    variant: MultiplierVariant,
    elements: usize,
    bc: BcMode,
    physical: bool,
) -> Result<f64> {
    let edge_zero = bc == BcMode::Dirichlet;
    let kv = KnotVector::uniform(degree, elements);
    let mult = MultiplierSpace::new(&kv, variant, true, true)?;
    let grams = if physical {
        let domain = builders::annulus(degree, elements, false)?;
        interface_grams(&domain, 0, &mult, edge_zero, true)?
    } else {
        build_grams(
            &TraceSpace::parametric(kv, edge_zero),
            &mult,
            &Measure::Parametric,
        )?
    };
    infsup_constant(&grams)
}

/// Runs every cell of the grid; rows ordered by degree, variant, level.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult> {
    let mut cells = Vec::new();
    for &p in &config.degrees {
        for &v in &config.variants {
            if v.dual_degree(p).is_none() {
                return Err(Error::Config(format!(
                    "variant {v} undefined for degree {p}"
                )));
            }
            for level in 0..config.levels {
                cells.push((p, v, level));
            }
        }
    }
    let results: Vec<Result<SweepRow>> = std::thread::scope(|s| {
        let handles: Vec<_> = cells
            .iter()
            .map(|&(p, v, level)| {
                s.spawn(move || {
                    let e = config.base_elements << level;
                    Ok(SweepRow {
                        degree: p,
                        variant: v,
                        level,
                        h: 1.0 / e as f64,
                        constant: pairing_constant(p, v, e, config.bc, config.physical)?,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep cell panicked"))
            .collect()
    });
    Ok(SweepResult {
        rows: results.into_iter().collect::<Result<_>>()?,
    })
}

/// `sup_ratio` of the oscillating mode of the degree `p - 1` multipliers
/// against all degree-`p` traces, for `h = 2^{-j}`, `j = first..first+levels`.
pub fn checkerboard(degree: usize, first: usize, levels: usize) -> Result<Vec<(f64, f64)>> {
    (first..first + levels)
        .map(|j| {
            let e = 1usize << j;
            let kv = KnotVector::uniform(degree, e);
            let mult =
                MultiplierSpace::new(&kv, MultiplierVariant::DEGREE_MINUS_ONE, false, false)?;
            let grams = build_grams(
                &TraceSpace::parametric(kv, false),
                &mult,
                &Measure::Parametric,
            )?;
            Ok((
                1.0 / e as f64,
                sup_ratio(&grams, &checkerboard_mode(&mult)?)?,
            ))
        })
        .collect()
}

/// First level at which the oscillating mode of degree `p` is resolved:
/// `2^j >= 4p`.
pub fn checkerboard_start(degree: usize) -> usize {
    (4 * degree.max(1)).next_power_of_two().trailing_zeros() as usize
}
