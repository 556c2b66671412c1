//! Domains of the benchmark problems.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

use nalgebra::Vector2;

use super::domain::{BoundaryCondition, MultipatchDomain};
use super::patch::{Face, NurbsPatch};
use crate::error::Result;
use crate::splinecore::KnotVector;

use BoundaryCondition::Neumann;

const DIRICHLET: BoundaryCondition = BoundaryCondition::DIRICHLET;

fn tags(pairs: &[(Face, BoundaryCondition)]) -> [BoundaryCondition; 4] {
    let mut t = [Neumann; 4];
    for &(f, bc) in pairs {
        t[f.index()] = bc;
    }
    t
}

fn prepare(p: NurbsPatch, degree: usize, elements: [usize; 2]) -> Result<NurbsPatch> {
    Ok(p.elevated_to(degree)?
        .subdivided(0, elements[0])
        .subdivided(1, elements[1]))
}

/// Quarter annulus `r0 < r < r1`, `0 < φ < π/2`; `ζ_1` runs along the
/// angle, `ζ_2` along the radius.
pub fn quarter_annulus(r0: f64, r1: f64) -> NurbsPatch {
    let k1 = KnotVector::uniform(2, 1);
    let k2 = KnotVector::uniform(1, 1);
    let mut control = Vec::new();
    let mut weights = Vec::new();
    for (p, w) in [
        ([1.0, 0.0], 1.0),
        ([1.0, 1.0], FRAC_1_SQRT_2),
        ([0.0, 1.0], 1.0),
    ] {
        for r in [r0, r1] {
            control.push(Vector2::new(p[0] * r, p[1] * r));
            weights.push(w);
        }
    }
    NurbsPatch::new([k1, k2], control, weights).expect("consistent net")
}

/// Two-patch quarter annulus `0.2 < r < 2` split at `r = 1.1`. Dirichlet on
/// both arcs, Neumann on the straight edges, so the interface ends need no
/// modification. Patch 0 (inner) is the master. Each patch has
/// `4 * elements` spans along the arc and `elements` along the radius. With
/// `nonmatching` the slave patch is bisected once more than the master.
pub fn annulus(degree: usize, elements: usize, nonmatching: bool) -> Result<MultipatchDomain> {
    let inner = prepare(quarter_annulus(0.2, 1.1), degree, [4 * elements, elements])?;
    let mut outer = prepare(quarter_annulus(1.1, 2.0), degree, [4 * elements, elements])?;
    if nonmatching {
        outer = outer.refined_uniform(1);
    }
    MultipatchDomain::new(
        vec![inner, outer],
        &[(0, 1, Face::North, Face::South)],
        vec![
            tags(&[(Face::South, DIRICHLET)]),
            tags(&[(Face::North, DIRICHLET)]),
        ],
    )
}

/// L-shaped domain `(-1,1)² \ [0,1]×[-1,0]` from three bilinear patches. The
/// diagonal from the re-entrant corner to `(-1, 1)` is the master face of
/// patch 2 and carries two interfaces; patches 0 and 1 meet along
/// `x = -0.5`. All outer faces are Dirichlet.
pub fn corner(degree: usize, elements: usize) -> Result<MultipatchDomain> {
    let quads = [
        [[-1.0, -1.0], [-0.5, -1.0], [-1.0, 1.0], [-0.5, 0.5]],
        [[-0.5, -1.0], [0.0, -1.0], [-0.5, 0.5], [0.0, 0.0]],
        [[0.0, 0.0], [1.0, 0.0], [-1.0, 1.0], [1.0, 1.0]],
    ];
    let patches = quads
        .iter()
        .map(|q| prepare(NurbsPatch::bilinear(*q), degree, [elements; 2]))
        .collect::<Result<Vec<_>>>()?;
    MultipatchDomain::new(
        patches,
        &[
            (2, 0, Face::West, Face::North),
            (2, 1, Face::West, Face::North),
            (0, 1, Face::East, Face::West),
        ],
        vec![
            tags(&[(Face::South, DIRICHLET), (Face::West, DIRICHLET)]),
            tags(&[(Face::South, DIRICHLET), (Face::East, DIRICHLET)]),
            tags(&[
                (Face::South, DIRICHLET),
                (Face::East, DIRICHLET),
                (Face::North, DIRICHLET),
            ]),
        ],
    )
}

/// Interface curve of [`wavy_square`].
pub fn wavy_curve(amplitude: f64, x: f64) -> f64 {
    0.5 + amplitude * (std::f64::consts::PI * x).sin()
}

fn wavy_patch(
    degree: usize,
    nx: usize,
    ny: usize,
    amplitude: f64,
    lower: bool,
) -> Result<NurbsPatch> {
    let kx = KnotVector::uniform(degree, nx);
    let ky = KnotVector::uniform(degree, ny);
    let gx = kx.greville();
    let gy = ky.greville();
    let curve = kx.interpolate(|x| wavy_curve(amplitude, x))?;
    let mut control = Vec::with_capacity(gx.len() * gy.len());
    for (i, &x) in gx.iter().enumerate() {
        for &s in &gy {
            let y = if lower {
                s * curve[i]
            } else {
                curve[i] + s * (1.0 - curve[i])
            };
            control.push(Vector2::new(x, y));
        }
    }
    NurbsPatch::bspline([kx, ky], control)
}

/// Unit square cut by the curve `y = 0.5 + a sin(πx)`, which no spline
/// reproduces. Each patch interpolates the curve at its own Greville points,
/// so the two sides of the interface differ unless the meshes match.
/// Patch 0 (below, master) has `elements` spans per direction; with
/// `matching = false` patch 1 uses `elements + elements / 2` spans along the
/// interface. Neumann on `x = 0, 1`, Dirichlet on `y = 0, 1`.
pub fn wavy_square(
    degree: usize,
    elements: usize,
    matching: bool,
    amplitude: f64,
) -> Result<MultipatchDomain> {
    let nx_slave = if matching {
        elements
    } else {
        elements + (elements / 2).max(1)
    };
    MultipatchDomain::new(
        vec![
            wavy_patch(degree, elements, elements, amplitude, true)?,
            wavy_patch(degree, nx_slave, elements, amplitude, false)?,
        ],
        &[(0, 1, Face::North, Face::South)],
        vec![
            tags(&[(Face::South, DIRICHLET)]),
            tags(&[(Face::North, DIRICHLET)]),
        ],
    )
}

/// Position of the middle radial control point of the plate patches: radial
/// spans near the hole are three times shorter than at the outer edge.
pub const PLATE_GRADING: f64 = 0.25;

/// Quarter of a square plate `[0, 2]²` with a hole of radius `radius` at the
/// origin, split along the diagonal. Patch 0 spans angles `0..π/4` and is the
/// master. Symmetry conditions on the axes, traction on the outer edges and
/// a free hole.
pub fn plate_with_hole(degree: usize, elements: usize, radius: f64) -> Result<MultipatchDomain> {
    let c = FRAC_PI_8.cos();
    let t = FRAC_PI_8.tan();
    let s = FRAC_1_SQRT_2;
    let a = radius;
    let half = |inner: [[f64; 2]; 3], outer: [[f64; 2]; 3]| -> Result<NurbsPatch> {
        let mut control = Vec::new();
        let mut weights = Vec::new();
        for k in 0..3 {
            let (i, o) = (Vector2::from(inner[k]), Vector2::from(outer[k]));
            for p in [i, i + PLATE_GRADING * (o - i), o] {
                control.push(p);
                weights.push(if k == 1 { c } else { 1.0 });
            }
        }
        NurbsPatch::new(
            [KnotVector::uniform(2, 1), KnotVector::uniform(2, 1)],
            control,
            weights,
        )
    };
    let lower = half(
        [[a, 0.0], [a, a * t], [a * s, a * s]],
        [[2.0, 0.0], [2.0, 2.0 * t], [2.0, 2.0]],
    )?;
    let upper = half(
        [[a * s, a * s], [a * t, a], [0.0, a]],
        [[2.0, 2.0], [2.0 * t, 2.0], [0.0, 2.0]],
    )?;
    let fix_y = BoundaryCondition::Dirichlet {
        components: [false, true],
    };
    let fix_x = BoundaryCondition::Dirichlet {
        components: [true, false],
    };
    MultipatchDomain::new(
        vec![
            prepare(lower, degree, [elements; 2])?,
            prepare(upper, degree, [elements; 2])?,
        ],
        &[(0, 1, Face::East, Face::West)],
        vec![tags(&[(Face::West, fix_y)]), tags(&[(Face::East, fix_x)])],
    )
}

/// Rectangles `[0,1]×[0,1]` (master) and `[1,2]×[0,1]` (slave) meeting at
/// `x = 1`, fully Dirichlet on the outer boundary.
pub fn two_squares(
    degree: usize,
    master_elements: [usize; 2],
    slave_elements: [usize; 2],
) -> Result<MultipatchDomain> {
    let left = NurbsPatch::bilinear([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
    let right = NurbsPatch::bilinear([[1.0, 0.0], [2.0, 0.0], [1.0, 1.0], [2.0, 1.0]]);
    MultipatchDomain::new(
        vec![
            prepare(left, degree, master_elements)?,
            prepare(right, degree, slave_elements)?,
        ],
        &[(0, 1, Face::East, Face::West)],
        vec![
            tags(&[
                (Face::South, DIRICHLET),
                (Face::West, DIRICHLET),
                (Face::North, DIRICHLET),
            ]),
            tags(&[
                (Face::South, DIRICHLET),
                (Face::East, DIRICHLET),
                (Face::North, DIRICHLET),
            ]),
        ],
    )
}

/// Single unit-square patch with every face Dirichlet.
pub fn unit_square(degree: usize, elements: usize) -> Result<MultipatchDomain> {
    MultipatchDomain::new(
        vec![NurbsPatch::unit_square(degree, elements)],
        &[],
        vec![[DIRICHLET; 4]],
    )
}
