use nalgebra::Vector2;

use super::patch::{Face, NurbsPatch};
use crate::error::{Error, Result};

/// Tolerance for deciding that two physical points coincide.
pub const POINT_TOL: f64 = 1e-8;

/// Off-grid samples used to measure the distance between interface sides.
const GAP_SAMPLES: usize = 97;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryCondition {
    /// Natural condition; also the tag of faces carrying interfaces.
    #[default]
    Neumann,
    /// Essential condition on the flagged components (scalar problems use
    /// component 0).
    Dirichlet { components: [bool; 2] },
}

impl BoundaryCondition {
    pub const DIRICHLET: BoundaryCondition = BoundaryCondition::Dirichlet {
        components: [true, true],
    };

    pub fn is_dirichlet(self) -> bool {
        matches!(self, BoundaryCondition::Dirichlet { components } if components.iter().any(|&c| c))
    }

    pub fn constrains(self, component: usize) -> bool {
        matches!(self, BoundaryCondition::Dirichlet { components } if components[component])
    }
}

/// Mortar interface with its slave side on a whole patch face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interface {
    pub master: usize,
    pub slave: usize,
    pub master_face: Face,
    pub slave_face: Face,
    /// Master face parameter decreases along increasing slave parameter.
    pub reversed: bool,
    /// Largest distance between sampled slave-face points and the master face.
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct MultipatchDomain {
    patches: Vec<NurbsPatch>,
    interfaces: Vec<Interface>,
    boundary: Vec<[BoundaryCondition; 4]>,
}

/// Declared interface before validation: `(master, slave, master_face, slave_face)`.
pub type InterfaceSpec = (usize, usize, Face, Face);

impl MultipatchDomain {
    /// Validates topology and geometry. `boundary[k][face.index()]` tags each
    /// face; faces not used by interfaces default to Neumann.
    pub fn new(
        patches: Vec<NurbsPatch>,
        interfaces: &[InterfaceSpec],
        boundary: Vec<[BoundaryCondition; 4]>,
    ) -> Result<Self> {
        if patches.is_empty() {
            return Err(Error::InvalidDomain("no patches".into()));
        }
        if boundary.len() != patches.len() {
            return Err(Error::InvalidDomain(format!(
                "{} boundary tag sets for {} patches",
                boundary.len(),
                patches.len()
            )));
        }
        for (k, p) in patches.iter().enumerate() {
            p.check_regularity(k)?;
        }
        let mut slave_faces = Vec::new();
        let mut out = Vec::with_capacity(interfaces.len());
        for (l, &(m, s, mf, sf)) in interfaces.iter().enumerate() {
            if m >= patches.len() || s >= patches.len() || m == s {
                return Err(Error::InvalidDomain(format!(
                    "interface {l} references patches {m} and {s}"
                )));
            }
            for (k, f) in [(m, mf), (s, sf)] {
                if boundary[k][f.index()].is_dirichlet() {
                    return Err(Error::InvalidDomain(format!(
                        "patch {k} face {f} is both Dirichlet and interface {l}"
                    )));
                }
            }
            if slave_faces.contains(&(s, sf)) {
                return Err(Error::InvalidDomain(format!(
                    "patch {s} face {sf} is the slave side of two interfaces"
                )));
            }
            slave_faces.push((s, sf));
            out.push(Self::measure_interface(&patches, l, m, s, mf, sf)?);
        }
        Ok(MultipatchDomain {
            patches,
            interfaces: out,
            boundary,
        })
    }

    fn measure_interface(
        patches: &[NurbsPatch],
        l: usize,
        m: usize,
        s: usize,
        mf: Face,
        sf: Face,
    ) -> Result<Interface> {
        let slave = patches[s].face_curve(sf);
        let master = patches[m].face_curve(mf);
        let mut gap: f64 = 0.0;
        let mut length: f64 = 0.0;
        let mut prev = slave.eval(0.0).0;
        let mut params = Vec::new();
        for k in 0..=16 {
            let t = k as f64 / 16.0;
            let x = slave.eval(t).0;
            length += (x - prev).norm();
            prev = x;
            let inv = master.closest_point(x)?;
            gap = gap.max(inv.residual);
            params.push(inv.param[0]);
        }
        // Dyadic samples can coincide with interpolation sites of both sides.
        for k in 0..GAP_SAMPLES {
            let x = slave.eval((k as f64 + 0.5) / GAP_SAMPLES as f64).0;
            gap = gap.max(master.closest_point(x)?.residual);
        }
        if gap > 1e-2 * length {
            return Err(Error::InvalidDomain(format!(
                "interface {l}: slave face {s}/{sf} is {gap:.3e} away from master face {m}/{mf}"
            )));
        }
        Ok(Interface {
            master: m,
            slave: s,
            master_face: mf,
            slave_face: sf,
            reversed: params[16] < params[0],
            gap,
        })
    }

    pub fn patches(&self) -> &[NurbsPatch] {
        &self.patches
    }

    pub fn patch(&self, k: usize) -> &NurbsPatch {
        &self.patches[k]
    }

    pub fn interfaces(&self) -> &[Interface] {
        &self.interfaces
    }

    pub fn boundary(&self, patch: usize, face: Face) -> BoundaryCondition {
        self.boundary[patch][face.index()]
    }

    pub fn boundary_tags(&self) -> &[[BoundaryCondition; 4]] {
        &self.boundary
    }

    /// Interface whose slave or master side lies on the given face, if any.
    pub fn interface_on(&self, patch: usize, face: Face) -> Option<usize> {
        self.interfaces.iter().position(|i| {
            (i.slave == patch && i.slave_face == face)
                || (i.master == patch && i.master_face == face)
        })
    }

    /// Applies `f` to every patch, keeping interfaces and tags.
    pub fn map_patches(&self, f: impl Fn(usize, &NurbsPatch) -> NurbsPatch) -> Result<Self> {
        let patches = self
            .patches
            .iter()
            .enumerate()
            .map(|(k, p)| f(k, p))
            .collect();
        let specs: Vec<InterfaceSpec> = self
            .interfaces
            .iter()
            .map(|i| (i.master, i.slave, i.master_face, i.slave_face))
            .collect();
        Self::new(patches, &specs, self.boundary.clone())
    }

    /// Uniform bisection of all patches.
    pub fn refined(&self, levels: usize) -> Result<Self> {
        self.map_patches(|_, p| p.refined_uniform(levels))
    }

    pub fn elevated_to(&self, degree: usize) -> Result<Self> {
        let patches = self
            .patches
            .iter()
            .map(|p| p.elevated_to(degree))
            .collect::<Result<Vec<_>>>()?;
        self.map_patches(|k, _| patches[k].clone())
    }

    /// Largest parametric element size over all patches and directions.
    pub fn mesh_size(&self) -> f64 {
        self.patches
            .iter()
            .flat_map(|p| p.knots().iter().map(|k| k.max_element_size()))
            .fold(0.0, f64::max)
    }

    /// Endpoints of the slave face of interface `l` in physical space.
    pub fn interface_endpoints(&self, l: usize) -> [Vector2<f64>; 2] {
        let i = &self.interfaces[l];
        let c = self.patches[i.slave].face_curve(i.slave_face);
        [c.eval(0.0).0, c.eval(1.0).0]
    }

    /// Cross-point flags `[start, end]` of interface `l`: an end is a cross
    /// point when it touches a Dirichlet face (any component) or lies on
    /// another interface.
    pub fn cross_points(&self, l: usize) -> Result<[bool; 2]> {
        let ends = self.interface_endpoints(l);
        let mut flags = [false; 2];
        for (e, x) in ends.iter().enumerate() {
            'faces: for (k, tags) in self.boundary.iter().enumerate() {
                for face in Face::ALL {
                    if tags[face.index()].is_dirichlet() && self.on_face(k, face, *x)? {
                        flags[e] = true;
                        break 'faces;
                    }
                }
            }
            if flags[e] {
                continue;
            }
            for (o, other) in self.interfaces.iter().enumerate() {
                if o != l && self.on_face(other.slave, other.slave_face, *x)? {
                    flags[e] = true;
                    break;
                }
            }
        }
        Ok(flags)
    }

    fn on_face(&self, patch: usize, face: Face, x: Vector2<f64>) -> Result<bool> {
        Ok(self.patches[patch]
            .face_curve(face)
            .closest_point(x)?
            .residual
            < POINT_TOL)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BoundaryCondition::Neumann;

    fn two_squares() -> Vec<NurbsPatch> {
        vec![
            NurbsPatch::bilinear([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]),
            NurbsPatch::bilinear([[1.0, 0.0], [2.0, 0.0], [1.0, 1.0], [2.0, 1.0]]),
        ]
    }

    #[test]
    fn matching_interface_has_no_gap() {
        let d = MultipatchDomain::new(
            two_squares(),
            &[(0, 1, Face::East, Face::West)],
            vec![[Neumann; 4]; 2],
        )
        .unwrap();
        let i = d.interfaces()[0];
        assert!(i.gap < 1e-14);
        assert!(!i.reversed);
        assert_eq!(d.cross_points(0).unwrap(), [false, false]);
    }

    #[test]
    fn dirichlet_end_is_cross_point() {
        let mut tags = vec![[Neumann; 4]; 2];
        tags[0][Face::South.index()] = BoundaryCondition::DIRICHLET;
        let d =
            MultipatchDomain::new(two_squares(), &[(0, 1, Face::East, Face::West)], tags).unwrap();
        assert_eq!(d.cross_points(0).unwrap(), [true, false]);
    }

    #[test]
    fn rejects_bad_topology() {
        let mut tags = vec![[Neumann; 4]; 2];
        tags[1][Face::West.index()] = BoundaryCondition::DIRICHLET;
        assert!(
            MultipatchDomain::new(two_squares(), &[(0, 1, Face::East, Face::West)], tags).is_err()
        );
        assert!(MultipatchDomain::new(
            two_squares(),
            &[(0, 0, Face::East, Face::West)],
            vec![[Neumann; 4]; 2]
        )
        .is_err());
        // faces that do not touch
        assert!(MultipatchDomain::new(
            two_squares(),
            &[(0, 1, Face::West, Face::East)],
            vec![[Neumann; 4]; 2]
        )
        .is_err());
    }
}
