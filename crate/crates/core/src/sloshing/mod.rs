//! End-to-end sloshing solves and their analysis: free-surface traces,
//! high spots, closed-form oracles, velocity and elevation fields.

mod bessel;
mod contour;
mod convergence;
mod field;
mod oracle;
mod trace;

pub use bessel::{bessel_j0, bessel_j1, bessel_j1p, find_j1prime_zero, BESSEL_MAX_X};
pub use contour::{contour_levels, extract_contours, surface_grid, write_contours_csv, write_contours_svg, ContourSet, Polyline, SurfaceGrid};
pub use convergence::{convergence_study, ConvergenceRow, ConvergenceTable};
pub use field::{elevation_field, velocity, ElevationField, DEFAULT_GRAVITY};
pub use oracle::{cylinder_oracle, extend_neumann_mode, neumann_fundamental, neumann_to_sloshing, CylinderOracle};
pub use trace::{locate_high_spot, trace_surface, HighSpotReport, SurfaceTrace, DEFAULT_SAMPLES};

use std::sync::Arc;

use rayon::prelude::*;

use crate::assembly::{assemble_stiffness, assemble_surface_mass, AzimuthalIndex};
use crate::eigen::{deflates_constants, steklov_solve_with, EigenOptions};
use crate::error::{Result, SloshError};
use crate::geometry::{DomainKind, EdgeTag, PlanarDomain};
use crate::mesh::{triangulate, Sizing, TriMesh};
use crate::scalar::Real;

/// Eigenvalues this close (relative) to ν₁ count as the fundamental.
pub const MULTIPLICITY_TOL: f64 = 1e-6;

/// One eigenpair of the sloshing problem on a meridian or cross-section.
/// For `m >= 1` the 3D potential is `phi(r, z) cos(mθ)`; the `sin(mθ)`
/// partner shares the eigenvalue and is not stored separately.
#[derive(Clone, Debug)]
pub struct SloshingMode<T> {
    pub nu: T,
    pub m: AzimuthalIndex,
    /// Position within its `m` branch, ascending in `nu`.
    pub index: usize,
    pub phi: Vec<T>,
    pub mesh: Arc<TriMesh<T>>,
    pub normalized: bool,
    pub residual: T,
}

impl<T: Real> SloshingMode<T> {
    /// Scales `phi` so that `max |phi|` over F is 1 and the extreme value
    /// is positive.
    pub fn normalize(&mut self) -> Result<()> {
        let f = self.mesh.tagged_nodes(EdgeTag::F);
        let mut best = (T::zero(), T::zero());
        for &i in &f {
            let v = self.phi[i];
            if v.abs() > best.0 {
                best = (v.abs(), v);
            }
        }
        if best.0 == T::zero() || !best.0.is_finite() {
            return Err(SloshError::DegenerateMode);
        }
        let s = best.1.recip();
        self.phi.iter_mut().for_each(|v| *v *= s);
        self.normalized = true;
        Ok(())
    }

    /// Largest `|phi|` over free-surface nodes.
    pub fn surface_max(&self) -> T {
        self.mesh.tagged_nodes(EdgeTag::F).iter().map(|&i| self.phi[i].abs()).fold(T::zero(), T::max)
    }

    /// Angular frequency `sqrt(ν g)`.
    pub fn omega(&self, g: T) -> T {
        (self.nu * g).sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct ModeSet<T> {
    /// Sorted by ascending `nu`, ties broken by `m` then index.
    pub modes: Vec<SloshingMode<T>>,
    pub fundamental: usize,
}

impl<T: Real> ModeSet<T> {
    pub fn fundamental_mode(&self) -> &SloshingMode<T> {
        &self.modes[self.fundamental]
    }

    /// Modes whose eigenvalue is within `MULTIPLICITY_TOL` of ν₁.
    pub fn fundamental_cluster(&self) -> Vec<&SloshingMode<T>> {
        let nu1 = self.fundamental_mode().nu;
        let tol = T::tol(MULTIPLICITY_TOL) * nu1;
        self.modes.iter().filter(|m| (m.nu - nu1).abs() <= tol).collect()
    }

    pub fn branch(&self, m: AzimuthalIndex) -> impl Iterator<Item = &SloshingMode<T>> {
        self.modes.iter().filter(move |x| x.m == m)
    }
}

/// Default azimuthal scan `[0, 1, 2]`.
pub fn default_m_list() -> Vec<AzimuthalIndex> {
    vec![AzimuthalIndex(0), AzimuthalIndex(1), AzimuthalIndex(2)]
}

/// Meshes `d` once and solves `k` modes for every `m` in `m_list`.
/// Planar domains accept only `m_list = [0]`.
pub fn solve_modes<T: Real>(
    d: &PlanarDomain<T>,
    sizing: impl Into<Sizing<T>>,
    m_list: &[AzimuthalIndex],
    k: usize,
) -> Result<ModeSet<T>> {
    check_m_list(d.kind, m_list)?;
    let mesh = Arc::new(triangulate(d, sizing)?);
    solve_modes_on(mesh, m_list, k, &EigenOptions::default())
}

fn check_m_list(kind: DomainKind, m_list: &[AzimuthalIndex]) -> Result<()> {
    if m_list.is_empty() {
        return Err(SloshError::Argument("empty azimuthal list".into()));
    }
    if kind == DomainKind::Planar && m_list != [AzimuthalIndex(0)] {
        return Err(SloshError::Argument("planar domains take m_list = [0]".into()));
    }
    let mut sorted = m_list.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != m_list.len() {
        return Err(SloshError::Argument("repeated azimuthal index".into()));
    }
    Ok(())
}

/// Solves on an existing mesh; per-`m` solves run concurrently and are
/// merged deterministically.
pub fn solve_modes_on<T: Real>(
    mesh: Arc<TriMesh<T>>,
    m_list: &[AzimuthalIndex],
    k: usize,
    opts: &EigenOptions,
) -> Result<ModeSet<T>> {
    check_m_list(mesh.kind, m_list)?;
    if k == 0 {
        return Err(SloshError::Argument("k must be at least 1".into()));
    }
    let branches: Vec<Vec<SloshingMode<T>>> = m_list
        .par_iter()
        .map(|&m| solve_branch(&mesh, m, k, opts))
        .collect::<Result<_>>()?;
    let mut modes: Vec<SloshingMode<T>> = branches.into_iter().flatten().collect();
    modes.sort_by(|a, b| {
        a.nu.partial_cmp(&b.nu).unwrap_or(std::cmp::Ordering::Equal).then(a.m.cmp(&b.m)).then(a.index.cmp(&b.index))
    });
    Ok(ModeSet { modes, fundamental: 0 })
}

fn solve_branch<T: Real>(
    mesh: &Arc<TriMesh<T>>,
    m: AzimuthalIndex,
    k: usize,
    opts: &EigenOptions,
) -> Result<Vec<SloshingMode<T>>> {
    let s = assemble_stiffness(mesh, m)?;
    let b = assemble_surface_mass(mesh, m)?;
    let pairs = steklov_solve_with(&s, &b, k, deflates_constants(mesh.kind, m), opts)?;
    log::debug!("m = {m}: {} modes, nu1 = {}", pairs.len(), pairs[0].value);
    pairs
        .into_iter()
        .enumerate()
        .map(|(index, p)| {
            let mut mode = SloshingMode {
                nu: p.value,
                m,
                index,
                phi: p.vector,
                mesh: Arc::clone(mesh),
                normalized: false,
                residual: p.residual,
            };
            mode.normalize()?;
            Ok(mode)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::*;

    #[test]
    fn cylinder_fundamental_is_antisymmetric_branch() {
        let d = make_cylinder_profile(1.0f64).unwrap();
        let set = solve_modes(&d, 0.1, &default_m_list(), 2).unwrap();
        assert_eq!(set.modes.len(), 6);
        let f = set.fundamental_mode();
        assert_eq!(f.m, AzimuthalIndex(1));
        assert!(set.modes.iter().all(|m| m.nu >= f.nu && m.nu > 0.0));
        assert!((f.nu - 1.7508).abs() / 1.7508 < 0.01);
        for m in &set.modes {
            assert!((m.surface_max() - 1.0).abs() < 1e-12);
            assert!(m.residual <= 1e-7);
        }
        assert_eq!(set.fundamental_cluster().len(), 1);
        assert_eq!(set.branch(AzimuthalIndex(2)).count(), 2);
    }

    #[test]
    fn trough_fundamental_is_odd() {
        let d = make_trough_section(1.0f64, 1.0, 1.0).unwrap();
        let set = solve_modes(&d, 0.1, &[AzimuthalIndex(0)], 2).unwrap();
        let f = set.fundamental_mode();
        let mesh = &f.mesh;
        let surface = mesh.tagged_nodes(EdgeTag::F);
        for &i in &surface {
            let p = mesh.nodes[i];
            let j = surface.iter().copied().find(|&j| (mesh.nodes[j].x + p.x).abs() < 1e-9);
            if let Some(j) = j {
                assert!((f.phi[i] + f.phi[j]).abs() < 1e-6, "not odd at x = {}", p.x);
            }
        }
    }

    #[test]
    fn m_list_rules() {
        let d = make_cylinder_profile(1.0f64).unwrap();
        assert!(matches!(solve_modes(&d, 0.3, &[], 1), Err(SloshError::Argument(_))));
        let t = make_trough_section(1.0f64, 1.0, 1.0).unwrap();
        assert!(matches!(solve_modes(&t, 0.3, &[AzimuthalIndex(1)], 1), Err(SloshError::Argument(_))));
        assert!(matches!(solve_modes(&d, 0.3, &[AzimuthalIndex(1), AzimuthalIndex(1)], 1), Err(SloshError::Argument(_))));
    }
}
