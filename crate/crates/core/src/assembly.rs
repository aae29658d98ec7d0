//! P1 finite-element operators for the sloshing and Neumann eigenproblems.
//!
//! Weak forms, with `u, v` piecewise linear on the mesh:
//!
//! * planar stiffness `∫ ∇u·∇v dx dz`, domain mass `∫ u v dx dz`;
//! * axisymmetric stiffness for Fourier mode `m`
//!   `∫ (u_r v_r + u_z v_z) r dr dz + m² ∫ u v / r dr dz`;
//! * free-surface mass `∫_F u v dx` (planar) or `∫_F u v r dr`.
//!
//! The zero normal derivative on the wetted wall is natural, so no wall
//! terms appear anywhere below. The mean-zero condition on the free surface
//! is left to the eigensolver.

use std::fmt;

use crate::error::{Result, SloshError};
use crate::geometry::{DomainKind, EdgeTag};
use crate::mesh::TriMesh;
use crate::scalar::Real;
use crate::sparse::{SparseSym, TripletBuilder};

/// Azimuthal wavenumber `m` of a `cos(mθ)` / `sin(mθ)` Fourier mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AzimuthalIndex(pub u32);

impl AzimuthalIndex {
    pub const SYMMETRIC: Self = AzimuthalIndex(0);
    pub const ANTISYMMETRIC: Self = AzimuthalIndex(1);

    pub fn m(self) -> u32 {
        self.0
    }

    /// Fourier modes with `m >= 1` vanish on the axis.
    pub fn pins_axis(self) -> bool {
        self.0 >= 1
    }
}

impl fmt::Display for AzimuthalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn require_kind<T>(m: &TriMesh<T>, expected: DomainKind) -> Result<()> {
    if m.kind == expected {
        Ok(())
    } else {
        Err(SloshError::KindMismatch { expected: expected.keyword(), found: m.kind.keyword() })
    }
}

/// Area and the gradients of the three barycentric coordinates.
fn p1_gradients<T: Real>(m: &TriMesh<T>, cell: [usize; 3]) -> (T, [[T; 2]; 3]) {
    let p = cell.map(|i| m.nodes[i]);
    let two_area = (p[1].x - p[0].x) * (p[2].z - p[0].z) - (p[1].z - p[0].z) * (p[2].x - p[0].x);
    let mut g = [[T::zero(); 2]; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        g[i] = [(p[j].z - p[k].z) / two_area, (p[k].x - p[j].x) / two_area];
    }
    (two_area * T::lit(0.5), g)
}

/// Element stiffness `area · ∇λ_i·∇λ_j`.
pub fn element_stiffness<T: Real>(m: &TriMesh<T>, cell: [usize; 3]) -> [[T; 3]; 3] {
    let (area, g) = p1_gradients(m, cell);
    let mut k = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
        }
    }
    k
}

/// Element mass `(area / 12) · (1 + δ_ij)`.
pub fn element_mass<T: Real>(m: &TriMesh<T>, cell: [usize; 3]) -> [[T; 3]; 3] {
    let (area, _) = p1_gradients(m, cell);
    let off = area / T::lit(12.0);
    let mut k = [[off; 3]; 3];
    for (i, row) in k.iter_mut().enumerate() {
        row[i] = off + off;
    }
    k
}

/// Element matrix of the axisymmetric mode-`m` stiffness.
pub fn element_stiffness_axisym<T: Real>(m: &TriMesh<T>, cell: [usize; 3], mi: AzimuthalIndex) -> [[T; 3]; 3] {
    let p = cell.map(|i| m.nodes[i]);
    let r_centroid = (p[0].x + p[1].x + p[2].x) / T::lit(3.0);
    let mut k = element_stiffness(m, cell);
    // r is linear and the gradients constant, so ∫ r dA = area · r_centroid exactly.
    for row in k.iter_mut() {
        for v in row.iter_mut() {
            *v *= r_centroid;
        }
    }
    if mi.m() > 0 {
        let m2 = T::from_u32(mi.m() * mi.m()).unwrap();
        let (area, _) = p1_gradients(m, cell);
        // Three interior points (2/3, 1/6, 1/6); r > 0 there even on axis cells.
        let (big, small) = (T::lit(2.0) / T::lit(3.0), T::lit(1.0) / T::lit(6.0));
        let w = area / T::lit(3.0);
        for q in 0..3 {
            let mut lam = [small; 3];
            lam[q] = big;
            let r = lam[0] * p[0].x + lam[1] * p[1].x + lam[2] * p[2].x;
            for i in 0..3 {
                for j in 0..3 {
                    k[i][j] += m2 * w * lam[i] * lam[j] / r;
                }
            }
        }
    }
    k
}

fn assemble_cells<T: Real>(m: &TriMesh<T>, elem: impl Fn([usize; 3]) -> [[T; 3]; 3]) -> SparseSym<T> {
    let mut b = TripletBuilder::with_capacity(m.node_count(), 9 * m.cells.len());
    for &cell in &m.cells {
        let k = elem(cell);
        for i in 0..3 {
            for j in 0..3 {
                b.add(cell[i], cell[j], k[i][j]);
            }
        }
    }
    b.build()
}

pub fn assemble_stiffness_planar<T: Real>(m: &TriMesh<T>) -> Result<SparseSym<T>> {
    require_kind(m, DomainKind::Planar)?;
    Ok(assemble_cells(m, |c| element_stiffness(m, c)))
}

pub fn assemble_mass_planar<T: Real>(m: &TriMesh<T>) -> Result<SparseSym<T>> {
    require_kind(m, DomainKind::Planar)?;
    Ok(assemble_cells(m, |c| element_mass(m, c)))
}

/// Nodes pinned to zero for Fourier mode `mi` (axis nodes when `m >= 1`).
pub fn constrained_nodes<T: Real>(m: &TriMesh<T>, mi: AzimuthalIndex) -> Vec<bool> {
    if m.kind == DomainKind::Axisymmetric && mi.pins_axis() {
        m.tag_mask(EdgeTag::Axis)
    } else {
        vec![false; m.node_count()]
    }
}

/// Axisymmetric stiffness for Fourier mode `mi`; for `m >= 1` the axis
/// rows and columns become identity rows.
pub fn assemble_stiffness_axisym<T: Real>(m: &TriMesh<T>, mi: AzimuthalIndex) -> Result<SparseSym<T>> {
    require_kind(m, DomainKind::Axisymmetric)?;
    let s = assemble_cells(m, |c| element_stiffness_axisym(m, c, mi));
    if mi.pins_axis() {
        Ok(s.constrain(&constrained_nodes(m, mi)))
    } else {
        Ok(s)
    }
}

/// Stiffness for the mesh kind; `mi` is ignored for planar meshes.
pub fn assemble_stiffness<T: Real>(m: &TriMesh<T>, mi: AzimuthalIndex) -> Result<SparseSym<T>> {
    match m.kind {
        DomainKind::Planar => assemble_stiffness_planar(m),
        DomainKind::Axisymmetric => assemble_stiffness_axisym(m, mi),
    }
}

/// Free-surface mass; rows of pinned axis nodes are zero.
pub fn assemble_surface_mass<T: Real>(m: &TriMesh<T>, mi: AzimuthalIndex) -> Result<SparseSym<T>> {
    let surface: Vec<_> = m.bedges.iter().filter(|e| e.tag == EdgeTag::F).collect();
    if surface.is_empty() {
        return Err(SloshError::NoFreeSurface);
    }
    let mut b = TripletBuilder::with_capacity(m.node_count(), 4 * surface.len());
    let (one, two, six) = (T::one(), T::lit(2.0), T::lit(6.0));
    for e in surface {
        let (pa, pb) = (m.nodes[e.a], m.nodes[e.b]);
        let len = pa.dist(&pb);
        let k = match m.kind {
            DomainKind::Planar => {
                let d = len * two / six;
                let o = len / six;
                [[d, o], [o, d]]
            }
            DomainKind::Axisymmetric => {
                // Two-point Gauss is exact for the cubic r·λ_i·λ_j.
                let g = one / T::lit(3.0).sqrt();
                let mut k = [[T::zero(); 2]; 2];
                for s in [(one - g) / two, (one + g) / two] {
                    let lam = [one - s, s];
                    let r = lam[0] * pa.x + lam[1] * pb.x;
                    for i in 0..2 {
                        for j in 0..2 {
                            k[i][j] += len / two * r * lam[i] * lam[j];
                        }
                    }
                }
                k
            }
        };
        let ids = [e.a, e.b];
        for i in 0..2 {
            for j in 0..2 {
                b.add(ids[i], ids[j], k[i][j]);
            }
        }
    }
    let mass = b.build();
    if m.kind == DomainKind::Axisymmetric && mi.pins_axis() {
        Ok(mass.zero_out(&constrained_nodes(m, mi)))
    } else {
        Ok(mass)
    }
}
